//! Gauss–Kronrod bisection with endpoint grading and epsilon extrapolation.
//!
//! Each half of [lo, hi] is cut into dyadic pieces shrinking toward its outer
//! endpoint: [H/2, H], [H/4, H/2], … in offsets from that endpoint. A power
//! singularity d^p makes the partial sums converge geometrically with ratio
//! 2^{−(p+1)} (plus faster components from the regular part), which is the
//! regime where Wynn's epsilon algorithm recovers the limit from a short
//! prefix. Every piece is integrated by recursive G7/K15 bisection.

use super::{eval_checked, Endpoint, Node, QuadResult, QuadSpec};
use crate::error::Result;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Pieces per half are capped at this multiple of `max_levels`.
const GRADING_FACTOR: u32 = 3;

struct Half<'a, F> {
    f: &'a F,
    lo: f64,
    hi: f64,
    width: f64,
    anchor: Endpoint,
    spec: &'a QuadSpec,
    evaluations: usize,
}

#[derive(Clone, Copy)]
struct Piece {
    value: f64,
    error: f64,
    converged: bool,
}

impl<F: Fn(Node) -> f64> Half<'_, F> {
    fn node(&self, offset: f64) -> Node {
        match self.anchor {
            Endpoint::Lo => Node {
                x: self.lo + offset,
                from_lo: offset,
                from_hi: self.width - offset,
            },
            Endpoint::Hi => Node {
                x: self.hi - offset,
                from_lo: self.width - offset,
                from_hi: offset,
            },
        }
    }

    /// G7/K15 on offsets [o0, o1] measured from the anchor.
    fn kronrod(&mut self, o0: f64, o1: f64) -> Result<(f64, f64)> {
        let centre = 0.5 * (o0 + o1);
        let radius = 0.5 * (o1 - o0);
        let fc = eval_checked(self.f, self.node(centre))?;
        let mut kronrod = WGK[7] * fc;
        let mut gauss = WG[3] * fc;
        for i in 0..7 {
            let dx = radius * XGK[i];
            let f1 = eval_checked(self.f, self.node(centre - dx))?;
            let f2 = eval_checked(self.f, self.node(centre + dx))?;
            kronrod += WGK[i] * (f1 + f2);
            if i % 2 == 1 {
                gauss += WG[i / 2] * (f1 + f2);
            }
        }
        self.evaluations += 15;
        Ok((kronrod * radius, (kronrod - gauss).abs() * radius))
    }

    fn bisect(&mut self, o0: f64, o1: f64, depth: u32) -> Result<Piece> {
        let (value, error) = self.kronrod(o0, o1)?;
        let local_abs = self.spec.abs_tol * (o1 - o0) / self.width;
        let tol = local_abs.max(self.spec.rel_tol * value.abs());
        if error <= tol || error <= 4.0 * f64::EPSILON * value.abs() {
            return Ok(Piece {
                value,
                error,
                converged: true,
            });
        }
        if depth >= self.spec.max_levels {
            return Ok(Piece {
                value,
                error,
                converged: false,
            });
        }
        let mid = 0.5 * (o0 + o1);
        let a = self.bisect(o0, mid, depth + 1)?;
        let b = self.bisect(mid, o1, depth + 1)?;
        Ok(Piece {
            value: a.value + b.value,
            error: a.error + b.error,
            converged: a.converged && b.converged,
        })
    }

    /// Integral over offsets (0, span], graded toward the anchor.
    fn graded(&mut self, span: f64) -> Result<Piece> {
        let max_pieces = (GRADING_FACTOR * self.spec.max_levels) as usize;
        let mut partial = Vec::with_capacity(max_pieces);
        let mut running = 0.0;
        let mut piece_error = 0.0;
        let mut pieces_ok = true;
        let mut outer = span;
        let mut best = Piece {
            value: 0.0,
            error: f64::INFINITY,
            converged: false,
        };
        for _ in 0..max_pieces {
            let inner = 0.5 * outer;
            let p = self.bisect(inner, outer, 0)?;
            outer = inner;
            running += p.value;
            piece_error += p.error;
            pieces_ok &= p.converged;
            partial.push(running);

            // the tail is negligible: no extrapolation needed
            if p.value.abs() <= 0.01 * f64::EPSILON * running.abs() && partial.len() >= 4 {
                return Ok(Piece {
                    value: running,
                    error: piece_error,
                    converged: pieces_ok,
                });
            }
            if partial.len() < 3 {
                continue;
            }
            if let Some((value, ext_error)) = wynn_epsilon(&partial) {
                let error = ext_error + piece_error;
                if error < best.error {
                    best = Piece {
                        value,
                        error,
                        converged: false,
                    };
                }
                let tol = 0.5 * self.spec.abs_tol.max(self.spec.rel_tol * value.abs());
                if error <= tol && partial.len() >= 4 {
                    return Ok(Piece {
                        value,
                        error,
                        converged: pieces_ok,
                    });
                }
            }
        }
        if !best.error.is_finite() {
            best = Piece {
                value: running,
                error: piece_error + partial
                    .len()
                    .checked_sub(2)
                    .map_or(f64::INFINITY, |i| (running - partial[i]).abs()),
                converged: false,
            };
        }
        Ok(best)
    }
}

pub(super) fn graded<F: Fn(Node) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    let width = hi - lo;
    let mut left = Half {
        f,
        lo,
        hi,
        width,
        anchor: Endpoint::Lo,
        spec,
        evaluations: 0,
    };
    let a = left.graded(0.5 * width)?;
    let mut right = Half {
        f,
        lo,
        hi,
        width,
        anchor: Endpoint::Hi,
        spec,
        evaluations: 0,
    };
    let b = right.graded(0.5 * width)?;

    let value = a.value + b.value;
    let error_estimate = a.error + b.error;
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations: left.evaluations + right.evaluations,
        converged: a.converged && b.converged && error_estimate <= spec.tolerance_for(value),
    })
}

/// Wynn's epsilon algorithm on a sequence of partial sums.
///
/// Returns the extrapolated limit from the even column with the smallest
/// internal disagreement, together with that disagreement as error
/// estimate. `None` when no even column of order ≥ 2 could be formed.
pub(crate) fn wynn_epsilon(seq: &[f64]) -> Option<(f64, f64)> {
    let mut prev = vec![0.0; seq.len() + 1];
    let mut cur = seq.to_vec();
    let mut best: Option<(f64, f64)> = None;
    let mut order = 0;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut stalled = false;
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let scale = cur[i].abs().max(cur[i + 1].abs());
            if d.abs() <= 4.0 * f64::EPSILON * scale || d == 0.0 {
                stalled = true;
                break;
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        if stalled {
            // the current column has converged to rounding
            if order % 2 == 0 && order >= 2 {
                let last = *cur.last().unwrap();
                let err = 8.0 * f64::EPSILON * last.abs();
                if best.is_none_or(|(_, e)| err < e) {
                    best = Some((last, err));
                }
            }
            break;
        }
        prev = cur;
        cur = next;
        order += 1;
        if order % 2 == 0 && cur.len() >= 2 {
            let n = cur.len();
            let err = (cur[n - 1] - cur[n - 2]).abs().max(4.0 * f64::EPSILON * cur[n - 1].abs());
            if best.is_none_or(|(_, e)| err < e) {
                best = Some((cur[n - 1], err));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_is_exact_on_geometric_sums() {
        let ratio: f64 = 0.933;
        let seq: Vec<f64> = (1..=6).map(|n| (1.0 - ratio.powi(n)) / (1.0 - ratio)).collect();
        let (v, _) = wynn_epsilon(&seq).unwrap();
        assert!((v - 1.0 / (1.0 - ratio)).abs() < 1e-10);
    }

    #[test]
    fn epsilon_needs_three_terms() {
        assert!(wynn_epsilon(&[1.0, 1.5]).is_none());
    }
}
