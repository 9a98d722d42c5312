//! Sampling-based certification of η-convexity.
//!
//! g is η-convex on I when g(βx + (1−β)y) ≤ g(y) + β·η(g(x), g(y)) for all
//! x, y ∈ I and β ∈ [0, 1]. Over a continuum this cannot be decided from
//! point values, so a verdict of `holds` means only that no violation above
//! the tolerance was found at the sampled resolution.
//!
//! The sampling plan for a grid size n is the full product of n
//! Chebyshev–Lobatto points for x and y with n uniform points of [0, 1] for
//! β, followed by n³ uniformly random triples drawn from a seeded ChaCha
//! stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::{chebyshev_lobatto, EtaFn, RealFn};
use crate::operators::Interval;

pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_SEED: u64 = 0x5eed_2018;
pub const MIN_GRID: usize = 8;

/// A sampled triple at which the defining inequality fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub beta: f64,
    /// g(βx + (1−β)y) − g(y) − β·η(g(x), g(y))
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub samples_checked: usize,
    pub max_violation: f64,
    pub tolerance: f64,
}

/// Left side minus right side of the defining inequality at one triple.
pub fn violation(g: &RealFn, eta: &EtaFn, x: f64, y: f64, beta: f64) -> f64 {
    let gx = g.eval(x);
    let gy = g.eval(y);
    g.eval(beta * x + (1.0 - beta) * y) - gy - beta * eta.eval(gx, gy)
}

/// 1e−10·(1 + max |g|) with the maximum taken over the x grid.
pub fn default_tolerance(g: &RealFn, iv: &Interval, grid_n: usize) -> f64 {
    let scale = chebyshev_lobatto(iv.a, iv.b, grid_n.max(2))
        .into_iter()
        .map(|x| g.eval(x).abs())
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    1e-10 * (1.0 + scale)
}

fn check_grid(grid_n: usize) -> Result<()> {
    if grid_n < MIN_GRID {
        return Err(Error::Domain(format!("grid_n = {grid_n} below the minimum {MIN_GRID}")));
    }
    Ok(())
}

fn finite(value: f64, what: &str, x: f64, y: f64, beta: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation {
            context: format!("{what} at sample (x = {x}, y = {y}, β = {beta})"),
            at: beta * x + (1.0 - beta) * y,
            value,
        })
    }
}

#[derive(Clone, Copy)]
struct Worst {
    violation: f64,
    order: usize,
    x: f64,
    y: f64,
    beta: f64,
}

impl Worst {
    fn none() -> Self {
        Worst {
            violation: f64::NEG_INFINITY,
            order: usize::MAX,
            x: 0.0,
            y: 0.0,
            beta: 0.0,
        }
    }

    // order-independent: larger violation wins, ties go to the earlier sample
    fn max(self, other: Self) -> Self {
        if other.violation > self.violation
            || (other.violation == self.violation && other.order < self.order)
        {
            other
        } else {
            self
        }
    }
}

/// Sampled η-convexity check with the default seed.
pub fn check_eta_convex(
    g: &RealFn,
    eta: &EtaFn,
    iv: &Interval,
    grid_n: usize,
    tol: f64,
) -> Result<ConvexityVerdict> {
    check_eta_convex_seeded(g, eta, iv, grid_n, tol, DEFAULT_SEED)
}

pub fn check_eta_convex_seeded(
    g: &RealFn,
    eta: &EtaFn,
    iv: &Interval,
    grid_n: usize,
    tol: f64,
    seed: u64,
) -> Result<ConvexityVerdict> {
    check_grid(grid_n)?;
    let n = grid_n;
    let xs = chebyshev_lobatto(iv.a, iv.b, n);
    let gs = xs
        .iter()
        .map(|&x| finite(g.eval(x), g.label(), x, x, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let betas: Vec<f64> = (0..n).map(|l| l as f64 / (n - 1) as f64).collect();

    let grid_worst = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Worst> {
            let mut worst = Worst::none();
            for j in 0..n {
                for (l, &beta) in betas.iter().enumerate() {
                    let (x, y) = (xs[i], xs[j]);
                    let gz = finite(g.eval(beta * x + (1.0 - beta) * y), g.label(), x, y, beta)?;
                    let e = finite(eta.eval(gs[i], gs[j]), eta.label(), x, y, beta)?;
                    let v = gz - gs[j] - beta * e;
                    worst = worst.max(Worst {
                        violation: v,
                        order: (i * n + j) * n + l,
                        x,
                        y,
                        beta,
                    });
                }
            }
            Ok(worst)
        })
        .try_reduce(Worst::none, |a, b| Ok(a.max(b)))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = grid_worst;
    let random = n * n * n;
    for m in 0..random {
        let x = rng.gen_range(iv.a..=iv.b);
        let y = rng.gen_range(iv.a..=iv.b);
        let beta: f64 = rng.gen_range(0.0..=1.0);
        let gx = finite(g.eval(x), g.label(), x, y, beta)?;
        let gy = finite(g.eval(y), g.label(), x, y, beta)?;
        let gz = finite(g.eval(beta * x + (1.0 - beta) * y), g.label(), x, y, beta)?;
        let e = finite(eta.eval(gx, gy), eta.label(), x, y, beta)?;
        worst = worst.max(Worst {
            violation: gz - gy - beta * e,
            order: n * n * n + m,
            x,
            y,
            beta,
        });
    }

    let holds = worst.violation <= tol;
    Ok(ConvexityVerdict {
        holds,
        witness: (!holds).then_some(Witness {
            x: worst.x,
            y: worst.y,
            beta: worst.beta,
            violation: worst.violation,
        }),
        samples_checked: 2 * random,
        max_violation: worst.violation,
        tolerance: tol,
    })
}

/// Sampled supremum of η over g(I) × g(I), an estimate of M_η.
pub fn eta_upper_bound(eta: &EtaFn, g: &RealFn, iv: &Interval, grid_n: usize) -> Result<f64> {
    eta_upper_bound_seeded(eta, g, iv, grid_n, DEFAULT_SEED)
}

/// The x samples are the union of the Chebyshev–Lobatto grids of every size
/// up to `grid_n`, plus the first `grid_n³` random pairs of the seeded
/// stream. Both parts only grow with `grid_n`, so the estimate is
/// nondecreasing in `grid_n` for a fixed seed.
pub fn eta_upper_bound_seeded(
    eta: &EtaFn,
    g: &RealFn,
    iv: &Interval,
    grid_n: usize,
    seed: u64,
) -> Result<f64> {
    check_grid(grid_n)?;
    let mut values = Vec::new();
    for m in 2..=grid_n {
        for x in chebyshev_lobatto(iv.a, iv.b, m) {
            values.push(finite(g.eval(x), g.label(), x, x, 1.0)?);
        }
    }
    values.sort_by(f64::total_cmp);
    values.dedup();

    let mut sup = values
        .par_iter()
        .map(|&u| -> Result<f64> {
            let mut best = f64::NEG_INFINITY;
            for &v in &values {
                best = best.max(finite(eta.eval(u, v), eta.label(), u, v, 1.0)?);
            }
            Ok(best)
        })
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..grid_n * grid_n * grid_n {
        let x = rng.gen_range(iv.a..=iv.b);
        let y = rng.gen_range(iv.a..=iv.b);
        let (gx, gy) = (g.eval(x), g.eval(y));
        sup = sup.max(finite(eta.eval(gx, gy), eta.label(), x, y, 1.0)?);
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{constant, exponential, identity, negative_abs, shifted_vee, square};

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn negative_abs_is_eta_convex() {
        let g = negative_abs();
        let i = iv(-1.0, 1.0);
        let v = check_eta_convex(&g, &EtaFn::negative_sum(), &i, 16, default_tolerance(&g, &i, 16)).unwrap();
        assert!(v.holds, "{v:?}");
        assert!(v.witness.is_none());
        // but it is not convex
        let v = check_eta_convex(&g, &EtaFn::difference(), &i, 16, 1e-10).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn square_is_convex() {
        let i = iv(-2.0, 2.0);
        let v = check_eta_convex(&square(), &EtaFn::difference(), &i, 16, 1e-9).unwrap();
        assert!(v.holds);
        assert_eq!(v.samples_checked, 2 * 16 * 16 * 16);
    }

    #[test]
    fn identity_with_zero_eta_fails_at_the_corner() {
        let zero = EtaFn::new("zero", |_, _| 0.0);
        let v = check_eta_convex(&identity(), &zero, &iv(0.0, 1.0), 16, 1e-10).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!((w.x - 1.0).abs() < 1e-12 && w.y.abs() < 1e-12 && (w.beta - 1.0).abs() < 1e-12);
        assert!((w.violation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn convex_family_passes_with_difference() {
        let i = iv(-1.0, 2.0);
        let vee = RealFn::new("abs", |x: f64| (x - 0.3).abs());
        for g in [square(), exponential(), vee] {
            let tol = default_tolerance(&g, &i, 16);
            assert!(check_eta_convex(&g, &EtaFn::difference(), &i, 16, tol).unwrap().holds, "{}", g.label());
        }
        // the registry's vee is concave, so only a nonnegative-gap η certifies it
        assert!(!check_eta_convex(&shifted_vee(0.3), &EtaFn::difference(), &i, 16, 1e-10).unwrap().holds);
    }

    #[test]
    fn small_grid_rejected() {
        assert!(check_eta_convex(&square(), &EtaFn::difference(), &iv(0.0, 1.0), 4, 1e-9).is_err());
    }

    #[test]
    fn non_finite_samples_are_errors() {
        let g = RealFn::new("recip", |x| 1.0 / x);
        match check_eta_convex(&g, &EtaFn::difference(), &iv(0.0, 1.0), 8, 1e-9) {
            Err(Error::Evaluation { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn upper_bound_examples() {
        let i = iv(0.0, 1.0);
        let m = eta_upper_bound(&EtaFn::difference(), &identity(), &i, 8).unwrap();
        assert!((m - 1.0).abs() < 1e-15);
        let m = eta_upper_bound(&EtaFn::constant(3.0), &constant(0.5), &i, 8).unwrap();
        assert_eq!(m, 3.0);
        let m = eta_upper_bound(&EtaFn::negative_sum(), &negative_abs(), &iv(-1.0, 1.0), 8).unwrap();
        assert!((m - 2.0).abs() < 1e-15);
    }

    #[test]
    fn upper_bound_monotone_in_grid() {
        let g = RealFn::new("wiggle", |x: f64| (5.0 * x).sin() + 0.3 * x);
        let eta = EtaFn::new("prod", |u, v| u * v - v);
        let i = iv(-1.0, 1.3);
        let mut last = f64::NEG_INFINITY;
        for n in 8..=20 {
            let m = eta_upper_bound(&eta, &g, &i, n).unwrap();
            assert!(m >= last, "n = {n}: {m} < {last}");
            last = m;
        }
    }
}
