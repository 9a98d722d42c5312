//! The (k,r)-Riemann–Liouville fractional integral operators.
//!
//! For α, k > 0 and r > −1 (ρ = r + 1, s = α/k):
//!
//! ```text
//! left:  J_{a+} g(x) = ρ^{1−s} / (k Γ_k(α)) ∫_a^x (x^ρ − t^ρ)^{s−1} t^r g(t) dt,  x > a
//! right: J_{b−} g(x) = ρ^{1−s} / (k Γ_k(α)) ∫_x^b (t^ρ − x^ρ)^{s−1} t^r g(t) dt,  x < b
//! ```
//!
//! The kernel is singular at t = x whenever s < 1. Differences of powers
//! are formed from the exact distance to x so the singular factor keeps
//! full relative accuracy down to distances far below the spacing of
//! doubles near x.

use crate::error::{Error, Result};
use crate::functions::{chebyshev_lobatto, RealFn};
use crate::quadrature::{integrate_split, Node, QuadSpec, Singularity};
use crate::specialfn::{gamma, k_gamma, k_gamma_shifted};

/// Points of the boundedness probe on [a, b].
pub const BOUNDEDNESS_PROBE_POINTS: usize = 513;

/// Parameter triple (α, k, r) of the operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    pub alpha: f64,
    pub k: f64,
    pub r: f64,
}

impl FracParams {
    pub fn new(alpha: f64, k: f64, r: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("order α = {alpha} must be positive")));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Domain(format!("k = {k} must be positive")));
        }
        if r == -1.0 {
            return Err(Error::Domain("r = −1 excluded".into()));
        }
        if !(r.is_finite() && r > -1.0) {
            return Err(Error::Domain(format!("r = {r} < −1 is outside the supported domain")));
        }
        Ok(Self { alpha, k, r })
    }

    /// The classical Riemann–Liouville case r = 0, k = 1.
    pub fn classical(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0, 0.0)
    }

    /// s = α/k, the exponent of the fractional means.
    #[inline]
    pub fn ratio(&self) -> f64 {
        self.alpha / self.k
    }

    /// ρ = r + 1.
    #[inline]
    pub fn rho(&self) -> f64 {
        self.r + 1.0
    }

    fn r_is_nonnegative_integer(&self) -> bool {
        self.r >= 0.0 && self.r.fract() == 0.0
    }

    /// Real-valuedness of every power on [lo, hi]: lo ≥ 0, and lo > 0 unless
    /// r is a nonnegative integer.
    pub fn check_domain(&self, lo: f64, hi: f64) -> Result<()> {
        if lo < 0.0 {
            return Err(Error::Domain(format!(
                "operators need a nonnegative left end, got {lo}"
            )));
        }
        if lo == 0.0 && !self.r_is_nonnegative_integer() {
            return Err(Error::Domain(format!(
                "left end 0 requires r to be a nonnegative integer, got r = {}",
                self.r
            )));
        }
        if hi <= lo {
            return Err(Error::Domain(format!("empty range [{lo}, {hi}]")));
        }
        Ok(())
    }

    /// ρ^{1−s} / (k Γ_k(α)).
    pub fn normalizer(&self) -> Result<f64> {
        let s = self.ratio();
        Ok(self.rho().powf(1.0 - s) / (self.k * k_gamma(self.alpha, self.k)?))
    }
}

/// A closed interval [a, b] with a < b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain(format!("non-finite interval [{a}, {b}]")));
        }
        if a >= b {
            return Err(Error::Domain(format!("interval needs a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// a + b − x
    #[inline]
    pub fn mirror(&self, x: f64) -> f64 {
        self.a + self.b - x
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }
}

/// (base + delta)^ρ − base^ρ for base, delta ≥ 0, without cancellation.
pub(crate) fn rise(base: f64, delta: f64, rho: f64) -> f64 {
    if base == 0.0 {
        delta.powf(rho)
    } else {
        base.powf(rho) * (rho * (delta / base).ln_1p()).exp_m1()
    }
}

/// [(base + delta)^ρ − base^ρ]^e, avoiding underflow of the bracket at base = 0.
pub(crate) fn rise_pow(base: f64, delta: f64, rho: f64, e: f64) -> f64 {
    if base == 0.0 {
        delta.powf(rho * e)
    } else {
        rise(base, delta, rho).powf(e)
    }
}

/// top^ρ − (top − delta)^ρ for 0 ≤ delta ≤ top, without cancellation.
pub(crate) fn fall(top: f64, delta: f64, rho: f64) -> f64 {
    if delta >= top {
        return top.powf(rho);
    }
    -top.powf(rho) * (rho * (-delta / top).ln_1p()).exp_m1()
}

/// b^ρ − a^ρ
pub(crate) fn power_gap(iv: &Interval, p: &FracParams) -> f64 {
    fall(iv.b, iv.width(), p.rho())
}

fn kernel_hint(p: &FracParams) -> Option<f64> {
    let s = p.ratio();
    (s < 1.0).then_some(s - 1.0)
}

/// Left operator J^α_{a+} g(x).
pub fn frac_left(g: &RealFn, x: f64, a: f64, p: &FracParams, q: &QuadSpec) -> Result<f64> {
    if !(x > a) {
        return Err(Error::Domain(format!("left operator needs x > a, got x = {x}, a = {a}")));
    }
    p.check_domain(a, x)?;
    let (s, rho, r) = (p.ratio(), p.rho(), p.r);
    let integrand = |n: Node| {
        let t = n.x;
        fall(x, n.from_hi, rho).powf(s - 1.0) * t.powf(r) * g.eval(t)
    };
    let context = format!("left operator on {} at x = {x}", g.label());
    let integral = integrate_split(
        integrand,
        a,
        x,
        g.breakpoints(),
        q,
        kernel_hint(p).map(Singularity::at_hi),
    )
    .map_err(|e| e.within(&context))?
    .require(&context)?;
    Ok(p.normalizer()? * integral)
}

/// Right operator J^α_{b−} g(x).
pub fn frac_right(g: &RealFn, x: f64, b: f64, p: &FracParams, q: &QuadSpec) -> Result<f64> {
    if !(x < b) {
        return Err(Error::Domain(format!("right operator needs x < b, got x = {x}, b = {b}")));
    }
    p.check_domain(x, b)?;
    let (s, rho, r) = (p.ratio(), p.rho(), p.r);
    // at x = 0 the kernel and the weight t^r merge into t^{ρs−1}
    let at_origin = x == 0.0;
    let integrand = |n: Node| {
        if at_origin {
            let t = n.from_lo;
            t.powf(rho * s - 1.0) * g.eval(t)
        } else {
            let t = n.x;
            rise_pow(x, n.from_lo, rho, s - 1.0) * t.powf(r) * g.eval(t)
        }
    };
    let hint = if at_origin {
        (rho * s < 1.0).then_some(rho * s - 1.0)
    } else {
        kernel_hint(p)
    };
    let context = format!("right operator on {} at x = {x}", g.label());
    let integral = integrate_split(integrand, x, b, g.breakpoints(), q, hint.map(Singularity::at_lo))
    .map_err(|e| e.within(&context))?
    .require(&context)?;
    Ok(p.normalizer()? * integral)
}

/// x ↦ g(a + b − x)
pub fn reflect(g: &RealFn, iv: &Interval) -> RealFn {
    let inner = g.clone();
    let iv = *iv;
    let breaks = g.breakpoints().iter().map(|&c| iv.mirror(c)).collect();
    let out = RealFn::new(format!("~{}", g.label()), move |x| inner.eval(iv.mirror(x)))
        .with_breakpoints(breaks);
    if g.has_derivative() {
        let inner = g.clone();
        out.with_derivative(move |x| -inner.derivative(iv.mirror(x), iv.a, iv.b))
    } else {
        out
    }
}

/// G = g + g̃, symmetric about the midpoint of `iv`.
pub fn symmetrize(g: &RealFn, iv: &Interval) -> RealFn {
    let inner = g.clone();
    let iv = *iv;
    let mut breaks: Vec<f64> = g.breakpoints().to_vec();
    breaks.extend(g.breakpoints().iter().map(|&c| iv.mirror(c)));
    let out = RealFn::new(format!("G[{}]", g.label()), move |x| {
        inner.eval(x) + inner.eval(iv.mirror(x))
    })
    .with_breakpoints(breaks);
    if g.has_derivative() {
        let inner = g.clone();
        out.with_derivative(move |x| {
            inner.derivative(x, iv.a, iv.b) - inner.derivative(iv.mirror(x), iv.a, iv.b)
        })
    } else {
        out
    }
}

/// Heuristic L∞ check: g finite at 513 Chebyshev–Lobatto points of `iv`.
/// Returns the largest |g| seen.
pub fn probe_bounded(g: &RealFn, iv: &Interval) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for x in chebyshev_lobatto(iv.a, iv.b, BOUNDEDNESS_PROBE_POINTS) {
        let v = g.eval(x);
        if !v.is_finite() {
            return Err(Error::Evaluation {
                context: format!("boundedness probe of {}", g.label()),
                at: x,
                value: v,
            });
        }
        sup = sup.max(v.abs());
    }
    Ok(sup)
}

/// ρ^s Γ_k(α+k) / (4 (b^ρ − a^ρ)^s), the normalisation of the fractional mean.
pub fn mean_prefactor(iv: &Interval, p: &FracParams) -> Result<f64> {
    let s = p.ratio();
    Ok(p.rho().powf(s) * k_gamma_shifted(p.alpha, p.k)? / (4.0 * power_gap(iv, p).powf(s)))
}

/// The normalised fractional mean
/// ρ^s Γ_k(α+k) / (4 (b^ρ − a^ρ)^s) · [J_{a+}G(b) + J_{b−}G(a)], G = g + g̃.
///
/// For g ≡ c it equals c; at r = 0, k = 1, α = 1 it is the plain average
/// of g over [a, b].
pub fn normalized_frac_mean(g: &RealFn, iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<f64> {
    p.check_domain(iv.a, iv.b)?;
    probe_bounded(g, iv)?;
    let big_g = symmetrize(g, iv);
    let left = frac_left(&big_g, iv.b, iv.a, p, q)?;
    let right = frac_right(&big_g, iv.a, iv.b, p, q)?;
    Ok(mean_prefactor(iv, p)? * (left + right))
}

/// The operators written as integrals over w ∈ [0, 1] after the
/// substitutions w = (t − a)/(x − a) and w = (b − t)/(b − x).
pub mod substituted {
    use super::*;
    use crate::quadrature::integrate_nodes;

    fn unit_integral(
        f: impl Fn(Node) -> f64,
        hint: Option<f64>,
        q: &QuadSpec,
        context: &str,
    ) -> Result<f64> {
        integrate_nodes(f, 0.0, 1.0, q, hint.map(Singularity::at_hi))
            .map_err(|e| e.within(context))?
            .require(context)
    }

    /// J_{a+} g(x) = (x − a)·c ∫₀¹ τ^r g(τ) / [x^ρ − τ^ρ]^{1−s} dw, τ = wx + (1−w)a.
    pub fn frac_left_unit(g: &RealFn, x: f64, a: f64, p: &FracParams, q: &QuadSpec) -> Result<f64> {
        p.check_domain(a, x)?;
        let (s, rho, r, len) = (p.ratio(), p.rho(), p.r, x - a);
        let f = |n: Node| {
            let tau = a + n.x * len;
            tau.powf(r) * g.eval(tau) / fall(x, n.from_hi * len, rho).powf(1.0 - s)
        };
        Ok(len * p.normalizer()? * unit_integral(f, kernel_hint(p), q, "substituted left operator")?)
    }

    /// J_{b−} g(x) = (b − x)·c ∫₀¹ τ^r g(τ) / [τ^ρ − x^ρ]^{1−s} dw, τ = wx + (1−w)b.
    pub fn frac_right_unit(g: &RealFn, x: f64, b: f64, p: &FracParams, q: &QuadSpec) -> Result<f64> {
        p.check_domain(x, b)?;
        let (s, rho, r, len) = (p.ratio(), p.rho(), p.r, b - x);
        let f = |n: Node| {
            let gap = n.from_hi * len;
            let tau = x + gap;
            if x == 0.0 {
                gap.powf(rho * (s - 1.0) + r) * g.eval(tau)
            } else {
                tau.powf(r) * g.eval(tau) * rise_pow(x, gap, rho, s - 1.0)
            }
        };
        let hint = if x == 0.0 {
            (rho * s < 1.0).then_some(rho * s - 1.0)
        } else {
            kernel_hint(p)
        };
        Ok(len * p.normalizer()? * unit_integral(f, hint, q, "substituted right operator")?)
    }

    /// J_{a+} g̃(b) written through g: the integrand evaluates
    /// g((1−w)b + wa) in place of g̃(wb + (1−w)a).
    pub fn frac_left_reflected_unit(g: &RealFn, iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<f64> {
        p.check_domain(iv.a, iv.b)?;
        let (s, rho, r, len) = (p.ratio(), p.rho(), p.r, iv.width());
        let f = |n: Node| {
            let tau = iv.a + n.x * len;
            let arg = iv.b - n.x * len;
            tau.powf(r) * g.eval(arg) / fall(iv.b, n.from_hi * len, rho).powf(1.0 - s)
        };
        Ok(len * p.normalizer()? * unit_integral(f, kernel_hint(p), q, "substituted reflected left operator")?)
    }

    /// J_{b−} g̃(a) written through g: evaluates g((1−w)a + wb).
    pub fn frac_right_reflected_unit(g: &RealFn, iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<f64> {
        p.check_domain(iv.a, iv.b)?;
        let (s, rho, r, len) = (p.ratio(), p.rho(), p.r, iv.width());
        let f = |n: Node| {
            let tau = iv.b - n.x * len;
            let arg = iv.a + n.x * len;
            tau.powf(r) * g.eval(arg) * rise_pow(iv.a, n.from_hi * len, rho, s - 1.0)
        };
        Ok(len * p.normalizer()? * unit_integral(f, kernel_hint(p), q, "substituted reflected right operator")?)
    }
}

/// Classical Riemann–Liouville integrals (r = 0, k = 1), evaluated through
/// the substitution u = (x − t)^α (resp. (t − x)^α) for α < 1, which removes
/// the kernel singularity, and directly for α ≥ 1.
pub mod classical {
    use super::*;
    use crate::quadrature::integrate_split;

    fn check(alpha: f64) -> Result<()> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("order α = {alpha} must be positive")))
        }
    }

    /// J^α_{a+} g(x) = 1/Γ(α) ∫_a^x (x − t)^{α−1} g(t) dt
    pub fn left(g: &RealFn, x: f64, a: f64, alpha: f64, q: &QuadSpec) -> Result<f64> {
        check(alpha)?;
        if !(x > a) {
            return Err(Error::Domain(format!("need x > a, got x = {x}, a = {a}")));
        }
        let context = "classical left integral";
        if alpha >= 1.0 {
            let v = integrate_split(
                |n: Node| n.from_hi.powf(alpha - 1.0) * g.eval(n.x),
                a,
                x,
                g.breakpoints(),
                q,
                None,
            )?
            .require(context)?;
            return Ok(v / gamma(alpha));
        }
        let inv = 1.0 / alpha;
        let top = (x - a).powf(alpha);
        let breaks: Vec<f64> = g
            .breakpoints()
            .iter()
            .filter(|&&c| c > a && c < x)
            .map(|&c| (x - c).powf(alpha))
            .collect();
        let v = integrate_split(|n: Node| g.eval(x - n.x.powf(inv)), 0.0, top, &breaks, q, None)?
            .require(context)?;
        Ok(v / gamma(alpha + 1.0))
    }

    /// J^α_{b−} g(x) = 1/Γ(α) ∫_x^b (t − x)^{α−1} g(t) dt
    pub fn right(g: &RealFn, x: f64, b: f64, alpha: f64, q: &QuadSpec) -> Result<f64> {
        check(alpha)?;
        if !(x < b) {
            return Err(Error::Domain(format!("need x < b, got x = {x}, b = {b}")));
        }
        let context = "classical right integral";
        if alpha >= 1.0 {
            let v = integrate_split(
                |n: Node| n.from_lo.powf(alpha - 1.0) * g.eval(n.x),
                x,
                b,
                g.breakpoints(),
                q,
                None,
            )?
            .require(context)?;
            return Ok(v / gamma(alpha));
        }
        let inv = 1.0 / alpha;
        let top = (b - x).powf(alpha);
        let breaks: Vec<f64> = g
            .breakpoints()
            .iter()
            .filter(|&&c| c > x && c < b)
            .map(|&c| (c - x).powf(alpha))
            .collect();
        let v = integrate_split(|n: Node| g.eval(x + n.x.powf(inv)), 0.0, top, &breaks, q, None)?
            .require(context)?;
        Ok(v / gamma(alpha + 1.0))
    }
}
