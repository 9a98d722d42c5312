//! The kernel Θ(t) of the trapezoid identity and its absolute moments.
//!
//! With ρ = r + 1, s = α/k and L = b − a,
//!
//! ```text
//! Θ(t) = [w^ρ − a^ρ]^s − [w̄^ρ − a^ρ]^s + [b^ρ − w̄^ρ]^s − [b^ρ − w^ρ]^s
//! ```
//!
//! where w = ta + (1−t)b and w̄ = a + b − w. Every bracket is a difference
//! of powers whose base gap is tL or (1−t)L, so Θ is evaluated from t and
//! 1 − t directly and stays accurate at both ends.
//!
//! Under w the kernel becomes ℘(w) = f₁ − f₄ + f₂ − f₃ with
//!
//! ```text
//! f₁(w) = (w^ρ − a^ρ)^s          f₂(w) = (b^ρ − w̄^ρ)^s
//! f₃(w) = (b^ρ − w^ρ)^s          f₄(w) = (w̄^ρ − a^ρ)^s
//! ```
//!
//! and ℘ ≤ 0 on [a, m], ℘ ≥ 0 on [m, b] (m the midpoint), which splits
//! ∫|Θ| and ∫t|Θ| into signed half-interval integrals of the fᵢ.

use crate::error::{Error, Result};
use crate::functions::RealFn;
use crate::operators::{fall, power_gap, rise, FracParams, Interval};
use crate::quadrature::{integrate_nodes, integrate_split, Node, QuadSpec};

/// Relative agreement required between the direct and decomposed moments.
pub const DECOMPOSITION_REL_TOL: f64 = 1e-8;

fn theta_parts(t: f64, one_minus_t: f64, iv: &Interval, p: &FracParams) -> f64 {
    let (s, rho, len) = (p.ratio(), p.rho(), iv.width());
    let (near, far) = (t * len, one_minus_t * len);
    rise(iv.a, far, rho).powf(s) - rise(iv.a, near, rho).powf(s) + fall(iv.b, far, rho).powf(s)
        - fall(iv.b, near, rho).powf(s)
}

/// Θ(t) for t ∈ [0, 1].
pub fn theta(t: f64, iv: &Interval, p: &FracParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("Θ needs t in [0, 1], got {t}")));
    }
    p.check_domain(iv.a, iv.b)?;
    Ok(theta_parts(t, 1.0 - t, iv, p))
}

/// ℘(w) for w ∈ [a, b].
pub fn wp(w: f64, iv: &Interval, p: &FracParams) -> Result<f64> {
    if !iv.contains(w) {
        return Err(Error::Domain(format!("℘ needs w in [{}, {}], got {w}", iv.a, iv.b)));
    }
    p.check_domain(iv.a, iv.b)?;
    let len = iv.width();
    Ok(theta_parts((iv.b - w) / len, (w - iv.a) / len, iv, p))
}

/// (∫_a^m f, ∫_m^b f) for f given as a function of (w − a, b − w).
fn halves<F: Fn(f64, f64) -> f64>(f: F, iv: &Interval, q: &QuadSpec, what: &str) -> Result<(f64, f64)> {
    let m = iv.midpoint();
    let (to_mid, from_mid) = (m - iv.a, iv.b - m);
    let context = format!("{what} on [{}, {}]", iv.a, iv.b);
    let left = integrate_nodes(|n: Node| f(n.from_lo, n.from_hi + from_mid), iv.a, m, q, None)?
        .require(&context)?;
    let right = integrate_nodes(|n: Node| f(n.from_lo + to_mid, n.from_hi), m, iv.b, q, None)?
        .require(&context)?;
    Ok((left, right))
}

/// fᵢ (i = 1..4) as a function of (w − a, b − w).
fn piece(i: usize, iv: &Interval, p: &FracParams) -> impl Fn(f64, f64) -> f64 {
    let (a, b, s, rho) = (iv.a, iv.b, p.ratio(), p.rho());
    move |da, db| {
        let bracket = match i {
            1 => rise(a, da, rho),
            2 => fall(b, da, rho),
            3 => fall(b, db, rho),
            _ => rise(a, db, rho),
        };
        bracket.powf(s)
    }
}

/// (ℜ₁, ℜ₂, ℜ₃, ℜ₄); their sum is (b − a)·∫₀¹|Θ|.
pub fn r_terms(iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<[f64; 4]> {
    p.check_domain(iv.a, iv.b)?;
    let (l1, r1) = halves(piece(1, iv, p), iv, q, "ℜ₁")?;
    let (l2, r2) = halves(piece(2, iv, p), iv, q, "ℜ₂")?;
    let (l3, r3) = halves(piece(3, iv, p), iv, q, "ℜ₃")?;
    let (l4, r4) = halves(piece(4, iv, p), iv, q, "ℜ₄")?;
    Ok([r1 - l1, r2 - l2, l3 - r3, l4 - r4])
}

/// (ξ₁, ξ₂, ξ₃, ξ₄); their sum is (b − a)²·∫₀¹ t|Θ|.
pub fn xi_terms(iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<[f64; 4]> {
    p.check_domain(iv.a, iv.b)?;
    let weighted = |i: usize, what: &str| {
        let f = piece(i, iv, p);
        halves(|da, db| db * f(da, db), iv, q, what)
    };
    let (l3, r3) = weighted(3, "ξ₁")?;
    let (l1, r1) = weighted(1, "ξ₂")?;
    let (l4, r4) = weighted(4, "ξ₃")?;
    let (l2, r2) = weighted(2, "ξ₄")?;
    Ok([l3 - r3, r1 - l1, l4 - r4, r2 - l2])
}

/// ∫₀¹ weight(t)·|Θ(t)|^e dt by direct quadrature, split at t = 1/2.
fn direct_moment(iv: &Interval, p: &FracParams, q: &QuadSpec, e: f64, first: bool, what: &str) -> Result<f64> {
    p.check_domain(iv.a, iv.b)?;
    let f = |n: Node| {
        let th = theta_parts(n.from_lo, n.from_hi, iv, p).abs();
        let v = if e == 1.0 { th } else { th.powf(e) };
        if first {
            n.x * v
        } else {
            v
        }
    };
    integrate_split(f, 0.0, 1.0, &[0.5], q, None)?.require(what)
}

/// ∫₀¹ |Θ(t)| dt by direct quadrature.
pub fn abs_theta_direct(iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<f64> {
    direct_moment(iv, p, q, 1.0, false, "∫|Θ|")
}

/// ∫₀¹ t·|Θ(t)| dt by direct quadrature.
pub fn t_abs_theta_direct(iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<f64> {
    direct_moment(iv, p, q, 1.0, true, "∫t|Θ|")
}

/// ‖Θ‖_p = (∫₀¹ |Θ|^p dt)^{1/p}.
pub fn theta_norm(iv: &Interval, p: &FracParams, exponent: f64, q: &QuadSpec) -> Result<f64> {
    if !(exponent >= 1.0 && exponent.is_finite()) {
        return Err(Error::Domain(format!("norm exponent must be ≥ 1, got {exponent}")));
    }
    Ok(direct_moment(iv, p, q, exponent, false, "‖Θ‖_p")?.powf(1.0 / exponent))
}

/// ℜ = Σℜᵢ and Ξ = Σξᵢ together with the direct moments they must match.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaMoments {
    pub r_sum: f64,
    pub xi_sum: f64,
    /// ∫₀¹|Θ| by direct quadrature
    pub abs_direct: f64,
    /// ∫₀¹ t|Θ| by direct quadrature
    pub first_direct: f64,
}

impl ThetaMoments {
    pub fn compute(iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<Self> {
        Ok(Self {
            r_sum: r_terms(iv, p, q)?.iter().sum(),
            xi_sum: xi_terms(iv, p, q)?.iter().sum(),
            abs_direct: abs_theta_direct(iv, p, q)?,
            first_direct: t_abs_theta_direct(iv, p, q)?,
        })
    }

    /// ∫|Θ| from the decomposition, ℜ/(b − a).
    pub fn abs_from_terms(&self, iv: &Interval) -> f64 {
        self.r_sum / iv.width()
    }

    /// ∫t|Θ| from the decomposition, Ξ/(b − a)².
    pub fn first_from_terms(&self, iv: &Interval) -> f64 {
        self.xi_sum / (iv.width() * iv.width())
    }

    /// Fails when either pair disagrees beyond [`DECOMPOSITION_REL_TOL`].
    pub fn cross_check(&self, iv: &Interval) -> Result<()> {
        for (name, direct, terms) in [
            ("∫|Θ|", self.abs_direct, self.abs_from_terms(iv)),
            ("∫t|Θ|", self.first_direct, self.first_from_terms(iv)),
        ] {
            if (direct - terms).abs() > DECOMPOSITION_REL_TOL * terms.abs() {
                return Err(Error::NonConvergence {
                    context: format!("{name}: direct quadrature {direct} disagrees with decomposition"),
                    value: terms,
                    error_estimate: (direct - terms).abs(),
                });
            }
        }
        Ok(())
    }
}

/// (b − a)/(4(b^ρ − a^ρ)^s), the common factor of the trapezoid identity.
pub fn identity_prefactor(iv: &Interval, p: &FracParams) -> f64 {
    iv.width() / (4.0 * power_gap(iv, p).powf(p.ratio()))
}

/// (g(a) + g(b))/2 minus the normalized fractional mean.
pub fn lemma1_lhs(g: &RealFn, iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<f64> {
    let mean = crate::operators::normalized_frac_mean(g, iv, p, q)?;
    Ok(0.5 * (g.eval(iv.a) + g.eval(iv.b)) - mean)
}

/// (b − a)/(4(b^ρ − a^ρ)^s) · ∫₀¹ Θ(t) g'(ta + (1−t)b) dt.
pub fn lemma1_rhs(g: &RealFn, iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<f64> {
    p.check_domain(iv.a, iv.b)?;
    let (a, b, len) = (iv.a, iv.b, iv.width());
    let f = |n: Node| {
        let x = if n.from_lo <= 0.5 { b - n.from_lo * len } else { a + n.from_hi * len };
        theta_parts(n.from_lo, n.from_hi, iv, p) * g.derivative(x, a, b)
    };
    let mut breaks = vec![0.5];
    breaks.extend(g.breakpoints().iter().map(|&c| (b - c) / len));
    let context = format!("trapezoid identity integral of {}", g.label());
    let integral = integrate_split(f, 0.0, 1.0, &breaks, q, None)?.require(&context)?;
    Ok(identity_prefactor(iv, p) * integral)
}
