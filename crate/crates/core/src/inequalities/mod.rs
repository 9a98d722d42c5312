//! Both sides of the Hermite–Hadamard-type inequalities and the identities
//! behind them, reported as margins.
//!
//! Every bound returns a [`BoundReport`] with margin = rhs − lhs. An
//! inequality holds when the margin is at least
//! −1e−7·(1 + max(|lhs|, |rhs|)), which absorbs quadrature noise. Identity
//! checks report margin = −|lhs − rhs| against their own tolerance.
//!
//! Hypotheses (η-convexity of g, |g'| or |g'|^q, positivity, convexity) are
//! sampled through [`crate::etaconvex`] unless the caller passes
//! [`Precheck::Assume`]. A failed hypothesis is an
//! [`Error::Precondition`], never a violation.

mod theta;

pub use theta::{
    abs_theta_direct, identity_prefactor, lemma1_lhs, lemma1_rhs, r_terms, t_abs_theta_direct, theta,
    theta_norm, wp, xi_terms, ThetaMoments, DECOMPOSITION_REL_TOL,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::etaconvex::{check_eta_convex_seeded, default_tolerance, eta_upper_bound_seeded, DEFAULT_SEED};
use crate::functions::{chebyshev_lobatto, EtaFn, RealFn};
use crate::operators::{classical, normalized_frac_mean, power_gap, FracParams, Interval};
use crate::quadrature::{integrate_split, Node, QuadSpec};
use crate::specialfn::gamma;

/// Relative slack of the inequality verdicts.
pub const VERIFY_REL_TOL: f64 = 1e-7;
/// Relative slack of the trapezoid identity, scaled by 1 + |lhs|.
pub const LEMMA1_REL_TOL: f64 = 1e-7;
/// Grid size of the sampled hypothesis checks and of M_η.
pub const PRECHECK_GRID: usize = 32;
const POSITIVITY_PROBE: usize = 129;

/// Conjugate Hölder exponents, 1/p + 1/q = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderParams {
    pub p: f64,
    pub q: f64,
}

impl HolderParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && q > 1.0 && p.is_finite() && q.is_finite()) {
            return Err(Error::Precondition(format!("Hölder exponents need p, q > 1, got p = {p}, q = {q}")));
        }
        if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("1/p + 1/q ≠ 1 for p = {p}, q = {q}")));
        }
        Ok(Self { p, q })
    }

    /// The pair with the given q and p = q/(q − 1).
    pub fn from_q(q: f64) -> Result<Self> {
        Self::new(q / (q - 1.0), q)
    }
}

/// Identifiers of the checks, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    Hh1,
    EtaHh,
    EtaHhStated,
    Ds,
    DsSigned,
    Kka,
    Amt,
    Mr1,
    Mr2,
    Mr3,
    Mr4,
    Mr4Stated,
    Lemma1,
    Lemma2,
    EqId,
}

impl TheoremId {
    pub const ALL: [TheoremId; 15] = [
        TheoremId::Hh1,
        TheoremId::EtaHh,
        TheoremId::EtaHhStated,
        TheoremId::Ds,
        TheoremId::DsSigned,
        TheoremId::Kka,
        TheoremId::Amt,
        TheoremId::Mr1,
        TheoremId::Mr2,
        TheoremId::Mr3,
        TheoremId::Mr4,
        TheoremId::Mr4Stated,
        TheoremId::Lemma1,
        TheoremId::Lemma2,
        TheoremId::EqId,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Hh1 => "hh1",
            TheoremId::EtaHh => "eta_hh",
            TheoremId::EtaHhStated => "eta_hh_stated",
            TheoremId::Ds => "ds",
            TheoremId::DsSigned => "ds_signed",
            TheoremId::Kka => "kka",
            TheoremId::Amt => "amt",
            TheoremId::Mr1 => "mr1",
            TheoremId::Mr2 => "mr2",
            TheoremId::Mr3 => "mr3",
            TheoremId::Mr4 => "mr4",
            TheoremId::Mr4Stated => "mr4_stated",
            TheoremId::Lemma1 => "lemma1",
            TheoremId::Lemma2 => "lemma2",
            TheoremId::EqId => "eq_id",
        }
    }

    /// Rows reported for comparison only; their violations do not fail a run.
    pub fn is_informational(self) -> bool {
        matches!(
            self,
            TheoremId::EtaHhStated | TheoremId::Ds | TheoremId::DsSigned | TheoremId::Mr4Stated
        )
    }

    /// Whether the check depends on Hölder exponents.
    pub fn uses_holder(self) -> bool {
        matches!(self, TheoremId::Mr3 | TheoremId::Mr4 | TheoremId::Mr4Stated)
    }

    pub fn hypothesis(self) -> Hypothesis {
        match self {
            TheoremId::Hh1 | TheoremId::Amt => Hypothesis::Convex,
            TheoremId::EtaHh | TheoremId::EtaHhStated => Hypothesis::EtaConvex,
            TheoremId::Mr1 => Hypothesis::PositiveEtaConvex,
            TheoremId::Ds | TheoremId::DsSigned | TheoremId::Kka | TheoremId::Mr2 => {
                Hypothesis::DerivativeEtaConvex
            }
            TheoremId::Mr3 | TheoremId::Mr4 | TheoremId::Mr4Stated => Hypothesis::DerivativePowerEtaConvex,
            TheoremId::Lemma1 | TheoremId::Lemma2 | TheoremId::EqId => Hypothesis::None,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown theorem id `{s}`")))
    }
}

/// What a theorem assumes about g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    None,
    /// g convex
    Convex,
    /// g η-convex
    EtaConvex,
    /// g positive and η-convex
    PositiveEtaConvex,
    /// |g'| η-convex
    DerivativeEtaConvex,
    /// |g'|^q η-convex
    DerivativePowerEtaConvex,
}

/// How bounds treat their hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Precheck {
    /// Sample the hypothesis with the η-convexity checker first.
    Sampled { grid_n: usize, seed: u64 },
    /// Take the hypothesis as given.
    Assume,
}

impl Default for Precheck {
    fn default() -> Self {
        Precheck::Sampled {
            grid_n: PRECHECK_GRID,
            seed: DEFAULT_SEED,
        }
    }
}

impl Precheck {
    fn seed(&self) -> u64 {
        match *self {
            Precheck::Sampled { seed, .. } => seed,
            Precheck::Assume => DEFAULT_SEED,
        }
    }
}

/// Sample hypothesis `h` on `iv`. `q` is the Hölder exponent for
/// [`Hypothesis::DerivativePowerEtaConvex`].
pub fn verify_hypothesis(
    h: Hypothesis,
    g: &RealFn,
    eta: &EtaFn,
    iv: &Interval,
    q: Option<f64>,
    grid_n: usize,
    seed: u64,
) -> Result<()> {
    let (subject, eta) = match h {
        Hypothesis::None => return Ok(()),
        Hypothesis::Convex => (g.clone(), EtaFn::difference()),
        Hypothesis::EtaConvex => (g.clone(), eta.clone()),
        Hypothesis::PositiveEtaConvex => {
            for x in chebyshev_lobatto(iv.a, iv.b, POSITIVITY_PROBE) {
                let v = g.eval(x);
                if !(v > 0.0) {
                    return Err(Error::Precondition(format!("{} is not positive at x = {x} (value {v})", g.label())));
                }
            }
            (g.clone(), eta.clone())
        }
        Hypothesis::DerivativeEtaConvex => (g.abs_derivative_pow(1.0, iv.a, iv.b), eta.clone()),
        Hypothesis::DerivativePowerEtaConvex => {
            let q = q.ok_or_else(|| Error::Precondition("missing Hölder exponent q".into()))?;
            (g.abs_derivative_pow(q, iv.a, iv.b), eta.clone())
        }
    };
    let tol = default_tolerance(&subject, iv, grid_n);
    let verdict = check_eta_convex_seeded(&subject, &eta, iv, grid_n, tol, seed)?;
    match verdict.witness {
        None => Ok(()),
        Some(w) => Err(Error::Precondition(format!(
            "{} is not {}-convex: violation {:.3e} at x = {}, y = {}, β = {}",
            subject.label(),
            eta.label(),
            w.violation,
            w.x,
            w.y,
            w.beta
        ))),
    }
}

fn precheck(pre: Precheck, h: Hypothesis, g: &RealFn, eta: &EtaFn, iv: &Interval, q: Option<f64>) -> Result<()> {
    match pre {
        Precheck::Sampled { grid_n, seed } => verify_hypothesis(h, g, eta, iv, q, grid_n, seed),
        Precheck::Assume => Ok(()),
    }
}

/// The inputs a report was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportInputs {
    pub fn_label: String,
    pub eta_label: Option<String>,
    pub params: Option<FracParams>,
    pub interval: Interval,
    pub holder: Option<HolderParams>,
}

impl ReportInputs {
    fn new(g: &RealFn, eta: Option<&EtaFn>, iv: &Interval) -> Self {
        Self {
            fn_label: g.label().to_string(),
            eta_label: eta.map(|e| e.label().to_string()),
            params: None,
            interval: *iv,
            holder: None,
        }
    }

    fn with_params(mut self, p: &FracParams) -> Self {
        self.params = Some(*p);
        self
    }

    fn with_holder(mut self, hp: &HolderParams) -> Self {
        self.holder = Some(*hp);
        self
    }
}

/// Outcome of one inequality or identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs − lhs for inequalities, −|lhs − rhs| for identities
    pub margin: f64,
    pub tolerance: f64,
    pub holds: bool,
    /// (lhs, rhs) under the alternative reading, when the statement admits
    /// two.
    pub alt: Option<(f64, f64)>,
    pub inputs: ReportInputs,
}

/// 1e−7·(1 + max(|lhs|, |rhs|))
pub fn verification_tolerance(lhs: f64, rhs: f64) -> f64 {
    VERIFY_REL_TOL * (1.0 + lhs.abs().max(rhs.abs()))
}

impl BoundReport {
    pub fn inequality(theorem: TheoremId, lhs: f64, rhs: f64, inputs: ReportInputs) -> Self {
        let margin = rhs - lhs;
        let tolerance = verification_tolerance(lhs, rhs);
        Self {
            theorem,
            lhs,
            rhs,
            margin,
            tolerance,
            holds: margin >= -tolerance,
            alt: None,
            inputs,
        }
    }

    pub fn identity(theorem: TheoremId, lhs: f64, rhs: f64, tolerance: f64, inputs: ReportInputs) -> Self {
        let margin = -(lhs - rhs).abs();
        Self {
            theorem,
            lhs,
            rhs,
            margin,
            tolerance,
            holds: margin >= -tolerance,
            alt: None,
            inputs,
        }
    }

    /// The report under the alternative reading, if any: `eta_hh_stated`
    /// for the left half of `eta_hh`, `ds_signed` for `ds`, `mr4_stated`
    /// for `mr4`.
    pub fn alternate(&self) -> Option<BoundReport> {
        let theorem = match self.theorem {
            TheoremId::EtaHh => TheoremId::EtaHhStated,
            TheoremId::Ds => TheoremId::DsSigned,
            TheoremId::Mr4 => TheoremId::Mr4Stated,
            _ => return None,
        };
        let (lhs, rhs) = self.alt?;
        Some(BoundReport::inequality(theorem, lhs, rhs, self.inputs.clone()))
    }

    /// Of the two sides of a two-sided inequality, the one with the smaller
    /// margin.
    pub fn binding(left: BoundReport, right: BoundReport) -> BoundReport {
        if right.margin < left.margin {
            right
        } else {
            left
        }
    }
}

/// sign(x)·|x|^{1/q}
fn signed_root(x: f64, q: f64) -> f64 {
    x.signum() * x.abs().powf(1.0 / q)
}

fn finite_at(g: &RealFn, x: f64) -> Result<f64> {
    let v = g.eval(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation {
            context: g.label().to_string(),
            at: x,
            value: v,
        })
    }
}

/// (1/(b − a)) ∫_a^b g
pub fn integral_mean(g: &RealFn, iv: &Interval, q: &QuadSpec) -> Result<f64> {
    let context = format!("integral mean of {}", g.label());
    let integral = integrate_split(|n: Node| g.eval(n.x), iv.a, iv.b, g.breakpoints(), q, None)?.require(&context)?;
    Ok(integral / iv.width())
}

fn endpoint_slopes(g: &RealFn, iv: &Interval) -> (f64, f64) {
    (g.derivative(iv.a, iv.a, iv.b), g.derivative(iv.b, iv.a, iv.b))
}

/// g((a+b)/2) ≤ mean ≤ (g(a) + g(b))/2 with mean = (1/(b−a))∫g.
pub fn bound_classic_hh(g: &RealFn, iv: &Interval, q: &QuadSpec, pre: Precheck) -> Result<(BoundReport, BoundReport)> {
    precheck(pre, Hypothesis::Convex, g, &EtaFn::difference(), iv, None)?;
    let mean = integral_mean(g, iv, q)?;
    let mid = finite_at(g, iv.midpoint())?;
    let trap = 0.5 * (finite_at(g, iv.a)? + finite_at(g, iv.b)?);
    let inputs = ReportInputs::new(g, None, iv);
    Ok((
        BoundReport::inequality(TheoremId::Hh1, mid, mean, inputs.clone()),
        BoundReport::inequality(TheoremId::Hh1, mean, trap, inputs),
    ))
}

/// g((a+b)/2) − M_η/2 ≤ mean ≤ g(b) + η(g(a), g(b))/2, with M_η the
/// sampled supremum of η over g([a,b])².
///
/// The left half is what integrating the defining inequality over the
/// symmetric pairs gives. The left report's `alt` holds the form
/// 2g((a+b)/2) − M_η ≤ mean, which fails already for positive constants.
pub fn bound_eta_hh(
    g: &RealFn,
    eta: &EtaFn,
    iv: &Interval,
    q: &QuadSpec,
    pre: Precheck,
) -> Result<(BoundReport, BoundReport)> {
    precheck(pre, Hypothesis::EtaConvex, g, eta, iv, None)?;
    let m_eta = eta_upper_bound_seeded(eta, g, iv, PRECHECK_GRID, pre.seed())?;
    let mean = integral_mean(g, iv, q)?;
    let (ga, gb) = (finite_at(g, iv.a)?, finite_at(g, iv.b)?);
    let mid = finite_at(g, iv.midpoint())?;
    let inputs = ReportInputs::new(g, Some(eta), iv);
    Ok((
        BoundReport {
            alt: Some((2.0 * mid - m_eta, mean)),
            ..BoundReport::inequality(TheoremId::EtaHh, mid - 0.5 * m_eta, mean, inputs.clone())
        },
        BoundReport::inequality(TheoremId::EtaHh, mean, gb + 0.5 * eta.eval(ga, gb), inputs),
    ))
}

/// |(g(a)+g(b))/2 − mean| ≤ (b − a)K/8. The reported rhs evaluates K with
/// η at |g'(a)|, |g'(b)|; `alt` uses the signed slopes.
pub fn bound_ds(g: &RealFn, eta: &EtaFn, iv: &Interval, q: &QuadSpec, pre: Precheck) -> Result<BoundReport> {
    precheck(pre, Hypothesis::DerivativeEtaConvex, g, eta, iv, None)?;
    let mean = integral_mean(g, iv, q)?;
    let trap = 0.5 * (finite_at(g, iv.a)? + finite_at(g, iv.b)?);
    let (da, db) = endpoint_slopes(g, iv);
    let k_of = |u: f64, v: f64| {
        (db.abs() + 0.5 * eta.eval(u, v).abs()).min(da.abs() + 0.5 * eta.eval(v, u).abs())
    };
    let scale = iv.width() / 8.0;
    let mut report = BoundReport::inequality(
        TheoremId::Ds,
        (trap - mean).abs(),
        scale * k_of(da.abs(), db.abs()),
        ReportInputs::new(g, Some(eta), iv),
    );
    report.alt = Some((report.lhs, scale * k_of(da, db)));
    Ok(report)
}

/// The classical fractional trapezoid bound at order α:
/// |(g(a)+g(b))/2 − Γ(α+1)/(2(b−a)^α)[J_{a+}g(b) + J_{b−}g(a)]|
/// ≤ (b−a)/(2(α+1))·(1 − 2^{−α})·(2|g'(b)| + η(|g'(a)|, |g'(b)|)).
pub fn bound_kka(g: &RealFn, eta: &EtaFn, iv: &Interval, alpha: f64, q: &QuadSpec, pre: Precheck) -> Result<BoundReport> {
    let p = FracParams::classical(alpha)?;
    p.check_domain(iv.a, iv.b)?;
    precheck(pre, Hypothesis::DerivativeEtaConvex, g, eta, iv, None)?;
    let len = iv.width();
    let ops = classical::left(g, iv.b, iv.a, alpha, q)? + classical::right(g, iv.a, iv.b, alpha, q)?;
    let mean = gamma(alpha + 1.0) / (2.0 * len.powf(alpha)) * ops;
    let lhs = (0.5 * (finite_at(g, iv.a)? + finite_at(g, iv.b)?) - mean).abs();
    let (da, db) = endpoint_slopes(g, iv);
    // 1 − 2^{−α}
    let decay = -(-alpha * std::f64::consts::LN_2).exp_m1();
    let rhs = len / (2.0 * (alpha + 1.0)) * decay * (2.0 * db.abs() + eta.eval(da.abs(), db.abs()));
    Ok(BoundReport::inequality(TheoremId::Kka, lhs, rhs, ReportInputs::new(g, Some(eta), iv).with_params(&p)))
}

/// g((a+b)/2) ≤ N ≤ (g(a) + g(b))/2 with N the normalized fractional mean.
pub fn bound_amt(
    g: &RealFn,
    iv: &Interval,
    p: &FracParams,
    q: &QuadSpec,
    pre: Precheck,
) -> Result<(BoundReport, BoundReport)> {
    precheck(pre, Hypothesis::Convex, g, &EtaFn::difference(), iv, None)?;
    let mean = normalized_frac_mean(g, iv, p, q)?;
    let mid = finite_at(g, iv.midpoint())?;
    let trap = 0.5 * (finite_at(g, iv.a)? + finite_at(g, iv.b)?);
    let inputs = ReportInputs::new(g, None, iv).with_params(p);
    Ok((
        BoundReport::inequality(TheoremId::Amt, mid, mean, inputs.clone()),
        BoundReport::inequality(TheoremId::Amt, mean, trap, inputs),
    ))
}

/// N ≤ g(b) + η(g(a), g(b))/2 for positive η-convex g.
pub fn bound_mr1(g: &RealFn, eta: &EtaFn, iv: &Interval, p: &FracParams, q: &QuadSpec, pre: Precheck) -> Result<BoundReport> {
    precheck(pre, Hypothesis::PositiveEtaConvex, g, eta, iv, None)?;
    let lhs = normalized_frac_mean(g, iv, p, q)?;
    let (ga, gb) = (finite_at(g, iv.a)?, finite_at(g, iv.b)?);
    let rhs = gb + 0.5 * eta.eval(ga, gb);
    Ok(BoundReport::inequality(TheoremId::Mr1, lhs, rhs, ReportInputs::new(g, Some(eta), iv).with_params(p)))
}

fn moments(iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<ThetaMoments> {
    let m = ThetaMoments::compute(iv, p, q)?;
    m.cross_check(iv)?;
    Ok(m)
}

/// |lemma1_lhs| ≤ [ℜ|g'(b)| + (Ξ/(b−a))·η(|g'(a)|, |g'(b)|)] / (4(b^ρ − a^ρ)^s).
pub fn bound_mr2(g: &RealFn, eta: &EtaFn, iv: &Interval, p: &FracParams, q: &QuadSpec, pre: Precheck) -> Result<BoundReport> {
    precheck(pre, Hypothesis::DerivativeEtaConvex, g, eta, iv, None)?;
    let lhs = lemma1_lhs(g, iv, p, q)?.abs();
    let m = moments(iv, p, q)?;
    let (da, db) = endpoint_slopes(g, iv);
    let rhs = (m.r_sum * db.abs() + m.xi_sum / iv.width() * eta.eval(da.abs(), db.abs()))
        / (4.0 * power_gap(iv, p).powf(p.ratio()));
    Ok(BoundReport::inequality(TheoremId::Mr2, lhs, rhs, ReportInputs::new(g, Some(eta), iv).with_params(p)))
}

/// |lemma1_lhs| ≤ (b−a)/(4(b^ρ − a^ρ)^s)·(|g'(b)|^q + η(|g'(a)|^q, |g'(b)|^q)/2)^{1/q}·‖Θ‖_p.
pub fn bound_mr3(
    g: &RealFn,
    eta: &EtaFn,
    iv: &Interval,
    p: &FracParams,
    hp: &HolderParams,
    q: &QuadSpec,
    pre: Precheck,
) -> Result<BoundReport> {
    let hp = HolderParams::new(hp.p, hp.q)?;
    precheck(pre, Hypothesis::DerivativePowerEtaConvex, g, eta, iv, Some(hp.q))?;
    let lhs = lemma1_lhs(g, iv, p, q)?.abs();
    let (da, db) = endpoint_slopes(g, iv);
    let (ua, ub) = (da.abs().powf(hp.q), db.abs().powf(hp.q));
    let rhs = identity_prefactor(iv, p) * signed_root(ub + 0.5 * eta.eval(ua, ub), hp.q) * theta_norm(iv, p, hp.p, q)?;
    Ok(BoundReport::inequality(
        TheoremId::Mr3,
        lhs,
        rhs,
        ReportInputs::new(g, Some(eta), iv).with_params(p).with_holder(&hp),
    ))
}

/// The power-mean bound. The rhs follows the last line of the proof,
/// ℜ^{1/p}/(4(b^ρ − a^ρ)^s)·[ℜ|g'(b)|^q + (Ξ/(b−a))·η(|g'(a)|^q, |g'(b)|^q)]^{1/q};
/// `alt` carries the same expression without ℜ inside the bracket, as the
/// statement displays it.
pub fn bound_mr4(
    g: &RealFn,
    eta: &EtaFn,
    iv: &Interval,
    p: &FracParams,
    hp: &HolderParams,
    q: &QuadSpec,
    pre: Precheck,
) -> Result<BoundReport> {
    let hp = HolderParams::new(hp.p, hp.q)?;
    precheck(pre, Hypothesis::DerivativePowerEtaConvex, g, eta, iv, Some(hp.q))?;
    let lhs = lemma1_lhs(g, iv, p, q)?.abs();
    let m = moments(iv, p, q)?;
    let (da, db) = endpoint_slopes(g, iv);
    let (ua, ub) = (da.abs().powf(hp.q), db.abs().powf(hp.q));
    let lead = m.r_sum.powf(1.0 / hp.p) / (4.0 * power_gap(iv, p).powf(p.ratio()));
    let tail = m.xi_sum / iv.width() * eta.eval(ua, ub);
    let mut report = BoundReport::inequality(
        TheoremId::Mr4,
        lhs,
        lead * signed_root(m.r_sum * ub + tail, hp.q),
        ReportInputs::new(g, Some(eta), iv).with_params(p).with_holder(&hp),
    );
    report.alt = Some((lhs, lead * signed_root(ub + tail, hp.q)));
    Ok(report)
}

/// The trapezoid identity: lemma1_lhs against lemma1_rhs within
/// 1e−7·(1 + |lhs|).
pub fn lemma1_report(g: &RealFn, iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<BoundReport> {
    let lhs = lemma1_lhs(g, iv, p, q)?;
    let rhs = lemma1_rhs(g, iv, p, q)?;
    Ok(BoundReport::identity(
        TheoremId::Lemma1,
        lhs,
        rhs,
        LEMMA1_REL_TOL * (1.0 + lhs.abs()),
        ReportInputs::new(g, None, iv).with_params(p),
    ))
}

/// ∫|Θ| by direct quadrature against ℜ/(b − a).
pub fn lemma2_report(g: &RealFn, iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<BoundReport> {
    let m = ThetaMoments::compute(iv, p, q)?;
    let rhs = m.abs_from_terms(iv);
    Ok(BoundReport::identity(
        TheoremId::Lemma2,
        m.abs_direct,
        rhs,
        DECOMPOSITION_REL_TOL * rhs.abs(),
        ReportInputs::new(g, None, iv).with_params(p),
    ))
}

/// ∫t|Θ| by direct quadrature against Ξ/(b − a)².
pub fn eq_id_report(g: &RealFn, iv: &Interval, p: &FracParams, q: &QuadSpec) -> Result<BoundReport> {
    let m = ThetaMoments::compute(iv, p, q)?;
    let rhs = m.first_from_terms(iv);
    Ok(BoundReport::identity(
        TheoremId::EqId,
        m.first_direct,
        rhs,
        DECOMPOSITION_REL_TOL * rhs.abs(),
        ReportInputs::new(g, None, iv).with_params(p),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{constant, exponential, identity, negative_abs, polynomial, square};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn unit_params() -> FracParams {
        FracParams::classical(1.0).unwrap()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    const PRE: Precheck = Precheck::Sampled {
        grid_n: PRECHECK_GRID,
        seed: DEFAULT_SEED,
    };

    #[test]
    fn theorem_ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
        }
        assert!(matches!("mr5".parse::<TheoremId>(), Err(Error::Config(_))));
    }

    #[test]
    fn holder_validation() {
        assert!(HolderParams::new(2.0, 2.0).is_ok());
        let hp = HolderParams::from_q(3.0).unwrap();
        assert!(close(hp.p, 1.5, 1e-15));
        assert!(matches!(HolderParams::new(2.0, 3.0), Err(Error::Precondition(_))));
        assert!(HolderParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn theta_antisymmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = rng.gen_range(0.1..1.5);
            let i = iv(a, a + rng.gen_range(0.2..2.0));
            let p = FracParams::new(rng.gen_range(0.25..3.0), rng.gen_range(0.5..2.0), rng.gen_range(-0.5..2.0)).unwrap();
            let t: f64 = rng.gen_range(0.0..1.0);
            let sum = theta(t, &i, &p).unwrap() + theta(1.0 - t, &i, &p).unwrap();
            let scale = power_gap(&i, &p).powf(p.ratio());
            assert!(sum.abs() <= 1e-12 * (1.0 + scale), "{sum}");
            assert!(theta(0.5, &i, &p).unwrap().abs() <= 1e-15 * (1.0 + scale));
        }
    }

    #[test]
    fn sign_structure() {
        let i = iv(0.4, 1.9);
        for (alpha, k, r) in [(1.0, 1.0, 0.0), (0.5, 2.0, 1.5), (2.5, 0.5, -0.5), (3.0, 1.0, 2.0)] {
            let p = FracParams::new(alpha, k, r).unwrap();
            let d = power_gap(&i, &p).powf(p.ratio());
            assert!(wp(i.midpoint(), &i, &p).unwrap().abs() <= 1e-10 * (1.0 + d));
            assert!(close(wp(i.a, &i, &p).unwrap(), -2.0 * d, 1e-10 * (1.0 + d)));
            let h = 0.5 * i.width() / 11.0;
            for j in 1..=10 {
                assert!(wp(i.a + j as f64 * h, &i, &p).unwrap() <= 0.0);
                assert!(wp(i.midpoint() + j as f64 * h, &i, &p).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn classic_hh_examples() {
        let q = QuadSpec::default();
        let (l, r) = bound_classic_hh(&square(), &iv(0.0, 1.0), &q, PRE).unwrap();
        assert!(close(l.lhs, 0.25, 1e-15) && close(l.rhs, 1.0 / 3.0, 1e-12));
        assert!(close(r.rhs, 0.5, 1e-15) && l.holds && r.holds);
        let (l, r) = bound_classic_hh(&identity(), &iv(0.0, 1.0), &q, PRE).unwrap();
        assert!(l.margin.abs() < 1e-12 && r.margin.abs() < 1e-12);
        let (l, r) = bound_classic_hh(&constant(3.0), &iv(0.0, 1.0), &q, PRE).unwrap();
        assert!(l.margin.abs() < 1e-12 && r.margin.abs() < 1e-12);
        assert_eq!(BoundReport::binding(l.clone(), r.clone()).margin, l.margin.min(r.margin));
    }

    #[test]
    fn eta_hh_examples() {
        let q = QuadSpec::default();
        let (l, r) = bound_eta_hh(&constant(2.0), &EtaFn::difference(), &iv(0.0, 1.0), &q, PRE).unwrap();
        assert!(close(l.lhs, 2.0, 1e-15) && close(r.rhs, 2.0, 1e-15));
        assert!(l.holds && r.holds);
        let stated = l.alternate().unwrap();
        assert_eq!(stated.theorem, TheoremId::EtaHhStated);
        assert!(close(stated.lhs, 4.0, 1e-15) && !stated.holds);
        let (l, r) = bound_eta_hh(&negative_abs(), &EtaFn::negative_sum(), &iv(-1.0, 1.0), &q, PRE).unwrap();
        assert!(close(l.rhs, -0.5, 1e-12) && l.holds && r.holds);
        let (l, _) = bound_eta_hh(&square(), &EtaFn::difference(), &iv(0.0, 1.0), &q, PRE).unwrap();
        assert!(close(l.alt.unwrap().0, -0.5, 1e-15));
        assert!(close(l.lhs, -0.25, 1e-15));
    }

    #[test]
    fn ds_fails_on_the_square() {
        let r = bound_ds(&square(), &EtaFn::difference(), &iv(0.0, 1.0), &QuadSpec::default(), PRE).unwrap();
        assert!(close(r.lhs, 1.0 / 6.0, 1e-12));
        assert!(close(r.rhs, 0.125, 1e-15));
        assert!(close(r.alt.unwrap().1, 0.125, 1e-15));
        assert!(!r.holds);
        assert_eq!(r.alternate().unwrap().theorem, TheoremId::DsSigned);
        let r = bound_ds(&identity(), &EtaFn::difference(), &iv(0.0, 1.0), &QuadSpec::default(), PRE).unwrap();
        assert!(r.lhs < 1e-14);
    }

    #[test]
    fn kka_example() {
        let r = bound_kka(&square(), &EtaFn::difference(), &iv(0.0, 1.0), 1.0, &QuadSpec::default(), PRE).unwrap();
        assert!(close(r.lhs, 1.0 / 6.0, 1e-12));
        assert!(close(r.rhs, 0.25, 1e-15));
        let r = bound_kka(&constant(4.0), &EtaFn::difference(), &iv(0.5, 1.0), 0.5, &QuadSpec::default(), PRE).unwrap();
        assert!(r.lhs < 1e-10 && r.holds);
    }

    #[test]
    fn amt_examples() {
        let q = QuadSpec::default();
        let (l, r) = bound_amt(&square(), &iv(0.0, 1.0), &unit_params(), &q, PRE).unwrap();
        assert!(close(l.lhs, 0.25, 1e-15) && close(l.rhs, 1.0 / 3.0, 1e-10) && close(r.rhs, 0.5, 1e-15));
        let p = FracParams::new(0.5, 2.0, 1.0).unwrap();
        let (l, r) = bound_amt(&exponential(), &iv(0.0, 1.0), &p, &q, PRE).unwrap();
        assert!(l.margin >= 0.0 && r.margin >= 0.0, "{l:?} {r:?}");
        let (l, r) = bound_amt(&identity(), &iv(0.2, 1.0), &p, &q, PRE).unwrap();
        assert!(l.margin.abs() < 1e-9 && r.margin.abs() < 1e-9);
    }

    #[test]
    fn mr1_examples() {
        let q = QuadSpec::default();
        let p = unit_params();
        let r = bound_mr1(&constant(2.0), &EtaFn::difference(), &iv(0.5, 1.5), &p, &q, PRE).unwrap();
        assert!(close(r.lhs, 2.0, 1e-10) && close(r.rhs, 2.0, 1e-15));
        let r = bound_mr1(&square(), &EtaFn::difference(), &iv(1.0, 2.0), &p, &q, PRE).unwrap();
        assert!(close(r.margin, 2.5 - 7.0 / 3.0, 1e-10));
        let err = bound_mr1(&negative_abs(), &EtaFn::negative_sum(), &iv(-1.0, 1.0), &p, &q, PRE);
        assert!(matches!(err, Err(Error::Precondition(_))), "{err:?}");
    }

    #[test]
    fn mr1_reduces_to_trapezoid_at_difference() {
        let g = polynomial(vec![1.0, 0.5, 2.0]);
        let i = iv(0.3, 1.4);
        let r = bound_mr1(&g, &EtaFn::difference(), &i, &FracParams::new(1.7, 0.8, 0.5).unwrap(), &QuadSpec::default(), PRE)
            .unwrap();
        assert!(close(r.rhs, 0.5 * (g.eval(i.a) + g.eval(i.b)), 1e-12));
    }

    #[test]
    fn mr2_matches_kka_in_the_classical_case() {
        let q = QuadSpec::default();
        let i = iv(0.2, 1.3);
        let g = polynomial(vec![0.3, 1.0, 0.7]);
        let eta = EtaFn::difference_plus(0.4);
        for alpha in [0.5, 1.0, 2.0, 3.0] {
            let p = FracParams::classical(alpha).unwrap();
            let mr2 = bound_mr2(&g, &eta, &i, &p, &q, PRE).unwrap();
            let kka = bound_kka(&g, &eta, &i, alpha, &q, PRE).unwrap();
            assert!(close(mr2.rhs, kka.rhs, 1e-9 * kka.rhs.abs()), "α = {alpha}");
            assert!(close(mr2.lhs, kka.lhs, 1e-9));
        }
    }

    #[test]
    fn mr2_to_mr4_hold_on_simple_cases() {
        let q = QuadSpec::default();
        let p = unit_params();
        let hp = HolderParams::new(2.0, 2.0).unwrap();
        let eta = EtaFn::difference();
        for (g, i) in [(constant(1.5), iv(0.5, 1.0)), (identity(), iv(0.0, 1.0)), (square(), iv(0.0, 1.0))] {
            let r2 = bound_mr2(&g, &eta, &i, &p, &q, PRE).unwrap();
            let r3 = bound_mr3(&g, &eta, &i, &p, &hp, &q, PRE).unwrap();
            let r4 = bound_mr4(&g, &eta, &i, &p, &hp, &q, PRE).unwrap();
            assert!(r2.holds && r3.holds && r4.holds, "{}", g.label());
        }
        let r3 = bound_mr3(&square(), &eta, &iv(0.0, 1.0), &p, &hp, &q, PRE).unwrap();
        assert!(close(r3.lhs, 1.0 / 6.0, 1e-10) && r3.margin >= 0.0);
    }

    #[test]
    fn mr4_matches_its_proof_by_brute_force() {
        // (b−a)/(4D^s)·(∫|Θ|)^{1−1/q}·(∫|Θ|(|g'(b)|^q + tη))^{1/q}
        let q = QuadSpec::default();
        let p = FracParams::new(1.5, 0.7, 0.4).unwrap();
        let i = iv(0.3, 1.2);
        let g = polynomial(vec![0.0, 0.4, 1.0]);
        let eta = EtaFn::difference_plus(0.25);
        let hp = HolderParams::from_q(3.0).unwrap();
        let report = bound_mr4(&g, &eta, &i, &p, &hp, &q, PRE).unwrap();
        let (da, db) = (g.derivative(i.a, i.a, i.b), g.derivative(i.b, i.a, i.b));
        let (ua, ub) = (da.abs().powf(hp.q), db.abs().powf(hp.q));
        let e = eta.eval(ua, ub);
        let abs = integrate_split(|n: Node| theta(n.x, &i, &p).unwrap().abs(), 0.0, 1.0, &[0.5], &q, None)
            .unwrap()
            .value;
        let weighted = integrate_split(
            |n: Node| theta(n.x, &i, &p).unwrap().abs() * (ub + n.x * e),
            0.0,
            1.0,
            &[0.5],
            &q,
            None,
        )
        .unwrap()
        .value;
        let brute = identity_prefactor(&i, &p) * abs.powf(1.0 - 1.0 / hp.q) * weighted.powf(1.0 / hp.q);
        assert!(close(report.rhs, brute, 1e-9 * brute), "{} vs {brute}", report.rhs);
    }

    #[test]
    fn mr4_approaches_mr2_as_q_decreases() {
        let q = QuadSpec::default();
        let p = unit_params();
        let i = iv(0.0, 1.0);
        let eta = EtaFn::difference();
        let mr2 = bound_mr2(&square(), &eta, &i, &p, &q, PRE).unwrap().rhs;
        let mut last = f64::INFINITY;
        for qq in [1.5, 1.1, 1.01, 1.0001] {
            let hp = HolderParams::from_q(qq).unwrap();
            let rhs = bound_mr4(&square(), &eta, &i, &p, &hp, &q, PRE).unwrap().rhs;
            let gap = (rhs - mr2).abs();
            assert!(gap < last, "q = {qq}: {gap}");
            last = gap;
        }
        assert!(last <= 1e-4, "{last}");
    }

    #[test]
    fn hypothesis_failures_are_preconditions() {
        let q = QuadSpec::default();
        let p = unit_params();
        let concave = RealFn::new("concave", |x: f64| -x * x).with_derivative(|x| -2.0 * x);
        assert!(matches!(bound_classic_hh(&concave, &iv(0.0, 1.0), &q, PRE), Err(Error::Precondition(_))));
        assert!(matches!(bound_amt(&concave, &iv(0.0, 1.0), &p, &q, PRE), Err(Error::Precondition(_))));
        assert!(bound_amt(&concave, &iv(0.0, 1.0), &p, &q, Precheck::Assume).is_ok());
        let bad = HolderParams { p: 2.0, q: 3.0 };
        assert!(matches!(
            bound_mr3(&square(), &EtaFn::difference(), &iv(0.0, 1.0), &p, &bad, &q, PRE),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn identity_reports() {
        let q = QuadSpec::default();
        let p = FracParams::new(0.5, 1.0, 1.0).unwrap();
        let i = iv(0.1, 1.1);
        for r in [
            lemma1_report(&exponential(), &i, &p, &q).unwrap(),
            lemma2_report(&exponential(), &i, &p, &q).unwrap(),
            eq_id_report(&exponential(), &i, &p, &q).unwrap(),
        ] {
            assert!(r.holds, "{r:?}");
            assert!(r.margin <= 0.0);
        }
    }
}
