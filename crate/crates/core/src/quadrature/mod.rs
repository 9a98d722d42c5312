//! One-dimensional quadrature for integrands with integrable power-law
//! singularities at either endpoint.
//!
//! Integrands come in two flavours. Plain closures `Fn(f64) -> f64` go
//! through [`integrate`]; they never see an endpoint, but abscissae that
//! round onto an endpoint are dropped. Integrands that need the exact
//! distance to an endpoint (any kernel of the form `(hi − t)^p` with p close
//! to −1) implement `Fn(Node) -> f64` and go through [`integrate_nodes`],
//! which hands over the distances computed without cancellation.
//!
//! Three schemes are available:
//!
//! - [`Scheme::DoubleExponential`]: tanh-sinh with level halving. Handles
//!   power singularities at both ends without knowing the exponent.
//! - [`Scheme::AdaptiveBisection`]: Gauss–Kronrod (7/15) bisection on
//!   dyadic pieces graded toward each endpoint, with Wynn's epsilon
//!   algorithm extrapolating the graded partial sums.
//! - [`Scheme::PowerSubstitution`]: when the singular endpoint and its
//!   exponent p are declared, substitutes u = d^{p+1} (d the distance to
//!   that endpoint), which removes the singularity exactly, then runs the
//!   bisection engine.

mod adaptive;
mod de;

use crate::error::{Error, Result};

/// Quadrature scheme selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    DoubleExponential,
    AdaptiveBisection,
    PowerSubstitution,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double_exponential" => Ok(Scheme::DoubleExponential),
            "adaptive_bisection" => Ok(Scheme::AdaptiveBisection),
            "power_substitution" => Ok(Scheme::PowerSubstitution),
            other => Err(Error::Config(format!("unknown quadrature scheme `{other}`"))),
        }
    }
}

pub const DEFAULT_ABS_TOL: f64 = 1e-11;
pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_LEVELS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub scheme: Scheme,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_levels: u32,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::DoubleExponential,
            abs_tol: DEFAULT_ABS_TOL,
            rel_tol: DEFAULT_REL_TOL,
            max_levels: DEFAULT_MAX_LEVELS,
        }
    }
}

impl QuadSpec {
    pub fn new(scheme: Scheme, abs_tol: f64, rel_tol: f64, max_levels: u32) -> Result<Self> {
        let spec = Self {
            scheme,
            abs_tol,
            rel_tol,
            max_levels,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::Domain("tolerances must be nonnegative".into()));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::Domain("abs_tol and rel_tol cannot both be zero".into()));
        }
        if !(2..=20).contains(&self.max_levels) {
            return Err(Error::Domain(format!(
                "max_levels = {} outside [2, 20]",
                self.max_levels
            )));
        }
        Ok(())
    }

    /// Acceptable absolute error for an integral of the given magnitude.
    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    /// The value, or a non-convergence error carrying `context`.
    pub fn require(self, context: &str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                context: context.to_string(),
                value: self.value,
                error_estimate: self.error_estimate,
            })
        }
    }
}

/// An abscissa together with its exact distances to both endpoints.
///
/// `x` is rounded to the nearest double and may coincide with an endpoint
/// when the distance is below its resolution; `from_lo` and `from_hi` are
/// always strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: f64,
    pub from_lo: f64,
    pub from_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lo,
    Hi,
}

/// Declared endpoint behaviour f ~ d^exponent, d the distance to `endpoint`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub endpoint: Endpoint,
    pub exponent: f64,
}

impl Singularity {
    pub fn at_lo(exponent: f64) -> Self {
        Self {
            endpoint: Endpoint::Lo,
            exponent,
        }
    }

    pub fn at_hi(exponent: f64) -> Self {
        Self {
            endpoint: Endpoint::Hi,
            exponent,
        }
    }
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain(format!("non-finite integration limits [{lo}, {hi}]")));
    }
    if lo >= hi {
        return Err(Error::Domain(format!("integration limits need lo < hi, got [{lo}, {hi}]")));
    }
    Ok(())
}

pub(crate) fn eval_checked<F: Fn(Node) -> f64>(f: &F, node: Node) -> Result<f64> {
    let v = f(node);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation {
            context: "integrand".into(),
            at: node.x,
            value: v,
        })
    }
}

/// ∫_lo^hi f(t) dt for a plain integrand.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadSpec) -> Result<QuadResult> {
    integrate_nodes(
        |n: Node| {
            if n.x <= lo || n.x >= hi {
                0.0
            } else {
                f(n.x)
            }
        },
        lo,
        hi,
        spec,
        None,
    )
}

/// ∫_lo^hi f dt for a distance-aware integrand.
pub fn integrate_nodes<F: Fn(Node) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadSpec,
    singularity: Option<Singularity>,
) -> Result<QuadResult> {
    check_interval(lo, hi)?;
    spec.validate()?;
    match spec.scheme {
        Scheme::DoubleExponential => de::tanh_sinh(&f, lo, hi, spec),
        Scheme::AdaptiveBisection => adaptive::graded(&f, lo, hi, spec),
        Scheme::PowerSubstitution => match singularity {
            Some(s) if s.exponent < 0.0 => power_substitution(&f, lo, hi, spec, s),
            _ => adaptive::graded(&f, lo, hi, spec),
        },
    }
}

/// Like [`integrate_nodes`] but splits at interior `breaks` (kinks of the
/// integrand). Node distances stay relative to the outer `[lo, hi]`, and the
/// singularity hint is forwarded only to the piece touching its endpoint.
pub fn integrate_split<F: Fn(Node) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    spec: &QuadSpec,
    singularity: Option<Singularity>,
) -> Result<QuadResult> {
    check_interval(lo, hi)?;
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&c| c > lo && c < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    if cuts.is_empty() {
        return integrate_nodes(f, lo, hi, spec, singularity);
    }

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);
    let width = hi - lo;
    let pieces = edges.len() - 1;

    let mut total = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    };
    let mut magnitude = 0.0;
    for i in 0..pieces {
        let (p0, p1) = (edges[i], edges[i + 1]);
        let below = p0 - lo;
        let above = hi - p1;
        let hint = singularity.filter(|s| match s.endpoint {
            Endpoint::Lo => i == 0,
            Endpoint::Hi => i == pieces - 1,
        });
        let mut piece_spec = *spec;
        piece_spec.abs_tol = spec.abs_tol * (p1 - p0) / width;
        let r = integrate_nodes(
            |n: Node| {
                f(Node {
                    x: n.x,
                    from_lo: below + n.from_lo,
                    from_hi: above + n.from_hi,
                })
            },
            p0,
            p1,
            &piece_spec,
            hint,
        )?;
        total.value += r.value;
        magnitude += r.value.abs();
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
        total.converged &= r.converged;
    }
    // judged against Σ|piece| so that cancellation between pieces does not
    // demand more than each piece could deliver
    if total.error_estimate > spec.tolerance_for(magnitude) {
        total.converged = false;
    }
    Ok(total)
}

fn power_substitution<F: Fn(Node) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    spec: &QuadSpec,
    s: Singularity,
) -> Result<QuadResult> {
    let width = hi - lo;
    let e = s.exponent + 1.0;
    if e <= 0.0 {
        return Err(Error::Domain(format!(
            "endpoint exponent {} is not integrable",
            s.exponent
        )));
    }
    let inv_e = 1.0 / e;
    let u_max = width.powf(e);
    let transformed = |n: Node| {
        // distance to the singular endpoint and to the other one
        let d = n.from_lo.powf(inv_e);
        let other = -width * ((-n.from_hi / u_max).ln_1p() * inv_e).exp_m1();
        let node = match s.endpoint {
            Endpoint::Lo => Node {
                x: lo + d,
                from_lo: d,
                from_hi: other,
            },
            Endpoint::Hi => Node {
                x: hi - d,
                from_lo: other,
                from_hi: d,
            },
        };
        f(node) * d.powf(-s.exponent) * inv_e
    };
    adaptive::graded(&transformed, 0.0, u_max, spec)
}
