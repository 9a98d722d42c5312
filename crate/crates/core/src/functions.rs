//! Real functions, η functions and the registry of named instances.
//!
//! Registry labels are either bare names (`sq`, `exp`, `diff`, …) or a name
//! with `;`-separated numeric arguments in parentheses (`poly(1;0.5;2)`,
//! `diff_plus(0.25)`). Labels never contain commas so they can sit in a CSV
//! field unquoted.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type BinaryFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Relative step of the finite-difference derivative fallback.
pub const FD_STEP: f64 = 1e-6;

/// An evaluable real function with an optional analytic derivative.
///
/// `breakpoints` lists points where the function or its derivative has a
/// kink; integrals over intervals containing them are split there.
#[derive(Clone)]
pub struct RealFn {
    eval: ScalarFn,
    deriv: Option<ScalarFn>,
    label: String,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for RealFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFn")
            .field("label", &self.label)
            .field("analytic_deriv", &self.deriv.is_some())
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl RealFn {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            deriv: None,
            label: label.into(),
            breakpoints: Vec::new(),
        }
    }

    pub fn with_derivative(mut self, deriv: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(deriv));
        self
    }

    pub fn with_breakpoints(mut self, points: Vec<f64>) -> Self {
        self.breakpoints = points;
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn has_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    /// g'(x) on [a, b]: the analytic derivative when present, otherwise a
    /// central difference with step 1e−6·(b − a), one-sided near the ends.
    pub fn derivative(&self, x: f64, a: f64, b: f64) -> f64 {
        if let Some(d) = &self.deriv {
            return d(x);
        }
        let h = FD_STEP * (b - a);
        if x - h < a {
            (self.eval(x + h) - self.eval(x)) / h
        } else if x + h > b {
            (self.eval(x) - self.eval(x - h)) / h
        } else {
            (self.eval(x + h) - self.eval(x - h)) / (2.0 * h)
        }
    }

    /// x ↦ |g'(x)|^q on [a, b], the function whose η-convexity several
    /// bounds assume. Kinks of g carry over.
    pub fn abs_derivative_pow(&self, q: f64, a: f64, b: f64) -> RealFn {
        let g = self.clone();
        let label = if q == 1.0 {
            format!("|{}'|", self.label)
        } else {
            format!("|{}'|^{}", self.label, q)
        };
        RealFn::new(label, move |x| g.derivative(x, a, b).abs().powf(q))
            .with_breakpoints(self.breakpoints.clone())
    }
}

/// A bivariate function η(u, v).
#[derive(Clone)]
pub struct EtaFn {
    eval: BinaryFn,
    label: String,
}

impl fmt::Debug for EtaFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EtaFn").field("label", &self.label).finish()
    }
}

impl EtaFn {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            label: label.into(),
        }
    }

    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        (self.eval)(u, v)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// η(u, v) = u − v, under which η-convexity is ordinary convexity.
    pub fn difference() -> Self {
        EtaFn::new("diff", |u, v| u - v)
    }

    pub fn difference_plus(c: f64) -> Self {
        EtaFn::new(format!("diff_plus({c})"), move |u, v| u - v + c)
    }

    pub fn negative_sum() -> Self {
        EtaFn::new("neg_sum", |u, v| -u - v)
    }

    pub fn constant(c: f64) -> Self {
        EtaFn::new(format!("const({c})"), move |_, _| c)
    }
}

/// n Chebyshev–Lobatto points on [a, b], ascending, endpoints included.
pub fn chebyshev_lobatto(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (0..n)
        .map(|j| {
            if j == 0 {
                a
            } else if j == n - 1 {
                b
            } else {
                mid - half * (std::f64::consts::PI * j as f64 / (n - 1) as f64).cos()
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// built-in instances

pub fn square() -> RealFn {
    RealFn::new("sq", |x| x * x).with_derivative(|x| 2.0 * x)
}

pub fn cube_plus_linear() -> RealFn {
    RealFn::new("cube_plus", |x| x * x * x + x).with_derivative(|x| 3.0 * x * x + 1.0)
}

pub fn exponential() -> RealFn {
    RealFn::new("exp", f64::exp).with_derivative(f64::exp)
}

/// x⁴ − 2x² + 3
pub fn quartic() -> RealFn {
    RealFn::new("quartic", |x| {
        let x2 = x * x;
        x2 * x2 - 2.0 * x2 + 3.0
    })
    .with_derivative(|x| 4.0 * x * x * x - 4.0 * x)
}

pub fn identity() -> RealFn {
    RealFn::new("identity", |x| x).with_derivative(|_| 1.0)
}

pub fn constant(c: f64) -> RealFn {
    RealFn::new(format!("const({c})"), move |_| c).with_derivative(|_| 0.0)
}

/// The piecewise function −x (x ≥ 0), x (x < 0), i.e. −|x|, which is
/// η-convex for η(u, v) = −u − v without being convex.
pub fn negative_abs() -> RealFn {
    RealFn::new("example", |x: f64| if x >= 0.0 { -x } else { x })
        .with_derivative(|x| if x >= 0.0 { -1.0 } else { 1.0 })
        .with_breakpoints(vec![0.0])
}

/// −|x − c|
pub fn shifted_vee(c: f64) -> RealFn {
    RealFn::new(format!("vabs({c})"), move |x: f64| -(x - c).abs())
        .with_derivative(move |x| if x >= c { -1.0 } else { 1.0 })
        .with_breakpoints(vec![c])
}

/// c₀ + c₁x + … + cₙxⁿ
pub fn polynomial(coeffs: Vec<f64>) -> RealFn {
    let label = format!(
        "poly({})",
        coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
    );
    let dcoeffs: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i as f64 * c)
        .collect();
    let horner = |cs: &[f64], x: f64| cs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    RealFn::new(label, move |x| horner(&coeffs, x)).with_derivative(move |x| horner(&dcoeffs, x))
}

fn split_label(label: &str) -> Result<(&str, Vec<f64>)> {
    let label = label.trim();
    let Some(open) = label.find('(') else {
        return Ok((label, Vec::new()));
    };
    if !label.ends_with(')') {
        return Err(Error::Config(format!("malformed registry label `{label}`")));
    }
    let name = &label[..open];
    let inner = &label[open + 1..label.len() - 1];
    let args = inner
        .split(';')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("bad numeric argument `{s}` in `{label}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((name, args))
}

fn arity(label: &str, args: &[f64], n: usize) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "`{label}` takes {n} argument(s), got {}",
            args.len()
        )))
    }
}

/// Resolve a function label from the registry.
pub fn real_fn(label: &str) -> Result<RealFn> {
    let (name, args) = split_label(label)?;
    let f = match name {
        "sq" => (arity(label, &args, 0)?, square()).1,
        "cube_plus" => (arity(label, &args, 0)?, cube_plus_linear()).1,
        "exp" => (arity(label, &args, 0)?, exponential()).1,
        "quartic" => (arity(label, &args, 0)?, quartic()).1,
        "identity" => (arity(label, &args, 0)?, identity()).1,
        "example" => (arity(label, &args, 0)?, negative_abs()).1,
        "const" => (arity(label, &args, 1)?, constant(args[0])).1,
        "vabs" => (arity(label, &args, 1)?, shifted_vee(args[0])).1,
        "poly" if !args.is_empty() => polynomial(args),
        _ => return Err(Error::Config(format!("unknown function label `{label}`"))),
    };
    Ok(f)
}

/// Resolve an η label from the registry.
pub fn eta_fn(label: &str) -> Result<EtaFn> {
    let (name, args) = split_label(label)?;
    let eta = match name {
        "diff" => (arity(label, &args, 0)?, EtaFn::difference()).1,
        "neg_sum" => (arity(label, &args, 0)?, EtaFn::negative_sum()).1,
        "zero" => (arity(label, &args, 0)?, EtaFn::new("zero", |_, _| 0.0)).1,
        "diff_plus" => (arity(label, &args, 1)?, EtaFn::difference_plus(args[0])).1,
        "const" => (arity(label, &args, 1)?, EtaFn::constant(args[0])).1,
        _ => return Err(Error::Config(format!("unknown eta label `{label}`"))),
    };
    Ok(eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_round_trip() {
        for label in ["sq", "exp", "poly(1;0.5;2)", "vabs(0.25)", "const(3)", "example"] {
            assert_eq!(real_fn(label).unwrap().label(), label);
        }
        for label in ["diff", "diff_plus(0.125)", "neg_sum", "zero", "const(3)"] {
            assert_eq!(eta_fn(label).unwrap().label(), label);
        }
    }

    #[test]
    fn unknown_labels_name_themselves() {
        match real_fn("sinh") {
            Err(Error::Config(msg)) => assert!(msg.contains("sinh")),
            other => panic!("{other:?}"),
        }
        assert!(eta_fn("diff_plus").is_err());
        assert!(real_fn("poly(1;x)").is_err());
        assert!(real_fn("vabs(1").is_err());
    }

    #[test]
    fn polynomial_and_derivative() {
        let p = real_fn("poly(1;-2;0;1)").unwrap();
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 8.0);
        assert_eq!(p.derivative(2.0, 0.0, 3.0), -2.0 + 12.0);
    }

    #[test]
    fn finite_difference_fallback() {
        let g = RealFn::new("cube", |x| x * x * x);
        for x in [0.0, 0.4, 1.0] {
            let d = g.derivative(x, 0.0, 1.0);
            assert!((d - 3.0 * x * x).abs() < 1e-5, "x={x}: {d}");
        }
    }

    #[test]
    fn example_values() {
        let g = negative_abs();
        assert_eq!(g.eval(0.5), -0.5);
        assert_eq!(g.eval(-0.5), -0.5);
        assert_eq!(EtaFn::negative_sum().eval(-1.0, -0.5), 1.5);
    }
}
