//! Sweep configuration.
//!
//! A config is a flat TOML document. Every key is optional except that the
//! resulting scenario set must not be empty:
//!
//! ```toml
//! functions = ["sq", "exp", "poly(1;0.5;2)"]
//! etas = ["diff", "diff_plus(0.25)"]
//! alphas = [0.5, 1.0]
//! ks = [1.0]
//! rs = [0.0, 1.0]
//! intervals = [[0.1, 1.1], [0.5, 2.0]]
//! holder_p = [2.0]            # Hölder p for mr3/mr4; q = p/(p−1)
//! random_scenarios = 200      # generated scenarios appended after the product
//! theorems = ["mr1", "mr2"]   # default: every theorem
//! seed = 42
//! abs_tol = 1e-11             # quadrature overrides
//! rel_tol = 1e-10
//! scheme = "double_exponential"
//! max_levels = 12
//! ```
//!
//! The explicit lists form a full Cartesian product. Function and η labels
//! are resolved against the registry in [`crate::functions`].

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::etaconvex::DEFAULT_SEED;
use crate::functions::{eta_fn, real_fn};
use crate::inequalities::TheoremId;
use crate::quadrature::{QuadSpec, Scheme};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub functions: Vec<String>,
    #[serde(default)]
    pub etas: Vec<String>,
    #[serde(default)]
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub ks: Vec<f64>,
    #[serde(default)]
    pub rs: Vec<f64>,
    #[serde(default)]
    pub intervals: Vec<[f64; 2]>,
    #[serde(default)]
    pub holder_p: Option<Vec<f64>>,
    #[serde(default)]
    pub random_scenarios: usize,
    #[serde(default)]
    pub theorems: Option<Vec<String>>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub scheme: Option<String>,
    pub max_levels: Option<u32>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            functions: Vec::new(),
            etas: Vec::new(),
            alphas: Vec::new(),
            ks: Vec::new(),
            rs: Vec::new(),
            intervals: Vec::new(),
            holder_p: None,
            random_scenarios: 0,
            theorems: None,
            seed: DEFAULT_SEED,
            abs_tol: None,
            rel_tol: None,
            scheme: None,
            max_levels: None,
        }
    }
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Selected theorems in report order, without duplicates.
    pub fn theorem_ids(&self) -> Result<Vec<TheoremId>> {
        let mut ids = match &self.theorems {
            None => TheoremId::ALL.to_vec(),
            Some(names) => names.iter().map(|n| n.parse()).collect::<Result<Vec<TheoremId>>>()?,
        };
        ids.sort();
        ids.dedup();
        if ids.is_empty() {
            return Err(Error::Config("no theorems selected".into()));
        }
        Ok(ids)
    }

    /// Hölder p values of the product; [2] when unset.
    pub fn holder_values(&self) -> Vec<f64> {
        self.holder_p.clone().unwrap_or_else(|| vec![2.0])
    }

    pub fn quad_spec(&self) -> Result<QuadSpec> {
        let mut spec = QuadSpec::default();
        if let Some(name) = &self.scheme {
            spec.scheme = name.parse::<Scheme>()?;
        }
        if let Some(v) = self.abs_tol {
            spec.abs_tol = v;
        }
        if let Some(v) = self.rel_tol {
            spec.rel_tol = v;
        }
        if let Some(v) = self.max_levels {
            spec.max_levels = v;
        }
        spec.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(spec)
    }

    /// Checks labels, theorem ids, Hölder exponents and quadrature settings.
    /// Parameter combinations are not checked here; invalid ones are skipped
    /// during the sweep.
    pub fn validate(&self) -> Result<()> {
        for label in &self.functions {
            real_fn(label)?;
        }
        for label in &self.etas {
            eta_fn(label)?;
        }
        self.theorem_ids()?;
        self.quad_spec()?;
        for &p in &self.holder_values() {
            if !(p > 1.0 && p.is_finite()) {
                return Err(Error::Config(format!("holder_p values must exceed 1, got {p}")));
            }
        }
        Ok(())
    }

    /// Size of the explicit product.
    pub fn product_len(&self) -> usize {
        self.functions.len()
            * self.etas.len()
            * self.alphas.len()
            * self.ks.len()
            * self.rs.len()
            * self.intervals.len()
            * self.holder_values().len()
    }
}
