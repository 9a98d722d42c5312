//! Fractional integral operators of (k,r)-Riemann–Liouville type and a
//! numerical harness for Hermite–Hadamard type inequalities of η-convex
//! functions.
//!
//! The crate is organised bottom-up:
//!
//! - [`specialfn`]: the k-gamma function Γ_k.
//! - [`quadrature`]: one-dimensional integration robust to integrable
//!   power-law endpoint singularities.
//! - [`functions`]: evaluable real functions, η functions and the built-in
//!   registry of named test functions.
//! - [`operators`]: the left/right fractional operators, reflection,
//!   symmetrisation and the normalised fractional mean.
//! - [`etaconvex`]: sampling-based η-convexity certification.
//! - [`inequalities`]: both sides of every inequality and identity, with
//!   margins.
//! - [`report`]: sweep configuration, scenario evaluation and CSV output.

pub mod error;
pub mod etaconvex;
pub mod functions;
pub mod inequalities;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod specialfn;

pub use error::{Error, Result};
pub use functions::{EtaFn, RealFn};
pub use operators::{FracParams, Interval};
pub use quadrature::{QuadResult, QuadSpec, Scheme};
