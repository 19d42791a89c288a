//! Numerical verification of Bernstein-type inequalities for rational
//! functions with prescribed poles.
//!
//! A rational function `r = p / w` has numerator degree at most `n` and
//! denominator `w(z) = prod (z - a_j)` with every pole outside the closed
//! unit disk. The crate evaluates both sides of the classical inequalities
//! and their log-derivative refinements on the unit circle, and reports the
//! slack of each.
//!
//! ```
//! use num_complex::Complex64;
//! use ratbound::{generators::extremal_instance, norms::{rational_norm, NormConfig}};
//!
//! let r = extremal_instance(1, 2.0, 3.0).unwrap();
//! let norm = rational_norm(&r, &NormConfig::default()).unwrap();
//! assert!((norm.value - 1.5).abs() < 1e-12);
//! assert_eq!(r.eval(Complex64::new(1.0, 0.0)).unwrap(), Complex64::new(-1.5, 0.0));
//! ```

pub mod engine;
pub mod error;
pub mod generators;
pub mod norms;
pub mod poly;
pub mod rational;
pub mod suites;

pub use engine::{BetaParam, CheckId, CheckReport, KRadius, Statement, SuiteReport, Tolerances};
pub use error::{Error, Result};
pub use norms::{NormConfig, NormEstimate};
pub use poly::Polynomial;
pub use rational::{CirclePoint, PoleSet, RationalFn};
