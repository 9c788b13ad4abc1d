//! Exact-arithmetic certification of coefficient positivity for the
//! Gillis-Reznick-Zeilberger rational function
//! `1 / (1 - (t_1 + .. + t_r) + r! t_1 .. t_r)`.
//!
//! * [`exact`]: rationals, factorials, binomials, multinomials and the constants `c`, `root_bound`.
//! * [`unipoly`]: univariate polynomials, Sturm chains, root isolation.
//! * [`series`]: truncated series and the inversion oracles.
//! * [`grz`]: block polynomials, `h(s)`, and the individual checks.
//! * [`certify`]: suites over parameter grids producing [`certify::RunManifest`]s.

pub mod certify;
pub mod error;
pub mod exact;
pub mod grz;
pub mod partition;
pub mod series;
pub mod unipoly;

pub use error::{GrzError, Result};
pub use exact::Rational;
