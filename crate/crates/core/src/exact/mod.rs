//! Exact scalar arithmetic: rationals, multivariate parameter polynomials and
//! their fraction field, plus fraction-free linear algebra.

mod linalg;
mod mpoly;
mod param;
mod rat;
mod scalar;

pub use linalg::{nullspace, Nullspace};
pub use mpoly::{MPoly, Monomial};
pub use param::Param;
pub use rat::Rat;
pub use scalar::{normalize_fraction, ParamScalar};
