//! Scalar differential operators with rational-function coefficients.

mod op;
mod quasi;
mod xpoly;
mod xrat;

pub(crate) use op::binomial;
pub use op::{commutator_cached, DerivCache, DiffOp};
pub use quasi::{eigen_ratio, is_eigenfunction, QuasiRat};
pub use xpoly::XPoly;
pub use xrat::{Factor, XRat};
