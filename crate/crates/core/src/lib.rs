pub mod adcond;
pub mod ansatz;
pub mod darboux;
pub mod diffop;
pub mod error;
pub mod exact;
pub mod expr;
pub mod families;
pub mod limits;
pub mod matrixop;

pub use error::Error;
