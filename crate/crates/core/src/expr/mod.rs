//! Expression grammar: parsing from text and rendering back to it.

mod parse;
mod print;

pub use parse::{
    parse_op, parse_operator_or_potential, parse_poly, parse_quasi, parse_scalar, parse_value,
    parse_xrat, ParseContext, Value,
};
