//! Exact arithmetic in Q and in totally real Galois number fields.

mod elem;
mod field;
pub mod json;
pub mod poly;
pub mod rational;

pub use elem::{field_arith, same_field, ArithOp, FieldElem};
pub use field::FieldDescriptor;
pub use poly::Poly;
pub use rational::{format_rational, parse_rational, rat, rat_frac, Rational};
