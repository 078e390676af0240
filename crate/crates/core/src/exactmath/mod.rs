//! Exact scalars: arbitrary-precision rationals, univariate polynomials in
//! `q`, and the fraction field ℚ(q), all behind the [`Field`] contract that
//! the linear algebra is written against.
//!
//! No floating point is used anywhere. Every value is kept in a canonical
//! form, so structural equality is field equality.

mod field;
mod parse;
pub(crate) mod poly;
mod ratfunc;
mod rational;
mod scalar;

pub use field::{Field, FieldKind};
pub use parse::{parse_polynomial, parse_rational, parse_rational_function, ParseError, ParseErrorKind};
pub use poly::Polynomial;
pub use ratfunc::RationalFunction;
pub use rational::Rational;
pub use scalar::{is_in_integer_subring, scalar_arith, ArithOp, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldKind, right: FieldKind },
}
