use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{ArithError, ParseError, Rational, Scalar};

/// Which exact field a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    /// The rationals.
    #[serde(rename = "Q", alias = "q")]
    Q,
    /// Rational functions in one variable `q` over the rationals.
    #[serde(rename = "Q(q)", alias = "Qq")]
    Qq,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Q => f.write_str("Q"),
            FieldKind::Qq => f.write_str("Q(q)"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Q" | "q" => Ok(FieldKind::Q),
            "Q(q)" | "Qq" | "qq" => Ok(FieldKind::Qq),
            other => Err(format!("unknown field `{other}` (expected Q or Q(q))")),
        }
    }
}

/// An exact field of characteristic zero.
///
/// All arithmetic returns canonical values. The trait uses named methods
/// rather than operator bounds so generic code stays readable; the concrete
/// types additionally implement the `std::ops` traits.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + FromStr<Err = ParseError>
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    const KIND: FieldKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Result<Self, ArithError> {
        other
            .inv()
            .map(|i| self.mul(&i))
            .ok_or(ArithError::DivisionByZero)
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// True iff the value lies in the image of ℤ.
    fn is_integer(&self) -> bool;

    /// The value as a rational constant, if it is one.
    fn to_rational(&self) -> Option<Rational>;

    fn from_rational(r: &Rational) -> Self;

    fn into_scalar(self) -> Scalar;

    fn try_from_scalar(s: Scalar) -> Result<Self, ArithError>;

    /// `self / other` when the caller knows the quotient is "exact", as in
    /// fraction-free elimination. Fields with a polynomial subring use it to
    /// skip normalization; the default is plain division.
    fn exact_quotient(&self, other: &Self) -> Self {
        self.div(other).expect("exact_quotient by zero")
    }

    /// The rational value at `q = at`, `None` at a pole. Constants ignore
    /// `at`.
    fn specialize(&self, at: &Rational) -> Option<Rational>;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}
