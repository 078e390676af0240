use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse, ArithError, Field, FieldKind, ParseError, Polynomial, Rational, Scalar};

/// An element of ℚ(q): `numerator / denominator` with a monic denominator
/// coprime to the numerator. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_polynomial(Polynomial::constant(c))
    }

    pub fn q() -> Self {
        Self::from_polynomial(Polynomial::q())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// The polynomial this value equals, if its denominator is one.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_constant().then_some(&self.num)
    }

    pub fn into_polynomial(self) -> Result<Polynomial, Self> {
        if self.den.is_constant() {
            Ok(self.num)
        } else {
            Err(self)
        }
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::from_polynomial(Polynomial::zero());
        }
        if den.is_constant() {
            let inv = den.leading_coeff().inv().expect("nonzero denominator");
            return Self::from_polynomial(num.scale(&inv));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Self::scaled_monic(num, den)
    }

    /// Makes the denominator monic; assumes `num` and `den` are coprime.
    fn scaled_monic(num: Polynomial, den: Polynomial) -> Self {
        if den.is_monic() {
            return RationalFunction { num, den };
        }
        let inv = den.leading_coeff().inv().expect("nonzero denominator");
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, ArithError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(&self.num.eval(x) / &d)
    }
}

impl fmt::Display for RationalFunction {
    /// Bare polynomial when the denominator is one, else `(num) / (den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl FromStr for RationalFunction {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_rational_function(s)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_polynomial(p)
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den.is_constant() && rhs.den.is_constant() {
            return RationalFunction::from_polynomial(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.num.is_zero() || rhs.num.is_zero() {
            return RationalFunction::from_polynomial(Polynomial::zero());
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return RationalFunction::from_polynomial(&self.num * &rhs.num);
        }
        // Cross-cancel so the product is already reduced.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let a = self.num.exact_div(&g1);
        let d = rhs.den.exact_div(&g1);
        let c = rhs.num.exact_div(&g2);
        let b = self.den.exact_div(&g2);
        RationalFunction::scaled_monic(&a * &c, &b * &d)
    }
}

impl Div<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Field for RationalFunction {
    const KIND: FieldKind = FieldKind::Qq;

    fn zero() -> Self {
        Self::from_polynomial(Polynomial::zero())
    }

    fn one() -> Self {
        Self::from_polynomial(Polynomial::one())
    }

    fn from_i64(n: i64) -> Self {
        Self::constant(Rational::from(n))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::scaled_monic(self.den.clone(), self.num.clone()))
    }

    fn is_integer(&self) -> bool {
        self.to_rational().is_some_and(|r| r.is_integral())
    }

    fn to_rational(&self) -> Option<Rational> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }

    fn exact_quotient(&self, other: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.as_polynomial(), other.as_polynomial()) {
            if let Some(quot) = a.divide_exact(b) {
                return Self::from_polynomial(quot);
            }
        }
        Field::div(self, other).expect("exact_quotient by zero")
    }

    fn specialize(&self, at: &Rational) -> Option<Rational> {
        self.eval(at).ok()
    }

    fn into_scalar(self) -> Scalar {
        Scalar::Qq(self)
    }

    fn try_from_scalar(s: Scalar) -> Result<Self, ArithError> {
        match s {
            Scalar::Qq(r) => Ok(r),
            Scalar::Q(_) => Err(ArithError::FieldMismatch {
                left: FieldKind::Qq,
                right: FieldKind::Q,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation_to_polynomial() {
        let a = rf("q^2 - 1");
        let b = rf("q - 1");
        let c = &a / &b;
        assert_eq!(c.numerator(), &"q + 1".parse::<Polynomial>().unwrap());
        assert_eq!(c.denominator(), &Polynomial::one());
    }

    #[test]
    fn inverse_pair_is_one() {
        let a = rf("q / (q + 1)");
        let b = rf("(q + 1) / q");
        assert_eq!(&a * &b, RationalFunction::one());
    }

    #[test]
    fn denominator_is_monic() {
        let a = rf("1 / (2*q + 4)");
        assert!(a.denominator().is_monic());
        assert_eq!(a.to_string(), "(1/2) / (q + 2)");
        assert_eq!(rf(&a.to_string()), a);
    }

    #[test]
    fn zero_is_zero_over_one() {
        let z = &rf("q/(q+1)") - &rf("q/(q+1)");
        assert!(z.is_zero());
        assert_eq!(z.denominator(), &Polynomial::one());
    }
}
