use std::fmt;

use super::{parse, ArithError, Field, FieldKind, ParseError, Rational, RationalFunction};

/// A value tagged with the field it belongs to. Used at the document
/// boundary; the algorithms themselves are generic over [`Field`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Q(Rational),
    Qq(RationalFunction),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Q(_) => FieldKind::Q,
            Scalar::Qq(_) => FieldKind::Qq,
        }
    }

    /// Parses `src` as an element of `kind`.
    pub fn parse(kind: FieldKind, src: &str) -> Result<Scalar, ParseError> {
        Ok(match kind {
            FieldKind::Q => Scalar::Q(parse::parse_rational(src)?),
            FieldKind::Qq => Scalar::Qq(parse::parse_rational_function(src)?),
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => r.fmt(f),
            Scalar::Qq(r) => r.fmt(f),
        }
    }
}

fn apply<F: Field>(a: &F, b: &F, op: ArithOp) -> Result<F, ArithError> {
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

/// Exact arithmetic on two tagged scalars of the same field.
pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, ArithError> {
    match (a, b) {
        (Scalar::Q(x), Scalar::Q(y)) => apply(x, y, op).map(Scalar::Q),
        (Scalar::Qq(x), Scalar::Qq(y)) => apply(x, y, op).map(Scalar::Qq),
        _ => Err(ArithError::FieldMismatch {
            left: a.kind(),
            right: b.kind(),
        }),
    }
}

/// True iff `a` is an integer, or a constant rational function with integer
/// value.
pub fn is_in_integer_subring(a: &Scalar) -> bool {
    match a {
        Scalar::Q(r) => r.is_integer(),
        Scalar::Qq(r) => r.is_integer(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        Scalar::parse(FieldKind::Q, s).unwrap()
    }

    fn qq(s: &str) -> Scalar {
        Scalar::parse(FieldKind::Qq, s).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(scalar_arith(&q("1/2"), &q("1/3"), ArithOp::Add).unwrap(), q("5/6"));
        let c = scalar_arith(&qq("q^2-1"), &qq("q-1"), ArithOp::Div).unwrap();
        assert_eq!(c.to_string(), "q + 1");
        let one = scalar_arith(&qq("q/(q+1)"), &qq("(q+1)/q"), ArithOp::Mul).unwrap();
        assert_eq!(one, qq("1"));
    }

    #[test]
    fn errors() {
        assert_eq!(
            scalar_arith(&q("1"), &q("0"), ArithOp::Div),
            Err(ArithError::DivisionByZero)
        );
        assert!(matches!(
            scalar_arith(&q("1"), &qq("q"), ArithOp::Add),
            Err(ArithError::FieldMismatch { .. })
        ));
    }

    #[test]
    fn integer_subring() {
        assert!(is_in_integer_subring(&q("7")));
        assert!(!is_in_integer_subring(&q("3/2")));
        assert!(!is_in_integer_subring(&qq("q^4 + 4*q^3 - q^2 - 4*q")));
        assert!(is_in_integer_subring(&qq("(2*q+2)/(q+1)")));
    }
}
