use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::gcd_int;
use super::{parse, Field, ParseError, Rational};

/// A univariate polynomial in `q` with rational coefficients, stored lowest
/// degree first with no trailing zeros. The zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Polynomial::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Polynomial::from_coeffs(coeffs)
    }

    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Polynomial::from_coeffs(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Scales so the leading coefficient is one. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.leading_coeff().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division over ℚ: returns `(quotient, remainder)`.
    ///
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let Some(nd) = self.degree() else {
            return (Polynomial::zero(), Polynomial::zero());
        };
        if nd < dd {
            return (Polynomial::zero(), self.clone());
        }
        let lead_inv = divisor.leading_coeff().inv().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + j] = &rem[k + j] - &(&c * d);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Polynomial::from_coeffs(quot), Polynomial::from_coeffs(rem))
    }

    /// Division known to be exact. Panics (debug) if a remainder is left.
    pub fn exact_div(&self, divisor: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// `self / divisor` if the division leaves no remainder.
    pub fn divide_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() {
            return None;
        }
        if self.has_integer_coeffs() && divisor.has_integer_coeffs() {
            let ints = |p: &Polynomial| p.coeffs.iter().map(|c| c.numer().clone()).collect::<Vec<_>>();
            if let Some(quot) = exact_quotient_int(&ints(self), &ints(divisor)) {
                return Some(Polynomial::from_coeffs(quot.into_iter().map(Rational::from).collect()));
            }
        }
        let (quot, rem) = self.div_rem(divisor);
        rem.is_zero().then_some(quot)
    }

    /// Monic greatest common divisor over ℚ. `gcd(0, 0) = 0`.
    ///
    /// Works on the primitive integer parts: first the heuristic gcd, then
    /// the primitive remainder sequence over ℤ[q] if that gives up.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Polynomial::one();
        }
        let (a, _) = primitive_integer_part(self);
        let (b, _) = primitive_integer_part(other);
        let g = heuristic_gcd(&a, &b).unwrap_or_else(|| prs_gcd(a, b));
        Polynomial::from_coeffs(g.into_iter().map(Rational::from).collect()).monic()
    }

    /// Formal derivative in `q`.
    pub fn derivative(&self) -> Polynomial {
        Polynomial::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rational::from(i as i64))
                .collect(),
        )
    }

    /// True iff every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integral())
    }
}

/// Clears denominators and removes the content: returns the primitive
/// integer polynomial `p` and the rational `c` with `self = c * p`.
pub(crate) fn primitive_integer_part(p: &Polynomial) -> (Vec<BigInt>, Rational) {
    let mut lcm = BigInt::one();
    for c in &p.coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, c| gcd_int(&g, c));
    let mut content = if content.is_zero() { BigInt::one() } else { content };
    if ints.last().is_some_and(|c| c.is_negative()) {
        content = -content;
    }
    let prim = ints.iter().map(|c| c / &content).collect();
    let scale = Rational::new(content, lcm).expect("nonzero lcm");
    (prim, scale)
}

fn primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let g = p.iter().fold(BigInt::zero(), |g, c| gcd_int(&g, c));
    if g.is_zero() || g.is_one() {
        return p;
    }
    p.iter().map(|c| c / &g).collect()
}

/// Primitive remainder sequence in ℤ[q].
fn prs_gcd(mut a: Vec<BigInt>, mut b: Vec<BigInt>) -> Vec<BigInt> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive(r);
    }
    a
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// `a / b` in ℤ[q] when `b` divides `a` exactly.
fn exact_quotient_int(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return a.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let lead = &r[k + db];
        if lead.is_zero() {
            continue;
        }
        let (c, rem) = lead.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[k + j] -= &c * bc;
        }
        q[k] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

/// Heuristic gcd of primitive integer polynomials: evaluate at a large
/// integer `ξ`, take the integer gcd and read the polynomial back from its
/// balanced base-`ξ` digits. With `ξ > 2 min(‖a‖∞, ‖b‖∞) + 2`, a primitive
/// candidate dividing both inputs is the gcd. `None` after a few failed
/// points.
fn heuristic_gcd(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let norm = |p: &[BigInt]| p.iter().map(|c| c.abs()).max().unwrap_or_default();
    let mut xi = norm(a).min(norm(b)) * 2u32 + 29u32;
    for _ in 0..6 {
        let gamma = eval_int(a, &xi).gcd(&eval_int(b, &xi));
        if !gamma.is_zero() {
            let half = &xi >> 1u32;
            let mut rest = gamma;
            let mut digits = Vec::new();
            while !rest.is_zero() {
                let mut d = rest.mod_floor(&xi);
                if d > half {
                    d -= &xi;
                }
                rest = (rest - &d) / &xi;
                digits.push(d);
            }
            let mut g = primitive(digits);
            if g.last().is_some_and(|c| c.is_negative()) {
                g.iter_mut().for_each(|c| *c = -&*c);
            }
            if !g.is_empty() && exact_quotient_int(a, &g).is_some() && exact_quotient_int(b, &g).is_some() {
                return Some(g);
            }
        }
        xi = xi * 73794u32 / 27011u32;
    }
    None
}

/// Pseudo-remainder of `a` by `b` in ℤ[q]; `b` must be nonzero.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<BigInt> = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        let shift = dr - db;
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

impl fmt::Display for Polynomial {
    /// Descending degree, explicit `*`: `q^4 + 4*q^3 - q^2 - 4*q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match deg {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if deg == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl FromStr for Polynomial {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_polynomial(s)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Polynomial::from_coeffs(coeffs)
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        // Integer fast path: most values here live in ℤ[q].
        if self.has_integer_coeffs() && rhs.has_integer_coeffs() {
            let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in rhs.coeffs.iter().enumerate() {
                    if !b.is_zero() {
                        out[i + j] += a.numer() * b.numer();
                    }
                }
            }
            return Polynomial::from_coeffs(out.into_iter().map(Rational::from).collect());
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Polynomial::from_coeffs(out)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn display_is_descending_with_explicit_star() {
        assert_eq!(p("q^4 + 4*q^3 - q^2 - 4*q").to_string(), "q^4 + 4*q^3 - q^2 - 4*q");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(p("-1/2*q + 3").to_string(), "-1/2*q + 3");
    }

    #[test]
    fn gcd_of_shared_factor() {
        let a = p("(q-1)*(q+2)^2");
        let b = p("3*(q+2)*(q-5)");
        assert_eq!(a.gcd(&b), p("q+2"));
        assert_eq!(a.gcd(&Polynomial::zero()), a.monic());
        assert_eq!(p("q^2+1").gcd(&p("q-1")), Polynomial::one());
    }

    #[test]
    fn heuristic_and_prs_agree() {
        let cases = [
            ("(q^2-1)^7*(q^3+5*q-11)", "(q+1)^4*(q^3+5*q-11)^2*(7*q^2-3)"),
            ("(123456789*q^5 - 987654321)*(q-1)^3", "(q-1)*(123456789*q^5 - 987654321)*(q+3)"),
            ("q^40 + 3*q^7 - 1", "q^39 - 2"),
        ];
        for (x, y) in cases {
            let (a, _) = primitive_integer_part(&p(x));
            let (b, _) = primitive_integer_part(&p(y));
            let h = heuristic_gcd(&a, &b).expect("heuristic succeeds on these inputs");
            let mut prs = prs_gcd(a, b);
            if prs.last().is_some_and(|c| c.is_negative()) {
                prs.iter_mut().for_each(|c| *c = -&*c);
            }
            assert_eq!(h, prs, "{x} / {y}");
        }
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p("q^5 - 3*q^2 + 7");
        let b = p("2*q^2 + q - 1");
        let (qq, r) = a.div_rem(&b);
        assert_eq!(&(&qq * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let x = Polynomial::from_i64s(&[1, 0, 0]);
        assert_eq!(x.coeffs().len(), 1);
        assert!(Polynomial::from_i64s(&[0, 0]).is_zero());
    }
}
