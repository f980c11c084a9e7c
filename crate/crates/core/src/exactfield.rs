//! Exact arithmetic in the real quadratic field ℚ(√2).
//!
//! Every structure constant handled by this crate lives in ℚ(√2): the
//! orthosymplectic creation and annihilation operators carry a `√2`
//! normalization, and products of two such operators fold back into ℚ.
//! Equality is componentwise on `(a, b)` in `a + b·√2`, which is sound because
//! `a² = 2b²` has no nonzero rational solution.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Reduced fraction with arbitrary-precision numerator and positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero in Q(sqrt2)")]
    DivisionByZero,
    #[error("cannot parse `{0}` as an element of Q(sqrt2)")]
    Parse(String),
}

/// An element `a + b·√2` of ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    a: Rational,
    b: Rational,
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl Scalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        Scalar { a, b }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            a: Rational::from_integer(BigInt::from(n)),
            b: Rational::zero(),
        }
    }

    pub fn from_rational(a: Rational) -> Self {
        Scalar { a, b: Rational::zero() }
    }

    /// `q·√2` for an integer `q`.
    pub fn sqrt2_times(q: i64) -> Self {
        Scalar {
            a: Rational::zero(),
            b: Rational::from_integer(BigInt::from(q)),
        }
    }

    pub fn sqrt2() -> Self {
        Scalar::sqrt2_times(1)
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient `b` of √2.
    pub fn sqrt2_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns the value as an integer when it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.b.is_zero() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conjugate(&self) -> Self {
        Scalar {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 2b²`; zero only for the zero element.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(2)) * &self.b * &self.b
    }

    /// `1/(a+b√2) = (a−b√2)/(a²−2b²)`.
    pub fn invert(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Scalar {
            a: &self.a / &n,
            b: -&self.b / &n,
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self, FieldError> {
        Ok(self * &rhs.invert()?)
    }

    fn mul_ref(&self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.b.is_zero() && rhs.b.is_zero() {
            return Scalar::from_rational(&self.a * &rhs.a);
        }
        let two = Rational::from_integer(BigInt::from(2));
        Scalar {
            a: &self.a * &rhs.a + two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(a: Rational) -> Self {
        Scalar::from_rational(a)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

/// Panics on a zero divisor; use [`Scalar::checked_div`] when that can happen.
impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero in Q(sqrt2)")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if rhs.is_zero() {
            return;
        }
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if rhs.is_zero() {
            return;
        }
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = self.mul_ref(rhs);
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a, b: -self.b }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical rendering: `a/b + c/d*sqrt2`, omitting a vanishing component,
/// integers printed without denominator and a unit √2 coefficient printed as
/// plain `sqrt2`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let irr = |q: &Rational| -> String {
            if q.is_one() {
                "sqrt2".to_string()
            } else {
                format!("{}*sqrt2", fmt_rational(q))
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => {
                if self.b.is_negative() {
                    write!(f, "-{}", irr(&-self.b.clone()))
                } else {
                    write!(f, "{}", irr(&self.b))
                }
            }
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}", fmt_rational(&self.a), sign, irr(&self.b.abs()))
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// A single signed term: `q`, `q*sqrt2` or `sqrt2`.
fn parse_term(term: &str, negative: bool) -> Option<Scalar> {
    let term = term.trim();
    let value = if let Some(coef) = term.strip_suffix("sqrt2") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let q = if coef.is_empty() { Rational::one() } else { parse_rational(coef)? };
        Scalar::new(Rational::zero(), q)
    } else {
        Scalar::from_rational(parse_rational(term)?)
    };
    Some(if negative { -value } else { value })
}

impl FromStr for Scalar {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(err());
        }
        // Split into signed terms on '+'/'-' that are not the leading sign.
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = text.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        if terms.len() > 2 {
            return Err(err());
        }
        let mut total = Scalar::zero();
        for t in terms {
            let (neg, body) = match t.as_bytes()[0] {
                b'-' => (true, &t[1..]),
                b'+' => (false, &t[1..]),
                _ => (false, t),
            };
            total += parse_term(body, neg).ok_or_else(err)?;
        }
        Ok(total)
    }
}
