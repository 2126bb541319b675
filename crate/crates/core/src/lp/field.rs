//! Exact ordered fields: `ℚ` (as [`BigRational`]) and `ℚ(√5)`.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// An exact ordered field usable by the simplex solver.
pub trait OrderedField:
    Clone
    + Debug
    + Display
    + Ord
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: Rational) -> Self;
    fn approx(&self) -> f64;
    fn parse_exact(s: &str) -> Result<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn gt_zero(&self) -> bool {
        *self > Self::zero()
    }

    fn lt_zero(&self) -> bool {
        *self < Self::zero()
    }
}

/// Parses `"3"`, `"-3/7"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN))
}

/// Best rational approximation of `x` with denominator at most `max_den`
/// (last continued-fraction convergent within the bound).
pub fn rational_from_f64(x: f64, max_den: u64) -> Rational {
    let bound = BigInt::from(max_den);
    let mut rest = x.abs();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from_f64(a).unwrap_or_else(BigInt::zero);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > bound {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a;
        if frac <= 1e-15 * rest.max(1.0) {
            break;
        }
        rest = 1.0 / frac;
    }
    if k1.is_zero() {
        return Rational::zero();
    }
    let r = Rational::new(h1, k1);
    if x < 0.0 {
        -r
    } else {
        r
    }
}

impl OrderedField for Rational {
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn approx(&self) -> f64 {
        rational_to_f64(self)
    }
    fn parse_exact(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

/// Element `a + b√5` of the real quadratic field `ℚ(√5)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt5 {
    a: Rational,
    b: Rational,
}

impl QSqrt5 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt5 { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        QSqrt5 { a, b: Rational::zero() }
    }

    pub fn sqrt5() -> Self {
        QSqrt5 { a: Rational::zero(), b: Rational::one() }
    }

    /// Golden ratio `(1 + √5)/2`.
    pub fn phi() -> Self {
        QSqrt5::new(Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into()))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt5_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QSqrt5 { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a² − 5b²`.
    pub fn field_norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(5.into()) * &self.b * &self.b
    }

    fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare a² with 5b²
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2 = Rational::from_integer(5.into()) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }
}

impl Zero for QSqrt5 {
    fn zero() -> Self {
        QSqrt5::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt5 {
    fn one() -> Self {
        QSqrt5::rational(Rational::one())
    }
}

impl Add for QSqrt5 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        QSqrt5 { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for QSqrt5 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        QSqrt5 { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for QSqrt5 {
    type Output = Self;
    fn neg(self) -> Self {
        QSqrt5 { a: -self.a, b: -self.b }
    }
}

impl Mul for QSqrt5 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.b.is_zero() {
            return QSqrt5 { b: &self.a * &o.b, a: self.a * o.a };
        }
        if o.b.is_zero() {
            return QSqrt5 { a: &self.a * &o.a, b: self.b * o.a };
        }
        let five = Rational::from_integer(5.into());
        QSqrt5 {
            a: &self.a * &o.a + five * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Div for QSqrt5 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        assert!(!o.is_zero(), "division by zero in Q(sqrt5)");
        if o.is_rational() {
            return QSqrt5 { a: self.a / &o.a, b: self.b / &o.a };
        }
        let n = o.field_norm();
        let num = self * o.conjugate();
        QSqrt5 { a: num.a / &n, b: num.b / &n }
    }
}

impl PartialOrd for QSqrt5 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt5 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl From<Rational> for QSqrt5 {
    fn from(q: Rational) -> Self {
        QSqrt5::rational(q)
    }
}

impl From<i64> for QSqrt5 {
    fn from(n: i64) -> Self {
        QSqrt5::from_int(n)
    }
}

impl OrderedField for QSqrt5 {
    fn from_rational(q: Rational) -> Self {
        QSqrt5::rational(q)
    }
    fn approx(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * 5f64.sqrt()
    }
    fn parse_exact(s: &str) -> Result<Self> {
        s.parse()
    }
}

impl Display for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let surd = if self.b.is_one() {
            "sqrt5".to_string()
        } else if (-self.b.clone()).is_one() {
            "-sqrt5".to_string()
        } else {
            format!("{}*sqrt5", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{surd}")
        } else if self.b.is_positive() {
            write!(f, "{}+{surd}", self.a)
        } else {
            write!(f, "{}{surd}", self.a)
        }
    }
}

impl Debug for QSqrt5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts sums of terms `q`, `sqrt5`, `q*sqrt5` (also `√5`), e.g.
/// `"-1/4+1/4*sqrt5"`.
impl FromStr for QSqrt5 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('√', "sqrt");
        if cleaned.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = cleaned.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'*' | b'/') {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        let mut out = QSqrt5::zero();
        for term in terms {
            let (sign, body) = match term.as_bytes().first() {
                Some(b'-') => (-1, &term[1..]),
                Some(b'+') => (1, &term[1..]),
                _ => (1, term),
            };
            let value = if let Some(coef) = body.strip_suffix("sqrt5") {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let q = if coef.is_empty() { Rational::one() } else { parse_rational(coef)? };
                QSqrt5::new(Rational::zero(), q)
            } else {
                QSqrt5::rational(parse_rational(body)?)
            };
            out = if sign < 0 { out - value } else { out + value };
        }
        Ok(out)
    }
}

impl Serialize for QSqrt5 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QSqrt5 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
