//! Exact rational numbers and p-adic valuations.
//!
//! Everything downstream works in log scale: an absolute value |x| = p^(-v)
//! is represented by the rational v alone, and |0| by the symbol `Inf`.
//! No floating point value is ever produced.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number. Always stored reduced with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QExact(BigRational);

impl QExact {
    pub fn zero() -> Self {
        QExact(BigRational::zero())
    }

    pub fn one() -> Self {
        QExact(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        QExact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds n/d exactly; errors on d = 0.
    pub fn from_ratio(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::input("rational with zero denominator"));
        }
        Ok(QExact(BigRational::new(BigInt::from(n), BigInt::from(d))))
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::input("rational with zero denominator"));
        }
        Ok(QExact(BigRational::new(n, d)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        QExact(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::input("division by zero"));
        }
        Ok(QExact(self.0.recip()))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(Error::input("zero to a negative power"));
        }
        Ok(QExact(self.0.pow(e)))
    }

    /// Exponent of the prime p in self; `Inf` for zero.
    pub fn padic_val(&self, p: &Prime) -> ValQ {
        if self.is_zero() {
            return ValQ::Inf;
        }
        let p = BigInt::from(p.get());
        let vn = factor_out(self.0.numer(), &p);
        let vd = factor_out(self.0.denom(), &p);
        ValQ::finite_int(vn - vd)
    }
}

fn factor_out(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut k = 0i64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, p);
        if r.is_zero() {
            n = q;
            k += 1;
        } else {
            return k;
        }
    }
}

impl fmt::Display for QExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for QExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for QExact {
    type Err = Error;

    /// Parses "a", "-a" or "a/b". Floating point literals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(['.', 'e', 'E']) {
            return Err(Error::input(format!(
                "`{s}` looks like a floating point literal; only exact integers or a/b fractions are accepted"
            )));
        }
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n.trim())
            .map_err(|_| Error::input(format!("cannot parse `{s}` as a rational")))?;
        let d = BigInt::from_str(d.trim())
            .map_err(|_| Error::input(format!("cannot parse `{s}` as a rational")))?;
        QExact::from_big(n, d)
    }
}

macro_rules! arith_impl {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for QExact {
            type Output = QExact;
            fn $method(self, rhs: QExact) -> QExact {
                QExact(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a QExact> for &'a QExact {
            type Output = QExact;
            fn $method(self, rhs: &'a QExact) -> QExact {
                QExact(&self.0 $op &rhs.0)
            }
        }
    };
}

arith_impl!(Add, add, +);
arith_impl!(Sub, sub, -);
arith_impl!(Mul, mul, *);

impl Div for QExact {
    type Output = QExact;
    fn div(self, rhs: QExact) -> QExact {
        assert!(!rhs.is_zero(), "division by zero");
        QExact(self.0 / rhs.0)
    }
}

impl Neg for QExact {
    type Output = QExact;
    fn neg(self) -> QExact {
        QExact(-self.0)
    }
}

impl Neg for &QExact {
    type Output = QExact;
    fn neg(self) -> QExact {
        QExact(-&self.0)
    }
}

impl Serialize for QExact {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for QExact {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// A rational valuation value, or +infinity (the valuation of 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ValQ {
    Finite(QExact),
    Inf,
}

impl ValQ {
    pub fn finite(q: QExact) -> Self {
        ValQ::Finite(q)
    }

    pub fn finite_int(n: i64) -> Self {
        ValQ::Finite(QExact::from_int(n))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ValQ::Inf)
    }

    pub fn as_finite(&self) -> Option<&QExact> {
        match self {
            ValQ::Finite(q) => Some(q),
            ValQ::Inf => None,
        }
    }

    /// Unwraps a finite value; errors on Inf.
    pub fn expect_finite(&self, what: &str) -> Result<QExact> {
        match self {
            ValQ::Finite(q) => Ok(q.clone()),
            ValQ::Inf => Err(Error::degenerate(format!("{what} is infinite"))),
        }
    }

    pub fn min(self, other: ValQ) -> ValQ {
        if self <= other {
            self
        } else {
            other
        }
    }
}

/// Evaluates v + i*s with Inf absorbing.
pub fn valq_affine(v: &ValQ, i: i64, s: &QExact) -> ValQ {
    match v {
        ValQ::Inf => ValQ::Inf,
        ValQ::Finite(q) => ValQ::Finite(q + &(&QExact::from_int(i) * s)),
    }
}

impl Add for ValQ {
    type Output = ValQ;
    fn add(self, rhs: ValQ) -> ValQ {
        match (self, rhs) {
            (ValQ::Finite(a), ValQ::Finite(b)) => ValQ::Finite(a + b),
            _ => ValQ::Inf,
        }
    }
}

impl PartialOrd for ValQ {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValQ {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (ValQ::Inf, ValQ::Inf) => Ordering::Equal,
            (ValQ::Inf, _) => Ordering::Greater,
            (_, ValQ::Inf) => Ordering::Less,
            (ValQ::Finite(a), ValQ::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ValQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValQ::Inf => write!(f, "inf"),
            ValQ::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for ValQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for ValQ {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(ValQ::Inf)
        } else {
            Ok(ValQ::Finite(s.parse()?))
        }
    }
}

impl Serialize for ValQ {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ValQ {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// A validated prime. Every valuation in the engine is taken at one of these.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::input(format!("{p} is not prime")))
        }
    }

    pub fn get(&self) -> u64 {
        self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Deterministic Miller-Rabin, valid for all u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The p-adic valuation of an exact rational: the exponent of p in x.
///
/// Returns `Inf` exactly for x = 0.
pub fn padic_val(x: &QExact, p: &Prime) -> ValQ {
    x.padic_val(p)
}

/// The valuation of an integer, as a convenience for exponent arithmetic.
pub fn padic_val_int(n: i64, p: &Prime) -> ValQ {
    QExact::from_int(n).padic_val(p)
}
