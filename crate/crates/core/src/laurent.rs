//! Exact Laurent polynomials and reduced rational maps.
//!
//! Coefficients live in Q and are stored sparsely by exponent. Rational maps
//! are kept gcd-reduced with a monic denominator, so that zero and pole
//! multiplicities can be read off the numerator, denominator and Wronskian
//! directly.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactval::QExact;

/// A Laurent polynomial over Q: a finite map exponent -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, QExact>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: QExact) -> Self {
        let mut f = LaurentPoly::zero();
        f.set(0, c);
        f
    }

    pub fn one() -> Self {
        LaurentPoly::constant(QExact::one())
    }

    /// c * T^n
    pub fn term(c: QExact, n: i64) -> Self {
        let mut f = LaurentPoly::zero();
        f.set(n, c);
        f
    }

    /// T^n
    pub fn monomial(n: i64) -> Self {
        LaurentPoly::term(QExact::one(), n)
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, QExact)>>(pairs: I) -> Self {
        let mut f = LaurentPoly::zero();
        for (n, c) in pairs {
            let cur = f.coeff(n) + c;
            f.set(n, cur);
        }
        f
    }

    fn set(&mut self, n: i64, c: QExact) {
        if c.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
    }

    pub fn coeff(&self, n: i64) -> QExact {
        self.coeffs.get(&n).cloned().unwrap_or_else(QExact::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &QExact)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.coeffs.keys().next().is_none_or(|&n| n >= 0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&n| n == 0)
    }

    /// Lowest stored exponent; None for the zero polynomial.
    pub fn ord_low(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest stored exponent; None for the zero polynomial.
    pub fn ord_high(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Degree of a polynomial (highest exponent), -1 style None for zero.
    pub fn degree(&self) -> Option<i64> {
        self.ord_high()
    }

    pub fn leading_coeff(&self) -> QExact {
        self.ord_high().map_or_else(QExact::zero, |n| self.coeff(n))
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&n, c)| (n, -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&n, c) in &other.coeffs {
            let cur = out.coeff(n) + c.clone();
            out.set(n, cur);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (&n, a) in &self.coeffs {
            for (&m, b) in &other.coeffs {
                let cur = out.coeff(n + m) + (a * b);
                out.set(n + m, cur);
            }
        }
        out
    }

    pub fn scale(&self, c: &QExact) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&n, a)| (n, a * c)).collect(),
        }
    }

    /// Multiplies by T^k (an exact exponent shift).
    pub fn shift_exponents(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&n, c)| (n + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Termwise exact derivative: d/dT (sum a_i T^i) = sum i a_i T^(i-1).
    pub fn derivative(&self) -> Self {
        let mut out = LaurentPoly::zero();
        for (&n, c) in &self.coeffs {
            if n != 0 {
                out.set(n - 1, c * &QExact::from_int(n));
            }
        }
        out
    }

    /// g(T) = f(a + T), exact Taylor shift. Polynomials only.
    pub fn taylor_shift(&self, a: &QExact) -> Result<Self> {
        if !self.is_polynomial() {
            return Err(Error::input(
                "taylor shift requires nonnegative exponents; shift a rational map componentwise",
            ));
        }
        if a.is_zero() {
            return Ok(self.clone());
        }
        // Horner on descending exponents: r <- r*(T + a) + c_i.
        let shift = LaurentPoly::from_pairs([(0, a.clone()), (1, QExact::one())]);
        let mut out = LaurentPoly::zero();
        let mut prev: Option<i64> = None;
        for (&n, c) in self.coeffs.iter().rev() {
            if let Some(p) = prev {
                for _ in 0..(p - n) {
                    out = out.mul(&shift);
                }
            }
            out = out.add(&LaurentPoly::constant(c.clone()));
            prev = Some(n);
        }
        if let Some(p) = prev {
            for _ in 0..p {
                out = out.mul(&shift);
            }
        }
        Ok(out)
    }

    /// Applies the exponent map i -> -i (the substitution T -> 1/T).
    pub fn invert_coordinate(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&n, c)| (-n, c.clone())).collect(),
        }
    }

    /// Exact polynomial composition f(g(T)). Polynomials only.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !self.is_polynomial() || !g.is_polynomial() {
            return Err(Error::input("composition requires polynomial inputs"));
        }
        let mut out = LaurentPoly::zero();
        let mut prev: Option<i64> = None;
        for (&n, c) in self.coeffs.iter().rev() {
            if let Some(p) = prev {
                for _ in 0..(p - n) {
                    out = out.mul(g);
                }
            }
            out = out.add(&LaurentPoly::constant(c.clone()));
            prev = Some(n);
        }
        if let Some(p) = prev {
            for _ in 0..p {
                out = out.mul(g);
            }
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point. Requires x != 0 when negative
    /// exponents are present.
    pub fn eval(&self, x: &QExact) -> Result<QExact> {
        let mut acc = QExact::zero();
        for (&n, c) in &self.coeffs {
            let xn = if n >= 0 {
                x.pow(n as i32)?
            } else {
                x.recip()?.pow((-n) as i32)?
            };
            acc = acc + (c * &xn);
        }
        Ok(acc)
    }

    /// Polynomial division with remainder over Q. Requires polynomial inputs
    /// and a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::input("polynomial division by zero"));
        }
        if !self.is_polynomial() || !divisor.is_polynomial() {
            return Err(Error::input("polynomial division requires polynomials"));
        }
        let dd = divisor.degree().unwrap();
        let lc = divisor.leading_coeff();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading_coeff() / lc.clone();
            let k = rd - dd;
            quot.set(k, quot.coeff(k) + factor.clone());
            rem = rem.sub(&divisor.scale(&factor).shift_exponents(k));
        }
        Ok((quot, rem))
    }

    /// Monic polynomial gcd over Q (Euclid).
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        let lc = a.leading_coeff();
        Ok(a.scale(&lc.recip()?))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::inconsistent("non-exact polynomial division"));
        }
        Ok(q)
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&n, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*T")?,
                _ => write!(f, "{c}*T^{n}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = ser.serialize_map(Some(self.coeffs.len()))?;
        for (n, c) in &self.coeffs {
            map.serialize_entry(&n.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(de)?;
        let mut f = LaurentPoly::zero();
        for (n, c) in raw {
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("bad exponent `{n}`")))?;
            let c: QExact = c.parse().map_err(|e| D::Error::custom(format!("{e}")))?;
            let cur = f.coeff(n) + c;
            f.set(n, cur);
        }
        Ok(f)
    }
}

/// A reduced fraction of polynomials: the coordinate form of a finite map on
/// the projective line. gcd(num, den) = 1 and den is monic.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct RationalMap {
    num: LaurentPoly,
    den: LaurentPoly,
}

#[derive(Deserialize)]
struct RationalMapRaw {
    num: LaurentPoly,
    #[serde(default)]
    den: Option<LaurentPoly>,
}

impl<'de> Deserialize<'de> for RationalMap {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RationalMapRaw::deserialize(de)?;
        RationalMap::new(raw.num, raw.den.unwrap_or_else(LaurentPoly::one))
            .map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// A probe value in P1: a rational constant or the point at infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PValue {
    Finite(QExact),
    Infinity,
}

impl PValue {
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(PValue::Infinity)
        } else {
            Ok(PValue::Finite(s.parse()?))
        }
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PValue::Infinity => write!(f, "inf"),
            PValue::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl RationalMap {
    /// Builds num/den, reducing by the exact polynomial gcd and normalizing
    /// the denominator to be monic.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::input("rational map with zero denominator"));
        }
        if !num.is_polynomial() || !den.is_polynomial() {
            return Err(Error::input("rational map components must be polynomials"));
        }
        let g = num.gcd(&den)?;
        let (num, den) = if g.is_zero() || g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lc = den.leading_coeff();
        Ok(RationalMap {
            num: num.scale(&lc.recip()?),
            den: den.scale(&lc.recip()?),
        })
    }

    pub fn from_poly(num: LaurentPoly) -> Result<Self> {
        RationalMap::new(num, LaurentPoly::one())
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// deg = max(deg num, deg den); 0 exactly for constant maps.
    pub fn degree(&self) -> i64 {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0 || self.num.is_zero()
    }

    /// The Wronskian numerator W = A'B - AB' of the derivative W / B^2.
    ///
    /// W is nonzero for every nonconstant reduced map in characteristic 0;
    /// its zeros inside a region count the classical ramification there,
    /// pole contributions included.
    pub fn wronskian(&self) -> Result<LaurentPoly> {
        let w = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        if w.is_zero() {
            return Err(Error::degenerate("constant map has zero Wronskian"));
        }
        Ok(w)
    }

    /// Phi - c as a reduced map; c = infinity yields 1/Phi.
    pub fn sub_const(&self, c: &PValue) -> Result<RationalMap> {
        match c {
            PValue::Infinity => {
                if self.num.is_zero() {
                    return Err(Error::degenerate("reciprocal of the zero map"));
                }
                RationalMap::new(self.den.clone(), self.num.clone())
            }
            PValue::Finite(c) => {
                let shifted = self.num.sub(&self.den.scale(c));
                RationalMap::new(shifted, self.den.clone())
            }
        }
    }

    /// Componentwise Taylor shift: Phi(a + T).
    pub fn precompose_shift(&self, a: &QExact) -> Result<RationalMap> {
        Ok(RationalMap {
            num: self.num.taylor_shift(a)?,
            den: self.den.taylor_shift(a)?,
        })
    }

    /// Phi(1/T), renormalized to a polynomial fraction.
    pub fn precompose_inverse(&self) -> Result<RationalMap> {
        let m = self.degree();
        let num = self.num.invert_coordinate().shift_exponents(m);
        let den = self.den.invert_coordinate().shift_exponents(m);
        RationalMap::new(num, den)
    }

    /// Exact evaluation at a point of P1.
    pub fn eval(&self, x: &PValue) -> Result<PValue> {
        match x {
            PValue::Finite(x) => {
                let n = self.num.eval(x)?;
                let d = self.den.eval(x)?;
                if d.is_zero() {
                    if n.is_zero() {
                        return Err(Error::inconsistent("unreduced rational map"));
                    }
                    Ok(PValue::Infinity)
                } else {
                    Ok(PValue::Finite(n / d))
                }
            }
            PValue::Infinity => {
                let inv = self.precompose_inverse()?;
                inv.eval(&PValue::Finite(QExact::zero()))
            }
        }
    }

    /// Local multiplicity of the map at a finite rational point.
    pub fn mult_at(&self, x: &QExact) -> Result<i64> {
        let shifted = self.precompose_shift(x)?;
        let dord = shifted.den.ord_low_at_zero();
        if dord > 0 {
            return Ok(dord);
        }
        let value = self.eval(&PValue::Finite(x.clone()))?;
        let c = match value {
            PValue::Finite(c) => c,
            PValue::Infinity => unreachable!("finite denominator"),
        };
        let nc = shifted.num.sub(&shifted.den.scale(&c));
        Ok(nc.ord_low_at_zero())
    }

    /// Local multiplicity at infinity.
    pub fn mult_at_infinity(&self) -> Result<i64> {
        self.precompose_inverse()?.mult_at(&QExact::zero())
    }
}

impl LaurentPoly {
    /// Order of vanishing at 0 for polynomials (0 if constant term nonzero).
    pub fn ord_low_at_zero(&self) -> i64 {
        self.ord_low().map_or(0, |n| n.max(0))
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == LaurentPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
