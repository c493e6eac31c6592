//! Discs, boundary points and normal-form subdomains of the projective
//! line over (Q, v_p).
//!
//! A subdomain is kept in the normal form "P1 minus finitely many pairwise
//! disjoint open and closed discs". Discs carry log-scale radii; a disc
//! centered at infinity is read through the coordinate 1/T as a disc around
//! 0, so D(inf, s) is the set {v(x) <= -s} together with infinity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactval::{Prime, QExact, ValQ};
use crate::laurent::{LaurentPoly, PValue, RationalMap};
use crate::valpolygon::{build_polygon, Side};

/// A disc center: a rational point or the point at infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Center {
    Finite(QExact),
    Infinity,
}

impl Center {
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(Center::Infinity)
        } else {
            Ok(Center::Finite(s.parse()?))
        }
    }

    pub fn as_pvalue(&self) -> PValue {
        match self {
            Center::Finite(q) => PValue::Finite(q.clone()),
            Center::Infinity => PValue::Infinity,
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Center::Finite(q) => write!(f, "{q}"),
            Center::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Center {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Center {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(de)?;
        Center::parse(&s).map_err(|e| D::Error::custom(format!("{e}")))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscKind {
    Open,
    Closed,
}

/// A disc of P1 in log scale: radius p^(-log_radius).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiscSpec {
    pub center: Center,
    pub log_radius: QExact,
    pub kind: DiscKind,
}

impl DiscSpec {
    pub fn open(center: Center, log_radius: QExact) -> Self {
        DiscSpec {
            center,
            log_radius,
            kind: DiscKind::Open,
        }
    }

    pub fn closed(center: Center, log_radius: QExact) -> Self {
        DiscSpec {
            center,
            log_radius,
            kind: DiscKind::Closed,
        }
    }

    /// Membership of a rational point or infinity.
    pub fn contains_point(&self, x: &PValue, p: &Prime) -> bool {
        match (&self.center, x) {
            (Center::Finite(a), PValue::Finite(x)) => {
                let v = (x - a).padic_val(p);
                match self.kind {
                    DiscKind::Closed => v >= ValQ::Finite(self.log_radius.clone()),
                    DiscKind::Open => v > ValQ::Finite(self.log_radius.clone()),
                }
            }
            (Center::Finite(_), PValue::Infinity) => false,
            (Center::Infinity, PValue::Infinity) => true,
            (Center::Infinity, PValue::Finite(x)) => {
                // through 1/T: v(x) <= -s (closed) or < -s (open)
                let v = x.padic_val(p);
                let bound = ValQ::Finite(-&self.log_radius);
                match self.kind {
                    DiscKind::Closed => v <= bound,
                    DiscKind::Open => v < bound,
                }
            }
        }
    }

    /// Membership of the boundary point eta_{b,t} (finite center b).
    ///
    /// eta_{b,t} lies in D(a,s) iff b does and t >= s, strict on both for
    /// open discs. An infinity-centered disc is the complement of a
    /// 0-centered disc of the opposite kind, which gives the dual rule.
    pub fn contains_eta(&self, b: &QExact, t: &QExact, p: &Prime) -> bool {
        match &self.center {
            Center::Finite(a) => {
                let v = (b - a).padic_val(p);
                let s = ValQ::Finite(self.log_radius.clone());
                match self.kind {
                    DiscKind::Closed => v >= s && *t >= self.log_radius,
                    DiscKind::Open => v > s && *t > self.log_radius,
                }
            }
            Center::Infinity => {
                let v = b.padic_val(p);
                let bound = ValQ::Finite(-&self.log_radius);
                let neg_s = -&self.log_radius;
                match self.kind {
                    // complement of D(0, -s, open)
                    DiscKind::Closed => !(v > bound && *t > neg_s),
                    // complement of D(0, -s, closed)
                    DiscKind::Open => !(v >= bound && *t >= neg_s),
                }
            }
        }
    }

    /// The boundary point of the disc as a type-2/3 point.
    pub fn boundary_point(&self) -> TypeTwoPoint {
        TypeTwoPoint::new(self.center.clone(), self.log_radius.clone())
    }

    /// Compact display such as D(0;0)+ (closed) or D(inf;1)- (open).
    pub fn label(&self) -> String {
        let sign = match self.kind {
            DiscKind::Closed => "+",
            DiscKind::Open => "-",
        };
        format!("D({};{}){sign}", self.center, self.log_radius)
    }
}

impl Serialize for DiscSpec {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("DiscSpec", 2)?;
        st.serialize_field("center", &self.center)?;
        st.serialize_field("log_radius", &self.log_radius)?;
        st.end()
    }
}

/// Discs deserialize without a kind; the containing list fixes it.
#[derive(Deserialize)]
struct DiscSpecRaw {
    center: Center,
    log_radius: QExact,
}

impl DiscSpec {
    fn from_raw(raw: DiscSpecRaw, kind: DiscKind) -> Self {
        DiscSpec {
            center: raw.center,
            log_radius: raw.log_radius,
            kind,
        }
    }
}

/// True iff d_outer contains d_inner (exact ultrametric rules).
pub fn disc_contains(outer: &DiscSpec, inner: &DiscSpec, p: &Prime) -> bool {
    use DiscKind::*;
    match (&inner.center, &outer.center) {
        (Center::Finite(a), Center::Finite(b)) => {
            let v = (a - b).padic_val(p);
            let s_b = ValQ::Finite(outer.log_radius.clone());
            let radius_ok = match (inner.kind, outer.kind) {
                (Closed, Closed) | (Open, Closed) | (Open, Open) => {
                    inner.log_radius >= outer.log_radius
                }
                (Closed, Open) => inner.log_radius > outer.log_radius,
            };
            // the inner center must sit inside the outer disc; for an open
            // inner disc in a closed outer one, touching the boundary is
            // still fine
            let center_ok = match (inner.kind, outer.kind) {
                (_, Closed) => v >= s_b,
                (_, Open) => v > s_b,
            };
            radius_ok && center_ok
        }
        (Center::Infinity, Center::Infinity) => {
            // both through 1/T around 0, same center
            match (inner.kind, outer.kind) {
                (Closed, Open) => inner.log_radius > outer.log_radius,
                _ => inner.log_radius >= outer.log_radius,
            }
        }
        (Center::Infinity, Center::Finite(_)) => false,
        (Center::Finite(_), Center::Infinity) => {
            // inner sits inside D(inf,s,kind) iff it misses the
            // complementary 0-centered disc of the opposite kind
            let complement = DiscSpec {
                center: Center::Finite(QExact::zero()),
                log_radius: -&outer.log_radius,
                kind: match outer.kind {
                    Closed => Open,
                    Open => Closed,
                },
            };
            discs_disjoint(inner, &complement, p)
        }
    }
}

/// True iff the discs share no point (rational or boundary).
pub fn discs_disjoint(d1: &DiscSpec, d2: &DiscSpec, p: &Prime) -> bool {
    match (&d1.center, &d2.center) {
        (Center::Finite(a), Center::Finite(b)) => {
            // ultrametric discs are nested or disjoint: they meet iff either
            // center lies in the other disc
            let v = (a - b).padic_val(p);
            let s1 = ValQ::Finite(d1.log_radius.clone());
            let s2 = ValQ::Finite(d2.log_radius.clone());
            let b_in_1 = match d1.kind {
                DiscKind::Closed => v >= s1,
                DiscKind::Open => v > s1,
            };
            let a_in_2 = match d2.kind {
                DiscKind::Closed => v >= s2,
                DiscKind::Open => v > s2,
            };
            !(b_in_1 || a_in_2)
        }
        (Center::Infinity, Center::Infinity) => false,
        (Center::Finite(_), Center::Infinity) => {
            let complement = DiscSpec {
                center: Center::Finite(QExact::zero()),
                log_radius: -&d2.log_radius,
                kind: match d2.kind {
                    DiscKind::Closed => DiscKind::Open,
                    DiscKind::Open => DiscKind::Closed,
                },
            };
            disc_contains(&complement, d1, p)
        }
        (Center::Infinity, Center::Finite(_)) => discs_disjoint(d2, d1, p),
    }
}

/// A type-2/3 point eta_{a, p^(-s)}. A center at infinity is normalized on
/// construction to the equivalent representation eta_{0, -s} through 1/T.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeTwoPoint {
    center: QExact,
    log_radius: QExact,
}

impl TypeTwoPoint {
    pub fn new(center: Center, log_radius: QExact) -> Self {
        match center {
            Center::Finite(c) => TypeTwoPoint {
                center: c,
                log_radius,
            },
            Center::Infinity => TypeTwoPoint {
                center: QExact::zero(),
                log_radius: -log_radius,
            },
        }
    }

    pub fn gauss() -> Self {
        TypeTwoPoint::new(Center::Finite(QExact::zero()), QExact::zero())
    }

    pub fn center(&self) -> &QExact {
        &self.center
    }

    pub fn log_radius(&self) -> &QExact {
        &self.log_radius
    }

    /// Two representations denote the same point iff v(a - a') >= s.
    pub fn same_point(&self, other: &TypeTwoPoint, p: &Prime) -> bool {
        self.log_radius == other.log_radius
            && (&self.center - &other.center).padic_val(p)
                >= ValQ::Finite(self.log_radius.clone())
    }
}

impl fmt::Display for TypeTwoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eta({};{})", self.center, self.log_radius)
    }
}

/// A point of P1 for membership tests: rational, infinity, or a disc
/// boundary point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum P1Point {
    Rational(QExact),
    Infinity,
    Boundary(TypeTwoPoint),
}

/// A subdomain of P1 in normal form: the complement of pairwise disjoint
/// open and closed discs. Removed open discs carry the outward tangent
/// directions (TY); removed closed discs carry the inward ones (T_in).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FtDomainP1 {
    pub genus: u32,
    pub removed_open: Vec<DiscSpec>,
    pub removed_closed: Vec<DiscSpec>,
}

#[derive(Deserialize)]
struct FtDomainRaw {
    #[serde(default)]
    genus: u32,
    #[serde(default)]
    removed_open: Vec<DiscSpecRaw>,
    #[serde(default)]
    removed_closed: Vec<DiscSpecRaw>,
}

impl<'de> Deserialize<'de> for FtDomainP1 {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = FtDomainRaw::deserialize(de)?;
        Ok(FtDomainP1 {
            genus: raw.genus,
            removed_open: raw
                .removed_open
                .into_iter()
                .map(|d| DiscSpec::from_raw(d, DiscKind::Open))
                .collect(),
            removed_closed: raw
                .removed_closed
                .into_iter()
                .map(|d| DiscSpec::from_raw(d, DiscKind::Closed))
                .collect(),
        })
    }
}

impl FtDomainP1 {
    pub fn projective_line() -> Self {
        FtDomainP1 {
            genus: 0,
            removed_open: vec![],
            removed_closed: vec![],
        }
    }

    /// The closed disc D(0, s) or D(inf, s) as a domain: P1 minus the
    /// complementary open disc.
    pub fn closed_disc(center: Center, log_radius: QExact) -> Self {
        let removed = match center {
            Center::Finite(c) => {
                assert!(
                    c.is_zero(),
                    "only 0- or inf-centered closed discs have this one-disc normal form"
                );
                DiscSpec::open(Center::Infinity, -log_radius)
            }
            Center::Infinity => DiscSpec::open(Center::Finite(QExact::zero()), -log_radius),
        };
        FtDomainP1 {
            genus: 0,
            removed_open: vec![removed],
            removed_closed: vec![],
        }
    }

    pub fn closed_unit_disc() -> Self {
        FtDomainP1::closed_disc(Center::Finite(QExact::zero()), QExact::zero())
    }

    pub fn removed_discs(&self) -> impl Iterator<Item = &DiscSpec> {
        self.removed_open.iter().chain(self.removed_closed.iter())
    }

    pub fn boundary_count(&self) -> usize {
        self.removed_open.len() + self.removed_closed.len()
    }

    /// Checks pairwise disjointness and rejects the one degenerate
    /// empty-complement configuration (an open disc together with its exact
    /// closed complement).
    pub fn validate(&self, p: &Prime) -> Result<()> {
        let discs: Vec<&DiscSpec> = self.removed_discs().collect();
        for i in 0..discs.len() {
            for j in (i + 1)..discs.len() {
                if !discs_disjoint(discs[i], discs[j], p) {
                    return Err(Error::input(format!(
                        "removed discs {} and {} are not disjoint",
                        discs[i].label(),
                        discs[j].label()
                    )));
                }
            }
        }
        for o in &self.removed_open {
            for c in &self.removed_closed {
                if covers_p1(o, c, p) {
                    return Err(Error::input(format!(
                        "removed discs {} and {} cover P1: empty complement",
                        o.label(),
                        c.label()
                    )));
                }
            }
        }
        Ok(())
    }

    /// chi = 2 - 2g when no disc is removed, else 2 - 2g - m.
    pub fn euler_char(&self) -> i64 {
        let g = self.genus as i64;
        let m = self.boundary_count() as i64;
        if m == 0 {
            2 - 2 * g
        } else {
            2 - 2 * g - m
        }
    }

    /// True iff the point lies in no removed disc.
    pub fn contains(&self, x: &P1Point, p: &Prime) -> bool {
        match x {
            P1Point::Rational(q) => {
                let v = PValue::Finite(q.clone());
                self.removed_discs().all(|d| !d.contains_point(&v, p))
            }
            P1Point::Infinity => self
                .removed_discs()
                .all(|d| !d.contains_point(&PValue::Infinity, p)),
            P1Point::Boundary(eta) => self
                .removed_discs()
                .all(|d| !d.contains_eta(eta.center(), eta.log_radius(), p)),
        }
    }

    pub fn contains_value(&self, x: &PValue, p: &Prime) -> bool {
        match x {
            PValue::Finite(q) => self.contains(&P1Point::Rational(q.clone()), p),
            PValue::Infinity => self.contains(&P1Point::Infinity, p),
        }
    }

    /// Searches small rational points (and infinity) for probes inside the
    /// domain.
    pub fn sample_points(&self, p: &Prime, want: usize) -> Vec<PValue> {
        let mut found: Vec<PValue> = Vec::new();
        let consider = |x: PValue, found: &mut Vec<PValue>| {
            if found.len() < want && self.contains_value(&x, p) && !found.contains(&x) {
                found.push(x);
            }
        };
        consider(PValue::Infinity, &mut found);
        let pi = p.get() as i64;
        let mut units: Vec<i64> = (1..pi.min(10)).collect();
        units.extend([pi + 1, 2 * pi + 1, pi + 2, 13, 17, 19, 23]);
        for k in 0..=4i32 {
            for unit in &units {
                for sign in [1i64, -1] {
                    let u = QExact::from_int(sign * unit);
                    let pk = QExact::from_int(pi).pow(k).unwrap();
                    for q in [&u * &pk, u / pk] {
                        consider(PValue::Finite(q), &mut found);
                        if found.len() >= want {
                            return found;
                        }
                    }
                }
            }
        }
        found
    }
}

/// True iff an open disc and a closed disc jointly cover P1 (the degenerate
/// empty-complement configuration).
fn covers_p1(open: &DiscSpec, closed: &DiscSpec, p: &Prime) -> bool {
    debug_assert!(open.kind == DiscKind::Open && closed.kind == DiscKind::Closed);
    match (&open.center, &closed.center) {
        (Center::Finite(a), Center::Infinity) => {
            // complement of D(a, s, open) is {v(x-a) <= s} + inf, which is an
            // inf-centered disc exactly when 0 sits inside the open disc
            closed.log_radius == -&open.log_radius
                && a.padic_val(p) > ValQ::Finite(open.log_radius.clone())
        }
        (Center::Infinity, Center::Finite(c)) => {
            // complement of D(inf, s, open) is D(0, -s, closed)
            closed.log_radius == -&open.log_radius
                && c.padic_val(p) >= ValQ::Finite(closed.log_radius.clone())
        }
        // a finite-center closed disc misses infinity; two inf-centered
        // discs were already rejected as overlapping
        _ => false,
    }
}

/// -log_p of the sup-seminorm of f at the point eta: the polygon value of
/// the Taylor-shifted polynomial at the log-radius.
pub fn vnorm_poly_at_point(f: &LaurentPoly, eta: &TypeTwoPoint, p: &Prime) -> Result<ValQ> {
    if f.is_zero() {
        return Ok(ValQ::Inf);
    }
    // split off the pole part: f = g / T^m with g a polynomial
    let m = f.ord_low().unwrap_or(0).min(0);
    let g = f.shift_exponents(-m);
    let shifted = g.taylor_shift(eta.center())?;
    let val_g = build_polygon(&shifted, p)?.eval_v(eta.log_radius());
    if m == 0 {
        return Ok(val_g);
    }
    let t = LaurentPoly::monomial(1).taylor_shift(eta.center())?;
    let val_t = build_polygon(&t, p)?.eval_v(eta.log_radius());
    match (val_g, val_t) {
        (ValQ::Finite(a), ValQ::Finite(b)) => Ok(ValQ::Finite(a + QExact::from_int(m) * b)),
        _ => unreachable!("nonzero polynomials have finite seminorms"),
    }
}

/// Seminorm valuation of a rational map at a boundary point: numerator
/// value minus denominator value.
pub fn vnorm_at_point(f: &RationalMap, eta: &TypeTwoPoint, p: &Prime) -> Result<ValQ> {
    if f.num().is_zero() {
        return Err(Error::degenerate("seminorm of the zero map"));
    }
    let vn = vnorm_poly_at_point(f.num(), eta, p)?.expect_finite("numerator seminorm")?;
    let vd = vnorm_poly_at_point(f.den(), eta, p)?.expect_finite("denominator seminorm")?;
    Ok(ValQ::Finite(vn - vd))
}

/// Probes the skeleton image of a map at eta_{a,s}: the local degree along
/// the skeleton and the image log-radius, so that image = d*s + const on a
/// germ around s.
pub fn skeleton_image_probe(
    map: &RationalMap,
    a: &QExact,
    s: &QExact,
    p: &Prime,
) -> Result<(i64, ValQ)> {
    if map.is_constant() {
        return Err(Error::degenerate("skeleton probe of a constant map"));
    }
    let shifted = map.precompose_shift(a)?;
    let pn = build_polygon(shifted.num(), p)?;
    let pd = build_polygon(shifted.den(), p)?;
    let d_in = pn.dominant_exponent(s, Side::Inside) - pd.dominant_exponent(s, Side::Inside);
    let d_out = pn.dominant_exponent(s, Side::Outside) - pd.dominant_exponent(s, Side::Outside);
    if d_in != d_out {
        return Err(Error::degenerate(
            "probe radius is a breakpoint: no two-sided skeleton degree",
        ));
    }
    let eta = TypeTwoPoint::new(Center::Finite(a.clone()), s.clone());
    let image = vnorm_at_point(map, &eta, p)?;
    Ok((d_in, image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::RationalMap;

    fn q(s: &str) -> QExact {
        s.parse().unwrap()
    }

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn poly(pairs: &[(i64, &str)]) -> LaurentPoly {
        LaurentPoly::from_pairs(pairs.iter().map(|&(n, c)| (n, q(c))))
    }

    fn fin(s: &str) -> Center {
        Center::Finite(q(s))
    }

    #[test]
    fn containment_examples() {
        let p = p5();
        let big = DiscSpec::closed(fin("0"), q("0"));
        let small = DiscSpec::closed(fin("1"), q("1"));
        assert!(disc_contains(&big, &small, &p));
        let d1 = DiscSpec::closed(fin("0"), q("1"));
        let d2 = DiscSpec::closed(fin("1"), q("1"));
        assert!(discs_disjoint(&d1, &d2, &p));
        let open = DiscSpec::open(fin("0"), q("0"));
        let closed = DiscSpec::closed(fin("0"), q("0"));
        assert!(!disc_contains(&open, &closed, &p));
        assert!(disc_contains(&closed, &open, &p));
    }

    #[test]
    fn containment_infinity() {
        let p = p5();
        // D(inf, 0, open) = {v < 0} + inf misses the closed unit disc
        let at_inf = DiscSpec::open(Center::Infinity, q("0"));
        let unit = DiscSpec::closed(fin("0"), q("0"));
        assert!(discs_disjoint(&at_inf, &unit, &p));
        // but contains a small disc around 1/5
        let far = DiscSpec::closed(fin("1/5"), q("2"));
        assert!(disc_contains(&at_inf, &far, &p));
        assert!(!discs_disjoint(&at_inf, &far, &p));
        // nested inf-centered discs
        let bigger = DiscSpec::closed(Center::Infinity, q("-1"));
        assert!(disc_contains(&bigger, &at_inf, &p));
    }

    #[test]
    fn validate_examples() {
        let p = p5();
        assert!(FtDomainP1::closed_unit_disc().validate(&p).is_ok());
        let half_open = FtDomainP1 {
            genus: 0,
            removed_open: vec![DiscSpec::open(Center::Infinity, q("0"))],
            removed_closed: vec![DiscSpec::closed(fin("0"), q("1"))],
        };
        assert!(half_open.validate(&p).is_ok());
        // an open disc plus its exact closed complement: empty set
        let empty = FtDomainP1 {
            genus: 0,
            removed_open: vec![DiscSpec::open(fin("0"), q("0"))],
            removed_closed: vec![DiscSpec::closed(Center::Infinity, q("0"))],
        };
        assert!(empty.validate(&p).is_err());
        let overlapping = FtDomainP1 {
            genus: 0,
            removed_open: vec![
                DiscSpec::open(fin("0"), q("0")),
                DiscSpec::open(fin("5"), q("1")),
            ],
            removed_closed: vec![],
        };
        assert!(overlapping.validate(&p).is_err());
    }

    #[test]
    fn euler_char_examples() {
        assert_eq!(FtDomainP1::projective_line().euler_char(), 2);
        assert_eq!(FtDomainP1::closed_unit_disc().euler_char(), 1);
        let annulus = FtDomainP1 {
            genus: 0,
            removed_open: vec![
                DiscSpec::open(Center::Infinity, q("0")),
                DiscSpec::open(fin("0"), q("1")),
            ],
            removed_closed: vec![],
        };
        assert_eq!(annulus.euler_char(), 0);
        for m in 0..=6i64 {
            let domain = FtDomainP1 {
                genus: 0,
                removed_open: (0..m)
                    .map(|i| DiscSpec::open(fin(&i.to_string()), q("1")))
                    .collect(),
                removed_closed: vec![],
            };
            assert_eq!(domain.euler_char(), if m == 0 { 2 } else { 2 - m });
        }
    }

    #[test]
    fn membership_examples() {
        let p = p5();
        let unit = FtDomainP1::closed_unit_disc();
        assert!(unit.contains(&P1Point::Boundary(TypeTwoPoint::gauss()), &p));
        assert!(!unit.contains(&P1Point::Rational(q("1/5")), &p));
        assert!(!unit.contains(&P1Point::Infinity, &p));
        let no_small = FtDomainP1 {
            genus: 0,
            removed_open: vec![DiscSpec::open(fin("0"), q("1"))],
            removed_closed: vec![],
        };
        assert!(no_small.contains(
            &P1Point::Boundary(TypeTwoPoint::new(fin("0"), q("1/2"))),
            &p
        ));
    }

    #[test]
    fn vnorm_examples() {
        let p = p5();
        let f = RationalMap::from_poly(poly(&[(5, "1"), (1, "-1")])).unwrap();
        let gauss = TypeTwoPoint::gauss();
        assert_eq!(vnorm_at_point(&f, &gauss, &p).unwrap(), ValQ::finite_int(0));
        let inner = TypeTwoPoint::new(fin("0"), q("1"));
        assert_eq!(vnorm_at_point(&f, &inner, &p).unwrap(), ValQ::finite_int(1));
        let lin = RationalMap::from_poly(poly(&[(1, "1"), (0, "-1")])).unwrap();
        let at_one = TypeTwoPoint::new(fin("1"), q("2"));
        assert_eq!(
            vnorm_at_point(&lin, &at_one, &p).unwrap(),
            ValQ::finite_int(2)
        );
    }

    #[test]
    fn vnorm_representation_independent() {
        let p = p5();
        // eta_{0,1} = eta_{5,1} = eta_{10,1}
        let f = RationalMap::from_poly(poly(&[(3, "1"), (1, "2"), (0, "7")])).unwrap();
        let pts = [
            TypeTwoPoint::new(fin("0"), q("1")),
            TypeTwoPoint::new(fin("5"), q("1")),
            TypeTwoPoint::new(fin("10"), q("1")),
        ];
        assert!(pts[0].same_point(&pts[1], &p));
        let vals: Vec<ValQ> = pts
            .iter()
            .map(|e| vnorm_at_point(&f, e, &p).unwrap())
            .collect();
        assert_eq!(vals[0], vals[1]);
        assert_eq!(vals[0], vals[2]);
    }

    #[test]
    fn vnorm_center_at_infinity() {
        let p = p5();
        // center inf with log radius 0 normalizes to the Gauss point
        let f = RationalMap::from_poly(poly(&[(5, "1"), (1, "-1")])).unwrap();
        let eta = TypeTwoPoint::new(Center::Infinity, q("0"));
        assert_eq!(vnorm_at_point(&f, &eta, &p).unwrap(), ValQ::finite_int(0));
        // a map with a pole at 0, evaluated deep inside the unit disc
        let g = RationalMap::new(poly(&[(0, "1")]), poly(&[(2, "1")])).unwrap();
        let inner = TypeTwoPoint::new(fin("0"), q("3"));
        assert_eq!(
            vnorm_at_point(&g, &inner, &p).unwrap(),
            ValQ::finite_int(-6)
        );
    }

    #[test]
    fn skeleton_probe_examples() {
        let p = p5();
        let cube = RationalMap::from_poly(poly(&[(3, "1")])).unwrap();
        let (d, img) = skeleton_image_probe(&cube, &q("0"), &q("1"), &p).unwrap();
        assert_eq!(d, 3);
        assert_eq!(img, ValQ::finite_int(3));
        let ident = RationalMap::from_poly(poly(&[(1, "1")])).unwrap();
        let (d, img) = skeleton_image_probe(&ident, &q("0"), &q("7/3"), &p).unwrap();
        assert_eq!(d, 1);
        assert_eq!(img, ValQ::Finite(q("7/3")));
        // T^2 + 25T at s = 1: the 25T term stays subdominant
        let f = RationalMap::from_poly(poly(&[(2, "1"), (1, "25")])).unwrap();
        let (d, img) = skeleton_image_probe(&f, &q("0"), &q("1"), &p).unwrap();
        assert_eq!(d, 2);
        assert_eq!(img, ValQ::finite_int(2));
    }

    #[test]
    fn sample_points_respect_domain() {
        let p = p5();
        let unit = FtDomainP1::closed_unit_disc();
        let pts = unit.sample_points(&p, 3);
        assert!(!pts.is_empty());
        for x in &pts {
            assert!(unit.contains_value(x, &p));
        }
        assert!(!pts.contains(&PValue::Infinity));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
            proptest::collection::vec((-40i64..40, 1i64..8), 1..5).prop_map(|cs| {
                LaurentPoly::from_pairs(
                    cs.into_iter()
                        .enumerate()
                        .map(|(i, (n, d))| (i as i64, QExact::from_ratio(n, d).unwrap())),
                )
            })
        }

        proptest! {
            #[test]
            fn vnorm_multiplicative_and_ultrametric(
                f in arb_poly(),
                g in arb_poly(),
                a in -9i64..9,
                sn in -6i64..6,
            ) {
                prop_assume!(!f.is_zero() && !g.is_zero());
                let p = Prime::new(5).unwrap();
                let eta = TypeTwoPoint::new(
                    Center::Finite(QExact::from_int(a)),
                    QExact::from_ratio(sn, 2).unwrap(),
                );
                let vf = vnorm_poly_at_point(&f, &eta, &p).unwrap();
                let vg = vnorm_poly_at_point(&g, &eta, &p).unwrap();
                let vfg = vnorm_poly_at_point(&f.mul(&g), &eta, &p).unwrap();
                prop_assert_eq!(vfg, vf.clone() + vg.clone());
                let vsum = vnorm_poly_at_point(&f.add(&g), &eta, &p).unwrap();
                prop_assert!(vsum >= vf.min(vg));
            }

            #[test]
            fn vnorm_center_equivalence(
                f in arb_poly(),
                a in -9i64..9,
                k in 1i64..9,
            ) {
                prop_assume!(!f.is_zero());
                let p = Prime::new(5).unwrap();
                let s = QExact::from_int(1);
                // v(a - (a + 5k)) = 1 + v(k) >= 1 = s: same point
                let e1 = TypeTwoPoint::new(Center::Finite(QExact::from_int(a)), s.clone());
                let e2 = TypeTwoPoint::new(Center::Finite(QExact::from_int(a + 5 * k)), s);
                prop_assert!(e1.same_point(&e2, &p));
                let v1 = vnorm_poly_at_point(&f, &e1, &p).unwrap();
                let v2 = vnorm_poly_at_point(&f, &e2, &p).unwrap();
                prop_assert_eq!(v1, v2);
            }
        }
    }
}
