//! Boundary-germ invariants and classical ramification counts.
//!
//! A finite map restricted to a small annulus at a disc boundary has, in
//! unit-normalized coordinates, the shape S = T^d * u(T) with derivative
//! eps * T^sigma * v(T), where u and v are units close to 1. This module
//! extracts (d, sigma, nu = sigma - d + 1, v(eps)) from valuation polygons,
//! exactly, for germs on either side of any boundary sphere, together with
//! the region-wise zero counts that feed the balance checks.
//!
//! Orientation is normalized so that every reported sigma refers to the
//! coordinate in which the germ boundary sits at the outer radius of the
//! unit annulus and the map has positive order d. The normalizing
//! substitutions change sigma only by the inversion law
//! sigma' = -sigma + 2d - 2, applied automatically depending on which side
//! of the sphere the germ lives on and on which side the image approaches
//! its own boundary.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::berkdomain::{Center, DiscKind, DiscSpec, FtDomainP1, P1Point, TypeTwoPoint};
use crate::error::{Error, Result};
use crate::exactval::{Prime, QExact, ValQ};
use crate::laurent::{LaurentPoly, PValue, RationalMap};
use crate::valpolygon::{build_polygon, Side, SlopeBound, ValPolygon};

/// A one-sided annulus germ at the sphere of log-radius `log_radius` around
/// `center`. `Inside` points into the disc (radii just below p^(-s)), the
/// direction carried by a removed open disc; `Outside` points away from it,
/// the direction carried by a removed closed disc.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangentDirection {
    pub center: Center,
    pub log_radius: QExact,
    pub side: Side,
}

impl TangentDirection {
    pub fn inside(center: Center, log_radius: QExact) -> Self {
        TangentDirection {
            center,
            log_radius,
            side: Side::Inside,
        }
    }

    pub fn outside(center: Center, log_radius: QExact) -> Self {
        TangentDirection {
            center,
            log_radius,
            side: Side::Outside,
        }
    }

    /// Direction label used in reports: t(center;log_radius;in|out).
    pub fn label(&self) -> String {
        let side = match self.side {
            Side::Inside => "in",
            Side::Outside => "out",
        };
        format!("t({};{};{side})", self.center, self.log_radius)
    }
}

/// The invariant tuple of a finite germ: local degree d, derivative order
/// sigma, defect nu = sigma - d + 1, and the valuation of the unit
/// coefficient eps of the derivative.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GermData {
    pub d: i64,
    pub sigma: i64,
    pub nu: i64,
    pub eps_val: QExact,
}

impl GermData {
    pub fn identity() -> Self {
        GermData {
            d: 1,
            sigma: 0,
            nu: 0,
            eps_val: QExact::zero(),
        }
    }
}

impl fmt::Display for GermData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} sigma={} nu={} v(eps)={}",
            self.d, self.sigma, self.nu, self.eps_val
        )
    }
}

struct GermPolygons {
    num: ValPolygon,
    den: ValPolygon,
    wron: ValPolygon,
}

fn germ_polygons(
    shifted_num: &LaurentPoly,
    shifted_den: &LaurentPoly,
    p: &Prime,
) -> Result<GermPolygons> {
    let w = shifted_num
        .derivative()
        .mul(shifted_den)
        .sub(&shifted_num.mul(&shifted_den.derivative()));
    if w.is_zero() {
        return Err(Error::degenerate("constant germ: derivative vanishes"));
    }
    Ok(GermPolygons {
        num: build_polygon(shifted_num, p)?,
        den: build_polygon(shifted_den, p)?,
        wron: build_polygon(&w, p)?,
    })
}

/// Computes the germ invariants of `map` along `dir`, with the image germ
/// read in the chart centered at `image_center` (use infinity when the
/// image component contains the point at infinity).
pub fn germ_data(
    map: &RationalMap,
    dir: &TangentDirection,
    image_center: &PValue,
    p: &Prime,
) -> Result<GermData> {
    if map.is_constant() {
        return Err(Error::degenerate("germ of a constant map"));
    }
    // move an infinity-centered sphere to the 1/T chart
    let (map, center) = match &dir.center {
        Center::Infinity => (map.precompose_inverse()?, QExact::zero()),
        Center::Finite(a) => (map.clone(), a.clone()),
    };
    // read the image in the chart around image_center
    let g = map.sub_const(image_center)?;
    if g.num().is_zero() {
        return Err(Error::degenerate(
            "map is identically the image center on this germ",
        ));
    }
    let shifted = g.precompose_shift(&center)?;
    let polys = germ_polygons(shifted.num(), shifted.den(), p)?;
    let s0 = &dir.log_radius;

    let n = polys.num.dominant_exponent(s0, dir.side);
    let dd = polys.den.dominant_exponent(s0, dir.side);
    let w = polys.wron.dominant_exponent(s0, dir.side);
    let vn = polys.num.eval_v(s0).expect_finite("numerator value")?;
    let vd = polys.den.eval_v(s0).expect_finite("denominator value")?;
    let vw = polys.wron.eval_v(s0).expect_finite("derivative value")?;
    // image boundary log-radius
    let s0_img = &vn - &vd;

    // order of the map in the germ coordinate (exponents negate for
    // outside germs, where the normalizing substitution is r/(T-a))
    let d_pre = match dir.side {
        Side::Inside => n - dd,
        Side::Outside => -(n - dd),
    };
    if d_pre == 0 {
        return Err(Error::degenerate(
            "germ order vanishes: wrong image center or orientation",
        ));
    }
    // d_pre > 0 means the image approaches its boundary from the center
    // side of the image chart; d_pre < 0 means it wraps the far side, the
    // image coordinate is inverted, and the order is negated once more.
    let (d, sigma_raw, eps_val) = if d_pre > 0 {
        let sigma = w - 2 * dd;
        let eps = &(&vw - &(QExact::from_int(2) * vd)) + &(s0 - &s0_img);
        (d_pre, sigma, eps)
    } else {
        let sigma = w - 2 * n;
        let eps = &(&vw - &(QExact::from_int(2) * vn)) + &(s0 + &s0_img);
        (-d_pre, sigma, eps)
    };
    let sigma = match dir.side {
        Side::Inside => sigma_raw,
        Side::Outside => -sigma_raw - 2,
    };
    let germ = GermData {
        d,
        sigma,
        nu: sigma - d + 1,
        eps_val,
    };
    // |eps| >= |d| always holds for a finite germ; a violation means the
    // orientation bookkeeping above went wrong for this input
    let vd_bound = QExact::from_int(d)
        .padic_val(p)
        .expect_finite("valuation of d")?;
    if germ.eps_val > vd_bound {
        return Err(Error::inconsistent(format!(
            "germ unit valuation {} exceeds v({}) = {}",
            germ.eps_val, d, vd_bound
        )));
    }
    Ok(germ)
}

/// Re-normalizes a germ to the opposite end of its annulus: coordinates
/// T -> r/T, S -> r^d/S with v(r) = s0.
pub fn invert_germ(g: &GermData, s0: &QExact) -> GermData {
    GermData {
        d: g.d,
        sigma: -g.sigma + 2 * g.d - 2,
        nu: -g.nu,
        eps_val: &g.eps_val + &(QExact::from_int(g.nu) * s0.clone()),
    }
}

/// Germ of a composition from the germs of the factors (the image germ of
/// the first map must be the source germ of the second).
pub fn compose_germ(g_phi: &GermData, g_psi: &GermData) -> GermData {
    let d = g_phi.d * g_psi.d;
    let sigma = g_phi.d * g_psi.sigma + g_phi.sigma;
    let nu = g_phi.d * g_psi.nu + g_phi.nu;
    GermData {
        d,
        sigma,
        nu,
        eps_val: &g_phi.eps_val + &g_psi.eps_val,
    }
}

/// Valuation of the different along the skeleton at unit-coordinate
/// log-radius s: v(eps) + nu * s.
pub fn different_value(g: &GermData, s: &QExact) -> ValQ {
    ValQ::Finite(&g.eps_val + &(QExact::from_int(g.nu) * s.clone()))
}

/// Valuation of the discriminant at log-radius s: d * v_p(d) for nu = 0,
/// else d * (v(eps) + nu * s).
pub fn discriminant_value(g: &GermData, s: &QExact, p: &Prime) -> Result<ValQ> {
    if g.nu == 0 {
        let vd = QExact::from_int(g.d)
            .padic_val(p)
            .expect_finite("valuation of d")?;
        Ok(ValQ::Finite(QExact::from_int(g.d) * vd))
    } else {
        match different_value(g, s) {
            ValQ::Finite(v) => Ok(ValQ::Finite(QExact::from_int(g.d) * v)),
            ValQ::Inf => Ok(ValQ::Inf),
        }
    }
}

/// Number of zeros of a nonzero polynomial inside a disc, with
/// multiplicity, zeros at the disc center included.
fn poly_zeros_in_disc(f: &LaurentPoly, disc: &DiscSpec, p: &Prime) -> Result<u64> {
    debug_assert!(f.is_polynomial());
    if f.is_constant() {
        return Ok(0);
    }
    match &disc.center {
        Center::Finite(a) => {
            let shifted = f.taylor_shift(a)?;
            let at_center = shifted.ord_low_at_zero() as u64;
            let polygon = build_polygon(&shifted, p)?;
            let incl = disc.kind == DiscKind::Closed;
            let in_annuli = polygon.count_zero_valuations(
                &SlopeBound::Finite(disc.log_radius.clone()),
                &SlopeBound::PosInf,
                incl,
                true,
            )?;
            Ok(at_center + in_annuli)
        }
        Center::Infinity => {
            // {v(x) <= -s} (closed) or {v(x) < -s} (open); the zero at the
            // origin has infinite valuation and never qualifies
            let polygon = build_polygon(f, p)?;
            let incl = disc.kind == DiscKind::Closed;
            polygon.count_zero_valuations(
                &SlopeBound::NegInf,
                &SlopeBound::Finite(-&disc.log_radius),
                true,
                incl,
            )
        }
    }
}

/// Zeros of a nonzero polynomial inside the finite part of a domain.
fn poly_zeros_in_domain(f: &LaurentPoly, domain: &FtDomainP1, p: &Prime) -> Result<u64> {
    let total = f.degree().unwrap_or(0).max(0);
    let mut count = total;
    for disc in domain.removed_discs() {
        count -= poly_zeros_in_disc(f, disc, p)? as i64;
    }
    if count < 0 {
        return Err(Error::inconsistent("negative zero count over domain"));
    }
    Ok(count as u64)
}

/// Sum of (e_P - 1) over the rational points of a single disc, the
/// contribution at infinity included for discs that contain it.
pub fn critical_in_disc(map: &RationalMap, disc: &DiscSpec, p: &Prime) -> Result<u64> {
    let w = map.wronskian()?;
    let mut count = poly_zeros_in_disc(&w, disc, p)? as i64;
    if disc.center == Center::Infinity {
        count += map.mult_at_infinity()? - 1;
    }
    Ok(count as u64)
}

/// Sum of (e_P - 1) over the rational points of the domain.
///
/// The Wronskian of a reduced map vanishes to order e_P - 1 at every finite
/// critical point, poles included; the contribution at infinity, when
/// infinity belongs to the domain, is counted through the inverted
/// coordinate.
pub fn count_critical(map: &RationalMap, domain: &FtDomainP1, p: &Prime) -> Result<u64> {
    if map.is_constant() {
        return Err(Error::degenerate("ramification count of a constant map"));
    }
    domain.validate(p)?;
    let w = map.wronskian()?;
    let mut count = poly_zeros_in_domain(&w, domain, p)? as i64;
    if domain.contains(&P1Point::Infinity, p) {
        count += map.mult_at_infinity()? - 1;
    }
    Ok(count as u64)
}

/// Multiplicity of the fiber of `map` over `c` at the point at infinity
/// (0 when infinity is not in that fiber).
fn fiber_mult_at_infinity(map: &RationalMap, c: &PValue) -> Result<i64> {
    let inv = map.precompose_inverse()?;
    let value = inv.eval(&PValue::Finite(QExact::zero()))?;
    if &value != c {
        return Ok(0);
    }
    inv.mult_at(&QExact::zero())
}

/// Number of points, with multiplicity, of the fiber over `c` inside the
/// domain.
pub fn fiber_count(map: &RationalMap, domain: &FtDomainP1, c: &PValue, p: &Prime) -> Result<u64> {
    let fiber_poly = match c {
        PValue::Infinity => map.den().clone(),
        PValue::Finite(c) => map.num().sub(&map.den().scale(c)),
    };
    let mut count = if fiber_poly.is_constant() {
        0
    } else {
        poly_zeros_in_domain(&fiber_poly, domain, p)? as i64
    };
    if domain.contains(&P1Point::Infinity, p) {
        count += fiber_mult_at_infinity(map, c)?;
    }
    Ok(count as u64)
}

/// Degree of the map over the domain, computed as the fiber count over each
/// probe value; all probes must agree.
pub fn degree_over(
    map: &RationalMap,
    domain: &FtDomainP1,
    probes: &[PValue],
    p: &Prime,
) -> Result<u64> {
    if map.is_constant() {
        return Err(Error::degenerate("degree of a constant map"));
    }
    if probes.is_empty() {
        return Err(Error::input("degree_over requires at least one probe"));
    }
    domain.validate(p)?;
    let mut common: Option<(u64, &PValue)> = None;
    for c in probes {
        let count = fiber_count(map, domain, c, p)?;
        match &common {
            None => common = Some((count, c)),
            Some((prev, first)) => {
                if *prev != count {
                    return Err(Error::input(format!(
                        "probe disagreement: the fiber over {first} has {prev} points in the domain \
                         but the fiber over {c} has {count}; a probe lies outside the image \
                         component or the map is not finite here"
                    )));
                }
            }
        }
    }
    let (deg, _) = common.unwrap();
    if deg == 0 {
        return Err(Error::input(
            "all probes have empty fibers over the domain: probes outside the image",
        ));
    }
    Ok(deg)
}

/// Per-direction derivative orders at a boundary point, with the sum
/// identity total = 2 deg - 2 as a completeness certificate.
#[derive(Clone, Debug, Serialize)]
pub struct LocalSumReport {
    /// (direction label, sigma): finite residue directions sorted by
    /// center, the outward direction labelled "inf" last.
    pub directions: Vec<(String, i64)>,
    pub total: i64,
    pub expected: i64,
    pub status: CheckStatus,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CheckStatus {
    #[serde(rename = "VERIFIED")]
    Verified,
    #[serde(rename = "INCOMPLETE")]
    Incomplete,
}

/// Enumerates candidate residue directions at a boundary point and checks
/// the local sum identity sum_t sigma(t) = 2 deg(map, x) - 2.
///
/// Direction enumeration is driven by rational roots of the Wronskian and
/// of the denominator plus caller hints; it cannot be complete in general,
/// so the identity itself serves as the certificate and a shortfall is
/// reported as INCOMPLETE rather than as an error.
pub fn local_sum_check(
    map: &RationalMap,
    x: &TypeTwoPoint,
    hint_centers: &[QExact],
    p: &Prime,
) -> Result<LocalSumReport> {
    if map.is_constant() {
        return Err(Error::degenerate("local sum check of a constant map"));
    }
    let map_loc = map.precompose_shift(x.center())?;
    let s = x.log_radius().clone();
    let s_val = ValQ::Finite(s.clone());

    // candidate direction centers inside the closed disc of log-radius s
    let mut candidates: Vec<QExact> = vec![QExact::zero()];
    let w = map_loc.wronskian()?;
    for (root, _) in rational_roots(&w) {
        candidates.push(root);
    }
    for (root, _) in rational_roots(map_loc.den()) {
        candidates.push(root);
    }
    for h in hint_centers {
        candidates.push(h - x.center());
    }
    candidates.retain(|b| b.padic_val(p) >= s_val);
    // one representative per residue direction: v(b1 - b2) > s
    let mut reps: Vec<QExact> = Vec::new();
    for b in candidates {
        if !reps.iter().any(|r| (r - &b).padic_val(p) > s_val) {
            reps.push(b);
        }
    }
    reps.sort();

    let mut complete = true;
    let mut directions: Vec<(String, i64)> = Vec::new();
    let mut probes: Vec<PValue> = Vec::new();
    for b in &reps {
        let value = map_loc.eval(&PValue::Finite(b.clone()))?;
        if !probes.contains(&value) {
            probes.push(value.clone());
        }
        let dir = TangentDirection::inside(Center::Finite(b.clone()), s.clone());
        let label = (b + x.center()).to_string();
        match germ_data(&map_loc, &dir, &value, p) {
            Ok(g) => directions.push((label, g.sigma)),
            Err(Error::Degenerate(_)) => {
                complete = false;
                directions.push((label, 0));
            }
            Err(e) => return Err(e),
        }
    }
    // the outward direction at the sphere; its image value is not a valid
    // degree probe (it may fall outside the image of the residue affinoid)
    let outward_value = map_loc.eval(&PValue::Infinity)?;
    let out_dir = TangentDirection::outside(Center::Finite(QExact::zero()), s.clone());
    match germ_data(&map_loc, &out_dir, &outward_value, p) {
        Ok(g) => directions.push(("inf".to_string(), g.sigma)),
        Err(Error::Degenerate(_)) => {
            complete = false;
            directions.push(("inf".to_string(), 0));
        }
        Err(e) => return Err(e),
    }

    let residue_affinoid = FtDomainP1::closed_disc(Center::Finite(QExact::zero()), s.clone());
    let deg = degree_over(&map_loc, &residue_affinoid, &probes, p)?;
    let expected = 2 * deg as i64 - 2;
    let total: i64 = directions.iter().map(|(_, sig)| sig).sum();
    let status = if complete && total == expected {
        CheckStatus::Verified
    } else {
        CheckStatus::Incomplete
    };
    Ok(LocalSumReport {
        directions,
        total,
        expected,
        status,
    })
}

/// Exact rational roots of a polynomial, with multiplicities. Best effort:
/// candidates come from divisor enumeration of the extreme coefficients,
/// capped for very large integers (completeness is certified downstream by
/// sum identities, never assumed here).
pub fn rational_roots(f: &LaurentPoly) -> Vec<(QExact, u64)> {
    if f.is_zero() || !f.is_polynomial() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut g = f.clone();
    // zeros at the origin
    let k = g.ord_low_at_zero();
    if k > 0 {
        out.push((QExact::zero(), k as u64));
        g = g.shift_exponents(-k);
    }
    if g.is_constant() {
        return out;
    }
    // clear denominators to integer coefficients
    let mut lcm = BigInt::from(1);
    for (_, c) in g.iter() {
        lcm = num_integer::Integer::lcm(&lcm, c.denom());
    }
    let ints: Vec<BigInt> = g.iter().map(|(_, c)| c.numer() * &lcm / c.denom()).collect();
    let a0 = ints.first().map(|c| c.abs()).unwrap_or_default();
    let an = ints.last().map(|c| c.abs()).unwrap_or_default();
    let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else {
        return out;
    };
    for n in divisors(a0) {
        for d in divisors(an) {
            if num_integer::Integer::gcd(&n, &d) != 1 {
                continue;
            }
            let (Ok(nn), Ok(dd)) = (i64::try_from(n), i64::try_from(d)) else {
                continue;
            };
            for sign in [1i64, -1] {
                let cand = QExact::from_ratio(sign * nn, dd).expect("nonzero denominator");
                let lin = LaurentPoly::from_pairs([(1, QExact::one()), (0, -&cand)]);
                let mut mult = 0u64;
                while !g.is_constant() {
                    match g.div_rem(&lin) {
                        Ok((q, r)) if r.is_zero() => {
                            mult += 1;
                            g = q;
                        }
                        _ => break,
                    }
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
            }
        }
    }
    out
}

const DIVISOR_ENUM_CAP: u64 = 1 << 45;

fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return vec![];
    }
    if n > DIVISOR_ENUM_CAP {
        // huge extreme coefficients: fall back to the trivial divisors and
        // let the sum certificate decide completeness
        return vec![1, n];
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
        if out.len() > 4096 {
            break;
        }
    }
    out.sort_unstable();
    out
}
