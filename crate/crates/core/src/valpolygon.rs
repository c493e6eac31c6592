//! Valuation polygons: lower convex hulls of (exponent, coefficient
//! valuation) points.
//!
//! For f = sum c_i T^i the function V(s) = min_i (v_p(c_i) + i*s) is the log
//! form of the sup-norm on the sphere of log-radius s. Its breakpoints and
//! achieving exponents encode, combinatorially and exactly, the valuations
//! of the roots of f, the Gauss seminorms, and the dominant monomial on any
//! one-sided germ. The convention is fixed once and used everywhere:
//! "inside" a disc of log-radius s means parameters s' > s.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactval::{Prime, QExact, ValQ};
use crate::laurent::LaurentPoly;

/// Lower convex hull of the (exponent, valuation) cloud of a nonzero
/// Laurent polynomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValPolygon {
    /// All (i, v_p(c_i)) points, ascending in i. Coefficients are nonzero,
    /// so every valuation here is finite.
    points: Vec<(i64, QExact)>,
    /// Vertices of the lower hull, ascending in i, strictly increasing in
    /// edge slope.
    hull: Vec<(i64, QExact)>,
}

/// One end of a valuation interval for root counting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SlopeBound {
    NegInf,
    Finite(QExact),
    PosInf,
}

/// Which one-sided germ at a sphere a dominant exponent refers to.
/// `Inside` means radii just below p^(-s), i.e. parameters s' > s.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Inside,
    Outside,
}

/// Builds the polygon of a nonzero Laurent polynomial at the prime p.
pub fn build_polygon(f: &LaurentPoly, p: &Prime) -> Result<ValPolygon> {
    if f.is_zero() {
        return Err(Error::degenerate("valuation polygon of the zero polynomial"));
    }
    let points: Vec<(i64, QExact)> = f
        .iter()
        .map(|(&i, c)| {
            let v = c
                .padic_val(p)
                .expect_finite("coefficient valuation")
                .expect("nonzero coefficient");
            (i, v)
        })
        .collect();
    Ok(ValPolygon::from_points(points))
}

impl ValPolygon {
    fn from_points(points: Vec<(i64, QExact)>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0));
        let mut hull: Vec<(i64, QExact)> = Vec::new();
        for (i, v) in &points {
            // pop while the new point makes the previous vertex non-extremal
            // (keeps strictly increasing slopes; collinear points dropped)
            while hull.len() >= 2 {
                let (i1, v1) = &hull[hull.len() - 2];
                let (i2, v2) = &hull[hull.len() - 1];
                // slope(p1,p2) >= slope(p2,p) <=> p2 above-or-on chord p1-p
                let lhs = (v2 - v1) * QExact::from_int(i - i2);
                let rhs = (v - v2) * QExact::from_int(i2 - i1);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push((*i, v.clone()));
        }
        ValPolygon { points, hull }
    }

    pub fn points(&self) -> &[(i64, QExact)] {
        &self.points
    }

    pub fn hull(&self) -> &[(i64, QExact)] {
        &self.hull
    }

    pub fn ord_low(&self) -> i64 {
        self.points.first().expect("nonempty").0
    }

    pub fn ord_high(&self) -> i64 {
        self.points.last().expect("nonempty").0
    }

    /// Breakpoint parameters s (negated edge slopes), strictly decreasing.
    pub fn breakpoints(&self) -> Vec<QExact> {
        self.hull
            .windows(2)
            .map(|w| {
                let (i1, v1) = &w[0];
                let (i2, v2) = &w[1];
                -((v2 - v1) / QExact::from_int(i2 - i1))
            })
            .collect()
    }

    /// V(s) = min_i (v_i + i s), evaluated over hull vertices.
    pub fn eval_v(&self, s: &QExact) -> ValQ {
        let mut best: Option<QExact> = None;
        for (i, v) in &self.hull {
            let cand = v + &(&QExact::from_int(*i) * s);
            best = Some(match best {
                None => cand,
                Some(b) => {
                    if cand < b {
                        cand
                    } else {
                        b
                    }
                }
            });
        }
        ValQ::Finite(best.expect("nonempty"))
    }

    /// The exponents achieving V(s): (imin, imax). imin = imax unless s is a
    /// breakpoint, in which case the pair spans the touching edge.
    pub fn achieving_range(&self, s: &QExact) -> (i64, i64) {
        let min = match self.eval_v(s) {
            ValQ::Finite(q) => q,
            ValQ::Inf => unreachable!("finite on nonzero polynomial"),
        };
        let mut imin = i64::MAX;
        let mut imax = i64::MIN;
        for (i, v) in &self.hull {
            let val = v + &(&QExact::from_int(*i) * s);
            if val == min {
                imin = imin.min(*i);
                imax = imax.max(*i);
            }
        }
        (imin, imax)
    }

    /// Number of roots x (in the algebraic closure, with multiplicity,
    /// excluding x = 0 and x = infinity) whose valuation v(x) lies in the
    /// given interval.
    pub fn count_zero_valuations(
        &self,
        s_lo: &SlopeBound,
        s_hi: &SlopeBound,
        incl_lo: bool,
        incl_hi: bool,
    ) -> Result<u64> {
        if let (SlopeBound::Finite(lo), SlopeBound::Finite(hi)) = (s_lo, s_hi) {
            if lo > hi {
                return Err(Error::input("empty valuation interval: s_lo > s_hi"));
            }
        }
        if matches!(s_lo, SlopeBound::PosInf) || matches!(s_hi, SlopeBound::NegInf) {
            return Ok(0);
        }
        let total = self.ord_high() - self.ord_low();
        // roots with v(x) >= s  (resp > s) have count imax(s) - ord_low
        // (resp imin(s) - ord_low); slopes of the hull count valuations.
        let from_low = match s_lo {
            SlopeBound::NegInf => total,
            SlopeBound::Finite(s) => {
                let (imin, imax) = self.achieving_range(s);
                let i = if incl_lo { imax } else { imin };
                i - self.ord_low()
            }
            SlopeBound::PosInf => unreachable!(),
        };
        let above_high = match s_hi {
            SlopeBound::PosInf => 0,
            SlopeBound::Finite(s) => {
                let (imin, imax) = self.achieving_range(s);
                let i = if incl_hi { imin } else { imax };
                i - self.ord_low()
            }
            SlopeBound::NegInf => unreachable!(),
        };
        // an empty interval like (s, s) can make the difference negative
        Ok((from_low - above_high).max(0) as u64)
    }

    /// The unique exponent dominating V on a one-sided germ at s.
    pub fn dominant_exponent(&self, s: &QExact, side: Side) -> i64 {
        let (imin, imax) = self.achieving_range(s);
        match side {
            Side::Inside => imin,
            Side::Outside => imax,
        }
    }

    /// True iff the polynomial, divided by its dominant monomial, is a unit
    /// on the open annulus {s_lo < v(T) < s_hi}.
    pub fn is_invertible_on(&self, s_lo: &QExact, s_hi: &QExact) -> Result<bool> {
        if s_lo >= s_hi {
            return Err(Error::input("is_invertible_on requires s_lo < s_hi"));
        }
        Ok(self.count_zero_valuations(
            &SlopeBound::Finite(s_lo.clone()),
            &SlopeBound::Finite(s_hi.clone()),
            false,
            false,
        )? == 0)
    }

    /// Structured report: hull vertices and breakpoint parameters.
    pub fn report(&self) -> PolygonReport {
        PolygonReport {
            vertices: self
                .hull
                .iter()
                .map(|(i, v)| (*i, v.to_string()))
                .collect(),
            breakpoints: self.breakpoints().iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolygonReport {
    pub vertices: Vec<(i64, String)>,
    pub breakpoints: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> QExact {
        s.parse().unwrap()
    }

    fn poly(pairs: &[(i64, &str)]) -> LaurentPoly {
        LaurentPoly::from_pairs(pairs.iter().map(|&(n, c)| (n, q(c))))
    }

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn fin(s: &str) -> SlopeBound {
        SlopeBound::Finite(q(s))
    }

    #[test]
    fn build_examples() {
        let p = build_polygon(&poly(&[(5, "1"), (1, "-1")]), &p5()).unwrap();
        assert_eq!(p.points(), &[(1, q("0")), (5, q("0"))]);
        assert_eq!(p.hull(), &[(1, q("0")), (5, q("0"))]);

        let p = build_polygon(&poly(&[(4, "5"), (0, "-1")]), &p5()).unwrap();
        assert_eq!(p.points(), &[(0, q("0")), (4, q("1"))]);
        assert_eq!(p.hull(), &[(0, q("0")), (4, q("1"))]);

        // 25T^2 + 5T + 1: the middle point lies on the segment and is
        // dropped from the hull.
        let p = build_polygon(&poly(&[(2, "25"), (1, "5"), (0, "1")]), &p5()).unwrap();
        assert_eq!(p.hull(), &[(0, q("0")), (2, q("2"))]);

        assert!(build_polygon(&LaurentPoly::zero(), &p5()).is_err());
    }

    #[test]
    fn eval_examples() {
        let f = build_polygon(&poly(&[(5, "1"), (1, "-1")]), &p5()).unwrap();
        assert_eq!(f.eval_v(&q("0")), ValQ::finite_int(0));
        assert_eq!(f.eval_v(&q("1")), ValQ::finite_int(1));
        let g = build_polygon(&poly(&[(4, "5"), (0, "-1")]), &p5()).unwrap();
        assert_eq!(g.eval_v(&q("-1/4")), ValQ::finite_int(0));
    }

    #[test]
    fn achieving_examples() {
        let g = build_polygon(&poly(&[(4, "5"), (0, "-1")]), &p5()).unwrap();
        assert_eq!(g.achieving_range(&q("-1/4")), (0, 4));
        assert_eq!(g.achieving_range(&q("0")), (0, 0));
        let f = build_polygon(&poly(&[(5, "1"), (1, "-1")]), &p5()).unwrap();
        assert_eq!(f.achieving_range(&q("0")), (1, 5));
    }

    #[test]
    fn count_examples() {
        // 5T^4 - 1: the four critical valuations sit exactly at -1/4.
        let g = build_polygon(&poly(&[(4, "5"), (0, "-1")]), &p5()).unwrap();
        assert_eq!(
            g.count_zero_valuations(&fin("-1/4"), &fin("-1/4"), true, true)
                .unwrap(),
            4
        );
        assert_eq!(
            g.count_zero_valuations(&fin("0"), &SlopeBound::PosInf, false, true)
                .unwrap(),
            0
        );
        // (T-1)(T-5)(T-1/5): root valuations {0, 1, -1}; two in [0,1].
        let f = poly(&[(1, "1"), (0, "-1")])
            .mul(&poly(&[(1, "1"), (0, "-5")]))
            .mul(&poly(&[(1, "1"), (0, "-1/5")]));
        let pf = build_polygon(&f, &p5()).unwrap();
        assert_eq!(
            pf.count_zero_valuations(&fin("0"), &fin("1"), true, true)
                .unwrap(),
            2
        );
    }

    #[test]
    fn dominant_examples() {
        let g = build_polygon(&poly(&[(4, "5"), (0, "-1")]), &p5()).unwrap();
        assert_eq!(g.dominant_exponent(&q("0"), Side::Inside), 0);
        assert_eq!(g.dominant_exponent(&q("-1/4"), Side::Outside), 4);
        // pT^(p-1) at p = 5
        let h = build_polygon(&poly(&[(4, "5")]), &p5()).unwrap();
        assert_eq!(h.dominant_exponent(&q("0"), Side::Inside), 4);
    }

    #[test]
    fn invertible_examples() {
        let g = build_polygon(&poly(&[(4, "5"), (0, "-1")]), &p5()).unwrap();
        assert!(g.is_invertible_on(&q("0"), &q("1/8")).unwrap());
        assert!(!g.is_invertible_on(&q("-1/2"), &q("0")).unwrap());
        let m = build_polygon(&poly(&[(7, "1")]), &p5()).unwrap();
        assert!(m.is_invertible_on(&q("-10"), &q("10")).unwrap());
    }

    /// Direct oracle: multiset of root valuations of c * prod (T - r_j).
    fn root_val_oracle(roots: &[QExact], p: &Prime) -> Vec<ValQ> {
        roots.iter().map(|r| r.padic_val(p)).collect()
    }

    fn expand(c: &QExact, roots: &[QExact]) -> LaurentPoly {
        let mut f = LaurentPoly::constant(c.clone());
        for r in roots {
            f = f.mul(&LaurentPoly::from_pairs([
                (1, QExact::one()),
                (0, -r),
            ]));
        }
        f
    }

    proptest! {
        #[test]
        fn oracle_equivalence(
            roots in proptest::collection::vec((-60i64..60, 1i64..60), 1..6),
            c in (1i64..30),
            lo in -4i64..4,
            width in 0i64..4,
        ) {
            let p = p5();
            let roots: Vec<QExact> = roots
                .into_iter()
                .map(|(n, d)| QExact::from_ratio(n, d).unwrap())
                .filter(|r| !r.is_zero())
                .collect();
            prop_assume!(!roots.is_empty());
            let f = expand(&QExact::from_int(c), &roots);
            let polygon = build_polygon(&f, &p).unwrap();
            let oracle = root_val_oracle(&roots, &p);

            let lo_q = QExact::from_ratio(lo, 2).unwrap();
            let hi_q = &lo_q + &QExact::from_ratio(width, 2).unwrap();
            let counted = polygon
                .count_zero_valuations(
                    &SlopeBound::Finite(lo_q.clone()),
                    &SlopeBound::Finite(hi_q.clone()),
                    true,
                    false,
                )
                .unwrap();
            let direct = oracle
                .iter()
                .filter(|v| {
                    **v >= ValQ::Finite(lo_q.clone()) && **v < ValQ::Finite(hi_q.clone())
                })
                .count() as u64;
            prop_assert_eq!(counted, direct);
        }

        #[test]
        fn multiplicative_seminorm(
            fa in proptest::collection::vec((-40i64..40, 1i64..8), 1..5),
            fb in proptest::collection::vec((-40i64..40, 1i64..8), 1..5),
            sn in -8i64..8,
        ) {
            let p = p5();
            let f = LaurentPoly::from_pairs(
                fa.into_iter().enumerate().map(|(i, (n, d))| (i as i64, QExact::from_ratio(n, d).unwrap())),
            );
            let g = LaurentPoly::from_pairs(
                fb.into_iter().enumerate().map(|(i, (n, d))| (i as i64, QExact::from_ratio(n, d).unwrap())),
            );
            prop_assume!(!f.is_zero() && !g.is_zero());
            let s = QExact::from_ratio(sn, 3).unwrap();
            let vf = build_polygon(&f, &p).unwrap().eval_v(&s);
            let vg = build_polygon(&g, &p).unwrap().eval_v(&s);
            let vfg = build_polygon(&f.mul(&g), &p).unwrap().eval_v(&s);
            prop_assert_eq!(vfg, vf + vg);
        }

        #[test]
        fn conservation_total(
            cs in proptest::collection::vec((-6i64..=6, -40i64..40, 1i64..8), 1..6),
        ) {
            let p = p5();
            let f = LaurentPoly::from_pairs(
                cs.into_iter().map(|(e, n, d)| (e, QExact::from_ratio(n, d).unwrap())),
            );
            prop_assume!(!f.is_zero());
            let polygon = build_polygon(&f, &p).unwrap();
            let total = polygon
                .count_zero_valuations(&SlopeBound::NegInf, &SlopeBound::PosInf, true, true)
                .unwrap();
            prop_assert_eq!(total as i64, polygon.ord_high() - polygon.ord_low());
        }

        #[test]
        fn dominant_monotone(
            cs in proptest::collection::vec((-6i64..=6, -40i64..40, 1i64..8), 1..6),
            sn in -8i64..8,
        ) {
            let p = p5();
            let f = LaurentPoly::from_pairs(
                cs.into_iter().map(|(e, n, d)| (e, QExact::from_ratio(n, d).unwrap())),
            );
            prop_assume!(!f.is_zero());
            let polygon = build_polygon(&f, &p).unwrap();
            let s = QExact::from_ratio(sn, 3).unwrap();
            let di = polygon.dominant_exponent(&s, Side::Inside);
            let do_ = polygon.dominant_exponent(&s, Side::Outside);
            prop_assert!(di <= do_);
            let is_breakpoint = polygon.breakpoints().contains(&s);
            prop_assert_eq!(di == do_, !is_breakpoint);
        }
    }
}
