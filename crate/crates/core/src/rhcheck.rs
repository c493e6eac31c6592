//! End-to-end balance checks: the Euler-characteristic identity
//! chi(Y) = deg * chi(X) - sum (e_P - 1) - sum_TY nu + sum_Tin nu
//! for declared morphism data on subdomains of P1, the sigma / chi relation
//! for a single removed disc, and the residue-direction divisor of a lift
//! with good reduction.
//!
//! The tool verifies rather than discovers: the caller asserts the map, the
//! domains and the assignment of boundary directions; every numeric
//! consequence is then checked exactly and failures are reported with the
//! offending check named.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::berkdomain::{vnorm_at_point, DiscKind, DiscSpec, FtDomainP1, TypeTwoPoint};
use crate::error::{Error, Result};
use crate::exactval::{Prime, QExact, ValQ};
use crate::laurent::{PValue, RationalMap};
use crate::ramification::{
    count_critical, critical_in_disc, degree_over, germ_data, local_sum_check, CheckStatus,
    GermData, LocalSumReport, TangentDirection,
};
use crate::valpolygon::Side;

/// Declared data of a finite morphism between two normal-form subdomains:
/// the coordinate form of the map, both domains, and the assignment of each
/// removed disc of the domain to the removed disc of the codomain its
/// boundary germ maps into.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub map: RationalMap,
    pub domain: FtDomainP1,
    pub codomain: FtDomainP1,
    /// keys: indices into the domain's removed discs (open discs first,
    /// then closed, as decimal strings); values: indices into the
    /// codomain's removed discs in the same order.
    pub direction_images: BTreeMap<String, String>,
    pub p: u64,
}

/// One named validation check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Results of the structural validation of a MorphismSpec.
#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub checks: Vec<CheckItem>,
    pub degree: Option<u64>,
    pub all_passed: bool,
}

/// A direction of the domain: its removed disc, side, and assigned image.
struct BoundaryDirection {
    dir: TangentDirection,
    image_center: PValue,
    image_log_radius: QExact,
    assigned_to: usize,
    is_ty: bool,
}

fn collect_directions(spec: &MorphismSpec) -> Result<Vec<BoundaryDirection>> {
    let domain_discs: Vec<(&DiscSpec, bool)> = spec
        .domain
        .removed_open
        .iter()
        .map(|d| (d, true))
        .chain(spec.domain.removed_closed.iter().map(|d| (d, false)))
        .collect();
    let codomain_discs: Vec<&DiscSpec> = spec.codomain.removed_discs().collect();
    let mut out = Vec::new();
    for (i, (disc, is_ty)) in domain_discs.iter().enumerate() {
        let key = i.to_string();
        let img = spec.direction_images.get(&key).ok_or_else(|| {
            Error::input(format!(
                "direction_images is missing an assignment for removed disc {key} ({})",
                disc.label()
            ))
        })?;
        let j: usize = img.parse().map_err(|_| {
            Error::input(format!(
                "direction_images[{key}] = `{img}` is not an index"
            ))
        })?;
        let target = codomain_discs.get(j).ok_or_else(|| {
            Error::input(format!(
                "direction_images[{key}] = {j} exceeds the codomain's removed disc count"
            ))
        })?;
        let side = if *is_ty { Side::Inside } else { Side::Outside };
        out.push(BoundaryDirection {
            dir: TangentDirection {
                center: disc.center.clone(),
                log_radius: disc.log_radius.clone(),
                side,
            },
            image_center: target.center.as_pvalue(),
            image_log_radius: target.log_radius.clone(),
            assigned_to: j,
            is_ty: *is_ty,
        });
    }
    Ok(out)
}

/// Default degree probes: small rational points of the codomain.
fn codomain_probes(spec: &MorphismSpec, p: &Prime) -> Result<Vec<PValue>> {
    let probes = spec.codomain.sample_points(p, 3);
    if probes.is_empty() {
        return Err(Error::input("no rational probe point found in the codomain"));
    }
    Ok(probes)
}

/// Runs the necessary finiteness checks on declared morphism data: each
/// boundary point lands on its assigned codomain boundary, every boundary
/// germ is finite with d >= 1, and the germ degrees over each codomain
/// boundary partition the global degree.
pub fn validate_morphism(spec: &MorphismSpec) -> Result<Diagnostics> {
    let p = Prime::new(spec.p)?;
    spec.domain.validate(&p)?;
    spec.codomain.validate(&p)?;
    if spec.map.is_constant() {
        return Err(Error::degenerate("constant map is not a finite morphism"));
    }
    let directions = collect_directions(spec)?;
    let mut checks = Vec::new();
    let mut germs: Vec<Option<GermData>> = Vec::new();

    for bd in &directions {
        let eta = TypeTwoPoint::new(bd.dir.center.clone(), bd.dir.log_radius.clone());
        let name = format!("boundary {} -> image radius", bd.dir.label());
        match spec
            .map
            .sub_const(&bd.image_center)
            .and_then(|g| vnorm_at_point(&g, &eta, &p))
        {
            Ok(v) => {
                let want = ValQ::Finite(bd.image_log_radius.clone());
                checks.push(CheckItem {
                    name,
                    passed: v == want,
                    detail: format!(
                        "v(map - center) at boundary = {v}, assigned disc has {want}"
                    ),
                });
            }
            Err(e) => checks.push(CheckItem {
                name,
                passed: false,
                detail: format!("{e}"),
            }),
        }
        let name = format!("germ {} finite", bd.dir.label());
        match germ_data(&spec.map, &bd.dir, &bd.image_center, &p) {
            Ok(g) => {
                checks.push(CheckItem {
                    name,
                    passed: g.d >= 1,
                    detail: format!("{g}"),
                });
                germs.push(Some(g));
            }
            Err(e) => {
                checks.push(CheckItem {
                    name,
                    passed: false,
                    detail: format!("{e}"),
                });
                germs.push(None);
            }
        }
    }

    let mut degree = None;
    match codomain_probes(spec, &p)
        .and_then(|probes| degree_over(&spec.map, &spec.domain, &probes, &p))
    {
        Ok(deg) => {
            degree = Some(deg);
            checks.push(CheckItem {
                name: "degree over domain".to_string(),
                passed: true,
                detail: format!("deg = {deg}, all probes agree"),
            });
            // pullback partition: the germ degrees of the directions
            // assigned to one codomain disc sum to the global degree
            for j in 0..spec.codomain.boundary_count() {
                let mut sum = 0i64;
                let mut known = true;
                for (bd, g) in directions.iter().zip(&germs) {
                    if bd.assigned_to == j {
                        match g {
                            Some(g) => sum += g.d,
                            None => known = false,
                        }
                    }
                }
                let name = format!("degree partition over codomain disc {j}");
                if !known {
                    checks.push(CheckItem {
                        name,
                        passed: false,
                        detail: "a germ over this disc failed".to_string(),
                    });
                } else {
                    checks.push(CheckItem {
                        name,
                        passed: sum == deg as i64,
                        detail: format!("sum of germ degrees = {sum}, total degree = {deg}"),
                    });
                }
            }
        }
        Err(e) => checks.push(CheckItem {
            name: "degree over domain".to_string(),
            passed: false,
            detail: format!("{e}"),
        }),
    }

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(Diagnostics {
        checks,
        degree,
        all_passed,
    })
}

/// One nu term of a balance report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuTerm {
    pub direction: String,
    pub nu: i64,
}

/// Both sides of the balance identity, with every ingredient listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RHReport {
    pub chi_y: i64,
    pub chi_x: i64,
    pub deg: i64,
    pub ram_sum: i64,
    pub nu_out: Vec<NuTerm>,
    pub nu_in: Vec<NuTerm>,
    pub lhs: i64,
    pub rhs: i64,
    pub balanced: bool,
}

impl RHReport {
    /// rhs = deg*chi_x - ram - sum(nu_out) + sum(nu_in); balanced iff the
    /// sides agree.
    pub fn assemble(
        chi_y: i64,
        chi_x: i64,
        deg: i64,
        ram_sum: i64,
        nu_out: Vec<NuTerm>,
        nu_in: Vec<NuTerm>,
    ) -> Self {
        let out_sum: i64 = nu_out.iter().map(|t| t.nu).sum();
        let in_sum: i64 = nu_in.iter().map(|t| t.nu).sum();
        let rhs = deg * chi_x - ram_sum - out_sum + in_sum;
        RHReport {
            chi_y,
            chi_x,
            deg,
            ram_sum,
            nu_out,
            nu_in,
            lhs: chi_y,
            rhs,
            balanced: chi_y == rhs,
        }
    }
}

/// Verifies the balance identity for declared morphism data. Refuses to
/// report when validation fails.
pub fn check_rh(spec: &MorphismSpec) -> Result<RHReport> {
    let diags = validate_morphism(spec)?;
    if !diags.all_passed {
        let failed: Vec<&str> = diags
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        return Err(Error::input(format!(
            "morphism validation failed: {}",
            failed.join("; ")
        )));
    }
    let p = Prime::new(spec.p)?;
    let deg = diags.degree.expect("degree present when all checks pass") as i64;
    let ram_sum = count_critical(&spec.map, &spec.domain, &p)? as i64;
    let directions = collect_directions(spec)?;
    let mut nu_out = Vec::new();
    let mut nu_in = Vec::new();
    for bd in &directions {
        let g = germ_data(&spec.map, &bd.dir, &bd.image_center, &p)?;
        let term = NuTerm {
            direction: bd.dir.label(),
            nu: g.nu,
        };
        if bd.is_ty {
            nu_out.push(term);
        } else {
            nu_in.push(term);
        }
    }
    Ok(RHReport::assemble(
        spec.domain.euler_char(),
        spec.codomain.euler_char(),
        deg,
        ram_sum,
        nu_out,
        nu_in,
    ))
}

/// sigma of the germ into one removed open disc against the ramification
/// count inside that disc: sigma = chi(U) - 1 + sum (e_P - 1), chi(U) = 1.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaChiReport {
    pub sigma: i64,
    pub chi_piece: i64,
    pub crit_sum: i64,
    pub rhs: i64,
    pub equal: bool,
}

pub fn sigma_vs_chi(
    map: &RationalMap,
    removed_disc: &DiscSpec,
    image_center: &PValue,
    p: &Prime,
) -> Result<SigmaChiReport> {
    if removed_disc.kind != DiscKind::Open {
        return Err(Error::input(
            "sigma_vs_chi expects an open removed disc (a single tangent component)",
        ));
    }
    let dir =
        TangentDirection::inside(removed_disc.center.clone(), removed_disc.log_radius.clone());
    let germ = germ_data(map, &dir, image_center, p)?;
    let crit = critical_in_disc(map, removed_disc, p)? as i64;
    let chi_piece = 1i64;
    let rhs = chi_piece - 1 + crit;
    Ok(SigmaChiReport {
        sigma: germ.sigma,
        chi_piece,
        crit_sum: crit,
        rhs,
        equal: germ.sigma == rhs,
    })
}

/// Residue-direction divisor of a lift fixing the Gauss point: sigma per
/// residue direction, certified by the global sum 2 deg - 2.
pub fn char_p_divisor(
    map: &RationalMap,
    hint_centers: &[QExact],
    p: &Prime,
) -> Result<LocalSumReport> {
    let gauss = TypeTwoPoint::gauss();
    // the lift must carry the closed unit disc onto itself with the Gauss
    // point fixed
    let vmap = vnorm_at_point(map, &gauss, p)?;
    if vmap != ValQ::finite_int(0) {
        return Err(Error::input(format!(
            "map does not fix the Gauss point: v(map) = {vmap} at the unit sphere"
        )));
    }
    local_sum_check(map, &gauss, hint_centers, p)
}

/// A residue-direction report is certified iff its status is VERIFIED.
pub fn is_certified(report: &LocalSumReport) -> bool {
    report.status == CheckStatus::Verified
}

/// The standard self-map fixture: a map on the closed unit disc with the
/// single outward direction assigned to itself.
pub fn self_map_on_unit_disc(map: RationalMap, p: u64) -> MorphismSpec {
    let unit = FtDomainP1::closed_unit_disc();
    let mut direction_images = BTreeMap::new();
    direction_images.insert("0".to_string(), "0".to_string());
    MorphismSpec {
        map,
        domain: unit.clone(),
        codomain: unit,
        direction_images,
        p,
    }
}
