//! Combinatorial bookkeeping for decompositions of a curve into pieces
//! joined by annuli: additivity of the Euler characteristic, cancellation
//! of the two nu values at the ends of every internal annulus, and assembly
//! of the global balance identity from per-piece data.
//!
//! Vertices carry declared values (chi of the piece and of its image, the
//! degree over the image piece, the local ramification sum); positive-genus
//! pieces enter only through their declared chi. The checks are pure
//! integer arithmetic over this data.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rhcheck::{NuTerm, RHReport};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub chi_piece: i64,
    pub deg_local: i64,
    pub ram_local: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeEnd {
    pub vertex: String,
    pub nu: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InternalEdge {
    pub id: String,
    pub end_a: EdgeEnd,
    pub end_b: EdgeEnd,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum EndKind {
    #[serde(rename = "TY")]
    Ty,
    #[serde(rename = "T_in")]
    TIn,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExternalEnd {
    pub vertex: String,
    pub kind: EndKind,
    pub nu: i64,
    /// Report label; defaults to `end:<index>` when absent.
    #[serde(default)]
    pub label: Option<String>,
}

/// A decomposition graph: pieces as vertices, connecting annuli as edges,
/// plus the boundary ends of the whole curve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangGraph {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub internal_edges: Vec<InternalEdge>,
    #[serde(default)]
    pub external_ends: Vec<ExternalEnd>,
}

impl TriangGraph {
    /// Structural validation: ids exist and are unique, ends reference real
    /// vertices, the graph is connected, and all deg_local agree (a finite
    /// morphism has one degree over a connected base).
    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::input("graph has no vertices"));
        }
        let mut ids = BTreeSet::new();
        for v in &self.vertices {
            if !ids.insert(v.id.as_str()) {
                return Err(Error::input(format!("duplicate vertex id `{}`", v.id)));
            }
            if v.deg_local < 1 {
                return Err(Error::input(format!(
                    "vertex `{}` has deg_local {} < 1",
                    v.id, v.deg_local
                )));
            }
            if v.ram_local < 0 {
                return Err(Error::input(format!(
                    "vertex `{}` has negative ram_local",
                    v.id
                )));
            }
        }
        let deg = self.vertices[0].deg_local;
        for v in &self.vertices {
            if v.deg_local != deg {
                return Err(Error::input(format!(
                    "deg_local differs between vertices: `{}` has {} but `{}` has {}",
                    self.vertices[0].id, deg, v.id, v.deg_local
                )));
            }
        }
        for e in &self.internal_edges {
            for end in [&e.end_a, &e.end_b] {
                if !ids.contains(end.vertex.as_str()) {
                    return Err(Error::input(format!(
                        "edge `{}` references unknown vertex `{}`",
                        e.id, end.vertex
                    )));
                }
            }
        }
        for (i, end) in self.external_ends.iter().enumerate() {
            if !ids.contains(end.vertex.as_str()) {
                return Err(Error::input(format!(
                    "external end {i} references unknown vertex `{}`",
                    end.vertex
                )));
            }
        }
        // connectivity over internal edges
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in &self.internal_edges {
            adj.entry(e.end_a.vertex.as_str())
                .or_default()
                .push(e.end_b.vertex.as_str());
            adj.entry(e.end_b.vertex.as_str())
                .or_default()
                .push(e.end_a.vertex.as_str());
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.vertices[0].id.as_str()];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                if let Some(next) = adj.get(v) {
                    stack.extend(next.iter().copied());
                }
            }
        }
        if seen.len() != self.vertices.len() {
            return Err(Error::input("graph is not connected"));
        }
        Ok(())
    }

    pub fn degree(&self) -> i64 {
        self.vertices[0].deg_local
    }

    /// Sum of chi over the pieces must give the declared total.
    pub fn check_additivity(&self, chi_total: i64) -> bool {
        let sum: i64 = self.vertices.iter().map(|v| v.chi_piece).sum();
        sum == chi_total
    }

    /// Both ends of every internal annulus must carry opposite nu.
    pub fn check_edge_cancellation(&self) -> bool {
        self.internal_edges
            .iter()
            .all(|e| e.end_a.nu + e.end_b.nu == 0)
    }

    /// The balance residual of one vertex: chi - deg*chi_image + ram +
    /// sum of the locally oriented nu ends. An external T_in end is stored
    /// in the global orientation, which is the opposite of the local one.
    pub fn vertex_residual(&self, idx: usize, chi_x_piece: i64) -> i64 {
        let v = &self.vertices[idx];
        let mut nu_sum = 0i64;
        for e in &self.internal_edges {
            if e.end_a.vertex == v.id {
                nu_sum += e.end_a.nu;
            }
            if e.end_b.vertex == v.id {
                nu_sum += e.end_b.nu;
            }
        }
        for end in &self.external_ends {
            if end.vertex == v.id {
                match end.kind {
                    EndKind::Ty => nu_sum += end.nu,
                    EndKind::TIn => nu_sum -= end.nu,
                }
            }
        }
        v.chi_piece - self.degree() * chi_x_piece + v.ram_local + nu_sum
    }
}

/// Assembles the global balance report from per-vertex data: internal nu
/// terms cancel pairwise, so only the external TY / T_in terms survive.
/// Refuses assembly when additivity or edge cancellation fails.
pub fn assemble_global_rh(
    graph: &TriangGraph,
    chi_x_pieces: &[i64],
    chi_total: i64,
    deg: i64,
) -> Result<RHReport> {
    graph.validate()?;
    if chi_x_pieces.len() != graph.vertices.len() {
        return Err(Error::input(format!(
            "chi_x_pieces has {} entries for {} vertices",
            chi_x_pieces.len(),
            graph.vertices.len()
        )));
    }
    if deg != graph.degree() {
        return Err(Error::input(format!(
            "declared degree {deg} does not match the vertices' deg_local {}",
            graph.degree()
        )));
    }
    if !graph.check_additivity(chi_total) {
        return Err(Error::input(format!(
            "chi additivity fails: pieces sum to {}, declared total {chi_total}",
            graph.vertices.iter().map(|v| v.chi_piece).sum::<i64>()
        )));
    }
    if !graph.check_edge_cancellation() {
        return Err(Error::input(
            "an internal edge carries non-cancelling nu values",
        ));
    }
    let chi_y: i64 = chi_total;
    let chi_x: i64 = chi_x_pieces.iter().sum();
    let ram_sum: i64 = graph.vertices.iter().map(|v| v.ram_local).sum();
    let mut nu_out = Vec::new();
    let mut nu_in = Vec::new();
    for (i, end) in graph.external_ends.iter().enumerate() {
        let term = NuTerm {
            direction: end.label.clone().unwrap_or_else(|| format!("end:{i}")),
            nu: end.nu,
        };
        match end.kind {
            EndKind::Ty => nu_out.push(term),
            EndKind::TIn => nu_in.push(term),
        }
    }
    Ok(RHReport::assemble(
        chi_y, chi_x, deg, ram_sum, nu_out, nu_in,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vertex(id: &str, chi: i64, deg: i64, ram: i64) -> Vertex {
        Vertex {
            id: id.to_string(),
            chi_piece: chi,
            deg_local: deg,
            ram_local: ram,
        }
    }

    fn edge(id: &str, a: &str, nu_a: i64, b: &str, nu_b: i64) -> InternalEdge {
        InternalEdge {
            id: id.to_string(),
            end_a: EdgeEnd {
                vertex: a.to_string(),
                nu: nu_a,
            },
            end_b: EdgeEnd {
                vertex: b.to_string(),
                nu: nu_b,
            },
        }
    }

    #[test]
    fn additivity_examples() {
        let g = TriangGraph {
            vertices: vec![vertex("annulus", 0, 1, 0), vertex("disc", 1, 1, 0)],
            internal_edges: vec![edge("a", "annulus", 0, "disc", 0)],
            external_ends: vec![],
        };
        assert!(g.check_additivity(1));
        let two_discs = TriangGraph {
            vertices: vec![vertex("a", 1, 1, 0), vertex("b", 1, 1, 0)],
            internal_edges: vec![edge("e", "a", 0, "b", 0)],
            external_ends: vec![],
        };
        assert!(two_discs.check_additivity(2));
        assert!(!two_discs.check_additivity(1));
    }

    #[test]
    fn cancellation_examples() {
        let mk = |nu_a, nu_b| TriangGraph {
            vertices: vec![vertex("a", 0, 1, 0), vertex("b", 1, 1, 0)],
            internal_edges: vec![edge("e", "a", nu_a, "b", nu_b)],
            external_ends: vec![],
        };
        assert!(mk(4, -4).check_edge_cancellation());
        assert!(mk(0, 0).check_edge_cancellation());
        assert!(!mk(2, -1).check_edge_cancellation());
    }

    #[test]
    fn validation_rejects_bad_graphs() {
        let disconnected = TriangGraph {
            vertices: vec![vertex("a", 0, 1, 0), vertex("b", 1, 1, 0)],
            internal_edges: vec![],
            external_ends: vec![],
        };
        assert!(disconnected.validate().is_err());
        let unequal_deg = TriangGraph {
            vertices: vec![vertex("a", 0, 2, 0), vertex("b", 1, 3, 0)],
            internal_edges: vec![edge("e", "a", 0, "b", 0)],
            external_ends: vec![],
        };
        assert!(unequal_deg.validate().is_err());
        let dangling = TriangGraph {
            vertices: vec![vertex("a", 0, 1, 0)],
            internal_edges: vec![edge("e", "a", 0, "zz", 0)],
            external_ends: vec![],
        };
        assert!(dangling.validate().is_err());
    }

    #[test]
    fn assemble_simple_cases() {
        // one internal edge with opposite nu, identity degrees: balanced
        let g = TriangGraph {
            vertices: vec![vertex("a", 0, 1, 0), vertex("b", 1, 1, 0)],
            internal_edges: vec![edge("e", "a", 3, "b", -3)],
            external_ends: vec![],
        };
        let report = assemble_global_rh(&g, &[0, 1], 1, 1).unwrap();
        assert!(report.balanced);
        assert_eq!(report.lhs, 1);
        // refused on cancellation failure
        let bad = TriangGraph {
            vertices: vec![vertex("a", 0, 1, 0), vertex("b", 1, 1, 0)],
            internal_edges: vec![edge("e", "a", 3, "b", -2)],
            external_ends: vec![],
        };
        assert!(assemble_global_rh(&bad, &[0, 1], 1, 1).is_err());
    }

    #[test]
    fn residuals_detect_unbalanced_vertex() {
        // locally balanced: chi = deg*chi_x - ram - nu_local
        // vertex a: 0 = 2*0 - 0 - 0; vertex b: 1 = 2*1 - 1 - 0
        let g = TriangGraph {
            vertices: vec![vertex("a", 0, 2, 0), vertex("b", 1, 2, 1)],
            internal_edges: vec![edge("e", "a", 0, "b", 0)],
            external_ends: vec![],
        };
        assert_eq!(g.vertex_residual(0, 0), 0);
        assert_eq!(g.vertex_residual(1, 1), 0);
    }
}
