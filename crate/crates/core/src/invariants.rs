//! Complete invariants of an encoded involution: genus, freeness, the fixed
//! set, the quotient and the boundary data.
//!
//! The fixed set is read off the *pole complex*. Each fixed vertex is a ball
//! rotated about an axis, which contributes one segment between two poles on
//! the ball's boundary. Each axial edge is a handle rotated about its core,
//! which joins the poles occupied by its two darts. Every pole has degree at
//! most two, so the components are paths (fixed arcs) and cycles (fixed
//! circles). Inverted edges add one more fixed arc each: the diameter of the
//! co-core disk.

use serde::Serialize;
use thiserror::Error;

use crate::model::{component_labels, Dart, EdgeAction, Edge, Graph, Model};

/// Euler characteristic `1 - g` of the spine gives the genus.
pub fn genus(m: &Model) -> usize {
    m.edge_count() + 1 - m.vertex_count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FixedSetSummary {
    pub n_arcs: usize,
    pub m_circles: usize,
}

impl FixedSetSummary {
    pub fn is_empty(self) -> bool {
        self.n_arcs == 0 && self.m_circles == 0
    }
}

/// One of the two endpoints of the rotation axis of a fixed vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pole {
    pub vertex: usize,
    pub index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedComponentKind {
    Arc,
    Circle,
}

/// The fixed axes of the balls glued along axial handles.
#[derive(Clone, Debug)]
pub struct PoleComplex {
    /// Dart occupying each pole, indexed by `2 * vertex + pole index`;
    /// `None` for free poles and for poles of moved vertices.
    occupant: Vec<Option<Dart>>,
    /// Component of each pole of a fixed vertex.
    component: Vec<Option<usize>>,
    kinds: Vec<FixedComponentKind>,
}

impl PoleComplex {
    pub fn new(m: &Model) -> Self {
        let n = m.vertex_count();
        let mut occupant = vec![None; 2 * n];
        let mut pole_of_dart = vec![usize::MAX; 2 * m.edge_count()];
        for v in m.fixed_vertices() {
            // Fixed darts take the poles in edge order.
            for (i, d) in m.fixed_darts_at(v).into_iter().enumerate() {
                occupant[2 * v + i] = Some(d);
                pole_of_dart[d.0] = 2 * v + i;
            }
        }

        let mut links: Vec<(usize, usize)> = m.fixed_vertices().map(|v| (2 * v, 2 * v + 1)).collect();
        for e in 0..m.edge_count() {
            if m.involution().edge_action(e) == EdgeAction::Axial {
                links.push((pole_of_dart[2 * e], pole_of_dart[2 * e + 1]));
            }
        }
        let (labels, _) = component_labels(2 * n, links.iter().copied());

        let mut component = vec![None; 2 * n];
        let mut id_of_label = std::collections::BTreeMap::new();
        let mut poles_per: Vec<usize> = Vec::new();
        let mut links_per: Vec<usize> = Vec::new();
        for v in m.fixed_vertices() {
            for p in [2 * v, 2 * v + 1] {
                let next = id_of_label.len();
                let id = *id_of_label.entry(labels[p]).or_insert(next);
                if id == poles_per.len() {
                    poles_per.push(0);
                    links_per.push(0);
                }
                poles_per[id] += 1;
                component[p] = Some(id);
            }
        }
        for &(a, _) in &links {
            let id = component[a].expect("link between fixed poles");
            links_per[id] += 1;
        }
        let kinds = poles_per
            .iter()
            .zip(&links_per)
            .map(|(&p, &l)| {
                if l == p {
                    FixedComponentKind::Circle
                } else {
                    debug_assert_eq!(l + 1, p);
                    FixedComponentKind::Arc
                }
            })
            .collect();

        PoleComplex {
            occupant,
            component,
            kinds,
        }
    }

    pub fn occupant(&self, pole: Pole) -> Option<Dart> {
        self.occupant[2 * pole.vertex + pole.index]
    }

    /// Component index of a pole, `None` if its vertex is not fixed.
    pub fn component(&self, pole: Pole) -> Option<usize> {
        self.component[2 * pole.vertex + pole.index]
    }

    pub fn component_kinds(&self) -> &[FixedComponentKind] {
        &self.kinds
    }

    /// Unoccupied poles of fixed vertices; these are the boundary endpoints
    /// of the fixed arcs that run through balls.
    pub fn free_poles(&self) -> Vec<Pole> {
        (0..self.component.len())
            .filter(|&p| self.component[p].is_some() && self.occupant[p].is_none())
            .map(|p| Pole {
                vertex: p / 2,
                index: p % 2,
            })
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.kinds.iter().filter(|&&k| k == FixedComponentKind::Arc).count()
    }

    pub fn circle_count(&self) -> usize {
        self.kinds.iter().filter(|&&k| k == FixedComponentKind::Circle).count()
    }
}

fn inverted_count(m: &Model) -> usize {
    (0..m.edge_count())
        .filter(|&e| m.involution().edge_action(e) == EdgeAction::Inverted)
        .count()
}

fn axial_count(m: &Model) -> usize {
    (0..m.edge_count())
        .filter(|&e| m.involution().edge_action(e) == EdgeAction::Axial)
        .count()
}

pub fn fixed_set(m: &Model) -> FixedSetSummary {
    let poles = PoleComplex::new(m);
    FixedSetSummary {
        n_arcs: poles.arc_count() + inverted_count(m),
        m_circles: poles.circle_count(),
    }
}

/// No fixed vertex and no self-mapped edge.
pub fn is_free(m: &Model) -> bool {
    m.fixed_vertices().next().is_none()
        && (0..m.edge_count()).all(|e| m.involution().self_edge_type(e).is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGraph {
    pub graph: Graph,
    /// Leaf vertices standing for the far end of an inverted edge.
    pub mirror: Vec<bool>,
    /// Edges coming from self-mapped edges, which carry branch arcs.
    pub branched: Vec<bool>,
    /// Vertices coming from fixed vertices.
    pub branched_vertex: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub quotient_graph: QuotientGraph,
    pub quotient_genus: usize,
    pub branch_arcs: usize,
    pub branch_circles: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("quotient graph has Betti number {graph} but the closed formula gives {formula}")]
    QuotientMismatch { graph: usize, formula: usize },
    #[error("quotient graph is disconnected")]
    QuotientDisconnected,
}

/// The quotient spine: one vertex per vertex orbit, one edge per edge orbit,
/// with inverted edges running to a fresh mirror leaf.
pub fn quotient(m: &Model) -> Result<QuotientData, InvariantError> {
    let g = m.graph();
    let inv = m.involution();
    let mut vertex_of = vec![usize::MAX; m.vertex_count()];
    let mut names = Vec::new();
    let mut branched_vertex = Vec::new();
    for v in 0..m.vertex_count() {
        let w = inv.vertex_image(v);
        if w < v {
            continue;
        }
        vertex_of[v] = names.len();
        vertex_of[w] = names.len();
        names.push(if w == v {
            g.vertex_name(v).to_string()
        } else {
            format!("{}_{}", g.vertex_name(v), g.vertex_name(w))
        });
        branched_vertex.push(w == v);
    }
    let mut mirror = vec![false; names.len()];
    let mut edges = Vec::new();
    let mut branched = Vec::new();
    for orbit in m.edge_orbits() {
        let e = orbit.representative();
        let edge = g.edge(e);
        let a = vertex_of[edge.ends[0]];
        let name = orbit
            .edges()
            .iter()
            .map(|&x| g.edge(x).name.as_str())
            .collect::<Vec<_>>()
            .join("_");
        let (b, is_branched) = match orbit {
            crate::model::EdgeOrbit::Axial(_) => (vertex_of[edge.ends[1]], true),
            crate::model::EdgeOrbit::Inverted(_) => {
                names.push(format!("mirror_{}", edge.name));
                mirror.push(true);
                branched_vertex.push(false);
                (names.len() - 1, true)
            }
            crate::model::EdgeOrbit::Moved(..) => (vertex_of[edge.ends[1]], false),
        };
        edges.push(Edge { name, ends: [a, b] });
        branched.push(is_branched);
    }
    let graph = Graph::new(names, edges);
    if !graph.is_connected() {
        return Err(InvariantError::QuotientDisconnected);
    }
    let quotient_genus = graph.betti();
    let fixed = fixed_set(m);
    let formula = if is_free(m) {
        (genus(m) + 1) / 2
    } else {
        (genus(m) + 1 - fixed.n_arcs) / 2
    };
    if quotient_genus != formula {
        return Err(InvariantError::QuotientMismatch {
            graph: quotient_genus,
            formula,
        });
    }
    Ok(QuotientData {
        quotient_graph: QuotientGraph {
            graph,
            mirror,
            branched,
            branched_vertex,
        },
        quotient_genus,
        branch_arcs: fixed.n_arcs,
        branch_circles: fixed.m_circles,
    })
}

/// Invariants of the restriction to the boundary surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoundaryData {
    /// Two per fixed arc; fixed circles lie in the interior.
    pub boundary_fixed_points: usize,
    pub boundary_quotient_genus: usize,
}

pub fn boundary_data(m: &Model) -> Result<BoundaryData, InvariantError> {
    let q = quotient(m)?;
    Ok(BoundaryData {
        boundary_fixed_points: 2 * q.branch_arcs,
        boundary_quotient_genus: q.quotient_genus,
    })
}

/// `2 - 2g = 2(2 - 2g') - b` for a double branched cover of closed surfaces
/// with `b` branch points.
pub fn riemann_hurwitz_holds(genus: usize, quotient_genus: usize, branch_points: usize) -> bool {
    let (g, q, b) = (genus as i64, quotient_genus as i64, branch_points as i64);
    2 - 2 * g == 2 * (2 - 2 * q) - b
}

/// `1 - g' = ((1 - g) + n) / 2`, the Euler characteristic of the quotient
/// handlebody counted with the branch arcs.
pub fn orbifold_euler_holds(genus: usize, quotient_genus: usize, n_arcs: usize) -> bool {
    let (g, q, n) = (genus as i64, quotient_genus as i64, n_arcs as i64);
    2 * (1 - q) == (1 - g) + n
}

/// The `(g, free?, n, m)` tuple the moves are required to preserve or shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InvariantTuple {
    pub genus: usize,
    pub free: bool,
    pub n: usize,
    pub m: usize,
}

impl InvariantTuple {
    pub fn of(model: &Model) -> Self {
        let fixed = fixed_set(model);
        InvariantTuple {
            genus: genus(model),
            free: is_free(model),
            n: fixed.n_arcs,
            m: fixed.m_circles,
        }
    }
}

/// Everything above, in the field order used for JSON output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSummary {
    pub genus: usize,
    pub free: bool,
    pub n: usize,
    pub m: usize,
    pub quotient_genus: usize,
    pub boundary_fixed_points: usize,
    pub boundary_quotient_genus: usize,
}

pub fn summarize(m: &Model) -> Result<InvariantSummary, InvariantError> {
    let q = quotient(m)?;
    let b = boundary_data(m)?;
    Ok(InvariantSummary {
        genus: genus(m),
        free: is_free(m),
        n: q.branch_arcs,
        m: q.branch_circles,
        quotient_genus: q.quotient_genus,
        boundary_fixed_points: b.boundary_fixed_points,
        boundary_quotient_genus: b.boundary_quotient_genus,
    })
}

/// Sanity counts used by tests: fixed vertices, axial and inverted edges.
pub fn local_model_counts(m: &Model) -> (usize, usize, usize) {
    (m.fixed_vertices().count(), axial_count(m), inverted_count(m))
}
