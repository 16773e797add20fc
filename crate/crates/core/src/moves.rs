//! Operations on spines mirroring the inductive proof: cutting along the
//! co-core disks of an edge orbit, equivariantly attaching handles, and
//! collapsing edge orbits without changing the involution's class.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::invariants::{InvariantTuple, Pole, PoleComplex};
use crate::model::{
    component_labels, EdgeOrbit, Graph, Model, OrbitTag, RawModel, ValidationReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("no edge with index {0}")]
    UnknownEdge(usize),
    #[error("no vertex with index {0}")]
    UnknownVertex(usize),
    #[error("edge `{0}` is inverted; its co-core meets the fixed set in an arc and is not a splitting disk")]
    InvertedOrbit(String),
    #[error("vertex `{0}` is not fixed by the involution")]
    NotFixed(String),
    #[error("pole {index} of `{vertex}` is already occupied by an axial dart")]
    PoleOccupied { vertex: String, index: usize },
    #[error("the two poles coincide")]
    SamePole,
    #[error("the diagnostic applies to non-free models only")]
    FreeModel,
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error("move produced an invalid model: {0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractError {
    #[error("edge `{0}` is a loop")]
    Loop(String),
    #[error("edge `{0}` shares both endpoints with its image")]
    ParallelToImage(String),
    #[error("edge `{0}` is inverted")]
    Inverted(String),
    #[error("merging at `{0}` would exceed two fixed darts")]
    FixedDartOverflow(String),
}

fn rebuild(raw: &RawModel) -> Result<Model, MoveError> {
    Model::from_raw(raw).map_err(MoveError::Invalid)
}

fn check_edge(m: &Model, e: usize) -> Result<(), MoveError> {
    if e < m.edge_count() {
        Ok(())
    } else {
        Err(MoveError::UnknownEdge(e))
    }
}

fn check_vertex(m: &Model, v: usize) -> Result<(), MoveError> {
    if v < m.vertex_count() {
        Ok(())
    } else {
        Err(MoveError::UnknownVertex(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitOrbitKind {
    Axial,
    MovedPair,
}

/// How the involution acts on a component left after cutting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentAction {
    Preserved,
    Swapped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitComponent {
    pub spine: Graph,
    pub betti: usize,
    pub action: ComponentAction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitResult {
    pub orbit_kind: SplitOrbitKind,
    pub components: Vec<SplitComponent>,
    pub connected_after: bool,
}

impl SplitResult {
    pub fn betti_sum(&self) -> usize {
        self.components.iter().map(|c| c.betti).sum()
    }

    /// Expected Betti sum for `genus`: cutting one axial co-core loses a
    /// handle unless it separates; cutting a swapped pair loses two handles,
    /// one per extra component.
    pub fn expected_betti_sum(&self, genus: usize) -> usize {
        let lost = match self.orbit_kind {
            SplitOrbitKind::Axial => 1,
            SplitOrbitKind::MovedPair => 2,
        };
        genus + self.components.len() - 1 - lost
    }
}

/// Deletes the edge orbit of `edge` and reports what is left.
pub fn split(m: &Model, edge: usize) -> Result<SplitResult, MoveError> {
    check_edge(m, edge)?;
    let orbit = m.orbit_of(edge);
    let orbit_kind = match orbit {
        EdgeOrbit::Axial(_) => SplitOrbitKind::Axial,
        EdgeOrbit::Moved(..) => SplitOrbitKind::MovedPair,
        EdgeOrbit::Inverted(e) => {
            return Err(MoveError::InvertedOrbit(m.graph().edge(e).name.clone()))
        }
    };
    let removed = orbit.edges();
    let g = m.graph();
    let kept: Vec<usize> = (0..m.edge_count()).filter(|e| !removed.contains(e)).collect();
    let (labels, count) = component_labels(
        m.vertex_count(),
        kept.iter().map(|&e| (g.edge(e).ends[0], g.edge(e).ends[1])),
    );

    let mut components = Vec::with_capacity(count);
    for c in 0..count {
        let verts: Vec<usize> = (0..m.vertex_count()).filter(|&v| labels[v] == c).collect();
        let local: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<_> = kept
            .iter()
            .filter(|&&e| labels[g.edge(e).ends[0]] == c)
            .map(|&e| {
                let edge = g.edge(e);
                crate::model::Edge {
                    name: edge.name.clone(),
                    ends: [local[&edge.ends[0]], local[&edge.ends[1]]],
                }
            })
            .collect();
        let image = labels[m.involution().vertex_image(verts[0])];
        let spine = Graph::new(verts.iter().map(|&v| g.vertex_name(v).to_string()).collect(), edges);
        components.push(SplitComponent {
            betti: spine.betti(),
            spine,
            action: if image == c {
                ComponentAction::Preserved
            } else {
                ComponentAction::Swapped
            },
        });
    }
    Ok(SplitResult {
        orbit_kind,
        connected_after: count == 1,
        components,
    })
}

/// Orbits that can be cut along: axial edges and moved pairs.
pub fn splittable_orbits(m: &Model) -> Vec<EdgeOrbit> {
    m.edge_orbits()
        .into_iter()
        .filter(|o| !matches!(o, EdgeOrbit::Inverted(_)))
        .collect()
}

/// Adds an axial handle joining two free poles. Joining the two ends of one
/// fixed arc closes it into a circle; joining two arcs makes one arc.
pub fn attach_axial_edge(m: &Model, a: Pole, b: Pole) -> Result<Model, MoveError> {
    check_vertex(m, a.vertex)?;
    check_vertex(m, b.vertex)?;
    if a == b {
        return Err(MoveError::SamePole);
    }
    let poles = PoleComplex::new(m);
    for p in [a, b] {
        let name = m.graph().vertex_name(p.vertex).to_string();
        if !m.involution().is_fixed_vertex(p.vertex) || p.index > 1 {
            return Err(MoveError::NotFixed(name));
        }
        if poles.occupant(p).is_some() {
            return Err(MoveError::PoleOccupied {
                vertex: name,
                index: p.index,
            });
        }
    }
    let g = m.graph();
    let mut raw = m.to_raw();
    let name = raw.fresh_edge_name("ax");
    raw.edge(name.clone(), g.vertex_name(a.vertex), g.vertex_name(b.vertex))
        .emap(name.clone(), name, OrbitTag::Axial);
    rebuild(&raw)
}

/// Adds the swapped pair `u–w`, `σu–σw`.
pub fn attach_moved_pair(m: &Model, u: usize, w: usize) -> Result<Model, MoveError> {
    check_vertex(m, u)?;
    check_vertex(m, w)?;
    let g = m.graph();
    let inv = m.involution();
    let mut raw = m.to_raw();
    let e = raw.fresh_edge_name("mv");
    raw.edge(e.clone(), g.vertex_name(u), g.vertex_name(w));
    let f = raw.fresh_edge_name("mv");
    raw.edge(
        f.clone(),
        g.vertex_name(inv.vertex_image(u)),
        g.vertex_name(inv.vertex_image(w)),
    )
    .emap(e, f, OrbitTag::Fwd);
    rebuild(&raw)
}

/// Adds a loop at a fixed vertex whose handle is turned over, exchanging its
/// attaching disks.
pub fn attach_inverted_loop(m: &Model, v: usize) -> Result<Model, MoveError> {
    check_vertex(m, v)?;
    let name = m.graph().vertex_name(v);
    if !m.involution().is_fixed_vertex(v) {
        return Err(MoveError::NotFixed(name.to_string()));
    }
    let mut raw = m.to_raw();
    let e = raw.fresh_edge_name("iv");
    raw.edge(e.clone(), name, name).emap(e.clone(), e, OrbitTag::Inverted);
    rebuild(&raw)
}

/// Vertex merges a contraction performs, `(kept, absorbed)`, or why it is
/// not allowed.
fn contraction_plan(m: &Model, edge: usize) -> Result<Vec<(usize, usize)>, ContractError> {
    let g = m.graph();
    let inv = m.involution();
    let name = || g.edge(edge).name.clone();
    match m.orbit_of(edge) {
        EdgeOrbit::Inverted(_) => Err(ContractError::Inverted(name())),
        EdgeOrbit::Axial(e) => {
            let [a, b] = g.edge(e).ends;
            if a == b {
                Err(ContractError::Loop(name()))
            } else {
                Ok(vec![(a, b)])
            }
        }
        EdgeOrbit::Moved(e, _) => {
            let [a, b] = g.edge(e).ends;
            if a == b {
                return Err(ContractError::Loop(name()));
            }
            let (sa, sb) = (inv.vertex_image(a), inv.vertex_image(b));
            let shared = [a, b].iter().filter(|&&x| x == sa || x == sb).count();
            match shared {
                0 => Ok(vec![(a, b), (sa, sb)]),
                1 => {
                    // Only a fixed endpoint can be shared with the image.
                    let (fixed, moved) = if a == sa { (a, b) } else { (b, a) };
                    Ok(vec![(fixed, moved), (fixed, inv.vertex_image(moved))])
                }
                _ => Err(ContractError::ParallelToImage(name())),
            }
        }
    }
}

/// Collapses an edge orbit, merging its endpoints. Legal for non-loop axial
/// edges and for moved pairs whose edge and image are disjoint or meet in a
/// single fixed vertex.
pub fn contract(m: &Model, edge: usize) -> Result<Model, MoveError> {
    check_edge(m, edge)?;
    let plan = contraction_plan(m, edge)?;
    let g = m.graph();
    let removed: Vec<&str> = m
        .orbit_of(edge)
        .edges()
        .iter()
        .map(|&e| g.edge(e).name.as_str())
        .collect();
    let rename: HashMap<&str, &str> = plan
        .iter()
        .map(|&(keep, gone)| (g.vertex_name(gone), g.vertex_name(keep)))
        .collect();
    let old = m.to_raw();
    let mut raw = RawModel::default();
    for v in &old.vertices {
        if !rename.contains_key(v.as_str()) {
            raw.vertex(v.clone());
        }
    }
    let target = |v: &str| rename.get(v).copied().unwrap_or(v).to_string();
    for e in &old.edges {
        if !removed.contains(&e.name.as_str()) {
            raw.edge(e.name.clone(), target(&e.ends[0]), target(&e.ends[1]));
        }
    }
    for (a, b) in &old.vmaps {
        if !rename.contains_key(a.as_str()) && !rename.contains_key(b.as_str()) {
            raw.vmap(a.clone(), b.clone());
        }
    }
    for em in &old.emaps {
        if !removed.contains(&em.edge.as_str()) {
            raw.emaps.push(em.clone());
        }
    }
    match Model::from_raw(&raw) {
        Ok(model) => Ok(model),
        Err(report) if report.has(crate::model::Rule::FixedDart) => Err(
            ContractError::FixedDartOverflow(g.vertex_name(plan[0].0).to_string()).into(),
        ),
        Err(report) => Err(MoveError::Invalid(report)),
    }
}

/// Orbits that [`contract`] accepts, by smallest edge.
pub fn legal_contractions(m: &Model) -> Vec<EdgeOrbit> {
    m.edge_orbits()
        .into_iter()
        .filter(|o| contraction_plan(m, o.representative()).is_ok())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Contract,
}

impl MoveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveKind::Contract => "contract",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: MoveKind,
    /// Edge names of the orbit, comma separated.
    pub orbit: String,
    pub before: InvariantTuple,
    pub after: InvariantTuple,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} g={} n={} m={}",
            self.kind.as_str(),
            self.orbit,
            self.after.genus,
            self.after.n,
            self.after.m
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    /// Every step keeps the invariant tuple.
    pub fn is_constant(&self) -> bool {
        self.steps.iter().all(|s| s.before == s.after)
            && self.steps.windows(2).all(|w| w[0].after == w[1].before)
    }
}

/// Contracts the legal orbit with the smallest edge name until none is left.
pub fn normalize(m: &Model) -> (Model, Trace) {
    let mut current = m.clone();
    let mut trace = Trace::default();
    while let Some(orbit) = legal_contractions(&current).first().copied() {
        let before = InvariantTuple::of(&current);
        let name = current.orbit_name(orbit);
        current = contract(&current, orbit.representative())
            .expect("legal contractions preserve validity");
        trace.steps.push(TraceStep {
            kind: MoveKind::Contract,
            orbit: name,
            before,
            after: InvariantTuple::of(&current),
        });
    }
    (current, trace)
}

/// True when cutting along every axial edge and every moved pair
/// disconnects the spine (vacuously true when there are none).
pub fn hyperelliptic_diagnostic(m: &Model) -> Result<bool, MoveError> {
    if crate::invariants::is_free(m) {
        return Err(MoveError::FreeModel);
    }
    for orbit in splittable_orbits(m) {
        if split(m, orbit.representative())?.connected_after {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{build_free, build_nonfree, CanonicalForm};
    use crate::classify::classify;
    use crate::invariants::{fixed_set, genus, FixedSetSummary};
    use crate::model::parse_model;

    fn model(body: &str) -> Model {
        parse_model(&format!("involution-graph v1\n{body}")).unwrap()
    }

    fn edge(m: &Model, name: &str) -> usize {
        m.graph().edge_index(name).unwrap()
    }

    const HEXAGON: &str = "vertex v0\nvertex v1\nvertex v2\nvertex v3\nvertex v4\nvertex v5\n\
        edge e0 v0 v1\nedge e1 v1 v2\nedge e2 v2 v3\nedge e3 v3 v4\nedge e4 v4 v5\nedge e5 v5 v0\n\
        vmap v0 v3\nvmap v1 v4\nvmap v2 v5\nemap e0 e3 fwd\nemap e1 e4 fwd\nemap e2 e5 fwd\n";

    #[test]
    fn split_free_loop_pair() {
        let m = build_free(1);
        let r = split(&m, edge(&m, "x1")).unwrap();
        assert!(r.connected_after);
        assert_eq!(r.betti_sum(), 1);
        assert_eq!(r.orbit_kind, SplitOrbitKind::MovedPair);
    }

    #[test]
    fn split_hyperelliptic_chain() {
        let m = build_nonfree(2, 0, 0).unwrap();
        let r = split(&m, edge(&m, "s1")).unwrap();
        assert!(!r.connected_after);
        assert_eq!(r.components.len(), 2);
        assert_eq!(r.betti_sum(), 0);
        assert!(r.components.iter().all(|c| c.action == ComponentAction::Preserved));
        assert_eq!(r.betti_sum(), r.expected_betti_sum(genus(&m)));
    }

    #[test]
    fn split_axial_loop() {
        let m = model("vertex v\nedge e v v\n");
        let r = split(&m, 0).unwrap();
        assert!(r.connected_after);
        assert_eq!(r.betti_sum(), 0);
    }

    #[test]
    fn split_swapped_components() {
        // Free genus-3 spine cut along the connecting pair: two swapped
        // bouquets of one loop each.
        let m = build_free(1);
        let r = split(&m, edge(&m, "s1")).unwrap();
        assert_eq!(r.components.len(), 2);
        assert!(r.components.iter().all(|c| c.action == ComponentAction::Swapped));
        assert_eq!(r.betti_sum(), 2);
        assert_eq!(r.expected_betti_sum(3), 2);
    }

    #[test]
    fn split_rejects_inverted() {
        let m = model("vertex v\nedge e v v\nemap e e inverted\n");
        assert!(matches!(split(&m, 0), Err(MoveError::InvertedOrbit(_))));
    }

    #[test]
    fn closing_an_arc() {
        let m = build_nonfree(1, 0, 0).unwrap();
        let poles = PoleComplex::new(&m).free_poles();
        let closed = attach_axial_edge(&m, poles[0], poles[1]).unwrap();
        assert_eq!(classify(&closed).unwrap(), CanonicalForm::NonFree { n: 0, m: 1, l: 0 });
    }

    #[test]
    fn joining_two_arcs() {
        let m = build_nonfree(2, 0, 0).unwrap();
        let a = Pole { vertex: 0, index: 0 };
        let b = Pole { vertex: 1, index: 0 };
        let joined = attach_axial_edge(&m, a, b).unwrap();
        assert_eq!(classify(&joined).unwrap(), CanonicalForm::NonFree { n: 1, m: 0, l: 1 });
        assert_eq!(genus(&joined), 2);
    }

    #[test]
    fn occupied_pole_is_rejected() {
        let m = model("vertex v\nedge e v v\n");
        let err = attach_axial_edge(&m, Pole { vertex: 0, index: 0 }, Pole { vertex: 0, index: 1 });
        assert!(matches!(err, Err(MoveError::PoleOccupied { .. })));
    }

    #[test]
    fn moved_pairs_add_two_handles() {
        let m = attach_moved_pair(&build_free(2), 0, 0).unwrap();
        assert_eq!(classify(&m).unwrap(), CanonicalForm::Free { n: 3 });
        let m = attach_moved_pair(&build_nonfree(2, 1, 0).unwrap(), 0, 0).unwrap();
        assert_eq!(classify(&m).unwrap(), CanonicalForm::NonFree { n: 2, m: 1, l: 1 });
    }

    #[test]
    fn inverted_loops_build_the_hyperelliptic_involution() {
        let mut m = build_nonfree(1, 0, 0).unwrap();
        for g in 1..=5 {
            m = attach_inverted_loop(&m, 0).unwrap();
            assert_eq!(classify(&m).unwrap(), CanonicalForm::NonFree { n: g + 1, m: 0, l: 0 });
        }
        let swapped = model("vertex a\nvertex b\nvmap a b\nedge e a b\nemap e e inverted\n");
        assert!(matches!(attach_inverted_loop(&swapped, 0), Err(MoveError::NotFixed(_))));
    }

    #[test]
    fn contract_axial_chain() {
        let m = model("vertex a\nvertex b\nedge e a b\nedge f b b\nemap f f inverted\n");
        assert_eq!(fixed_set(&m), FixedSetSummary { n_arcs: 2, m_circles: 0 });
        let c = contract(&m, edge(&m, "e")).unwrap();
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(genus(&c), 1);
        assert_eq!(fixed_set(&c), FixedSetSummary { n_arcs: 2, m_circles: 0 });
    }

    #[test]
    fn contract_antipodal_hexagon() {
        let m = model(HEXAGON);
        let c = contract(&m, edge(&m, "e0")).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (4, 4));
        assert_eq!(classify(&c).unwrap(), CanonicalForm::Free { n: 0 });
    }

    #[test]
    fn contract_pendant_pair_into_fixed_vertex() {
        // A fixed vertex with a swapped pair of pendant vertices; the pendants
        // are joined by an inverted edge.
        let m = model(
            "vertex u\nvertex p\nvertex q\nvmap p q\nedge e u p\nedge f u q\nedge i p q\nemap e f fwd\nemap i i inverted\n",
        );
        let before = InvariantTuple::of(&m);
        let c = contract(&m, edge(&m, "e")).unwrap();
        assert_eq!(c.vertex_count(), 1);
        assert_eq!(InvariantTuple::of(&c), before);
    }

    #[test]
    fn illegal_contractions() {
        let inverted = model("vertex v\nedge e v v\nemap e e inverted\n");
        assert!(matches!(
            contract(&inverted, 0),
            Err(MoveError::Contract(ContractError::Inverted(_)))
        ));
        let chain = build_nonfree(2, 0, 0).unwrap();
        assert!(matches!(
            contract(&chain, 0),
            Err(MoveError::Contract(ContractError::ParallelToImage(_)))
        ));
        let free = build_free(1);
        assert!(matches!(
            contract(&free, edge(&free, "x1")),
            Err(MoveError::Contract(ContractError::Loop(_)))
        ));
    }

    #[test]
    fn normalize_builders_is_a_no_op() {
        for c in [
            CanonicalForm::Free { n: 2 },
            CanonicalForm::NonFree { n: 2, m: 1, l: 1 },
        ] {
            let m = c.build();
            let (n, trace) = normalize(&m);
            assert_eq!(n, m);
            assert!(trace.steps.is_empty());
        }
    }

    #[test]
    fn normalize_hexagon() {
        let m = model(HEXAGON);
        let (n, trace) = normalize(&m);
        assert!(trace.is_constant());
        assert_eq!(n.vertex_count(), 2);
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].to_string(), "contract e0,e3 g=1 n=0 m=0");
    }

    #[test]
    fn diagnostic() {
        let bouquet = model("vertex v\nedge e v v\nemap e e inverted\nedge f v v\nemap f f inverted\n");
        assert!(hyperelliptic_diagnostic(&bouquet).unwrap());
        let axial = model("vertex v\nedge e v v\n");
        assert!(!hyperelliptic_diagnostic(&axial).unwrap());
        assert!(hyperelliptic_diagnostic(&build_nonfree(2, 0, 0).unwrap()).unwrap());
        assert_eq!(hyperelliptic_diagnostic(&build_free(0)), Err(MoveError::FreeModel));
    }
}
