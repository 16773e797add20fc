//! Equivariant graph spines.
//!
//! A [`Model`] is a connected finite graph (vertices and darts) together with
//! an automorphism of order at most two. Vertices stand for the balls of a
//! handle decomposition and edges for its 1-handles. Every fixed vertex and
//! every self-mapped edge carries a half-turn rotation, so the encoded
//! handlebody involution is never the identity map even when the graph
//! automorphism is.
//!
//! Models are built from a [`RawModel`] (names and unchecked references) by
//! [`Model::from_raw`], which runs [`validate`] and then stores the result in
//! canonical order: vertices and edges sorted by name, and every non-loop edge
//! oriented so that its lexicographically smaller endpoint comes first.

mod format;
mod iso;
mod validate;

use std::collections::HashMap;
use std::fmt;

pub use format::{parse_model, serialize_model, ParseError};
pub use iso::{equivariant_isomorphic, IsoError, IsoOptions, DEFAULT_NODE_BUDGET};
pub use validate::{validate, Rule, ValidationReport, Violation};

/// A half-edge. Dart `2e` is the first end of edge `e`, dart `2e + 1` the
/// second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(pub usize);

impl Dart {
    pub fn new(edge: usize, side: usize) -> Self {
        debug_assert!(side < 2);
        Dart(2 * edge + side)
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn side(self) -> usize {
        self.0 % 2
    }

    /// The other end of the same edge.
    pub fn reversal(self) -> Dart {
        Dart(self.0 ^ 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub name: String,
    /// Endpoint of the first and second dart.
    pub ends: [usize; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

/// A finite multigraph with named vertices and edges. Loops and parallel
/// edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Self {
        Graph { vertices, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..2 * self.edges.len()).map(Dart)
    }

    pub fn endpoint(&self, d: Dart) -> usize {
        self.edges[d.edge()].ends[d.side()]
    }

    /// Number of darts incident to `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.darts().filter(|&d| self.endpoint(d) == v).count()
    }

    /// First Betti number `|E| - |V| + c` where `c` is the number of
    /// connected components.
    pub fn betti(&self) -> usize {
        let c = self.component_labels().1;
        self.edges.len() + c - self.vertices.len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().1 == 1
    }

    /// Component label of each vertex, and the number of components. Labels
    /// are assigned in order of each component's smallest vertex.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        component_labels(
            self.vertices.len(),
            self.edges.iter().map(|e| (e.ends[0], e.ends[1])),
        )
    }
}

/// Connected components of a multigraph given as an edge list.
pub(crate) fn component_labels(
    vertex_count: usize,
    edges: impl Iterator<Item = (usize, usize)>,
) -> (Vec<usize>, usize) {
    let mut parent: Vec<usize> = (0..vertex_count).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label = vec![usize::MAX; vertex_count];
    let mut count = 0;
    for v in 0..vertex_count {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        label[v] = label[r];
    }
    (label, count)
}

/// Local model of a self-mapped edge (1-handle mapped onto itself).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SelfEdgeType {
    /// Rotation about the core; each attaching disk is mapped to itself.
    Axial,
    /// Rotation about a diameter of the co-core; the attaching disks are
    /// exchanged.
    Inverted,
}

impl SelfEdgeType {
    pub fn as_str(self) -> &'static str {
        match self {
            SelfEdgeType::Axial => "axial",
            SelfEdgeType::Inverted => "inverted",
        }
    }
}

/// How the involution acts on one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeAction {
    Axial,
    Inverted,
    /// The edge is sent to a different edge `image`; when `reversed` the
    /// first dart goes to the image's second dart.
    Moved { image: usize, reversed: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Involution {
    vertex_map: Vec<usize>,
    edge_action: Vec<EdgeAction>,
}

impl Involution {
    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_action(&self, e: usize) -> EdgeAction {
        self.edge_action[e]
    }

    pub fn edge_image(&self, e: usize) -> usize {
        match self.edge_action[e] {
            EdgeAction::Moved { image, .. } => image,
            _ => e,
        }
    }

    pub fn dart_image(&self, d: Dart) -> Dart {
        match self.edge_action[d.edge()] {
            EdgeAction::Axial => d,
            EdgeAction::Inverted => d.reversal(),
            EdgeAction::Moved { image, reversed } => Dart::new(image, d.side() ^ reversed as usize),
        }
    }

    pub fn self_edge_type(&self, e: usize) -> Option<SelfEdgeType> {
        match self.edge_action[e] {
            EdgeAction::Axial => Some(SelfEdgeType::Axial),
            EdgeAction::Inverted => Some(SelfEdgeType::Inverted),
            EdgeAction::Moved { .. } => None,
        }
    }

    pub fn is_fixed_vertex(&self, v: usize) -> bool {
        self.vertex_map[v] == v
    }
}

/// An orbit of the involution on edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeOrbit {
    Axial(usize),
    Inverted(usize),
    /// Two distinct edges exchanged by the involution, smaller index first.
    Moved(usize, usize),
}

impl EdgeOrbit {
    pub fn edges(self) -> Vec<usize> {
        match self {
            EdgeOrbit::Axial(e) | EdgeOrbit::Inverted(e) => vec![e],
            EdgeOrbit::Moved(e, f) => vec![e, f],
        }
    }

    pub fn representative(self) -> usize {
        match self {
            EdgeOrbit::Axial(e) | EdgeOrbit::Inverted(e) | EdgeOrbit::Moved(e, _) => e,
        }
    }
}

/// A validated equivariant spine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    graph: Graph,
    involution: Involution,
}

impl Model {
    /// Validates `raw` and stores it in canonical order.
    pub fn from_raw(raw: &RawModel) -> Result<Model, ValidationReport> {
        let report = validate(raw);
        if !report.is_ok() {
            return Err(report);
        }
        Ok(validate::assemble(raw))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn involution(&self) -> &Involution {
        &self.involution
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn fixed_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| self.involution.is_fixed_vertex(v))
    }

    /// Darts fixed by the involution at `v`, in edge order.
    pub fn fixed_darts_at(&self, v: usize) -> Vec<Dart> {
        self.graph
            .darts()
            .filter(|&d| self.graph.endpoint(d) == v && self.involution.dart_image(d) == d)
            .collect()
    }

    /// Edge orbits ordered by their smallest edge.
    pub fn edge_orbits(&self) -> Vec<EdgeOrbit> {
        (0..self.edge_count())
            .filter_map(|e| match self.involution.edge_action(e) {
                EdgeAction::Axial => Some(EdgeOrbit::Axial(e)),
                EdgeAction::Inverted => Some(EdgeOrbit::Inverted(e)),
                EdgeAction::Moved { image, .. } if e < image => Some(EdgeOrbit::Moved(e, image)),
                EdgeAction::Moved { .. } => None,
            })
            .collect()
    }

    /// The orbit containing edge `e`.
    pub fn orbit_of(&self, e: usize) -> EdgeOrbit {
        match self.involution.edge_action(e) {
            EdgeAction::Axial => EdgeOrbit::Axial(e),
            EdgeAction::Inverted => EdgeOrbit::Inverted(e),
            EdgeAction::Moved { image, .. } => EdgeOrbit::Moved(e.min(image), e.max(image)),
        }
    }

    pub fn orbit_name(&self, orbit: EdgeOrbit) -> String {
        orbit
            .edges()
            .iter()
            .map(|&e| self.graph.edge(e).name.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Back to unchecked form, using the canonical orbit listing.
    pub fn to_raw(&self) -> RawModel {
        let g = &self.graph;
        let vertices = g.vertices.clone();
        let edges = g
            .edges
            .iter()
            .map(|e| RawEdge {
                name: e.name.clone(),
                ends: [g.vertices[e.ends[0]].clone(), g.vertices[e.ends[1]].clone()],
            })
            .collect();
        let vmaps = (0..g.vertex_count())
            .filter(|&v| self.involution.vertex_image(v) > v)
            .map(|v| {
                (
                    g.vertices[v].clone(),
                    g.vertices[self.involution.vertex_image(v)].clone(),
                )
            })
            .collect();
        let emaps = self
            .edge_orbits()
            .into_iter()
            .map(|orbit| {
                let (e, f, tag) = match orbit {
                    EdgeOrbit::Axial(e) => (e, e, OrbitTag::Axial),
                    EdgeOrbit::Inverted(e) => (e, e, OrbitTag::Inverted),
                    EdgeOrbit::Moved(e, f) => {
                        let reversed = matches!(
                            self.involution.edge_action(e),
                            EdgeAction::Moved { reversed: true, .. }
                        );
                        (e, f, if reversed { OrbitTag::Rev } else { OrbitTag::Fwd })
                    }
                };
                RawEdgeOrbit {
                    edge: g.edges[e].name.clone(),
                    image: g.edges[f].name.clone(),
                    tag,
                }
            })
            .collect();
        RawModel {
            vertices,
            edges,
            vmaps,
            emaps,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_model(self))
    }
}

/// Tag of an `emap` line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrbitTag {
    Axial,
    Inverted,
    Fwd,
    Rev,
}

impl OrbitTag {
    pub fn as_str(self) -> &'static str {
        match self {
            OrbitTag::Axial => "axial",
            OrbitTag::Inverted => "inverted",
            OrbitTag::Fwd => "fwd",
            OrbitTag::Rev => "rev",
        }
    }

    pub fn parse(s: &str) -> Option<OrbitTag> {
        match s {
            "axial" => Some(OrbitTag::Axial),
            "inverted" => Some(OrbitTag::Inverted),
            "fwd" => Some(OrbitTag::Fwd),
            "rev" => Some(OrbitTag::Rev),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RawEdge {
    pub name: String,
    pub ends: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RawEdgeOrbit {
    pub edge: String,
    pub image: String,
    pub tag: OrbitTag,
}

/// Unchecked spine data, as read from text or assembled by hand. Nothing is
/// assumed about it; [`validate`] reports what is wrong.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawModel {
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
    /// Vertex pairs `a -> b` (and `b -> a`).
    pub vmaps: Vec<(String, String)>,
    pub emaps: Vec<RawEdgeOrbit>,
}

impl RawModel {
    pub fn vertex(&mut self, name: impl Into<String>) -> &mut Self {
        self.vertices.push(name.into());
        self
    }

    pub fn edge(
        &mut self,
        name: impl Into<String>,
        a: impl Into<String>,
        b: impl Into<String>,
    ) -> &mut Self {
        self.edges.push(RawEdge {
            name: name.into(),
            ends: [a.into(), b.into()],
        });
        self
    }

    pub fn vmap(&mut self, a: impl Into<String>, b: impl Into<String>) -> &mut Self {
        self.vmaps.push((a.into(), b.into()));
        self
    }

    pub fn emap(&mut self, e: impl Into<String>, f: impl Into<String>, tag: OrbitTag) -> &mut Self {
        self.emaps.push(RawEdgeOrbit {
            edge: e.into(),
            image: f.into(),
            tag,
        });
        self
    }

    /// Smallest `prefix{k}` (k >= 1) not used as an edge name.
    pub fn fresh_edge_name(&self, prefix: &str) -> String {
        fresh_name(prefix, self.edges.iter().map(|e| e.name.as_str()))
    }

    pub fn fresh_vertex_name(&self, prefix: &str) -> String {
        fresh_name(prefix, self.vertices.iter().map(String::as_str))
    }
}

fn fresh_name<'a>(prefix: &str, taken: impl Iterator<Item = &'a str>) -> String {
    let taken: std::collections::HashSet<&str> = taken.collect();
    (1..)
        .map(|k| format!("{prefix}{k}"))
        .find(|n| !taken.contains(n.as_str()))
        .expect("unbounded name supply")
}

pub(crate) fn index_by_name(names: &[String]) -> HashMap<&str, usize> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        map.entry(n.as_str()).or_insert(i);
    }
    map
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axial_loop() -> RawModel {
        let mut raw = RawModel::default();
        raw.vertex("v").edge("e", "v", "v").emap("e", "e", OrbitTag::Axial);
        raw
    }

    #[test]
    fn dart_arithmetic() {
        let d = Dart::new(3, 1);
        assert_eq!(d.edge(), 3);
        assert_eq!(d.side(), 1);
        assert_eq!(d.reversal(), Dart::new(3, 0));
        assert_eq!(d.reversal().reversal(), d);
    }

    #[test]
    fn edges_are_oriented_and_sorted() {
        let mut raw = RawModel::default();
        raw.vertex("b")
            .vertex("a")
            .edge("y", "b", "a")
            .edge("x", "a", "b")
            .vmap("a", "b")
            .emap("x", "y", OrbitTag::Fwd);
        let m = Model::from_raw(&raw).unwrap();
        assert_eq!(m.graph().vertex_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(m.graph().edge(0).name, "x");
        assert_eq!(m.graph().edge(1).name, "y");
        assert_eq!(m.graph().edge(1).ends, [0, 1]);
        // y was flipped, so x's first dart (at a) now lands on y's second dart (at b).
        let inv = m.involution();
        assert_eq!(inv.dart_image(Dart::new(0, 0)), Dart::new(1, 1));
        assert_eq!(m.graph().endpoint(Dart::new(1, 1)), 1);
    }

    #[test]
    fn dart_map_is_an_involution_commuting_with_reversal() {
        let m = Model::from_raw(&axial_loop()).unwrap();
        for d in m.graph().darts() {
            let inv = m.involution();
            assert_eq!(inv.dart_image(inv.dart_image(d)), d);
            assert_eq!(inv.dart_image(d.reversal()), inv.dart_image(d).reversal());
        }
        assert_eq!(m.fixed_darts_at(0).len(), 2);
    }

    #[test]
    fn fresh_names_skip_taken_ones() {
        let mut raw = axial_loop();
        raw.edge("e1", "v", "v");
        assert_eq!(raw.fresh_edge_name("e"), "e2");
        assert_eq!(raw.fresh_vertex_name("w"), "w1");
    }
}
