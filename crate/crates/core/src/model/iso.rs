//! Equivariant isomorphism of spines by exhaustive backtracking.
//!
//! The search first builds a vertex bijection that conjugates the vertex
//! maps and preserves typed edge multiplicities, then matches edge orbits
//! dart by dart. It shares nothing with the canonical labeling used by the
//! census, so the two can check each other.

use thiserror::Error;

use super::{Dart, EdgeAction, EdgeOrbit, Model};

pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    /// Maximum number of search nodes before giving up.
    pub node_budget: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("isomorphism search exceeded its budget of {0} nodes")]
    BudgetExceeded(u64),
}

fn kind(action: EdgeAction) -> usize {
    match action {
        EdgeAction::Axial => 0,
        EdgeAction::Inverted => 1,
        EdgeAction::Moved { .. } => 2,
    }
}

/// Typed edge multiplicities between vertex pairs, plus per-vertex profiles.
struct Profile {
    n: usize,
    between: Vec<[u16; 3]>,
    vertex: Vec<(bool, [u16; 3], usize)>,
}

impl Profile {
    fn new(m: &Model) -> Self {
        let n = m.vertex_count();
        let mut between = vec![[0u16; 3]; n * n];
        let mut loops = vec![[0u16; 3]; n];
        for (e, edge) in m.graph().edges().iter().enumerate() {
            let k = kind(m.involution().edge_action(e));
            let [a, b] = edge.ends;
            between[a * n + b][k] += 1;
            if a != b {
                between[b * n + a][k] += 1;
            } else {
                loops[a][k] += 1;
            }
        }
        let vertex = (0..n)
            .map(|v| (m.involution().is_fixed_vertex(v), loops[v], m.graph().degree(v)))
            .collect();
        Profile { n, between, vertex }
    }

    fn count(&self, a: usize, b: usize) -> [u16; 3] {
        self.between[a * self.n + b]
    }
}

struct Search<'a> {
    m1: &'a Model,
    m2: &'a Model,
    p1: Profile,
    p2: Profile,
    order: Vec<usize>,
    phi: Vec<Option<usize>>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn tick(&mut self) -> Result<(), IsoError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(IsoError::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn compatible(&self, v: usize, w: usize) -> bool {
        if self.used[w] || self.p1.vertex[v] != self.p2.vertex[w] {
            return false;
        }
        (0..self.p1.n).all(|u| match self.phi[u] {
            Some(pu) => self.p1.count(u, v) == self.p2.count(pu, w),
            None => true,
        })
    }

    fn assign(&mut self, v: usize, w: usize) {
        self.phi[v] = Some(w);
        self.used[w] = true;
    }

    fn unassign(&mut self, v: usize, w: usize) {
        self.phi[v] = None;
        self.used[w] = false;
    }

    fn vertices(&mut self, depth: usize) -> Result<bool, IsoError> {
        self.tick()?;
        if depth == self.order.len() {
            return self.edges();
        }
        let v = self.order[depth];
        if self.phi[v].is_some() {
            return self.vertices(depth + 1);
        }
        let sv = self.m1.involution().vertex_image(v);
        for w in 0..self.p2.n {
            if !self.compatible(v, w) {
                continue;
            }
            let sw = self.m2.involution().vertex_image(w);
            self.assign(v, w);
            let ok = if sv == v {
                true
            } else if self.compatible(sv, sw) {
                self.assign(sv, sw);
                true
            } else {
                false
            };
            if ok {
                if self.vertices(depth + 1)? {
                    return Ok(true);
                }
                if sv != v {
                    self.unassign(sv, sw);
                }
            }
            self.unassign(v, w);
        }
        Ok(false)
    }

    fn edges(&mut self) -> Result<bool, IsoError> {
        let orbits1 = self.m1.edge_orbits();
        let orbits2 = self.m2.edge_orbits();
        if orbits1.len() != orbits2.len() {
            return Ok(false);
        }
        let mut psi = vec![None; 2 * self.m1.edge_count()];
        let mut taken = vec![false; orbits2.len()];
        self.match_orbits(&orbits1, &orbits2, 0, &mut psi, &mut taken)
    }

    fn match_orbits(
        &mut self,
        orbits1: &[EdgeOrbit],
        orbits2: &[EdgeOrbit],
        i: usize,
        psi: &mut Vec<Option<Dart>>,
        taken: &mut Vec<bool>,
    ) -> Result<bool, IsoError> {
        self.tick()?;
        let Some(&orbit) = orbits1.get(i) else {
            return Ok(true);
        };
        let e = orbit.representative();
        let (g1, g2) = (self.m1.graph(), self.m2.graph());
        let (inv1, inv2) = (self.m1.involution(), self.m2.involution());
        for j in 0..orbits2.len() {
            if taken[j] || std::mem::discriminant(&orbits2[j]) != std::mem::discriminant(&orbit) {
                continue;
            }
            for &target in &orbits2[j].edges() {
                for flip in 0..2 {
                    let image = |s: usize| Dart::new(target, s ^ flip);
                    let ends_ok = (0..2).all(|s| {
                        self.phi[g1.endpoint(Dart::new(e, s))] == Some(g2.endpoint(image(s)))
                    });
                    if !ends_ok {
                        continue;
                    }
                    let mut assigned = Vec::with_capacity(4);
                    for s in 0..2 {
                        let d = Dart::new(e, s);
                        assigned.push((d, image(s)));
                        let sd = inv1.dart_image(d);
                        if sd.edge() != e {
                            assigned.push((sd, inv2.dart_image(image(s))));
                        }
                    }
                    let consistent = assigned
                        .iter()
                        .all(|&(d, t)| self.phi[g1.endpoint(d)] == Some(g2.endpoint(t)));
                    if !consistent {
                        continue;
                    }
                    for &(d, t) in &assigned {
                        psi[d.0] = Some(t);
                    }
                    taken[j] = true;
                    if self.match_orbits(orbits1, orbits2, i + 1, psi, taken)? {
                        return Ok(true);
                    }
                    taken[j] = false;
                    for &(d, _) in &assigned {
                        psi[d.0] = None;
                    }
                }
            }
        }
        Ok(false)
    }
}

/// Is there a spine isomorphism conjugating one involution to the other?
pub fn equivariant_isomorphic(m1: &Model, m2: &Model, opts: IsoOptions) -> Result<bool, IsoError> {
    if m1.vertex_count() != m2.vertex_count() || m1.edge_count() != m2.edge_count() {
        return Ok(false);
    }
    let p1 = Profile::new(m1);
    let p2 = Profile::new(m2);
    let mut a = p1.vertex.clone();
    let mut b = p2.vertex.clone();
    a.sort();
    b.sort();
    if a != b {
        return Ok(false);
    }

    // Breadth-first order so that each vertex after the first is constrained
    // by an already mapped neighbour.
    let n = m1.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for edge in m1.graph().edges() {
                for (x, y) in [(edge.ends[0], edge.ends[1]), (edge.ends[1], edge.ends[0])] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        order.push(y);
                    }
                }
            }
        }
    }

    let mut search = Search {
        m1,
        m2,
        p1,
        p2,
        order,
        phi: vec![None; n],
        used: vec![false; n],
        nodes: 0,
        budget: opts.node_budget,
    };
    search.vertices(0)
}
