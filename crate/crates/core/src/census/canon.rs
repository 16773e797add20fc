//! Compact spines and their canonical codes.
//!
//! Up to relabeling, a spine is determined by its vertex map and the
//! multiset of edge orbits described by endpoint pairs: an axial or inverted
//! edge by its endpoints, a moved pair `{e, σe}` by the endpoints of either
//! edge (the other is their image, and the dart alignment is forced up to a
//! relabeling of loop darts). The canonical code is the lexicographically
//! smallest such description over the vertex orderings produced by
//! individualization and refinement.

use crate::model::{Model, OrbitTag, RawModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum OrbitKind {
    Axial = 0,
    Inverted = 1,
    Moved = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Orbit {
    pub kind: OrbitKind,
    pub ends: [u8; 2],
}

impl Orbit {
    pub fn edge_count(self) -> usize {
        if self.kind == OrbitKind::Moved {
            2
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Spine {
    pub sigma: Vec<u8>,
    pub orbits: Vec<Orbit>,
}

pub(crate) type Code = Vec<u8>;

impl Spine {
    pub fn vertex_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn edge_count(&self) -> usize {
        self.orbits.iter().map(|o| o.edge_count()).sum()
    }

    pub fn genus(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_fixed(&self, v: usize) -> bool {
        self.sigma[v] as usize == v
    }

    /// Darts fixed by the involution at each vertex.
    pub fn fixed_darts(&self) -> Vec<u8> {
        let mut count = vec![0u8; self.vertex_count()];
        for o in &self.orbits {
            if o.kind == OrbitKind::Axial {
                count[o.ends[0] as usize] += 1;
                count[o.ends[1] as usize] += 1;
            }
        }
        count
    }

    /// Every edge as `(kind, a, b)`, moved pairs expanded.
    fn edges(&self) -> Vec<(OrbitKind, usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for o in &self.orbits {
            let [a, b] = [o.ends[0] as usize, o.ends[1] as usize];
            out.push((o.kind, a, b));
            if o.kind == OrbitKind::Moved {
                out.push((o.kind, self.sigma[a] as usize, self.sigma[b] as usize));
            }
        }
        out
    }

    /// Converts to a named [`Model`] with vertices `v0..` and edges `e0..`.
    pub fn to_model(&self) -> Model {
        let width = self.vertex_count().max(1).to_string().len();
        let vname = |v: usize| format!("v{v:0width$}");
        let ewidth = self.edge_count().max(1).to_string().len();
        let mut raw = RawModel::default();
        for v in 0..self.vertex_count() {
            raw.vertex(vname(v));
            let s = self.sigma[v] as usize;
            if s > v {
                raw.vmap(vname(v), vname(s));
            }
        }
        let mut k = 0;
        let mut fresh = || {
            let name = format!("e{k:0ewidth$}");
            k += 1;
            name
        };
        for o in &self.orbits {
            let [a, b] = [o.ends[0] as usize, o.ends[1] as usize];
            let e = fresh();
            raw.edge(e.clone(), vname(a), vname(b));
            match o.kind {
                OrbitKind::Axial => {
                    raw.emap(e.clone(), e, OrbitTag::Axial);
                }
                OrbitKind::Inverted => {
                    raw.emap(e.clone(), e, OrbitTag::Inverted);
                }
                OrbitKind::Moved => {
                    let f = fresh();
                    let (sa, sb) = (self.sigma[a] as usize, self.sigma[b] as usize);
                    raw.edge(f.clone(), vname(sa), vname(sb));
                    raw.emap(e, f, OrbitTag::Fwd);
                }
            }
        }
        Model::from_raw(&raw).expect("census spines are valid")
    }

    /// Relabels by `pos` (old vertex -> new position) and returns the code.
    fn encode(&self, pos: &[usize]) -> Code {
        let n = self.vertex_count();
        let mut code = Vec::with_capacity(1 + n + 3 * self.orbits.len());
        code.push(n as u8);
        let mut sigma = vec![0u8; n];
        for v in 0..n {
            sigma[pos[v]] = pos[self.sigma[v] as usize] as u8;
        }
        code.extend_from_slice(&sigma);
        let mut descs: Vec<[u8; 3]> = self
            .orbits
            .iter()
            .map(|o| {
                let [a, b] = [pos[o.ends[0] as usize], pos[o.ends[1] as usize]];
                let pair = [a.min(b) as u8, a.max(b) as u8];
                let pair = if o.kind == OrbitKind::Moved {
                    let (sa, sb) = (
                        pos[self.sigma[o.ends[0] as usize] as usize],
                        pos[self.sigma[o.ends[1] as usize] as usize],
                    );
                    pair.min([sa.min(sb) as u8, sa.max(sb) as u8])
                } else {
                    pair
                };
                [o.kind as u8, pair[0], pair[1]]
            })
            .collect();
        descs.sort_unstable();
        for d in descs {
            code.extend_from_slice(&d);
        }
        code
    }

    /// Canonical code: equal for two spines iff they are equivariantly
    /// isomorphic.
    pub fn canonical_code(&self) -> Code {
        let n = self.vertex_count();
        let edges = self.edges();
        let mut adj: Vec<Vec<(u8, usize)>> = vec![Vec::new(); n];
        for &(k, a, b) in &edges {
            adj[a].push((k as u8, b));
            adj[b].push((k as u8, a));
        }
        let initial: Vec<(bool, usize)> = (0..n).map(|v| (self.is_fixed(v), adj[v].len())).collect();
        let colors = ranks(&initial);
        let mut best: Option<Code> = None;
        self.search(refine(colors, &adj, &self.sigma), &adj, &mut best);
        best.expect("at least one leaf")
    }

    fn search(&self, colors: Vec<usize>, adj: &[Vec<(u8, usize)>], best: &mut Option<Code>) {
        let n = colors.len();
        let mut size = vec![0usize; n];
        for &c in &colors {
            size[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| size[c] > 1) else {
            let code = self.encode(&colors);
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        };
        for v in (0..n).filter(|&v| colors[v] == target) {
            let split: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| if c > target || (c == target && w != v) { c + 1 } else { c })
                .collect();
            self.search(refine(split, adj, &self.sigma), adj, best);
        }
    }
}

/// Dense ranks of comparable keys: equal keys share a rank, order kept.
fn ranks<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("present"))
        .collect()
}

/// A vertex's colour, its image's colour and its typed neighbour colours.
type RefineKey = (usize, usize, Vec<(u8, usize)>);

/// Colour refinement by (colour, colour of the image, typed neighbour
/// colours) until stable. The new colouring refines the old one and keeps
/// its cell order.
fn refine(mut colors: Vec<usize>, adj: &[Vec<(u8, usize)>], sigma: &[u8]) -> Vec<usize> {
    let n = colors.len();
    let mut cells = colors.iter().copied().max().map_or(0, |c| c + 1);
    loop {
        let keys: Vec<RefineKey> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u8, usize)> = adj[v].iter().map(|&(k, w)| (k, colors[w])).collect();
                nb.sort_unstable();
                (colors[v], colors[sigma[v] as usize], nb)
            })
            .collect();
        let next = ranks(&keys);
        let next_cells = next.iter().copied().max().map_or(0, |c| c + 1);
        colors = next;
        if next_cells == cells {
            return colors;
        }
        cells = next_cells;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit(kind: OrbitKind, a: u8, b: u8) -> Orbit {
        Orbit { kind, ends: [a, b] }
    }

    #[test]
    fn relabeled_spines_share_a_code() {
        // Path u - w - x of fixed vertices with axial edges, written two ways.
        let a = Spine {
            sigma: vec![0, 1, 2],
            orbits: vec![orbit(OrbitKind::Axial, 0, 1), orbit(OrbitKind::Axial, 1, 2)],
        };
        let b = Spine {
            sigma: vec![0, 1, 2],
            orbits: vec![orbit(OrbitKind::Axial, 2, 0), orbit(OrbitKind::Axial, 1, 2)],
        };
        assert_eq!(a.canonical_code(), b.canonical_code());
    }

    #[test]
    fn moved_pair_descriptors_are_orbit_invariant() {
        // Antipodal square: the orbit {01, 23} written from either edge.
        let sigma = vec![2, 3, 0, 1];
        let a = Spine {
            sigma: sigma.clone(),
            orbits: vec![orbit(OrbitKind::Moved, 0, 1), orbit(OrbitKind::Moved, 1, 2)],
        };
        let b = Spine {
            sigma,
            orbits: vec![orbit(OrbitKind::Moved, 2, 3), orbit(OrbitKind::Moved, 3, 0)],
        };
        assert_eq!(a.canonical_code(), b.canonical_code());
    }

    #[test]
    fn kinds_are_distinguished() {
        let axial = Spine {
            sigma: vec![0],
            orbits: vec![orbit(OrbitKind::Axial, 0, 0)],
        };
        let inverted = Spine {
            sigma: vec![0],
            orbits: vec![orbit(OrbitKind::Inverted, 0, 0)],
        };
        assert_ne!(axial.canonical_code(), inverted.canonical_code());
    }

    #[test]
    fn to_model_preserves_counts() {
        let s = Spine {
            sigma: vec![0, 2, 1],
            orbits: vec![orbit(OrbitKind::Moved, 0, 1), orbit(OrbitKind::Inverted, 1, 2)],
        };
        let m = s.to_model();
        assert_eq!(m.vertex_count(), 3);
        assert_eq!(m.edge_count(), 3);
        assert_eq!(crate::invariants::genus(&m), s.genus());
    }
}
