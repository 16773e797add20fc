#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use handlebody::invariants::{fixed_set, genus, is_free, InvariantTuple, PoleComplex};
use handlebody::model::{Model, OrbitTag, RawModel};
use handlebody::moves::{attach_axial_edge, attach_inverted_loop, attach_moved_pair};
use handlebody::{build_free, build_nonfree};

/// One growth step, interpreted modulo what the current model offers.
#[derive(Clone, Copy, Debug)]
pub enum Step {
    Axial(usize, usize),
    Moved(usize, usize),
    Inverted(usize),
}

pub fn seed(kind: usize) -> Model {
    match kind % 3 {
        0 => build_nonfree(1, 0, 0).unwrap(),
        1 => build_free(0),
        _ => build_nonfree(2, 0, 0).unwrap(),
    }
}

/// Applies `step` if the model has a site for it.
pub fn apply(m: &Model, step: Step) -> Option<Model> {
    match step {
        Step::Axial(i, j) => {
            let poles = PoleComplex::new(m).free_poles();
            if poles.len() < 2 {
                return None;
            }
            let a = poles[i % poles.len()];
            let b = poles[j % poles.len()];
            if a == b {
                return None;
            }
            Some(attach_axial_edge(m, a, b).unwrap())
        }
        Step::Moved(u, w) => Some(attach_moved_pair(m, u % m.vertex_count(), w % m.vertex_count()).unwrap()),
        Step::Inverted(v) => {
            let fixed: Vec<usize> = m.fixed_vertices().collect();
            if fixed.is_empty() {
                return None;
            }
            Some(attach_inverted_loop(m, fixed[v % fixed.len()]).unwrap())
        }
    }
}

pub fn grow(kind: usize, steps: &[Step]) -> Model {
    steps.iter().fold(seed(kind), |m, &s| apply(&m, s).unwrap_or(m))
}

pub fn random_step(rng: &mut impl Rng) -> Step {
    let (a, b) = (rng.gen_range(0..64), rng.gen_range(0..64));
    match rng.gen_range(0..3) {
        0 => Step::Axial(a, b),
        1 => Step::Moved(a, b),
        _ => Step::Inverted(a),
    }
}

pub fn tuple(m: &Model) -> InvariantTuple {
    InvariantTuple::of(m)
}

pub fn describe(m: &Model) -> (usize, bool, usize, usize) {
    let f = fixed_set(m);
    (genus(m), is_free(m), f.n_arcs, f.m_circles)
}

/// The same model under fresh names, shuffled declarations and reoriented
/// edges.
pub fn scramble(m: &Model, seed: u64) -> RawModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = m.to_raw();
    let mut vperm: Vec<usize> = (0..raw.vertices.len()).collect();
    vperm.shuffle(&mut rng);
    let mut eperm: Vec<usize> = (0..raw.edges.len()).collect();
    eperm.shuffle(&mut rng);
    let vname = |name: &str| {
        let i = raw.vertices.iter().position(|v| v == name).unwrap();
        format!("p{}", vperm[i])
    };
    let ename = |name: &str| {
        let i = raw.edges.iter().position(|e| e.name == name).unwrap();
        format!("h{}", eperm[i])
    };
    let flipped: Vec<bool> = raw.edges.iter().map(|_| rng.gen_bool(0.5)).collect();
    let is_flipped = |name: &str| flipped[raw.edges.iter().position(|e| e.name == name).unwrap()];

    let mut out = RawModel::default();
    for v in &raw.vertices {
        out.vertex(vname(v));
    }
    for (e, &flip) in raw.edges.iter().zip(&flipped) {
        let [a, b] = [vname(&e.ends[0]), vname(&e.ends[1])];
        if flip {
            out.edge(ename(&e.name), b, a);
        } else {
            out.edge(ename(&e.name), a, b);
        }
    }
    for (a, b) in &raw.vmaps {
        if rng.gen_bool(0.5) {
            out.vmap(vname(a), vname(b));
        } else {
            out.vmap(vname(b), vname(a));
        }
    }
    for em in &raw.emaps {
        let toggle = is_flipped(&em.edge) ^ is_flipped(&em.image);
        let tag = match em.tag {
            OrbitTag::Fwd | OrbitTag::Rev if toggle => {
                if em.tag == OrbitTag::Fwd {
                    OrbitTag::Rev
                } else {
                    OrbitTag::Fwd
                }
            }
            t => t,
        };
        let (e, f) = if em.edge != em.image && rng.gen_bool(0.5) {
            (ename(&em.image), ename(&em.edge))
        } else {
            (ename(&em.edge), ename(&em.image))
        };
        out.emap(e, f, tag);
    }
    out.vertices.shuffle(&mut rng);
    out.edges.shuffle(&mut rng);
    out.vmaps.shuffle(&mut rng);
    out.emaps.shuffle(&mut rng);
    out
}
