//! The two families of the classification, their minimal spines, and the
//! per-genus class lists.
//!
//! * `I_g`, `g = 2n + 1`: the free involution. Spine: two swapped vertices
//!   `a`, `b` joined by a swapped pair of edges, plus `n` loops at `a`
//!   exchanged with `n` loops at `b`.
//! * `L_g^{n,m}`, `g = n + 2m + 2l - 1`, `n + 2m >= 1`: fixed set of `n` arcs
//!   and `m` circles. Spine: a chain of fixed vertices `u1 .. u(n+m)` linked
//!   by swapped edge pairs, an axial loop on each of the last `m` vertices,
//!   and `l` swapped loop pairs at `u1`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::invariants::BoundaryData;
use crate::model::{Model, OrbitTag, RawModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonicalForm {
    /// `I_{2n+1}`.
    Free { n: usize },
    /// `L_{n+2m+2l-1}^{n,m}`.
    NonFree { n: usize, m: usize, l: usize },
}

impl CanonicalForm {
    pub fn genus(self) -> usize {
        match self {
            CanonicalForm::Free { n } => 2 * n + 1,
            CanonicalForm::NonFree { n, m, l } => n + 2 * m + 2 * l - 1,
        }
    }

    pub fn is_free(self) -> bool {
        matches!(self, CanonicalForm::Free { .. })
    }

    /// `I_3`, `L_4^{1,1}`.
    pub fn display(self) -> String {
        match self {
            CanonicalForm::Free { .. } => format!("I_{}", self.genus()),
            CanonicalForm::NonFree { n, m, .. } => format!("L_{}^{{{n},{m}}}", self.genus()),
        }
    }

    /// Boundary fixed points and quotient genus, from the closed formulas.
    pub fn boundary_data(self) -> BoundaryData {
        match self {
            CanonicalForm::Free { n } => BoundaryData {
                boundary_fixed_points: 0,
                boundary_quotient_genus: n + 1,
            },
            CanonicalForm::NonFree { n, m, l } => BoundaryData {
                boundary_fixed_points: 2 * n,
                boundary_quotient_genus: m + l,
            },
        }
    }

    /// Edge count of the minimal spine built for this class.
    pub fn builder_edge_count(self) -> usize {
        match self {
            CanonicalForm::Free { n } => 2 + 2 * n,
            CanonicalForm::NonFree { n, m, l } => 2 * (n + m - 1) + m + 2 * l,
        }
    }

    pub fn build(self) -> Model {
        match self {
            CanonicalForm::Free { n } => build_free(n),
            CanonicalForm::NonFree { n, m, l } => {
                build_nonfree(n, m, l).expect("canonical forms satisfy n + 2m >= 1")
            }
        }
    }

    pub fn record(self) -> ClassRecord {
        let (variant, n, m, l) = match self {
            CanonicalForm::Free { n } => ("free", n, 0, 0),
            CanonicalForm::NonFree { n, m, l } => ("nonfree", n, m, l),
        };
        ClassRecord {
            variant,
            g: self.genus(),
            n,
            m,
            l,
            display: self.display(),
        }
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// JSON shape of a class. For `Free`, `n` is the family parameter of
/// `I_{2n+1}` and `m`, `l` are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    pub variant: &'static str,
    pub g: usize,
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub display: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("L^{{n,m}} needs n + 2m >= 1: a non-free involution has a nonempty fixed set")]
    EmptyFixedSet,
}

pub fn build_free(n: usize) -> Model {
    let mut raw = RawModel::default();
    raw.vertex("a")
        .vertex("b")
        .vmap("a", "b")
        .edge("s1", "a", "b")
        .edge("t1", "a", "b")
        .emap("s1", "t1", OrbitTag::Rev);
    for k in 1..=n {
        let (x, y) = (format!("x{k}"), format!("y{k}"));
        raw.edge(x.clone(), "a", "a")
            .edge(y.clone(), "b", "b")
            .emap(x, y, OrbitTag::Fwd);
    }
    Model::from_raw(&raw).expect("free builder output is valid")
}

pub fn build_nonfree(n: usize, m: usize, l: usize) -> Result<Model, BuildError> {
    if n + 2 * m == 0 {
        return Err(BuildError::EmptyFixedSet);
    }
    let k = n + m;
    let u = |i: usize| format!("u{i}");
    let mut raw = RawModel::default();
    for i in 1..=k {
        raw.vertex(u(i));
    }
    for i in 1..k {
        let (s, t) = (format!("s{i}"), format!("t{i}"));
        raw.edge(s.clone(), u(i), u(i + 1))
            .edge(t.clone(), u(i), u(i + 1))
            .emap(s, t, OrbitTag::Fwd);
    }
    for j in 1..=m {
        let r = format!("r{j}");
        raw.edge(r.clone(), u(n + j), u(n + j))
            .emap(r.clone(), r, OrbitTag::Axial);
    }
    for j in 1..=l {
        let (x, y) = (format!("x{j}"), format!("y{j}"));
        raw.edge(x.clone(), u(1), u(1))
            .edge(y.clone(), u(1), u(1))
            .emap(x, y, OrbitTag::Fwd);
    }
    Ok(Model::from_raw(&raw).expect("non-free builder output is valid"))
}

/// All classes of genus `g`: the free class first (odd `g` only), then the
/// non-free ones by `(n, m)`.
pub fn enumerate_classes(g: usize) -> Vec<CanonicalForm> {
    let mut out = Vec::new();
    if g % 2 == 1 {
        out.push(CanonicalForm::Free { n: (g - 1) / 2 });
    }
    for n in ((g + 1) % 2..=g + 1).step_by(2) {
        for m in 0..=(g + 1 - n) / 2 {
            if n + 2 * m >= 1 {
                out.push(CanonicalForm::NonFree {
                    n,
                    m,
                    l: (g + 1 - n - 2 * m) / 2,
                });
            }
        }
    }
    out
}

/// Closed form for `enumerate_classes(g).len()`.
///
/// Group the non-free classes by `t = n + 2m`, which runs over the values
/// `1 <= t <= g + 1` with `t = g + 1 (mod 2)`; each `t` admits
/// `floor(t/2) + 1` pairs. For even `g` that sums to `k(k+1)/2` with
/// `k = (g+2)/2`; for odd `g` to `k(k+1)/2 + k` with `k = (g+1)/2`, plus the
/// free class.
pub fn count_classes(g: usize) -> usize {
    if g % 2 == 0 {
        let k = (g + 2) / 2;
        k * (k + 1) / 2
    } else {
        let k = (g + 1) / 2;
        k * (k + 1) / 2 + k + 1
    }
}

/// Unordered pairs of distinct classes of genus `g` whose boundary
/// restrictions have the same fixed-point count and quotient genus.
pub fn boundary_collisions(g: usize) -> Vec<(CanonicalForm, CanonicalForm)> {
    let classes = enumerate_classes(g);
    let mut out = Vec::new();
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            if a.boundary_data() == b.boundary_data() {
                out.push((*a, *b));
            }
        }
    }
    out
}
