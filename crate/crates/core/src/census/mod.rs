//! Exhaustive, isomorph-free enumeration of valid spines and the
//! desk-scale check of the classification against it.
//!
//! Spines are grown from three kinds of seed by two operations that keep the
//! graph connected: adding an edge orbit between existing vertices, and
//! hanging a new vertex orbit off an existing vertex. The seeds are a single
//! fixed vertex, a swapped pair joined by an inverted edge, and the cycles of
//! length `2k` with the antipodal rotation. Every connected valid spine is
//! reached this way through spines that are no larger in edges or genus:
//! root a spanning tree of the quotient at a fixed vertex, at an inverted
//! edge, or, for free spines, along a cycle whose lift is connected, and peel
//! off the remaining orbits and leaves.
//!
//! Duplicates are removed by exact canonical codes, and by default every
//! duplicate is confirmed with the independent backtracking isomorphism
//! test.

mod canon;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canonical::{enumerate_classes, CanonicalForm};
use crate::classify::classify;
use crate::invariants::{
    boundary_data, fixed_set, genus, is_free, orbifold_euler_holds, quotient,
    riemann_hurwitz_holds,
};
use crate::model::{equivariant_isomorphic, serialize_model, IsoError, IsoOptions, Model};

use canon::{Code, Orbit, OrbitKind, Spine};

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub max_edges: usize,
    /// Skip spines above this genus (genus never drops while growing).
    pub max_genus: Option<usize>,
    /// Worker threads; `None` lets the thread pool decide.
    pub jobs: Option<usize>,
    /// Confirm every canonical-code duplicate with the backtracking test.
    pub cross_check: bool,
    /// Abort once this many distinct spines have been found.
    pub max_models: usize,
}

impl CensusConfig {
    pub fn new(max_edges: usize) -> Self {
        CensusConfig {
            max_edges,
            max_genus: None,
            jobs: None,
            cross_check: true,
            max_models: 2_000_000,
        }
    }

    pub fn max_genus(mut self, g: usize) -> Self {
        self.max_genus = Some(g);
        self
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = Some(jobs);
        self
    }

    pub fn cross_check(mut self, on: bool) -> Self {
        self.cross_check = on;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("census exceeded its budget of {0} spines")]
    BudgetExceeded(usize),
    #[error("canonical labeling merged two non-isomorphic spines:\n{0}\n{1}")]
    LabelingMismatch(String, String),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

fn seeds(max_edges: usize) -> Vec<Spine> {
    let mut out = vec![Spine {
        sigma: vec![0],
        orbits: vec![],
    }];
    if max_edges >= 1 {
        out.push(Spine {
            sigma: vec![1, 0],
            orbits: vec![Orbit {
                kind: OrbitKind::Inverted,
                ends: [0, 1],
            }],
        });
    }
    for k in 1..=max_edges / 2 {
        let n = 2 * k;
        out.push(Spine {
            sigma: (0..n).map(|i| ((i + k) % n) as u8).collect(),
            orbits: (0..k)
                .map(|i| Orbit {
                    kind: OrbitKind::Moved,
                    ends: [i as u8, (i + 1) as u8],
                })
                .collect(),
        });
    }
    out
}

fn with_orbit(s: &Spine, kind: OrbitKind, a: usize, b: usize) -> Spine {
    let mut t = s.clone();
    t.orbits.push(Orbit {
        kind,
        ends: [a as u8, b as u8],
    });
    t
}

fn children(s: &Spine, cfg: &CensusConfig) -> Vec<Spine> {
    let n = s.vertex_count();
    let edges = s.edge_count();
    let fd = s.fixed_darts();
    let fits = |extra_edges: usize, extra_genus: usize| {
        edges + extra_edges <= cfg.max_edges
            && cfg.max_genus.is_none_or(|g| s.genus() + extra_genus <= g)
    };
    let mut out = Vec::new();

    for u in 0..n {
        for v in u..n {
            let (fu, fv) = (s.is_fixed(u), s.is_fixed(v));
            if fu && fv && fits(1, 1) {
                let room = if u == v { fd[u] == 0 } else { fd[u] < 2 && fd[v] < 2 };
                if room {
                    out.push(with_orbit(s, OrbitKind::Axial, u, v));
                }
            }
            let inverted = if u == v { fu } else { s.sigma[u] as usize == v };
            if inverted && fits(1, 1) {
                out.push(with_orbit(s, OrbitKind::Inverted, u, v));
            }
            if fits(2, 2) {
                out.push(with_orbit(s, OrbitKind::Moved, u, v));
            }
        }
    }

    let mut fixed = s.clone();
    fixed.sigma.push(n as u8);
    for u in 0..n {
        if s.is_fixed(u) && fd[u] < 2 && fits(1, 0) {
            out.push(with_orbit(&fixed, OrbitKind::Axial, u, n));
        }
        if fits(2, 1) {
            out.push(with_orbit(&fixed, OrbitKind::Moved, u, n));
        }
    }
    let mut pair = s.clone();
    pair.sigma.push(n as u8 + 1);
    pair.sigma.push(n as u8);
    if fits(2, 0) {
        for u in 0..n {
            out.push(with_orbit(&pair, OrbitKind::Moved, u, n));
        }
    }
    out
}

fn insert(
    level: &mut BTreeMap<Code, Spine>,
    code: Code,
    spine: Spine,
    cross_check: bool,
) -> Result<(), CensusError> {
    match level.get(&code) {
        None => {
            level.insert(code, spine);
        }
        Some(existing) if cross_check => {
            let (a, b) = (existing.to_model(), spine.to_model());
            if !equivariant_isomorphic(&a, &b, IsoOptions::default())? {
                return Err(CensusError::LabelingMismatch(
                    serialize_model(&a),
                    serialize_model(&b),
                ));
            }
        }
        Some(_) => {}
    }
    Ok(())
}

fn run(cfg: &CensusConfig) -> Result<Vec<Spine>, CensusError> {
    let mut levels: Vec<BTreeMap<Code, Spine>> = vec![BTreeMap::new(); cfg.max_edges + 1];
    for s in seeds(cfg.max_edges) {
        if cfg.max_genus.is_none_or(|g| s.genus() <= g) && s.edge_count() <= cfg.max_edges {
            let code = s.canonical_code();
            insert(&mut levels[s.edge_count()], code, s, false)?;
        }
    }
    let mut total = levels.iter().map(BTreeMap::len).sum::<usize>();
    for k in 0..=cfg.max_edges {
        let frontier: Vec<&Spine> = levels[k].values().collect();
        let grown: Vec<Vec<(Code, Spine)>> = frontier
            .par_iter()
            .map(|s| {
                children(s, cfg)
                    .into_iter()
                    .map(|c| (c.canonical_code(), c))
                    .collect()
            })
            .collect();
        for (code, child) in grown.into_iter().flatten() {
            let level = &mut levels[child.edge_count()];
            let before = level.len();
            insert(level, code, child, cfg.cross_check)?;
            total += level.len() - before;
            if total > cfg.max_models {
                return Err(CensusError::BudgetExceeded(cfg.max_models));
            }
        }
    }
    Ok(levels.into_iter().flat_map(BTreeMap::into_values).collect())
}

/// One model per equivariant-isomorphism class of connected valid spines
/// within the bounds, ordered by edge count and then canonical code.
pub fn enumerate_models(cfg: &CensusConfig) -> Result<Vec<Model>, CensusError> {
    let spines = match cfg.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| CensusError::Pool(e.to_string()))?
            .install(|| run(cfg))?,
        None => run(cfg)?,
    };
    Ok(spines.par_iter().map(Spine::to_model).collect())
}

/// The `(free?, n, m)` part of a model's invariants. Ordered like the class
/// lists: the free tuple first, then by `(n, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TupleKey {
    pub free: bool,
    pub n: usize,
    pub m: usize,
}

impl Ord for TupleKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (!self.free, self.n, self.m).cmp(&(!other.free, other.n, other.m))
    }
}

impl PartialOrd for TupleKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl TupleKey {
    pub fn of_class(c: CanonicalForm) -> Self {
        match c {
            CanonicalForm::Free { .. } => TupleKey {
                free: true,
                n: 0,
                m: 0,
            },
            CanonicalForm::NonFree { n, m, .. } => TupleKey { free: false, n, m },
        }
    }

    pub fn label(self) -> String {
        if self.free {
            "free".to_string()
        } else {
            format!("n={} m={}", self.n, self.m)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusRow {
    pub genus: usize,
    /// Spine classes realizing each tuple.
    pub realized: BTreeMap<TupleKey, usize>,
    pub predicted: BTreeSet<TupleKey>,
    /// Whether every predicted class's minimal spine fits the edge bound.
    pub covered: bool,
    pub missing: Vec<TupleKey>,
    pub unexpected: Vec<TupleKey>,
}

impl GenusRow {
    /// Compares the tuples realized at genus `g` with the class list.
    pub fn compare(g: usize, realized: BTreeMap<TupleKey, usize>, max_edges: usize) -> Self {
        let classes = enumerate_classes(g);
        let predicted: BTreeSet<TupleKey> = classes.iter().map(|&c| TupleKey::of_class(c)).collect();
        let covered = classes.iter().all(|c| c.builder_edge_count() <= max_edges);
        let unexpected = realized.keys().filter(|k| !predicted.contains(k)).copied().collect();
        let missing = predicted.iter().filter(|k| !realized.contains_key(k)).copied().collect();
        GenusRow {
            genus: g,
            realized,
            predicted,
            covered,
            missing,
            unexpected,
        }
    }

    /// An unexpected tuple always fails; a missing one only when the row is
    /// covered by the edge bound.
    pub fn fails(&self) -> bool {
        !self.unexpected.is_empty() || (self.covered && !self.missing.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub reason: String,
    pub model: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub size_bound: usize,
    pub max_genus: usize,
    pub models_checked: usize,
    pub rows: Vec<GenusRow>,
    pub counterexamples: Vec<Counterexample>,
    pub verdict: Verdict,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn row(&self, genus: usize) -> Option<&GenusRow> {
        self.rows.iter().find(|r| r.genus == genus)
    }
}

/// Problems with one model, empty when it conforms.
pub fn check_model(model: &Model) -> Vec<String> {
    let mut problems = Vec::new();
    let g = genus(model);
    let free = is_free(model);
    let fixed = fixed_set(model);
    let (n, m) = (fixed.n_arcs, fixed.m_circles);
    if free && g % 2 == 0 {
        problems.push(format!("free involution on even genus {g}"));
    }
    if free != fixed.is_empty() {
        problems.push("freeness disagrees with the fixed set".to_string());
    }
    if !free {
        if n + 2 * m > g + 1 {
            problems.push(format!("n + 2m = {} > g + 1 = {}", n + 2 * m, g + 1));
        }
        if (n + g + 1) % 2 != 0 {
            problems.push(format!("n = {n} not congruent to g + 1 = {} mod 2", g + 1));
        }
    }
    match quotient(model) {
        Err(e) => problems.push(e.to_string()),
        Ok(q) => {
            if !orbifold_euler_holds(g, q.quotient_genus, n) {
                problems.push(format!("orbifold Euler identity fails with g'={}", q.quotient_genus));
            }
            match boundary_data(model) {
                Ok(b) => {
                    if !riemann_hurwitz_holds(g, b.boundary_quotient_genus, b.boundary_fixed_points) {
                        problems.push("Riemann-Hurwitz identity fails on the boundary".to_string());
                    }
                }
                Err(e) => problems.push(e.to_string()),
            }
        }
    }
    if let Err(e) = classify(model) {
        problems.push(e.to_string().lines().next().unwrap_or_default().to_string());
    }
    problems
}

/// Enumerates every spine with at most `max_edges` edges and genus at most
/// `max_genus`, and compares the realized invariant tuples with the class
/// lists.
pub fn verify_theorem(max_genus: usize, max_edges: usize) -> Result<CensusReport, CensusError> {
    verify_with(&CensusConfig::new(max_edges).max_genus(max_genus))
}

pub fn verify_with(cfg: &CensusConfig) -> Result<CensusReport, CensusError> {
    let max_genus = cfg.max_genus.unwrap_or(cfg.max_edges);
    let cfg = CensusConfig {
        max_genus: Some(max_genus),
        ..cfg.clone()
    };
    let models = enumerate_models(&cfg)?;
    let checked: Vec<(usize, TupleKey, Vec<String>)> = models
        .par_iter()
        .map(|model| {
            let fixed = fixed_set(model);
            let key = TupleKey {
                free: is_free(model),
                n: fixed.n_arcs,
                m: fixed.m_circles,
            };
            (genus(model), key, check_model(model))
        })
        .collect();

    let mut counterexamples = Vec::new();
    let mut realized: BTreeMap<usize, BTreeMap<TupleKey, usize>> = BTreeMap::new();
    for (model, (g, key, problems)) in models.iter().zip(checked) {
        *realized.entry(g).or_default().entry(key).or_default() += 1;
        for reason in problems {
            counterexamples.push(Counterexample {
                reason,
                model: serialize_model(model),
            });
        }
    }

    let mut rows = Vec::new();
    let mut verdict = if counterexamples.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    for g in 0..=max_genus {
        let row = GenusRow::compare(g, realized.remove(&g).unwrap_or_default(), cfg.max_edges);
        if row.fails() {
            verdict = Verdict::Fail;
        }
        rows.push(row);
    }

    Ok(CensusReport {
        size_bound: cfg.max_edges,
        max_genus,
        models_checked: models.len(),
        rows,
        counterexamples,
        verdict,
    })
}
