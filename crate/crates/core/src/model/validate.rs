use std::collections::HashSet;
use std::fmt;

use super::{
    component_labels, index_by_name, is_identifier, Edge, EdgeAction, Graph, Involution, Model,
    OrbitTag, RawModel,
};

/// Identifiers of the validation rules, as they appear in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    BadIdentifier,
    DuplicateId,
    DanglingRef,
    EmptyGraph,
    VmapNotInvolution,
    BadTag,
    EmapNotInvolution,
    EmapMissing,
    AxialEndpoints,
    InvertedEndpoints,
    EndpointMismatch,
    FixedDart,
    Disconnected,
    BettiNegative,
}

impl Rule {
    pub const ALL: [Rule; 14] = [
        Rule::BadIdentifier,
        Rule::DuplicateId,
        Rule::DanglingRef,
        Rule::EmptyGraph,
        Rule::VmapNotInvolution,
        Rule::BadTag,
        Rule::EmapNotInvolution,
        Rule::EmapMissing,
        Rule::AxialEndpoints,
        Rule::InvertedEndpoints,
        Rule::EndpointMismatch,
        Rule::FixedDart,
        Rule::Disconnected,
        Rule::BettiNegative,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::BadIdentifier => "BAD-IDENT",
            Rule::DuplicateId => "DUPLICATE-ID",
            Rule::DanglingRef => "DANGLING-REF",
            Rule::EmptyGraph => "EMPTY-GRAPH",
            Rule::VmapNotInvolution => "VMAP-NOT-INVOLUTION",
            Rule::BadTag => "BAD-TAG",
            Rule::EmapNotInvolution => "EMAP-NOT-INVOLUTION",
            Rule::EmapMissing => "EMAP-MISSING",
            Rule::AxialEndpoints => "AXIAL-ENDPOINTS",
            Rule::InvertedEndpoints => "INVERTED-ENDPOINTS",
            Rule::EndpointMismatch => "ENDPOINT-MISMATCH",
            Rule::FixedDart => "FIXED-DART",
            Rule::Disconnected => "DISCONNECTED",
            Rule::BettiNegative => "BETTI-NEGATIVE",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Rule::BadIdentifier => "identifiers must match [A-Za-z0-9_]+",
            Rule::DuplicateId => "vertex and edge names must be unique",
            Rule::DanglingRef => "references must name declared vertices and edges",
            Rule::EmptyGraph => "a spine has at least one vertex",
            Rule::VmapNotInvolution => "the vertex map must be an involution",
            Rule::BadTag => "self-mapped edges take axial|inverted, moved pairs take fwd|rev",
            Rule::EmapNotInvolution => "each edge belongs to exactly one orbit",
            Rule::EmapMissing => "edges with a moved endpoint need an explicit emap",
            Rule::AxialEndpoints => "axial edge endpoints must be fixed",
            Rule::InvertedEndpoints => "inverted edge endpoints must be exchanged",
            Rule::EndpointMismatch => "the edge map must commute with the endpoint map",
            Rule::FixedDart => "at most two fixed darts per vertex",
            Rule::Disconnected => "the graph must be connected",
            Rule::BettiNegative => "the Betti number must be nonnegative",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub location: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.rule, self.location, self.rule.summary())
    }
}

/// Outcome of [`validate`]: empty iff the data describes a valid model.
/// Each rule reports only its first failing element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    fn push(&mut self, rule: Rule, location: impl FnOnce() -> String) {
        if !self.has(rule) {
            self.violations.push(Violation {
                rule,
                location: location(),
            });
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// What an edge's `emap` entry resolved to, in the raw edge indexing.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Resolved {
    image: usize,
    tag: OrbitTag,
}

/// Partially checked data shared by [`validate`] and [`assemble`].
struct Resolution {
    ends: Vec<Option<[usize; 2]>>,
    sigma: Vec<usize>,
    action: Vec<Option<Resolved>>,
}

fn resolve(raw: &RawModel, report: &mut ValidationReport) -> Resolution {
    for v in &raw.vertices {
        if !is_identifier(v) {
            report.push(Rule::BadIdentifier, || format!("vertex `{v}`"));
        }
    }
    for e in &raw.edges {
        if !is_identifier(&e.name) {
            report.push(Rule::BadIdentifier, || format!("edge `{}`", e.name));
        }
    }

    let mut seen = HashSet::new();
    for v in &raw.vertices {
        if !seen.insert(v.as_str()) {
            report.push(Rule::DuplicateId, || format!("vertex `{v}` declared twice"));
        }
    }
    seen.clear();
    for e in &raw.edges {
        if !seen.insert(e.name.as_str()) {
            report.push(Rule::DuplicateId, || format!("edge `{}` declared twice", e.name));
        }
    }

    if raw.vertices.is_empty() {
        report.push(Rule::EmptyGraph, || "no vertex declared".to_string());
    }

    let vidx = index_by_name(&raw.vertices);
    let edge_names: Vec<String> = raw.edges.iter().map(|e| e.name.clone()).collect();
    let eidx = index_by_name(&edge_names);

    let ends: Vec<Option<[usize; 2]>> = raw
        .edges
        .iter()
        .map(|e| {
            let a = vidx.get(e.ends[0].as_str()).copied();
            let b = vidx.get(e.ends[1].as_str()).copied();
            match (a, b) {
                (Some(a), Some(b)) => Some([a, b]),
                _ => {
                    let missing = if a.is_none() { &e.ends[0] } else { &e.ends[1] };
                    report.push(Rule::DanglingRef, || {
                        format!("edge `{}`: unknown vertex `{missing}`", e.name)
                    });
                    None
                }
            }
        })
        .collect();

    let mut partner: Vec<Option<usize>> = vec![None; raw.vertices.len()];
    for (a, b) in &raw.vmaps {
        let (Some(&ia), Some(&ib)) = (vidx.get(a.as_str()), vidx.get(b.as_str())) else {
            let missing = if vidx.contains_key(a.as_str()) { b } else { a };
            report.push(Rule::DanglingRef, || format!("vmap {a} {b}: unknown vertex `{missing}`"));
            continue;
        };
        for (x, y) in [(ia, ib), (ib, ia)] {
            match partner[x] {
                Some(prev) if prev != y => report.push(Rule::VmapNotInvolution, || {
                    format!(
                        "vertex `{}` mapped to both `{}` and `{}`",
                        raw.vertices[x], raw.vertices[prev], raw.vertices[y]
                    )
                }),
                _ => partner[x] = Some(y),
            }
        }
    }
    let sigma: Vec<usize> = partner
        .iter()
        .enumerate()
        .map(|(v, p)| p.unwrap_or(v))
        .collect();

    let mut action: Vec<Option<Resolved>> = vec![None; raw.edges.len()];
    for em in &raw.emaps {
        let (Some(&ie), Some(&if_)) = (eidx.get(em.edge.as_str()), eidx.get(em.image.as_str()))
        else {
            let missing = if eidx.contains_key(em.edge.as_str()) {
                &em.image
            } else {
                &em.edge
            };
            report.push(Rule::DanglingRef, || {
                format!("emap {} {}: unknown edge `{missing}`", em.edge, em.image)
            });
            continue;
        };
        let self_mapped = ie == if_;
        let tag_ok = match em.tag {
            OrbitTag::Axial | OrbitTag::Inverted => self_mapped,
            OrbitTag::Fwd | OrbitTag::Rev => !self_mapped,
        };
        if !tag_ok {
            report.push(Rule::BadTag, || {
                format!("emap {} {} {}", em.edge, em.image, em.tag.as_str())
            });
            continue;
        }
        for (x, y) in [(ie, if_), (if_, ie)] {
            let entry = Resolved {
                image: y,
                tag: em.tag,
            };
            match action[x] {
                Some(prev) if prev != entry => report.push(Rule::EmapNotInvolution, || {
                    format!("edge `{}` listed in conflicting emap lines", raw.edges[x].name)
                }),
                _ => action[x] = Some(entry),
            }
        }
    }
    for (e, act) in action.iter_mut().enumerate() {
        if act.is_some() {
            continue;
        }
        if let Some([a, b]) = ends[e] {
            if sigma[a] == a && sigma[b] == b {
                *act = Some(Resolved {
                    image: e,
                    tag: OrbitTag::Axial,
                });
            } else {
                report.push(Rule::EmapMissing, || {
                    format!("edge `{}` has a moved endpoint but no emap", raw.edges[e].name)
                });
            }
        }
    }

    Resolution { ends, sigma, action }
}

/// Checks raw spine data against every model rule. Never panics: malformed
/// references are reported as violations.
pub fn validate(raw: &RawModel) -> ValidationReport {
    let mut report = ValidationReport::default();
    let Resolution { ends, sigma, action } = resolve(raw, &mut report);
    let name = |e: usize| raw.edges[e].name.as_str();
    let vname = |v: usize| raw.vertices[v].as_str();

    let mut fixed_darts = vec![0usize; raw.vertices.len()];
    for e in 0..raw.edges.len() {
        let (Some([a, b]), Some(act)) = (ends[e], action[e]) else {
            continue;
        };
        match act.tag {
            OrbitTag::Axial => {
                if sigma[a] != a || sigma[b] != b {
                    let bad = if sigma[a] != a { a } else { b };
                    report.push(Rule::AxialEndpoints, || {
                        format!("axial edge `{}` at moved vertex `{}`", name(e), vname(bad))
                    });
                } else {
                    fixed_darts[a] += 1;
                    fixed_darts[b] += 1;
                }
            }
            OrbitTag::Inverted => {
                if sigma[a] != b {
                    report.push(Rule::InvertedEndpoints, || {
                        format!(
                            "inverted edge `{}`: `{}` is not mapped to `{}`",
                            name(e),
                            vname(a),
                            vname(b)
                        )
                    });
                }
            }
            OrbitTag::Fwd | OrbitTag::Rev => {
                let Some(img) = ends[act.image] else { continue };
                let s = (act.tag == OrbitTag::Rev) as usize;
                if img[s] != sigma[a] || img[1 - s] != sigma[b] {
                    report.push(Rule::EndpointMismatch, || {
                        format!(
                            "edge `{}` -> `{}` ({}) does not follow the vertex map",
                            name(e),
                            name(act.image),
                            act.tag.as_str()
                        )
                    });
                }
            }
        }
    }
    for (v, &k) in fixed_darts.iter().enumerate() {
        if k > 2 {
            report.push(Rule::FixedDart, || {
                format!("vertex `{}` has {k} fixed darts", vname(v))
            });
        }
    }

    if !raw.vertices.is_empty() {
        let known: Vec<[usize; 2]> = ends.iter().flatten().copied().collect();
        let (labels, components) =
            component_labels(raw.vertices.len(), known.iter().map(|&[a, b]| (a, b)));
        if components > 1 {
            let stray = labels.iter().position(|&c| c != 0).unwrap_or(0);
            report.push(Rule::Disconnected, || {
                format!(
                    "vertex `{}` not reachable from `{}`",
                    vname(stray),
                    vname(0)
                )
            });
        }
        if known.len() + components < raw.vertices.len() {
            report.push(Rule::BettiNegative, || {
                format!("{} edges on {} vertices", known.len(), raw.vertices.len())
            });
        }
    }

    report
}

/// Builds the canonical [`Model`] from data that passed [`validate`].
pub(crate) fn assemble(raw: &RawModel) -> Model {
    let mut scratch = ValidationReport::default();
    let Resolution { ends, sigma, action } = resolve(raw, &mut scratch);
    debug_assert!(scratch.is_ok(), "assemble on invalid data: {scratch}");

    let mut vorder: Vec<usize> = (0..raw.vertices.len()).collect();
    vorder.sort_by(|&a, &b| raw.vertices[a].cmp(&raw.vertices[b]));
    let mut vnew = vec![0; raw.vertices.len()];
    for (new, &old) in vorder.iter().enumerate() {
        vnew[old] = new;
    }
    let mut eorder: Vec<usize> = (0..raw.edges.len()).collect();
    eorder.sort_by(|&a, &b| raw.edges[a].name.cmp(&raw.edges[b].name));
    let mut enew = vec![0; raw.edges.len()];
    for (new, &old) in eorder.iter().enumerate() {
        enew[old] = new;
    }

    let flipped: Vec<bool> = (0..raw.edges.len())
        .map(|e| {
            let [a, b] = ends[e].expect("validated");
            raw.vertices[a] > raw.vertices[b]
        })
        .collect();

    let vertices: Vec<String> = vorder.iter().map(|&v| raw.vertices[v].clone()).collect();
    let edges: Vec<Edge> = eorder
        .iter()
        .map(|&e| {
            let [a, b] = ends[e].expect("validated");
            let (a, b) = if flipped[e] { (b, a) } else { (a, b) };
            Edge {
                name: raw.edges[e].name.clone(),
                ends: [vnew[a], vnew[b]],
            }
        })
        .collect();
    let vertex_map: Vec<usize> = vorder.iter().map(|&v| vnew[sigma[v]]).collect();
    let edge_action: Vec<EdgeAction> = eorder
        .iter()
        .map(|&e| {
            let act = action[e].expect("validated");
            match act.tag {
                OrbitTag::Axial => EdgeAction::Axial,
                OrbitTag::Inverted => EdgeAction::Inverted,
                OrbitTag::Fwd | OrbitTag::Rev => EdgeAction::Moved {
                    image: enew[act.image],
                    reversed: (act.tag == OrbitTag::Rev) ^ flipped[e] ^ flipped[act.image],
                },
            }
        })
        .collect();

    Model {
        graph: Graph { vertices, edges },
        involution: Involution {
            vertex_map,
            edge_action,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules(raw: &RawModel) -> Vec<Rule> {
        validate(raw).violations.iter().map(|v| v.rule).collect()
    }

    #[test]
    fn axial_loop_is_valid() {
        let mut raw = RawModel::default();
        raw.vertex("v").edge("e", "v", "v").emap("e", "e", OrbitTag::Axial);
        assert!(validate(&raw).is_ok());
    }

    #[test]
    fn unlisted_edge_between_fixed_vertices_defaults_to_axial() {
        let mut raw = RawModel::default();
        raw.vertex("v").edge("e", "v", "v");
        let m = Model::from_raw(&raw).unwrap();
        assert_eq!(m.involution().edge_action(0), EdgeAction::Axial);
    }

    #[test]
    fn two_axial_loops_overflow_the_poles() {
        let mut raw = RawModel::default();
        raw.vertex("v")
            .edge("e", "v", "v")
            .edge("f", "v", "v")
            .emap("e", "e", OrbitTag::Axial)
            .emap("f", "f", OrbitTag::Axial);
        assert_eq!(rules(&raw), vec![Rule::FixedDart]);
    }

    #[test]
    fn axial_edge_needs_fixed_endpoints() {
        let mut raw = RawModel::default();
        raw.vertex("a")
            .vertex("b")
            .vmap("a", "b")
            .edge("e", "a", "b")
            .emap("e", "e", OrbitTag::Axial);
        let report = validate(&raw);
        assert_eq!(rules(&raw), vec![Rule::AxialEndpoints]);
        assert!(report.violations[0].to_string().contains("axial edge endpoints must be fixed"));
    }

    #[test]
    fn malformed_references_are_reported_not_fatal() {
        let mut raw = RawModel::default();
        raw.vertex("a")
            .vertex("a")
            .edge("e", "a", "zz")
            .vmap("a", "q")
            .emap("e", "nope", OrbitTag::Fwd);
        let got = rules(&raw);
        assert!(got.contains(&Rule::DuplicateId));
        assert!(got.contains(&Rule::DanglingRef));
    }

    #[test]
    fn conflicting_vmaps() {
        let mut raw = RawModel::default();
        raw.vertex("a").vertex("b").vertex("c").vmap("a", "b").vmap("b", "c");
        raw.edge("e", "a", "b").edge("f", "b", "c");
        assert!(rules(&raw).contains(&Rule::VmapNotInvolution));
    }

    #[test]
    fn bad_tags_and_missing_emaps() {
        let mut raw = RawModel::default();
        raw.vertex("a")
            .vertex("b")
            .vmap("a", "b")
            .edge("e", "a", "b")
            .edge("f", "a", "b")
            .emap("e", "e", OrbitTag::Fwd);
        let got = rules(&raw);
        assert!(got.contains(&Rule::BadTag));
        assert!(got.contains(&Rule::EmapMissing));
    }

    #[test]
    fn inverted_edge_between_fixed_vertices_is_rejected() {
        let mut raw = RawModel::default();
        raw.vertex("a")
            .vertex("b")
            .edge("e", "a", "b")
            .emap("e", "e", OrbitTag::Inverted);
        assert_eq!(rules(&raw), vec![Rule::InvertedEndpoints]);
    }

    #[test]
    fn moved_pair_must_follow_vertex_map() {
        // Two swapped vertices joined by two edges: the orientation tag decides
        // whether the dart at `a` lands at `b`.
        let mut raw = RawModel::default();
        raw.vertex("a")
            .vertex("b")
            .vmap("a", "b")
            .edge("e", "a", "b")
            .edge("f", "a", "b")
            .emap("e", "f", OrbitTag::Fwd);
        assert_eq!(rules(&raw), vec![Rule::EndpointMismatch]);
        raw.emaps[0].tag = OrbitTag::Rev;
        assert!(validate(&raw).is_ok());
    }

    #[test]
    fn disconnected_and_empty() {
        let mut raw = RawModel::default();
        assert_eq!(rules(&raw), vec![Rule::EmptyGraph]);
        raw.vertex("a").vertex("b");
        assert_eq!(rules(&raw), vec![Rule::Disconnected]);
    }

    #[test]
    fn bad_identifiers() {
        let mut raw = RawModel::default();
        raw.vertex("a-b");
        assert_eq!(rules(&raw), vec![Rule::BadIdentifier]);
    }

    #[test]
    fn rule_ids_are_distinct() {
        let ids: HashSet<&str> = Rule::ALL.iter().map(|r| r.id()).collect();
        assert_eq!(ids.len(), Rule::ALL.len());
    }
}
