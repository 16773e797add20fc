//! `hbinv`: classify, build and census handlebody involutions from the
//! command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand};
use serde_json::{json, Value};

use handlebody::canonical::{boundary_collisions, build_free, build_nonfree, enumerate_classes, CanonicalForm};
use handlebody::census::{enumerate_models, verify_with, CensusConfig, TupleKey, Verdict};
use handlebody::classify::classify;
use handlebody::invariants::{boundary_data, fixed_set, genus, is_free, quotient, summarize, FixedComponentKind, Pole, PoleComplex};
use handlebody::model::{equivariant_isomorphic, parse_model, serialize_model, IsoOptions, Model};
use handlebody::moves::{normalize, split, ComponentAction, SplitOrbitKind};

#[derive(Parser)]
#[command(name = "hbinv", version, about = "Involutions of handlebodies as equivariant graph spines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the class of a model.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Write the minimal spine of a class.
    Build {
        /// Build I_{2n+1}.
        #[arg(long, value_name = "N", conflicts_with = "nonfree", required_unless_present = "nonfree")]
        free: Option<usize>,
        /// Build L^{n,m} with l swapped loop pairs.
        #[arg(long, num_args = 3, value_names = ["N", "M", "L"])]
        nonfree: Option<Vec<usize>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Genus, fixed set, quotient and boundary invariants.
    Invariants {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// The quotient spine.
    Quotient {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Fixed points and quotient genus of the boundary restriction.
    Boundary {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Contract legal orbits until none is left and print the trace.
    Normalize {
        file: PathBuf,
        /// Also write the normalized model here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether two models are equivariantly isomorphic.
    Isomorphic {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Cut along the orbit of an edge.
    Split {
        file: PathBuf,
        #[arg(long, value_name = "EDGE")]
        orbit: String,
        #[command(flatten)]
        out: Output,
    },
    /// Count spine classes of one genus by invariant tuple.
    Census {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        max_edges: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Check the classification against an exhaustive census.
    Verify {
        #[arg(long)]
        max_genus: usize,
        #[arg(long)]
        max_edges: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// List the classes of a genus.
    Classes {
        #[arg(long)]
        genus: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Pairs of classes with the same boundary restriction.
    Collisions {
        #[arg(long)]
        genus: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Quotient graph and fixed set as a DOT graph.
    EmitDot { file: PathBuf },
}

struct Failure {
    message: String,
    code: u8,
}

fn fail(message: impl std::fmt::Display) -> Failure {
    Failure {
        message: message.to_string().replace('\n', " "),
        code: 1,
    }
}

fn load(path: &Path) -> Result<Model, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    parse_model(&text).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn to_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn class_json(c: CanonicalForm) -> Value {
    serde_json::to_value(c.record()).expect("records serialize")
}

fn tuple_json(key: TupleKey) -> Value {
    json!({ "free": key.free, "n": key.n, "m": key.m })
}

fn classify_cmd(model: &Model, out: Output) -> Result<String, Failure> {
    let c = classify(model).map_err(fail)?;
    let r = c.record();
    if out.json {
        let obj = json!({
            "display": r.display, "g": r.g, "n": r.n, "m": r.m, "l": r.l, "free": c.is_free(),
        });
        return Ok(to_json(&obj));
    }
    Ok(match c {
        CanonicalForm::Free { n } => format!("{} g={} free n={n}\n", r.display, r.g),
        CanonicalForm::NonFree { n, m, l } => format!("{} g={} n={n} m={m} l={l}\n", r.display, r.g),
    })
}

fn build_cmd(free: Option<usize>, nonfree: Option<Vec<usize>>, output: Option<PathBuf>) -> Result<String, Failure> {
    let model = match (free, nonfree.as_deref()) {
        (Some(n), _) => build_free(n),
        (None, Some(&[n, m, l])) => build_nonfree(n, m, l).map_err(fail)?,
        _ => return Err(fail("build needs --free N or --nonfree N M L")),
    };
    let text = serialize_model(&model);
    match output {
        Some(path) => {
            fs::write(&path, text).map_err(|e| fail(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn invariants_cmd(model: &Model, out: Output) -> Result<String, Failure> {
    let s = summarize(model).map_err(fail)?;
    if out.json {
        // Fixed field order, not sorted.
        let mut text = serde_json::to_string_pretty(&s).expect("summaries serialize");
        text.push('\n');
        return Ok(text);
    }
    Ok(format!(
        "genus={}\nfree={}\nn={}\nm={}\nquotient_genus={}\nboundary_fixed_points={}\nboundary_quotient_genus={}\n",
        s.genus, s.free, s.n, s.m, s.quotient_genus, s.boundary_fixed_points, s.boundary_quotient_genus
    ))
}

fn quotient_cmd(model: &Model, out: Output) -> Result<String, Failure> {
    let q = quotient(model).map_err(fail)?;
    let qg = &q.quotient_graph;
    let kind = |v: usize| {
        if qg.mirror[v] {
            "mirror"
        } else if qg.branched_vertex[v] {
            "fixed"
        } else {
            "swapped"
        }
    };
    if out.json {
        let vertices: Vec<Value> = (0..qg.graph.vertex_count())
            .map(|v| json!({ "name": qg.graph.vertex_name(v), "kind": kind(v) }))
            .collect();
        let edges: Vec<Value> = qg
            .graph
            .edges()
            .iter()
            .zip(&qg.branched)
            .map(|(e, &b)| {
                json!({
                    "name": e.name,
                    "ends": [qg.graph.vertex_name(e.ends[0]), qg.graph.vertex_name(e.ends[1])],
                    "branched": b,
                })
            })
            .collect();
        let obj = json!({
            "quotient_genus": q.quotient_genus,
            "branch_arcs": q.branch_arcs,
            "branch_circles": q.branch_circles,
            "vertices": vertices,
            "edges": edges,
        });
        return Ok(to_json(&obj));
    }
    let mut s = format!(
        "quotient_genus={}\nbranch_arcs={}\nbranch_circles={}\n",
        q.quotient_genus, q.branch_arcs, q.branch_circles
    );
    for v in 0..qg.graph.vertex_count() {
        writeln!(s, "vertex {} {}", qg.graph.vertex_name(v), kind(v)).unwrap();
    }
    for (e, &b) in qg.graph.edges().iter().zip(&qg.branched) {
        let tag = if b { "branched" } else { "unbranched" };
        let [a, c] = e.ends;
        writeln!(s, "edge {} {} {} {tag}", e.name, qg.graph.vertex_name(a), qg.graph.vertex_name(c)).unwrap();
    }
    Ok(s)
}

fn boundary_cmd(model: &Model, out: Output) -> Result<String, Failure> {
    let b = boundary_data(model).map_err(fail)?;
    if out.json {
        return Ok(to_json(&serde_json::to_value(b).expect("boundary data serializes")));
    }
    Ok(format!(
        "boundary_fixed_points={}\nboundary_quotient_genus={}\n",
        b.boundary_fixed_points, b.boundary_quotient_genus
    ))
}

fn normalize_cmd(model: &Model, output: Option<PathBuf>, out: Output) -> Result<String, Failure> {
    let (normal, trace) = normalize(model);
    if let Some(path) = output {
        fs::write(&path, serialize_model(&normal)).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    }
    if out.json {
        let steps: Vec<Value> = trace
            .steps
            .iter()
            .map(|s| {
                json!({
                    "move": s.kind.as_str(), "orbit": s.orbit,
                    "g": s.after.genus, "n": s.after.n, "m": s.after.m,
                })
            })
            .collect();
        let obj = json!({
            "steps": steps,
            "vertices": normal.vertex_count(),
            "edges": normal.edge_count(),
        });
        return Ok(to_json(&obj));
    }
    let mut s = String::new();
    for step in &trace.steps {
        writeln!(s, "{step}").unwrap();
    }
    writeln!(s, "result vertices={} edges={}", normal.vertex_count(), normal.edge_count()).unwrap();
    Ok(s)
}

fn isomorphic_cmd(a: &Model, b: &Model, out: Output) -> Result<String, Failure> {
    let iso = equivariant_isomorphic(a, b, IsoOptions::default()).map_err(fail)?;
    if out.json {
        return Ok(to_json(&json!({ "isomorphic": iso })));
    }
    Ok(format!("{iso}\n"))
}

fn split_cmd(model: &Model, orbit: &str, out: Output) -> Result<String, Failure> {
    let edge = model
        .graph()
        .edge_index(orbit)
        .ok_or_else(|| fail(format!("no edge named `{orbit}`")))?;
    let r = split(model, edge).map_err(fail)?;
    let kind = match r.orbit_kind {
        SplitOrbitKind::Axial => "axial",
        SplitOrbitKind::MovedPair => "moved_pair",
    };
    let action = |a: ComponentAction| match a {
        ComponentAction::Preserved => "preserved",
        ComponentAction::Swapped => "swapped",
    };
    if out.json {
        let components: Vec<Value> = r
            .components
            .iter()
            .map(|c| {
                json!({
                    "betti": c.betti,
                    "action": action(c.action),
                    "vertices": c.spine.vertex_names(),
                    "edges": c.spine.edges().iter().map(|e| e.name.clone()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let obj = json!({
            "orbit_kind": kind,
            "connected_after": r.connected_after,
            "betti_sum": r.betti_sum(),
            "components": components,
        });
        return Ok(to_json(&obj));
    }
    let mut s = format!("orbit_kind={kind}\nconnected_after={}\n", r.connected_after);
    for (i, c) in r.components.iter().enumerate() {
        writeln!(
            s,
            "component {i} betti={} {} vertices={} edges={}",
            c.betti,
            action(c.action),
            c.spine.vertex_count(),
            c.spine.edge_count()
        )
        .unwrap();
    }
    writeln!(s, "betti_sum={}", r.betti_sum()).unwrap();
    Ok(s)
}

fn config(max_edges: usize, max_genus: usize, jobs: Option<usize>) -> CensusConfig {
    let mut cfg = CensusConfig::new(max_edges).max_genus(max_genus);
    cfg.jobs = jobs;
    cfg
}

fn census_cmd(g: usize, max_edges: usize, jobs: Option<usize>, out: Output) -> Result<String, Failure> {
    let models = enumerate_models(&config(max_edges, g, jobs)).map_err(fail)?;
    let mut counts: BTreeMap<TupleKey, usize> = BTreeMap::new();
    for m in models.iter().filter(|m| genus(m) == g) {
        let f = fixed_set(m);
        let key = TupleKey {
            free: is_free(m),
            n: f.n_arcs,
            m: f.m_circles,
        };
        *counts.entry(key).or_default() += 1;
    }
    let total: usize = counts.values().sum();
    let covered = enumerate_classes(g).iter().all(|c| c.builder_edge_count() <= max_edges);
    if out.json {
        let tuples: Vec<Value> = counts
            .iter()
            .map(|(k, &count)| json!({ "free": k.free, "n": k.n, "m": k.m, "count": count }))
            .collect();
        let obj = json!({
            "genus": g, "max_edges": max_edges, "covered": covered, "total": total, "tuples": tuples,
        });
        return Ok(to_json(&obj));
    }
    let mut s = String::new();
    for (k, count) in &counts {
        writeln!(s, "{} {count}", k.label()).unwrap();
    }
    writeln!(s, "total {total}").unwrap();
    Ok(s)
}

fn labels(keys: impl IntoIterator<Item = TupleKey>) -> String {
    keys.into_iter().map(|k| k.label()).collect::<Vec<_>>().join(", ")
}

fn verify_cmd(max_genus: usize, max_edges: usize, jobs: Option<usize>, out: Output) -> Result<(String, bool), Failure> {
    let report = verify_with(&config(max_edges, max_genus, jobs)).map_err(fail)?;
    let passed = report.verdict == Verdict::Pass;
    if out.json {
        let rows: Vec<Value> = report
            .rows
            .iter()
            .map(|r| {
                json!({
                    "genus": r.genus,
                    "covered": r.covered,
                    "realized": r.realized.iter().map(|(k, &c)| {
                        let mut t = tuple_json(*k);
                        t["count"] = json!(c);
                        t
                    }).collect::<Vec<_>>(),
                    "predicted": r.predicted.iter().map(|&k| tuple_json(k)).collect::<Vec<_>>(),
                    "missing": r.missing.iter().map(|&k| tuple_json(k)).collect::<Vec<_>>(),
                    "unexpected": r.unexpected.iter().map(|&k| tuple_json(k)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let obj = json!({
            "size_bound": report.size_bound,
            "max_genus": report.max_genus,
            "models_checked": report.models_checked,
            "genera": rows,
            "counterexamples": serde_json::to_value(&report.counterexamples).expect("counterexamples serialize"),
            "verdict": if passed { "PASS" } else { "FAIL" },
        });
        return Ok((to_json(&obj), passed));
    }
    let mut s = String::new();
    for r in &report.rows {
        writeln!(
            s,
            "g={} realized=[{}] predicted=[{}] covered={}",
            r.genus,
            labels(r.realized.keys().copied()),
            labels(r.predicted.iter().copied()),
            r.covered
        )
        .unwrap();
        if !r.unexpected.is_empty() {
            writeln!(s, "g={} unexpected=[{}]", r.genus, labels(r.unexpected.iter().copied())).unwrap();
        }
        if !r.missing.is_empty() {
            writeln!(s, "g={} missing=[{}]", r.genus, labels(r.missing.iter().copied())).unwrap();
        }
    }
    for c in &report.counterexamples {
        writeln!(s, "counterexample: {}", c.reason).unwrap();
    }
    writeln!(s, "models={}", report.models_checked).unwrap();
    writeln!(s, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
    Ok((s, passed))
}

fn classes_cmd(g: usize, out: Output) -> String {
    let classes = enumerate_classes(g);
    if out.json {
        return to_json(&Value::Array(classes.into_iter().map(class_json).collect()));
    }
    classes.iter().map(|c| format!("{c}\n")).collect()
}

fn collisions_cmd(g: usize, out: Output) -> String {
    let pairs = boundary_collisions(g);
    if out.json {
        let arr = pairs.into_iter().map(|(a, b)| json!([class_json(a), class_json(b)])).collect();
        return to_json(&Value::Array(arr));
    }
    pairs.iter().map(|(a, b)| format!("{a} {b}\n")).collect()
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn emit_dot(model: &Model) -> Result<String, Failure> {
    let q = quotient(model).map_err(fail)?;
    let qg = &q.quotient_graph;
    let mut s = String::from("graph involution {\n");
    for v in 0..qg.graph.vertex_count() {
        let mut label = qg.graph.vertex_name(v).to_string();
        if qg.branched_vertex[v] {
            label.push_str(" (fixed)");
        } else if qg.mirror[v] {
            label = "mirror".to_string();
        }
        writeln!(s, "  q{v} [label={}];", dot_id(&label)).unwrap();
    }
    for (e, &b) in qg.graph.edges().iter().zip(&qg.branched) {
        let label = if b { format!("{} (branched)", e.name) } else { e.name.clone() };
        writeln!(s, "  q{} -- q{} [label={}];", e.ends[0], e.ends[1], dot_id(&label)).unwrap();
    }

    let poles = PoleComplex::new(model);
    let kinds = poles.component_kinds();
    let component_label = |pole: Pole| {
        let c = poles.component(pole).expect("fixed vertices have components");
        match kinds[c] {
            FixedComponentKind::Arc => format!("arc {c}"),
            FixedComponentKind::Circle => format!("circle {c}"),
        }
    };
    let mut poles_of_edge: BTreeMap<usize, Vec<Pole>> = BTreeMap::new();
    for v in model.fixed_vertices() {
        let name = model.graph().vertex_name(v);
        for index in 0..2 {
            let pole = Pole { vertex: v, index };
            writeln!(s, "  p{v}_{index} [label={}];", dot_id(&format!("{name}.{index}"))).unwrap();
            if let Some(d) = poles.occupant(pole) {
                poles_of_edge.entry(d.edge()).or_default().push(pole);
            }
        }
        let label = format!("{name} ({})", component_label(Pole { vertex: v, index: 0 }));
        writeln!(s, "  p{v}_0 -- p{v}_1 [label={}];", dot_id(&label)).unwrap();
    }
    for (e, ends) in poles_of_edge {
        if let [a, b] = ends[..] {
            let label = format!("{} ({})", model.graph().edge(e).name, component_label(a));
            writeln!(
                s,
                "  p{}_{} -- p{}_{} [label={}];",
                a.vertex,
                a.index,
                b.vertex,
                b.index,
                dot_id(&label)
            )
            .unwrap();
        }
    }
    s.push_str("}\n");
    Ok(s)
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let ok = |s: String| Ok((s, 0));
    match cli.command {
        Command::Classify { file, out } => ok(classify_cmd(&load(&file)?, out)?),
        Command::Build { free, nonfree, output } => ok(build_cmd(free, nonfree, output)?),
        Command::Invariants { file, out } => ok(invariants_cmd(&load(&file)?, out)?),
        Command::Quotient { file, out } => ok(quotient_cmd(&load(&file)?, out)?),
        Command::Boundary { file, out } => ok(boundary_cmd(&load(&file)?, out)?),
        Command::Normalize { file, output, out } => ok(normalize_cmd(&load(&file)?, output, out)?),
        Command::Isomorphic { first, second, out } => ok(isomorphic_cmd(&load(&first)?, &load(&second)?, out)?),
        Command::Split { file, orbit, out } => ok(split_cmd(&load(&file)?, &orbit, out)?),
        Command::Census { genus, max_edges, jobs, out } => ok(census_cmd(genus, max_edges, jobs, out)?),
        Command::Verify { max_genus, max_edges, jobs, out } => {
            let (text, passed) = verify_cmd(max_genus, max_edges, jobs, out)?;
            Ok((text, if passed { 0 } else { 2 }))
        }
        Command::Classes { genus, out } => ok(classes_cmd(genus, out)),
        Command::Collisions { genus, out } => ok(collisions_cmd(genus, out)),
        Command::EmitDot { file } => ok(emit_dot(&load(&file)?)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("hbinv: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
