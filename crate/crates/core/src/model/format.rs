//! The `involution-graph v1` text format.
//!
//! ```text
//! involution-graph v1
//! vertex v
//! edge e v v
//! emap e e axial      # the core rotation of a solid torus
//! ```
//!
//! Lines are LF-terminated, `#` starts a comment, blank lines are ignored.
//! Serialization is canonical: vertices and edges sorted by name, edge
//! endpoints smaller-name first, `vmap` pairs and `emap` orbits smaller id
//! first and sorted, every orbit listed explicitly.

use std::fmt::Write as _;

use thiserror::Error;

use super::{is_identifier, Model, OrbitTag, RawModel, ValidationReport};

pub const HEADER: &str = "involution-graph v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Reads the statements of a model file without validating them.
pub fn parse_raw(text: &str) -> Result<RawModel, ParseError> {
    let mut raw = RawModel::default();
    let mut seen_header = false;
    for (i, line) in text.split('\n').enumerate() {
        let lineno = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_ascii_whitespace().collect();
        if !seen_header {
            if words != ["involution-graph", "v1"] {
                return Err(syntax(lineno, format!("expected `{HEADER}` header")));
            }
            seen_header = true;
            continue;
        }
        for w in &words[1..] {
            if !is_identifier(w) {
                return Err(syntax(lineno, format!("`{w}` is not an identifier")));
            }
        }
        let arity = |n: usize| -> Result<(), ParseError> {
            if words.len() == n + 1 {
                Ok(())
            } else {
                Err(syntax(
                    lineno,
                    format!("`{}` takes {n} arguments, got {}", words[0], words.len() - 1),
                ))
            }
        };
        match words[0] {
            "vertex" => {
                arity(1)?;
                raw.vertex(words[1]);
            }
            "edge" => {
                arity(3)?;
                raw.edge(words[1], words[2], words[3]);
            }
            "vmap" => {
                arity(2)?;
                raw.vmap(words[1], words[2]);
            }
            "emap" => {
                arity(3)?;
                let tag = OrbitTag::parse(words[3]).ok_or_else(|| {
                    syntax(lineno, format!("unknown emap tag `{}`", words[3]))
                })?;
                raw.emap(words[1], words[2], tag);
            }
            other => return Err(syntax(lineno, format!("unknown statement `{other}`"))),
        }
    }
    if !seen_header {
        return Err(syntax(1, format!("missing `{HEADER}` header")));
    }
    Ok(raw)
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    let raw = parse_raw(text)?;
    Model::from_raw(&raw).map_err(ParseError::Invalid)
}

/// Canonical text of a model.
pub fn serialize_model(m: &Model) -> String {
    let raw = m.to_raw();
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for v in &raw.vertices {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in &raw.edges {
        let _ = writeln!(out, "edge {} {} {}", e.name, e.ends[0], e.ends[1]);
    }
    let mut vmaps = raw.vmaps.clone();
    vmaps.sort();
    for (a, b) in &vmaps {
        let _ = writeln!(out, "vmap {a} {b}");
    }
    for em in &raw.emaps {
        let _ = writeln!(out, "emap {} {} {}", em.edge, em.image, em.tag.as_str());
    }
    out
}
