//! Text formats: the line-based plumbing format, JSON series and DOT export.
//!
//! ```text
//! # Σ(2,3,7)
//! v a -1
//! v b -2
//! v c -3
//! v d -7
//! e a b
//! e a c
//! e a d
//! root a
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::dagcat::ColoredDag;
use crate::error::{Error, Result};
use crate::plumbing::{PlumbedGraph, Tree};
use crate::qseries::QSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Vertex { id: String, weight: i64 },
    Edge(String, String),
    Root(String),
    Comment(String),
}

/// A parsed plumbing file, statements in file order. Blank lines are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingDocument {
    pub statements: Vec<Statement>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Whitespace-separated fields with their 1-based columns.
fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, f)| (line[..byte].chars().count() + 1, f))
        .collect()
}

impl PlumbingDocument {
    /// Parses and checks references: edges cite earlier vertices, at most
    /// one root, the root is declared somewhere in the file.
    pub fn parse(text: &str) -> Result<PlumbingDocument> {
        let mut statements = Vec::new();
        let mut declared = HashSet::new();
        let mut root = None;
        for (ln, line) in text.lines().enumerate() {
            let ln = ln + 1;
            let trimmed = line.trim_start();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(c) = trimmed.strip_prefix('#') {
                statements.push(Statement::Comment(c.trim().to_string()));
                continue;
            }
            let f = fields(line);
            let (col, kw) = f[0];
            let expect = |n: usize, usage: &str| -> Result<()> {
                if f.len() != n {
                    let col = f.get(n).map_or(line.chars().count() + 1, |x| x.0);
                    return Err(syntax(ln, col, format!("expected `{usage}`")));
                }
                Ok(())
            };
            let id_at = |k: usize| -> Result<String> {
                let (c, s) = f[k];
                if is_id(s) {
                    Ok(s.to_string())
                } else {
                    Err(syntax(ln, c, format!("invalid identifier {s:?}")))
                }
            };
            match kw {
                "v" => {
                    expect(3, "v <id> <weight>")?;
                    let id = id_at(1)?;
                    let (wc, ws) = f[2];
                    let weight = ws
                        .parse()
                        .map_err(|_| syntax(ln, wc, format!("invalid weight {ws:?}")))?;
                    if !declared.insert(id.clone()) {
                        return Err(Error::DuplicateVertex(id));
                    }
                    statements.push(Statement::Vertex { id, weight });
                }
                "e" => {
                    expect(3, "e <id> <id>")?;
                    let (a, b) = (id_at(1)?, id_at(2)?);
                    for x in [&a, &b] {
                        if !declared.contains(x) {
                            return Err(Error::UnknownVertex(x.clone()));
                        }
                    }
                    statements.push(Statement::Edge(a, b));
                }
                "root" => {
                    expect(2, "root <id>")?;
                    if root.is_some() {
                        return Err(Error::DuplicateRoot);
                    }
                    let id = id_at(1)?;
                    root = Some(id.clone());
                    statements.push(Statement::Root(id));
                }
                other => return Err(syntax(ln, col, format!("unknown statement {other:?}"))),
            }
        }
        if let Some(r) = root {
            if !declared.contains(&r) {
                return Err(Error::UnknownVertex(r));
            }
        }
        Ok(PlumbingDocument { statements })
    }

    pub fn to_graph(&self) -> Result<PlumbedGraph> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut root = None;
        for s in &self.statements {
            match s {
                Statement::Vertex { id, weight } => vertices.push((id.clone(), *weight)),
                Statement::Edge(a, b) => edges.push((a.clone(), b.clone())),
                Statement::Root(r) => root = Some(r.as_str()),
                Statement::Comment(_) => {}
            }
        }
        PlumbedGraph::from_parts(&vertices, &edges, root)
    }
}

pub fn parse_plumbing(text: &str) -> Result<PlumbedGraph> {
    PlumbingDocument::parse(text)?.to_graph()
}

/// Canonical text: vertices sorted by id, edges sorted with the smaller id
/// first, then the root.
pub fn print_plumbing(g: &PlumbedGraph) -> String {
    let t = g.tree();
    let mut out = String::new();
    for v in 0..t.len() {
        let _ = writeln!(out, "v {} {}", t.id(v), g.weight(v));
    }
    for (a, b) in t.edges() {
        let _ = writeln!(out, "e {} {}", t.id(a), t.id(b));
    }
    if let Some(r) = g.root() {
        let _ = writeln!(out, "root {}", t.id(r));
    }
    out
}

/// Objects with a DOT rendering.
pub trait ToDot {
    fn to_dot(&self) -> String;
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl ToDot for Tree {
    fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for v in 0..self.len() {
            let _ = writeln!(out, "  {};", quote(self.id(v)));
        }
        for (a, b) in self.edges() {
            let _ = writeln!(out, "  {} -> {};", quote(self.id(a)), quote(self.id(b)));
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for PlumbedGraph {
    fn to_dot(&self) -> String {
        let t = self.tree();
        let mut out = String::from("digraph {\n");
        for v in 0..t.len() {
            let label = format!("{} ({})", t.id(v), self.weight(v));
            let _ = writeln!(out, "  {} [label={}];", quote(t.id(v)), quote(&label));
        }
        for (a, b) in t.edges() {
            let _ = writeln!(out, "  {} -> {};", quote(t.id(a)), quote(t.id(b)));
        }
        out.push_str("}\n");
        out
    }
}

impl ToDot for ColoredDag {
    fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for (k, c) in self.nodes() {
            let _ = writeln!(out, "  {} [label={}];", quote(&k.to_string()), quote(&c.to_string()));
        }
        for (a, b) in self.edges() {
            let _ = writeln!(out, "  {} -> {};", quote(&a.to_string()), quote(&b.to_string()));
        }
        out.push_str("}\n");
        out
    }
}

pub fn emit_dot(g: &impl ToDot) -> String {
    g.to_dot()
}

fn exponent_string(e: &BigRational) -> String {
    format!("{}/{}", e.numer(), e.denom())
}

fn parse_exponent(s: &str) -> Result<BigRational> {
    let (p, q) = s
        .split_once('/')
        .ok_or_else(|| Error::Series(format!("exponent {s:?} is not of the form p/q")))?;
    let p: BigInt = p.parse().map_err(|_| Error::Series(format!("bad numerator in {s:?}")))?;
    let q: BigInt = q.parse().map_err(|_| Error::Series(format!("bad denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Series(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(p, q))
}

/// Terms as a JSON value, ascending exponents.
pub fn series_to_json(s: &QSeries) -> Value {
    Value::Array(
        s.iter()
            .map(|(e, c)| {
                let c: serde_json::Number = c.to_string().parse().expect("integers are JSON numbers");
                json!({"exponent": exponent_string(e), "coefficient": c})
            })
            .collect(),
    )
}

/// `[{"exponent":"p/q","coefficient":n}, ...]`, exponents ascending and in
/// lowest terms.
pub fn serialize_series(s: &QSeries) -> String {
    series_to_json(s).to_string()
}

pub fn series_from_json(v: &Value, order: BigRational) -> Result<QSeries> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Series("expected a JSON array".into()))?;
    let mut s = QSeries::zero(order);
    for item in items {
        let e = item
            .get("exponent")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Series(format!("missing exponent in {item}")))?;
        let c = match item.get("coefficient") {
            Some(Value::Number(n)) => n.to_string(),
            _ => return Err(Error::Series(format!("missing coefficient in {item}"))),
        };
        let c: BigInt = c
            .parse()
            .map_err(|_| Error::Series(format!("coefficient {c} is not an integer")))?;
        s.add_term(parse_exponent(e)?, c);
    }
    Ok(s)
}

/// Inverse of `serialize_series`; the truncation order is not part of the
/// format and has to be supplied.
pub fn deserialize_series(text: &str, order: BigRational) -> Result<QSeries> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Series(e.to_string()))?;
    series_from_json(&v, order)
}

/// `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    if s.contains('/') {
        parse_exponent(s)
    } else {
        let p: BigInt = s
            .trim()
            .parse()
            .map_err(|_| Error::Series(format!("{s:?} is not a rational number")))?;
        Ok(BigRational::new(p, BigInt::one()))
    }
}
