//! Text formats for graphs, targets, lists and weights.
//!
//! * graph: `n m`, then `m` lines `u v` with `0 <= u < v < n`
//! * target: `k`, then `k` colour names one per line, then edge lines `a b`
//!   by name (`a a` is a loop)
//! * lists: lines `v: c1 c2 ...`; vertices without a line get every colour
//! * weights: lines `v c p/q`; absent pairs weigh one
//!
//! Lists and weights files tolerate blank lines and `#` comments.

use std::fs;
use std::path::Path;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{GraphError, ListAssignment, SimpleGraph, TargetGraph, WeightTable};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| syntax(line, format!("expected {what}, found {tok:?}")))
}

/// Numbered non-empty lines (1-based), trailing blank lines allowed.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    let mut lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).collect();
    while lines.last().is_some_and(|(_, l)| l.is_empty()) {
        lines.pop();
    }
    lines
}

pub fn parse_graph(text: &str) -> Result<SimpleGraph, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.into_iter();
    let (ln, header) = it.next().ok_or_else(|| syntax(1, "missing header \"n m\""))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(syntax(ln, "header must be \"n m\""));
    }
    let n = parse_usize(toks[0], ln, "vertex count")?;
    let m = parse_usize(toks[1], ln, "edge count")?;
    let mut g = SimpleGraph::new(n);
    let mut seen = 0;
    for (ln, line) in it {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(ln, "edge line must be \"u v\""));
        }
        let u = parse_usize(toks[0], ln, "vertex id")?;
        let v = parse_usize(toks[1], ln, "vertex id")?;
        if u >= v {
            return Err(syntax(ln, format!("edge endpoints must satisfy u < v, got {u} {v}")));
        }
        g.add_edge(u, v).map_err(|source| ParseError::Graph { line: ln, source })?;
        seen += 1;
    }
    if seen != m {
        return Err(syntax(ln, format!("header announces {m} edges, found {seen}")));
    }
    Ok(g)
}

pub fn write_graph(g: &SimpleGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_target(text: &str) -> Result<TargetGraph, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.into_iter();
    let (ln, header) = it.next().ok_or_else(|| syntax(1, "missing colour count"))?;
    let k = parse_usize(header, ln, "colour count")?;
    let mut names = Vec::with_capacity(k);
    for _ in 0..k {
        let (ln, name) = it.next().ok_or_else(|| syntax(ln, format!("expected {k} colour names")))?;
        if name.is_empty() || name.split_whitespace().count() != 1 {
            return Err(syntax(ln, format!("colour name must be a single token, found {name:?}")));
        }
        names.push(name.to_string());
    }
    let mut h = TargetGraph::new(names).map_err(|source| ParseError::Graph { line: ln, source })?;
    for (ln, line) in it {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(ln, "edge line must be \"a b\""));
        }
        let colour = |name: &str| h.colour_by_name(name).ok_or_else(|| syntax(ln, format!("unknown colour {name:?}")));
        let (a, b) = (colour(toks[0])?, colour(toks[1])?);
        h.add_edge(a, b).map_err(|source| ParseError::Graph { line: ln, source })?;
    }
    Ok(h)
}

pub fn write_target(h: &TargetGraph) -> String {
    let mut out = format!("{}\n", h.k());
    for name in h.names() {
        out.push_str(name);
        out.push('\n');
    }
    for (a, b) in h.edges() {
        out.push_str(&format!("{} {}\n", h.name(a), h.name(b)));
    }
    out
}

fn meaningful(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_lists(text: &str, n: usize, h: &TargetGraph) -> Result<ListAssignment, ParseError> {
    let mut lists: Vec<Option<Vec<usize>>> = vec![None; n];
    for (ln, line) in meaningful(text) {
        let (head, rest) = line.split_once(':').ok_or_else(|| syntax(ln, "list line must be \"v: c1 c2 ...\""))?;
        let v = parse_usize(head.trim(), ln, "vertex id")?;
        if v >= n {
            return Err(ParseError::Graph { line: ln, source: GraphError::VertexOutOfRange { vertex: v, n } });
        }
        if lists[v].is_some() {
            return Err(syntax(ln, format!("second list for vertex {v}")));
        }
        let list = rest
            .split_whitespace()
            .map(|name| h.colour_by_name(name).ok_or_else(|| syntax(ln, format!("unknown colour {name:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        lists[v] = Some(list);
    }
    let lists = lists.into_iter().map(|l| l.unwrap_or_else(|| (0..h.k()).collect())).collect();
    Ok(ListAssignment::new(lists, h.k()).expect("colours resolved by name"))
}

pub fn parse_weights(text: &str, n: usize, h: &TargetGraph) -> Result<WeightTable, ParseError> {
    let mut table = WeightTable::new();
    let mut seen = std::collections::HashSet::new();
    for (ln, line) in meaningful(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(syntax(ln, "weight line must be \"v c p/q\""));
        }
        let v = parse_usize(toks[0], ln, "vertex id")?;
        if v >= n {
            return Err(ParseError::Graph { line: ln, source: GraphError::VertexOutOfRange { vertex: v, n } });
        }
        let c = h.colour_by_name(toks[1]).ok_or_else(|| syntax(ln, format!("unknown colour {:?}", toks[1])))?;
        let w = parse_rational(toks[2]).ok_or_else(|| syntax(ln, format!("bad rational {:?}", toks[2])))?;
        if !seen.insert((v, c)) {
            return Err(syntax(ln, format!("second weight for vertex {v} colour {}", toks[1])));
        }
        table.set(v, c, w);
    }
    Ok(table)
}

/// `p/q` or a plain integer; rejects a zero denominator.
pub fn parse_rational(tok: &str) -> Option<BigRational> {
    if let Some((p, q)) = tok.split_once('/') {
        let q: num_bigint::BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p.parse().ok()?, q))
    } else {
        Some(BigRational::from_integer(tok.parse().ok()?))
    }
}

pub fn read_file(path: &Path) -> Result<String, ParseError> {
    fs::read_to_string(path).map_err(|source| ParseError::Io { path: path.display().to_string(), source })
}
