//! Plain-text and JSON graph files.
//!
//! Text format: a header line `n m` followed by `m` lines `u v` with 0-based
//! vertex ids. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::graph::{Graph, GraphFile};
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let (n, m) = parse_pair(header, 1)?;
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        edges.push(parse_pair(line, lineno + 1)?);
    }
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "header declares {m} edges but {} were listed",
            edges.len()
        )));
    }
    Graph::new(n, edges)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse(format!(
            "line {lineno}: expected two integers, got {line:?}"
        ))),
    }
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_graph_json(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text)?;
    Graph::try_from(file)
}

pub fn write_graph_json(g: &Graph) -> String {
    serde_json::to_string(&GraphFile::from(g)).expect("graph serializes")
}

/// Reads either format, choosing JSON when the first non-blank byte is `{`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_edge_list(text)
    }
}
