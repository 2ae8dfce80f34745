//! Edge-list text format: a header line `N M`, then `M` lines `i j w`
//! with 0-based endpoints.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::WeightedGraph;
use crate::error::{Error, Result};

pub fn format_graph(graph: &WeightedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", graph.n_vertices(), graph.n_edges()).unwrap();
    for e in graph.edges() {
        // 17 significant digits round-trip every f64
        writeln!(out, "{} {} {:.16e}", e.i, e.j, e.w).unwrap();
    }
    out
}

pub fn parse_graph(text: &str, origin: &Path) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(origin, 1, "empty graph file"))?;
    let mut fields = header.split_whitespace();
    let n: usize = parse_field(fields.next(), origin, hline, "vertex count")?;
    let m: usize = parse_field(fields.next(), origin, hline, "edge count")?;
    if fields.next().is_some() {
        return Err(Error::parse(origin, hline, "header must be `N M`"));
    }
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let mut f = text.split_whitespace();
        let i: usize = parse_field(f.next(), origin, line, "endpoint i")?;
        let j: usize = parse_field(f.next(), origin, line, "endpoint j")?;
        let w: f64 = parse_field(f.next(), origin, line, "weight")?;
        if f.next().is_some() {
            return Err(Error::parse(origin, line, "edge line must be `i j w`"));
        }
        edges.push((i, j, w));
    }
    if edges.len() != m {
        return Err(Error::parse(
            origin,
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    WeightedGraph::new(n, edges)
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    origin: &Path,
    line: usize,
    what: &str,
) -> Result<T> {
    let field = field.ok_or_else(|| Error::parse(origin, line, format!("missing {what}")))?;
    field
        .parse()
        .map_err(|_| Error::parse(origin, line, format!("bad {what} {field:?}")))
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graph(&text, path)
}

pub fn write_graph(graph: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_graph(graph)).map_err(|e| Error::io(path, e))
}
