//! Weighted MaxCut instances and cut evaluation.
//!
//! A [`WeightedGraph`] stores its edges canonically (`i < j`, no duplicates,
//! finite weights). Bits are `u8` values in `{0, 1}`; bit `b` corresponds to
//! the spin `z = 1 - 2b`.

mod brute;
mod generators;
mod io;
mod ising;

pub use brute::{brute_force_maxcut, BRUTE_FORCE_MAX_VERTICES};
pub use generators::{gen_cluster, gen_complete, gen_regular, WeightRange, REGULAR_RETRY_BUDGET};
pub use io::{format_graph, parse_graph, read_graph, write_graph};
pub use ising::{to_ising, IsingModel};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Undirected weighted graph, the MaxCut instance.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Builds a graph from `(i, j, w)` triples.
    ///
    /// Endpoints are reordered so that `i < j`; the edge order is otherwise
    /// preserved. Self-loops, duplicate pairs, out-of-range endpoints and
    /// non-finite weights are rejected.
    pub fn new(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == j {
                return Err(Error::InvalidInstance(format!("self-loop on vertex {i}")));
            }
            if j >= n_vertices {
                return Err(Error::InvalidInstance(format!(
                    "edge ({i}, {j}) out of range for {n_vertices} vertices"
                )));
            }
            if !w.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "edge ({i}, {j}) has non-finite weight"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({i}, {j})")));
            }
            out.push(Edge { i, j, w });
        }
        Ok(Self {
            n_vertices,
            edges: out,
        })
    }

    pub fn empty(n_vertices: usize) -> Self {
        Self {
            n_vertices,
            edges: Vec::new(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }

    /// Degree (number of incident edges) of every vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }
}

/// Compressed neighbor lists, built once per graph for O(deg) vertex queries.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    entries: Vec<(usize, f64)>,
}

impl Adjacency {
    fn new(graph: &WeightedGraph) -> Self {
        let deg = graph.degrees();
        let mut offsets = Vec::with_capacity(graph.n_vertices + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut entries = vec![(0, 0.0); offsets[graph.n_vertices]];
        for e in &graph.edges {
            entries[fill[e.i]] = (e.j, e.w);
            fill[e.i] += 1;
            entries[fill[e.j]] = (e.i, e.w);
            fill[e.j] += 1;
        }
        Self { offsets, entries }
    }

    pub fn n_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.entries[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Binary vertex partition together with its cut value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutAssignment {
    #[serde(with = "bitstring")]
    pub bits: Vec<u8>,
    pub cut: f64,
}

impl CutAssignment {
    /// Validates `bits` against `graph` and caches the cut value.
    pub fn evaluate(graph: &WeightedGraph, bits: Vec<u8>) -> Result<Self> {
        let cut = cut_value(graph, &bits)?;
        Ok(Self { bits, cut })
    }

    pub fn zeros(graph: &WeightedGraph) -> Self {
        Self {
            bits: vec![0; graph.n_vertices()],
            cut: 0.0,
        }
    }

    /// Global complement; the cut is unchanged.
    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| 1 - b).collect(),
            cut: self.cut,
        }
    }

    pub fn bit_string(&self) -> String {
        bits_to_string(&self.bits)
    }
}

/// Serializes bit vectors as `"0110…"` strings.
pub(crate) mod bitstring {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::bits_to_string(bits))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let text = String::deserialize(d)?;
        super::bits_from_string(&text).map_err(serde::de::Error::custom)
    }
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 0 { '0' } else { '1' })
        .collect()
}

pub fn bits_from_string(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Value(format!("bit string contains {other:?}"))),
        })
        .collect()
}

fn check_bits(graph: &WeightedGraph, bits: &[u8]) -> Result<()> {
    if bits.len() != graph.n_vertices() {
        return Err(Error::Dimension(format!(
            "{} bits for a graph with {} vertices",
            bits.len(),
            graph.n_vertices()
        )));
    }
    if let Some(b) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::Value(format!("bit value {b} is not 0 or 1")));
    }
    Ok(())
}

/// Total weight of edges whose endpoints carry different bits.
pub fn cut_value(graph: &WeightedGraph, bits: &[u8]) -> Result<f64> {
    check_bits(graph, bits)?;
    Ok(cut_value_unchecked(graph, bits))
}

pub(crate) fn cut_value_unchecked(graph: &WeightedGraph, bits: &[u8]) -> f64 {
    graph
        .edges
        .iter()
        .filter(|e| bits[e.i] != bits[e.j])
        .map(|e| e.w)
        .sum()
}

/// Change in cut value caused by flipping vertex `v`.
///
/// Edges to same-side neighbors become cut (`+w`), cut edges become uncut
/// (`-w`).
pub fn flip_delta(adj: &Adjacency, bits: &[u8], v: usize) -> f64 {
    let bv = bits[v];
    adj.neighbors(v)
        .iter()
        .map(|&(u, w)| if bits[u] == bv { w } else { -w })
        .sum()
}

/// Mean of `cuts` divided by the edge count.
pub fn normalized_avg_cut(cuts: &[f64], edge_count: usize) -> Result<f64> {
    if cuts.is_empty() {
        return Err(Error::InvalidInput("no cut values to average".into()));
    }
    if edge_count == 0 {
        return Err(Error::InvalidInput("edge count must be positive".into()));
    }
    let mean = cuts.iter().sum::<f64>() / cuts.len() as f64;
    Ok(mean / edge_count as f64)
}
