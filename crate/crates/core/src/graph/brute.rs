use super::{CutAssignment, WeightedGraph};
use crate::error::{Error, Result};

/// Largest instance [`brute_force_maxcut`] accepts.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 24;

/// Exhaustive MaxCut. Vertex 0 is pinned to bit 0 and the remaining
/// `2^(n-1)` assignments are visited in Gray-code order, so each step costs
/// one vertex flip.
pub fn brute_force_maxcut(graph: &WeightedGraph) -> Result<CutAssignment> {
    let n = graph.n_vertices();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::Capacity(format!(
            "brute force limited to {BRUTE_FORCE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    if n <= 1 {
        return Ok(CutAssignment {
            bits: vec![0; n],
            cut: 0.0,
        });
    }
    let adj = graph.adjacency();
    let mut bits = vec![0u8; n];
    let mut cut = 0.0;
    let mut best_cut = 0.0;
    let mut best_code: u64 = 0;
    let mut code: u64 = 0;
    for k in 1u64..1 << (n - 1) {
        let v = k.trailing_zeros() as usize + 1;
        cut += super::flip_delta(&adj, &bits, v);
        bits[v] ^= 1;
        code ^= 1 << v;
        if cut > best_cut {
            best_cut = cut;
            best_code = code;
        }
    }
    let best: Vec<u8> = (0..n).map(|v| ((best_code >> v) & 1) as u8).collect();
    // re-evaluate to shed accumulated rounding
    CutAssignment::evaluate(graph, best)
}
