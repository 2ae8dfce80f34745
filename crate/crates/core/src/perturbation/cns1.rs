//! Classical single-vertex neighborhood search.

use crate::graph::{cut_value_unchecked, flip_delta, Adjacency, CutAssignment, WeightedGraph};

/// Smallest gain treated as a strict improvement. Scaled by the graph's
/// total absolute weight so rounding in long sums never counts as progress.
pub fn improvement_tolerance(graph: &WeightedGraph) -> f64 {
    let scale: f64 = graph.edges().iter().map(|e| e.w.abs()).sum();
    1e-12 * scale.max(1.0)
}

/// Best single flip from `bits`: the lowest-index vertex among those with
/// the largest gain, if that gain is a strict improvement.
pub fn best_flip(adj: &Adjacency, bits: &[u8], tol: f64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for v in 0..bits.len() {
        let gain = flip_delta(adj, bits, v);
        if gain > tol && best.is_none_or(|(_, g)| gain > g) {
            best = Some((v, gain));
        }
    }
    best
}

/// Repeated best-improvement passes over the `N + 1` single-flip
/// neighborhood until no flip strictly improves the cut.
pub fn cns1(graph: &WeightedGraph, start: &CutAssignment) -> CutAssignment {
    cns1_with_moves(graph, start).0
}

/// Like [`cns1`], also returning the vertex flipped at each pass.
pub fn cns1_with_moves(
    graph: &WeightedGraph,
    start: &CutAssignment,
) -> (CutAssignment, Vec<usize>) {
    let adj = graph.adjacency();
    let tol = improvement_tolerance(graph);
    let mut bits = start.bits.clone();
    let mut moves = Vec::new();
    while let Some((v, _)) = best_flip(&adj, &bits, tol) {
        bits[v] ^= 1;
        moves.push(v);
    }
    let cut = cut_value_unchecked(graph, &bits);
    (CutAssignment { bits, cut }, moves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{brute_force_maxcut, cut_value};

    fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::new(n, edges.iter().map(|&(i, j)| (i, j, 1.0))).unwrap()
    }

    #[test]
    fn path_reaches_optimum() {
        let g = unit(3, &[(0, 1), (1, 2)]);
        let out = cns1(&g, &CutAssignment::zeros(&g));
        assert_eq!(out.bits, vec![0, 1, 0]);
        assert_eq!(out.cut, 2.0);
        assert_eq!(out.cut, brute_force_maxcut(&g).unwrap().cut);
    }

    #[test]
    fn triangle_tie_breaks_to_lowest_vertex() {
        let g = unit(3, &[(0, 1), (0, 2), (1, 2)]);
        let (out, moves) = cns1_with_moves(&g, &CutAssignment::zeros(&g));
        assert_eq!(moves, vec![0]);
        assert_eq!(out.bits, vec![1, 0, 0]);
        assert_eq!(out.cut, 2.0);
    }

    #[test]
    fn local_optimum_is_fixed_point() {
        let g = unit(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let start = CutAssignment::evaluate(&g, vec![0, 1, 0, 1]).unwrap();
        let (out, moves) = cns1_with_moves(&g, &start);
        assert!(moves.is_empty());
        assert_eq!(out, start);
        assert_eq!(cut_value(&g, &out.bits).unwrap(), out.cut);
    }
}
