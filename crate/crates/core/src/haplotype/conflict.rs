use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FragmentMatrix;
use crate::graph::WeightedGraph;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ConflictMode {
    /// `w = d - a`: disagreements push reads apart, agreements pull them
    /// together.
    #[default]
    Signed,
    /// `w = d`, the number of disagreeing shared sites.
    Discordant,
}

/// Disagreeing and agreeing shared-site counts for every read pair that
/// shares a site, keyed by `(i, j)` with `i < j`.
pub fn pair_counts(frags: &FragmentMatrix) -> BTreeMap<(usize, usize), (u32, u32)> {
    let mut by_site: Vec<Vec<(usize, i8)>> = vec![Vec::new(); frags.n_sites()];
    for (r, read) in frags.reads().iter().enumerate() {
        for &(s, v) in read {
            by_site[s].push((r, v));
        }
    }
    let mut counts = BTreeMap::new();
    for cover in &by_site {
        for (k, &(i, vi)) in cover.iter().enumerate() {
            for &(j, vj) in &cover[k + 1..] {
                let entry = counts.entry((i, j)).or_insert((0, 0));
                if vi == vj {
                    entry.1 += 1;
                } else {
                    entry.0 += 1;
                }
            }
        }
    }
    counts
}

/// Reads as vertices; edges ordered by `(i, j)`.
pub fn build_conflict_graph(frags: &FragmentMatrix, mode: ConflictMode) -> WeightedGraph {
    let edges = pair_counts(frags)
        .into_iter()
        .filter_map(|((i, j), (d, a))| {
            let w = match mode {
                ConflictMode::Signed => d as f64 - a as f64,
                ConflictMode::Discordant => d as f64,
            };
            (w != 0.0).then_some((i, j, w))
        });
    WeightedGraph::new(frags.n_reads(), edges).expect("conflict edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frags(rows: &[Vec<i8>]) -> FragmentMatrix {
        FragmentMatrix::from_dense(rows).unwrap()
    }

    #[test]
    fn opposite_reads() {
        let f = frags(&[vec![1, 1], vec![-1, -1]]);
        for mode in [ConflictMode::Signed, ConflictMode::Discordant] {
            let g = build_conflict_graph(&f, mode);
            assert_eq!(g.n_edges(), 1);
            assert_eq!(g.edges()[0].w, 2.0);
        }
    }

    #[test]
    fn identical_and_disjoint_reads() {
        let f = frags(&[vec![1, -1, 0, 0], vec![1, -1, 0, 0], vec![0, 0, 1, 1]]);
        assert_eq!(
            build_conflict_graph(&f, ConflictMode::Discordant).n_edges(),
            0
        );
        let g = build_conflict_graph(&f, ConflictMode::Signed);
        assert_eq!(g.n_edges(), 1);
        assert_eq!(
            (g.edges()[0].i, g.edges()[0].j, g.edges()[0].w),
            (0, 1, -2.0)
        );
    }

    #[test]
    fn balanced_pair_has_no_signed_edge() {
        let f = frags(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(build_conflict_graph(&f, ConflictMode::Signed).n_edges(), 0);
        assert_eq!(
            build_conflict_graph(&f, ConflictMode::Discordant).n_edges(),
            1
        );
    }

    #[test]
    fn read_order_only_relabels() {
        let (f, _) = super::super::gen_synthetic_diploid(15, 12, 4, 0.2, 1).unwrap();
        let perm: Vec<usize> = (0..12).rev().collect();
        let g = build_conflict_graph(&f, ConflictMode::Signed);
        let h = build_conflict_graph(&f.subset(&perm), ConflictMode::Signed);
        let mut mapped: Vec<(usize, usize, f64)> = h
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (perm[e.i], perm[e.j]);
                (a.min(b), a.max(b), e.w)
            })
            .collect();
        mapped.sort_by_key(|x| (x.0, x.1));
        let orig: Vec<(usize, usize, f64)> = g.edges().iter().map(|e| (e.i, e.j, e.w)).collect();
        assert_eq!(mapped, orig);
    }
}
