//! Benchmark instance generators.
//!
//! All generators are pure functions of their parameters and seed.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng};

/// Pairing-model attempts before [`gen_regular`] gives up.
pub const REGULAR_RETRY_BUDGET: usize = 100;

/// Closed interval edge weights are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightRange {
    pub min: f64,
    pub max: f64,
    /// Draw integers uniformly from `ceil(min)..=floor(max)` instead of reals.
    #[serde(default)]
    pub integer: bool,
}

impl WeightRange {
    pub fn new(min: f64, max: f64) -> Self {
        Self {
            min,
            max,
            integer: false,
        }
    }

    pub fn integer(mut self) -> Self {
        self.integer = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(Error::InvalidConfig(format!(
                "empty weight range [{}, {}]",
                self.min, self.max
            )));
        }
        if self.integer && self.min.ceil() > self.max.floor() {
            return Err(Error::InvalidConfig(format!(
                "no integer in weight range [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut Rng) -> f64 {
        if self.integer {
            let lo = self.min.ceil() as i64;
            let hi = self.max.floor() as i64;
            rng.random_range(lo..=hi) as f64
        } else if self.min == self.max {
            self.min
        } else {
            rng.random_range(self.min..=self.max)
        }
    }
}

/// Complete graph on `n` vertices with i.i.d. uniform weights.
pub fn gen_complete(n: usize, seed: u64, weights: WeightRange) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    weights.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, weights.sample(&mut rng)));
        }
    }
    WeightedGraph::new(n, edges)
}

/// Community graph: consecutive blocks of `community_size` vertices form
/// cliques with `intra` weights; each cross-community pair is connected with
/// probability `p_inter` and an `inter` weight. When `community_size` does
/// not divide `n` the last community is smaller.
pub fn gen_cluster(
    n: usize,
    community_size: usize,
    intra: WeightRange,
    inter: WeightRange,
    p_inter: f64,
    seed: u64,
) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!(
            "cluster graph needs n >= 2, got {n}"
        )));
    }
    if community_size == 0 {
        return Err(Error::InvalidConfig(
            "community size must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p_inter) {
        return Err(Error::InvalidConfig(format!(
            "p_inter {p_inter} not in [0, 1]"
        )));
    }
    intra.validate()?;
    inter.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if i / community_size == j / community_size {
                edges.push((i, j, intra.sample(&mut rng)));
            } else if rng.random_bool(p_inter) {
                edges.push((i, j, inter.sample(&mut rng)));
            }
        }
    }
    WeightedGraph::new(n, edges)
}

/// Random `degree`-regular simple graph from the pairing (configuration)
/// model, rejecting pairings with self-loops or multi-edges.
pub fn gen_regular(
    n: usize,
    degree: usize,
    seed: u64,
    weights: WeightRange,
) -> Result<WeightedGraph> {
    if n <= degree {
        return Err(Error::InvalidInstance(format!(
            "{degree}-regular graph needs more than {degree} vertices, got {n}"
        )));
    }
    if (n * degree) % 2 != 0 {
        return Err(Error::InvalidInstance(format!(
            "n * degree = {} is odd; no {degree}-regular graph on {n} vertices",
            n * degree
        )));
    }
    weights.validate()?;
    let mut rng = rng_from_seed(seed);
    let mut points: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    'attempt: for _ in 0..REGULAR_RETRY_BUDGET {
        points.shuffle(&mut rng);
        let mut seen = HashSet::with_capacity(points.len() / 2);
        let mut pairs = Vec::with_capacity(points.len() / 2);
        for pair in points.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
            pairs.push((a, b));
        }
        pairs.sort_unstable();
        let edges: Vec<_> = pairs
            .into_iter()
            .map(|(a, b)| (a, b, weights.sample(&mut rng)))
            .collect();
        return WeightedGraph::new(n, edges);
    }
    Err(Error::Generation(format!(
        "no simple {degree}-regular pairing on {n} vertices after {REGULAR_RETRY_BUDGET} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_counts_and_range() {
        let g = gen_complete(3, 11, WeightRange::new(1.0, 1.0)).unwrap();
        assert_eq!(g.n_edges(), 3);
        assert!(g.edges().iter().all(|e| e.w == 1.0));

        let g = gen_complete(100, 3587, WeightRange::new(1.0, 10.0)).unwrap();
        assert_eq!(g.n_edges(), 4950);
        assert!(g.edges().iter().all(|e| (1.0..=10.0).contains(&e.w)));
        assert_eq!(
            g,
            gen_complete(100, 3587, WeightRange::new(1.0, 10.0)).unwrap()
        );
        assert_ne!(
            g,
            gen_complete(100, 3588, WeightRange::new(1.0, 10.0)).unwrap()
        );

        assert!(matches!(
            gen_complete(1, 0, WeightRange::new(1.0, 2.0)),
            Err(Error::InvalidInstance(_))
        ));
        assert!(gen_complete(4, 0, WeightRange::new(2.0, 1.0)).is_err());
    }

    #[test]
    fn integer_weights() {
        let g = gen_complete(20, 5, WeightRange::new(1.0, 10.0).integer()).unwrap();
        assert!(g
            .edges()
            .iter()
            .all(|e| e.w.fract() == 0.0 && (1.0..=10.0).contains(&e.w)));
    }

    #[test]
    fn cluster_structure() {
        let intra = WeightRange::new(5.0, 10.0);
        let inter = WeightRange::new(1.0, 3.0);
        let g = gen_cluster(40, 10, intra, inter, 0.3, 3587).unwrap();
        let intra_edges = g.edges().iter().filter(|e| e.i / 10 == e.j / 10).count();
        assert_eq!(intra_edges, 4 * 45);
        for e in g.edges() {
            if e.i / 10 == e.j / 10 {
                assert!((5.0..=10.0).contains(&e.w));
            } else {
                assert!((1.0..=3.0).contains(&e.w));
            }
        }

        let g = gen_cluster(40, 10, intra, inter, 0.0, 1).unwrap();
        assert_eq!(g.n_edges(), 180);
        assert!(g.edges().iter().all(|e| e.i / 10 == e.j / 10));

        let g = gen_cluster(20, 10, intra, inter, 1.0, 1).unwrap();
        assert_eq!(
            g.edges().iter().filter(|e| e.i / 10 != e.j / 10).count(),
            100
        );

        // uneven split: communities of 10, 10, 5
        let g = gen_cluster(25, 10, intra, inter, 0.0, 1).unwrap();
        assert_eq!(g.n_edges(), 45 + 45 + 10);

        assert!(gen_cluster(20, 10, intra, inter, 1.5, 1).is_err());
        assert!(gen_cluster(20, 10, WeightRange::new(3.0, 1.0), inter, 0.5, 1).is_err());
    }

    #[test]
    fn regular_graphs() {
        let k4 = gen_regular(4, 3, 9, WeightRange::new(1.0, 1.0)).unwrap();
        assert_eq!(k4.n_edges(), 6);

        let g = gen_regular(100, 3, 3587, WeightRange::new(1.0, 10.0)).unwrap();
        assert_eq!(g.n_edges(), 150);
        assert!(g.degrees().iter().all(|&d| d == 3));
        assert_eq!(
            g,
            gen_regular(100, 3, 3587, WeightRange::new(1.0, 10.0)).unwrap()
        );

        assert!(matches!(
            gen_regular(5, 3, 0, WeightRange::new(1.0, 1.0)),
            Err(Error::InvalidInstance(_))
        ));
        assert!(gen_regular(3, 3, 0, WeightRange::new(1.0, 1.0)).is_err());
    }
}
