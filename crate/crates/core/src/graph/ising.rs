use serde::{Deserialize, Serialize};

use super::WeightedGraph;

/// Diagonal Ising Hamiltonian `constant + sum c_ij Z_i Z_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingModel {
    pub constant: f64,
    pub zz_terms: Vec<(usize, usize, f64)>,
}

impl IsingModel {
    /// Evaluates on spins `z_i in {+1, -1}`.
    pub fn evaluate_spins(&self, spins: &[i8]) -> f64 {
        self.constant
            + self
                .zz_terms
                .iter()
                .map(|&(i, j, c)| c * f64::from(spins[i] * spins[j]))
                .sum::<f64>()
    }

    /// Evaluates on bits, using `z = 1 - 2b`.
    pub fn evaluate_bits(&self, bits: &[u8]) -> f64 {
        let spins: Vec<i8> = bits.iter().map(|&b| 1 - 2 * b as i8).collect();
        self.evaluate_spins(&spins)
    }
}

/// MaxCut cost operator `1/2 sum w_ij (1 - Z_i Z_j)`: its value on a basis
/// state equals the cut of the corresponding bit string.
pub fn to_ising(graph: &WeightedGraph) -> IsingModel {
    IsingModel {
        constant: graph.total_weight() / 2.0,
        zz_terms: graph
            .edges()
            .iter()
            .map(|e| (e.i, e.j, -e.w / 2.0))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cut_value, gen_complete, WeightRange};

    #[test]
    fn single_edge() {
        let g = WeightedGraph::new(2, [(0, 1, 4.0)]).unwrap();
        let m = to_ising(&g);
        assert_eq!(m.constant, 2.0);
        assert_eq!(m.zz_terms, vec![(0, 1, -2.0)]);
        assert_eq!(m.evaluate_spins(&[1, 1]), 0.0);
        assert_eq!(m.evaluate_bits(&[0, 1]), 4.0);
    }

    #[test]
    fn matches_cut_on_every_bitstring() {
        for seed in 0..4 {
            let g = gen_complete(10, seed, WeightRange::new(-3.0, 10.0)).unwrap();
            let m = to_ising(&g);
            for x in 0u32..1 << 10 {
                let bits: Vec<u8> = (0..10).map(|k| ((x >> k) & 1) as u8).collect();
                let diff = m.evaluate_bits(&bits) - cut_value(&g, &bits).unwrap();
                assert!(diff.abs() < 1e-9, "x={x} diff={diff}");
            }
        }
    }
}
