use super::{DistributedModel, DistributedState};
use crate::graph::{cut_value_unchecked, CutAssignment};
use crate::rng::rng_from_seed;

/// Bit string with `bit_v = 1` exactly when `⟨Z_v⟩ < 0`.
pub fn sign_round(dstate: &DistributedState) -> Vec<u8> {
    dstate.z().iter().map(|&z| u8::from(z < 0.0)).collect()
}

/// Turns the product state into a cut.
///
/// Candidates are the sign-rounded string followed by `m_samples` strings
/// measured block by block. The first candidate with the largest cut wins.
pub fn decode_solution(
    model: &DistributedModel<'_>,
    dstate: &DistributedState,
    m_samples: usize,
    seed: u64,
) -> CutAssignment {
    let graph = model.graph();
    let rounded = sign_round(dstate);
    let mut best = CutAssignment {
        cut: cut_value_unchecked(graph, &rounded),
        bits: rounded,
    };
    if m_samples == 0 {
        return best;
    }
    let mut rng = rng_from_seed(seed);
    let draws: Vec<Vec<usize>> = dstate
        .blocks()
        .iter()
        .map(|b| b.state.sample_indices(m_samples, &mut rng))
        .collect();
    let mut bits = vec![0u8; graph.n_vertices()];
    for s in 0..m_samples {
        for (vertices, block_draws) in model.layout().blocks().iter().zip(&draws) {
            let k = block_draws[s];
            for (q, &v) in vertices.iter().enumerate() {
                bits[v] = (k >> q & 1) as u8;
            }
        }
        let cut = cut_value_unchecked(graph, &bits);
        if cut > best.cut {
            best.cut = cut;
            best.bits.copy_from_slice(&bits);
        }
    }
    best
}
