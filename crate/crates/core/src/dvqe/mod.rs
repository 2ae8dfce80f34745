//! Distributed VQE: subsystem layout, ansatz, factorized energy, gradients,
//! Adam optimization and decoding into an initial cut.

mod decode;
mod gradient;
mod layout;
mod model;
mod optimizer;

pub use decode::{decode_solution, sign_round};
pub use gradient::{energy_gradient, GradientMethod};
pub use layout::{partition_vertices, SubsystemLayout};
pub use model::{distributed_energy, BlockState, DistributedModel, DistributedState};
pub use optimizer::{optimize, OptimizeOutcome, OptimizerConfig, StopReason};

use rand::Rng as _;

use crate::circuit::{build_ansatz, AnsatzCircuit};
use crate::error::Result;
use crate::graph::CutAssignment;
use crate::rng::{derive_seed, rng_from_seed, tags};

/// One ansatz per block, sized to the block.
pub fn build_block_ansatze(layout: &SubsystemLayout, layers: usize) -> Result<Vec<AnsatzCircuit>> {
    layout
        .blocks()
        .iter()
        .map(|b| build_ansatz(b.len(), layers))
        .collect()
}

/// I.i.d. uniform parameters on `[0, 2π)`.
pub fn random_params(circuits: &[AnsatzCircuit], seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng_from_seed(seed);
    circuits
        .iter()
        .map(|c| {
            (0..c.n_params())
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct InitialSolution {
    pub assignment: CutAssignment,
    pub outcome: OptimizeOutcome,
}

/// Randomly initialized ansatz per block, Adam on the expected cut, then
/// decoding of the best state seen.
pub fn initial_solution(
    model: &DistributedModel<'_>,
    layers: usize,
    config: &OptimizerConfig,
    m_samples: usize,
    seed: u64,
) -> Result<InitialSolution> {
    let circuits = build_block_ansatze(model.layout(), layers)?;
    let params = random_params(&circuits, derive_seed(seed, tags::INIT_PARAMS, 0));
    let outcome = optimize(model, circuits, params, config)?;
    let assignment = decode_solution(
        model,
        &outcome.best,
        m_samples,
        derive_seed(seed, tags::DECODE, 0),
    );
    Ok(InitialSolution {
        assignment,
        outcome,
    })
}

/// `iter,energy` rows, iteration 0 being the starting point.
pub fn trace_csv(trace: &[f64]) -> String {
    let mut out = String::from("iter,energy\n");
    for (k, e) in trace.iter().enumerate() {
        out.push_str(&format!("{k},{e:.17e}\n"));
    }
    out
}

/// Parameters as a JSON object keyed by block index.
pub fn params_json(params: &[Vec<f64>]) -> serde_json::Value {
    params
        .iter()
        .enumerate()
        .map(|(b, p)| (b.to_string(), serde_json::json!(p)))
        .collect::<serde_json::Map<_, _>>()
        .into()
}
