//! Quantum two-vertex swap perturbation.
//!
//! The incumbent cut is encoded with one RX per qubit (angle `π` on set
//! bits, `0` otherwise); RXX gates between qubits on opposite sides of the
//! cut then allow partial swaps. At `θ = π` an RXX maps `|01⟩` to `-i|10⟩`.
//! Only pairs inside one subsystem are entangled: the product state cannot
//! carry correlations between subsystems.

use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::Rng as _;

use crate::circuit::{AnsatzCircuit, Gate};
use crate::dvqe::{
    decode_solution, optimize, DistributedModel, OptimizeOutcome, OptimizerConfig, SubsystemLayout,
};
use crate::error::{Error, Result};
use crate::graph::CutAssignment;
use crate::rng::{derive_seed, rng_from_seed};

/// Per-block perturbation circuits and their starting parameters. Block
/// parameters are laid out as the `φ` encoding angles followed by one `θ`
/// per RXX pair.
#[derive(Debug, Clone)]
pub struct Qp2Circuits {
    pub circuits: Vec<AnsatzCircuit>,
    pub params: Vec<Vec<f64>>,
    /// Local qubit pairs carrying an RXX gate, per block.
    pub pairs: Vec<Vec<(usize, usize)>>,
}

impl Qp2Circuits {
    pub fn n_pairs(&self) -> usize {
        self.pairs.iter().map(Vec::len).sum()
    }
}

/// Encodes `assignment` and attaches RXX gates to intra-block pairs with
/// differing bits: all of them, or a seeded random subset of `pair_budget`
/// per block. `θ` starts i.i.d. uniform on `[-theta_halfwidth, theta_halfwidth]`.
pub fn build_qp2(
    assignment: &CutAssignment,
    layout: &SubsystemLayout,
    pair_budget: Option<usize>,
    theta_halfwidth: f64,
    seed: u64,
) -> Result<Qp2Circuits> {
    if assignment.bits.len() != layout.n_vertices() {
        return Err(Error::Dimension(format!(
            "{} bits for a layout over {} vertices",
            assignment.bits.len(),
            layout.n_vertices()
        )));
    }
    if !(theta_halfwidth >= 0.0 && theta_halfwidth.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "theta half-width {theta_halfwidth}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut out = Qp2Circuits {
        circuits: Vec::with_capacity(layout.n_blocks()),
        params: Vec::with_capacity(layout.n_blocks()),
        pairs: Vec::with_capacity(layout.n_blocks()),
    };
    for block in layout.blocks() {
        let n = block.len();
        let bits: Vec<u8> = block.iter().map(|&v| assignment.bits[v]).collect();
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| bits[a] != bits[b])
            .collect();
        if let Some(budget) = pair_budget {
            if budget < pairs.len() {
                let mut keep = sample(&mut rng, pairs.len(), budget).into_vec();
                keep.sort_unstable();
                pairs = keep.into_iter().map(|k| pairs[k]).collect();
            }
        }
        let mut gates: Vec<Gate> = (0..n).map(|q| Gate::Rx { qubit: q, param: q }).collect();
        let mut params: Vec<f64> = bits
            .iter()
            .map(|&b| if b == 1 { PI } else { 0.0 })
            .collect();
        for (k, &(a, b)) in pairs.iter().enumerate() {
            gates.push(Gate::Rxx { a, b, param: n + k });
            params.push(if theta_halfwidth > 0.0 {
                rng.random_range(-theta_halfwidth..=theta_halfwidth)
            } else {
                0.0
            });
        }
        let n_params = params.len();
        out.circuits.push(AnsatzCircuit::new(n, gates, n_params)?);
        out.params.push(params);
        out.pairs.push(pairs);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Qp2Outcome {
    /// Better of the decoded perturbed state and the incumbent.
    pub assignment: CutAssignment,
    /// Cut decoded from the optimized perturbation, before comparison with
    /// the incumbent.
    pub decoded_cut: f64,
    pub optimization: OptimizeOutcome,
}

/// Builds the perturbation circuits around `incumbent`, optimizes `φ` and
/// `θ` jointly, decodes and keeps the better of decoded and incumbent.
#[allow(clippy::too_many_arguments)]
pub fn qp2_optimize(
    model: &DistributedModel<'_>,
    incumbent: &CutAssignment,
    optimizer: &OptimizerConfig,
    pair_budget: Option<usize>,
    theta_halfwidth: f64,
    m_samples: usize,
    seed: u64,
) -> Result<Qp2Outcome> {
    let qp2 = build_qp2(
        incumbent,
        model.layout(),
        pair_budget,
        theta_halfwidth,
        derive_seed(seed, 0, 0),
    )?;
    let optimization = optimize(model, qp2.circuits, qp2.params, optimizer)?;
    let decoded = decode_solution(
        model,
        &optimization.best,
        m_samples,
        derive_seed(seed, 1, 0),
    );
    let decoded_cut = decoded.cut;
    let assignment = if decoded.cut > incumbent.cut {
        decoded
    } else {
        incumbent.clone()
    };
    Ok(Qp2Outcome {
        assignment,
        decoded_cut,
        optimization,
    })
}
