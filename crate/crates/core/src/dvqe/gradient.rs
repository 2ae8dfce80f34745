use serde::{Deserialize, Serialize};

use super::{DistributedModel, DistributedState};
use crate::error::Result;

/// How circuit gradients are evaluated. Both produce the exact gradient;
/// they differ only in cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    /// Reverse-mode sweep, O(gates) state updates per block.
    #[default]
    Adjoint,
    /// `(E(θ+π/2) - E(θ-π/2)) / 2` per gate, O(gates²) state updates.
    ParameterShift,
}

/// Gradient of the distributed energy with respect to every block's
/// parameters.
///
/// Shifting a parameter of block `b` only changes block `b`'s expectations,
/// so each block is differentiated against a local diagonal observable built
/// from the other blocks' cached `⟨Z⟩` values.
pub fn energy_gradient(
    model: &DistributedModel<'_>,
    dstate: &DistributedState,
    method: GradientMethod,
) -> Result<Vec<Vec<f64>>> {
    dstate
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, block)| {
            let diag = model.block_observable(b, dstate.z());
            let (_, grad) = match method {
                GradientMethod::Adjoint => block.circuit.adjoint_gradient(&block.params, &diag)?,
                GradientMethod::ParameterShift => {
                    block.circuit.shift_gradient(&block.params, &diag)?
                }
            };
            Ok(grad)
        })
        .collect()
}
