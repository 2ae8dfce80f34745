//! Adam ascent on the distributed energy (the expected cut).

use serde::{Deserialize, Serialize};

use super::{
    distributed_energy, energy_gradient, DistributedModel, DistributedState, GradientMethod,
};
use crate::circuit::AnsatzCircuit;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub max_iters: usize,
    /// Stop once the gradient norm drops below this; 0 disables the test.
    pub grad_tol: f64,
    pub energy_tol: f64,
    /// Consecutive iterations with `|ΔE| < energy_tol` before stopping.
    pub patience: usize,
    pub gradient: GradientMethod,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            max_iters: 300,
            grad_tol: 0.0,
            energy_tol: 1e-6,
            patience: 20,
            gradient: GradientMethod::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.learning_rate > 0.0
            && self.learning_rate.is_finite()
            && self.beta1 > 0.0
            && self.beta1 < 1.0
            && self.beta2 > 0.0
            && self.beta2 < 1.0
            && self.epsilon > 0.0
            && self.max_iters >= 1
            && self.grad_tol >= 0.0
            && self.energy_tol >= 0.0
            && self.patience >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "invalid optimizer settings: {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIters,
    Patience,
    GradientTolerance,
}

#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    /// State at the best energy seen.
    pub best: DistributedState,
    pub best_energy: f64,
    /// Energy at every evaluated point; entry 0 is the initial energy.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub stop: StopReason,
}

impl OptimizeOutcome {
    pub fn best_params(&self) -> Vec<Vec<f64>> {
        self.best.params()
    }
}

/// Maximizes the expected cut over all block parameters jointly.
pub fn optimize(
    model: &DistributedModel<'_>,
    circuits: Vec<AnsatzCircuit>,
    init_params: Vec<Vec<f64>>,
    config: &OptimizerConfig,
) -> Result<OptimizeOutcome> {
    config.validate()?;
    let mut state = DistributedState::new(model, circuits, init_params)?;
    let mut params = state.params();
    let mut m: Vec<Vec<f64>> = params.iter().map(|p| vec![0.0; p.len()]).collect();
    let mut v = m.clone();

    let mut energy = distributed_energy(model, &state);
    let mut trace = vec![energy];
    if !energy.is_finite() {
        return Err(Error::NonFiniteEnergy {
            iteration: 0,
            trace,
        });
    }
    let mut best = state.clone();
    let mut best_energy = energy;
    let mut calm = 0;
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;

    for t in 1..=config.max_iters {
        let grad = energy_gradient(model, &state, config.gradient)?;
        if config.grad_tol > 0.0 {
            let norm = grad.iter().flatten().map(|g| g * g).sum::<f64>().sqrt();
            if norm < config.grad_tol {
                stop = StopReason::GradientTolerance;
                break;
            }
        }
        let bias1 = 1.0 - config.beta1.powi(t as i32);
        let bias2 = 1.0 - config.beta2.powi(t as i32);
        for (b, g) in grad.iter().enumerate() {
            for (k, &gk) in g.iter().enumerate() {
                m[b][k] = config.beta1 * m[b][k] + (1.0 - config.beta1) * gk;
                v[b][k] = config.beta2 * v[b][k] + (1.0 - config.beta2) * gk * gk;
                let step = m[b][k] / bias1 / ((v[b][k] / bias2).sqrt() + config.epsilon);
                // ascent: the energy is the expected cut
                params[b][k] += config.learning_rate * step;
            }
            state.set_block_params(model, b, &params[b])?;
        }
        iterations = t;

        let next = distributed_energy(model, &state);
        trace.push(next);
        if !next.is_finite() {
            return Err(Error::NonFiniteEnergy {
                iteration: t,
                trace,
            });
        }
        if next > best_energy {
            best_energy = next;
            best.clone_from(&state);
        }
        if (next - energy).abs() < config.energy_tol {
            calm += 1;
        } else {
            calm = 0;
        }
        energy = next;
        if calm >= config.patience {
            stop = StopReason::Patience;
            break;
        }
    }

    Ok(OptimizeOutcome {
        best,
        best_energy,
        trace,
        iterations,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_ansatz;
    use crate::dvqe::partition_vertices;
    use crate::graph::WeightedGraph;

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig {
            beta1: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            max_iters: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn edgeless_graph_stops_by_patience() {
        let g = WeightedGraph::empty(4);
        let model = DistributedModel::new(&g, partition_vertices(4, 2).unwrap()).unwrap();
        let circuits: Vec<_> = (0..2).map(|_| build_ansatz(2, 2).unwrap()).collect();
        let params = circuits.iter().map(|c| vec![0.5; c.n_params()]).collect();
        let out = optimize(&model, circuits, params, &OptimizerConfig::default()).unwrap();
        assert_eq!(out.stop, StopReason::Patience);
        assert!(out.trace.iter().all(|&e| e == 0.0));
        assert_eq!(out.trace.len(), 21);
    }

    #[test]
    fn single_edge_reaches_full_cut() {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let model = DistributedModel::new(&g, partition_vertices(2, 2).unwrap()).unwrap();
        let c = build_ansatz(2, 1).unwrap();
        let out = optimize(
            &model,
            vec![c],
            vec![vec![0.4, 1.9, 0.8]],
            &OptimizerConfig::default(),
        )
        .unwrap();
        assert!(out.best_energy >= 1.0 - 1e-3, "{}", out.best_energy);
        assert!(out.best_energy >= out.trace[0]);
    }

    #[test]
    fn deterministic() {
        let g = crate::graph::gen_complete(6, 4, crate::graph::WeightRange::new(1.0, 5.0)).unwrap();
        let model = DistributedModel::new(&g, partition_vertices(6, 3).unwrap()).unwrap();
        let circuits: Vec<_> = (0..2).map(|_| build_ansatz(3, 2).unwrap()).collect();
        let params: Vec<Vec<f64>> = circuits
            .iter()
            .map(|c| (0..c.n_params()).map(|k| 0.1 * k as f64).collect())
            .collect();
        let cfg = OptimizerConfig {
            max_iters: 40,
            ..Default::default()
        };
        let a = optimize(&model, circuits.clone(), params.clone(), &cfg).unwrap();
        let b = optimize(&model, circuits, params, &cfg).unwrap();
        assert_eq!(a.trace, b.trace);
    }
}
