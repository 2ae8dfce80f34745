//! The outer refinement loop: initial DVQE solution (or a supplied warm
//! start), then alternating CNS-1 and QP-2 until the best cut stops
//! improving.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{cns1, improvement_tolerance, qp2_optimize};
use crate::dvqe::{initial_solution, partition_vertices, DistributedModel, OptimizerConfig};
use crate::error::{Error, Result};
use crate::graph::{cut_value, CutAssignment, WeightedGraph};
use crate::rng::{derive_seed, tags};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EdvqeConfig {
    pub subsystem_size: usize,
    pub ansatz_layers: usize,
    /// Adam settings for the initial DVQE phase.
    pub inner_optimizer: OptimizerConfig,
    /// Adam settings for each QP-2 perturbation.
    pub qp2_optimizer: OptimizerConfig,
    pub m_samples: usize,
    pub outer_patience: usize,
    pub max_outer_iters: usize,
    pub theta_init_halfwidth: f64,
    /// RXX pairs per block; `None` uses every cross-partition pair.
    pub pair_budget: Option<usize>,
}

impl Default for EdvqeConfig {
    fn default() -> Self {
        Self {
            subsystem_size: 10,
            ansatz_layers: 2,
            inner_optimizer: OptimizerConfig::default(),
            qp2_optimizer: OptimizerConfig {
                learning_rate: 0.02,
                max_iters: 150,
                ..OptimizerConfig::default()
            },
            m_samples: 32,
            outer_patience: 3,
            max_outer_iters: 20,
            theta_init_halfwidth: 0.01 * PI,
            pair_budget: None,
        }
    }
}

impl EdvqeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.subsystem_size < 2 || self.subsystem_size > crate::statevector::MAX_QUBITS {
            return Err(Error::InvalidConfig(format!(
                "subsystem size {} outside 2..={}",
                self.subsystem_size,
                crate::statevector::MAX_QUBITS
            )));
        }
        if self.ansatz_layers == 0 {
            return Err(Error::InvalidConfig(
                "ansatz needs at least one layer".into(),
            ));
        }
        if self.outer_patience == 0 {
            return Err(Error::InvalidConfig(
                "outer patience must be at least 1".into(),
            ));
        }
        if !(self.theta_init_halfwidth >= 0.0 && self.theta_init_halfwidth.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "theta half-width {} must be finite and non-negative",
                self.theta_init_halfwidth
            )));
        }
        self.inner_optimizer.validate()?;
        self.qp2_optimizer.validate()
    }
}

/// Incumbent cut after each stage of one outer iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterIteration {
    pub after_cns1: f64,
    pub after_qp2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub seed: u64,
    pub config: EdvqeConfig,
    pub initial: CutAssignment,
    pub best: CutAssignment,
    pub per_outer_iteration: Vec<OuterIteration>,
    pub iterations_run: usize,
    /// Expected-cut trace of the initial DVQE phase; empty for warm starts.
    pub initial_energy_trace: Vec<f64>,
    /// Best DVQE parameters per block; empty for warm starts.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub initial_params: Vec<Vec<f64>>,
    /// Set when a later stage failed; `best` still holds the best cut found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
}

/// Cut improvement attributed to each refinement stage, summed over outer
/// iterations. The two always add up to `best - initial`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageGains {
    pub cns1: f64,
    pub qp2: f64,
}

impl SolveResult {
    pub fn stage_gains(&self) -> StageGains {
        let mut before = self.initial.cut;
        let mut gains = StageGains {
            cns1: 0.0,
            qp2: 0.0,
        };
        for it in &self.per_outer_iteration {
            gains.cns1 += it.after_cns1 - before;
            gains.qp2 += it.after_qp2 - it.after_cns1;
            before = it.after_qp2;
        }
        gains
    }

    /// Cut after the first CNS-1 pass, or the initial cut if none ran.
    pub fn first_cns1_cut(&self) -> f64 {
        self.per_outer_iteration
            .first()
            .map_or(self.initial.cut, |it| it.after_cns1)
    }
}

/// Full pipeline: DVQE initial solution, then the refinement loop.
pub fn edvqe_solve(graph: &WeightedGraph, config: &EdvqeConfig, seed: u64) -> Result<SolveResult> {
    config.validate()?;
    let model = DistributedModel::new(
        graph,
        partition_vertices(graph.n_vertices(), config.subsystem_size)?,
    )?;
    let init = initial_solution(
        &model,
        config.ansatz_layers,
        &config.inner_optimizer,
        config.m_samples,
        derive_seed(seed, tags::RUN, 0),
    )?;
    let params = init.outcome.best_params();
    let mut result = refine(&model, init.assignment, init.outcome.trace, config, seed);
    result.initial_params = params;
    Ok(result)
}

/// Refinement loop started from a supplied assignment instead of the DVQE
/// phase.
pub fn warm_start_solve(
    graph: &WeightedGraph,
    initial: &CutAssignment,
    config: &EdvqeConfig,
    seed: u64,
) -> Result<SolveResult> {
    config.validate()?;
    let initial = CutAssignment {
        cut: cut_value(graph, &initial.bits)?,
        bits: initial.bits.clone(),
    };
    let model = DistributedModel::new(
        graph,
        partition_vertices(graph.n_vertices(), config.subsystem_size)?,
    )?;
    Ok(refine(&model, initial, Vec::new(), config, seed))
}

fn refine(
    model: &DistributedModel<'_>,
    initial: CutAssignment,
    initial_energy_trace: Vec<f64>,
    config: &EdvqeConfig,
    seed: u64,
) -> SolveResult {
    let graph = model.graph();
    let tol = improvement_tolerance(graph);
    let mut result = SolveResult {
        seed,
        config: config.clone(),
        best: initial.clone(),
        initial,
        per_outer_iteration: Vec::new(),
        iterations_run: 0,
        initial_energy_trace,
        initial_params: Vec::new(),
        aborted: None,
    };
    let mut incumbent = result.initial.clone();
    let mut stale = 0;
    for k in 0..config.max_outer_iters {
        let refined = cns1(graph, &incumbent);
        let perturbed = match qp2_optimize(
            model,
            &refined,
            &config.qp2_optimizer,
            config.pair_budget,
            config.theta_init_halfwidth,
            config.m_samples,
            derive_seed(seed, tags::QP2, k as u64),
        ) {
            Ok(out) => out.assignment,
            Err(e) => {
                if refined.cut > result.best.cut {
                    result.best = refined.clone();
                }
                result.per_outer_iteration.push(OuterIteration {
                    after_cns1: refined.cut,
                    after_qp2: refined.cut,
                });
                result.iterations_run = k + 1;
                result.aborted = Some(e.to_string());
                return result;
            }
        };
        result.per_outer_iteration.push(OuterIteration {
            after_cns1: refined.cut,
            after_qp2: perturbed.cut,
        });
        result.iterations_run = k + 1;
        if perturbed.cut > result.best.cut + tol {
            result.best = perturbed.clone();
            stale = 0;
        } else {
            if perturbed.cut > result.best.cut {
                result.best = perturbed.clone();
            }
            stale += 1;
        }
        incumbent = perturbed;
        if stale >= config.outer_patience {
            break;
        }
    }
    result
}
