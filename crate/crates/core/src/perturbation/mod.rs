//! Hybrid classical-quantum refinement of a cut.

mod cns1;
mod qp2;
mod solver;

pub use cns1::{best_flip, cns1, cns1_with_moves, improvement_tolerance};
pub use qp2::{build_qp2, qp2_optimize, Qp2Circuits, Qp2Outcome};
pub use solver::{
    edvqe_solve, warm_start_solve, EdvqeConfig, OuterIteration, SolveResult, StageGains,
};
