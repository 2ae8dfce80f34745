//! Enhanced distributed variational quantum eigensolver for weighted
//! MaxCut.
//!
//! The pipeline simulates small subsystems exactly, combines them through a
//! factorized product-state energy, and refines the decoded cut with
//! alternating single-flip local search and a two-vertex swap perturbation
//! circuit. A Goemans–Williamson baseline and a haplotype-phasing front end
//! are included.

pub mod bench;
pub mod circuit;
pub mod cli;
pub mod dvqe;
pub mod error;
pub mod graph;
pub mod gw;
pub mod haplotype;
pub mod perturbation;
pub mod rng;
pub mod statevector;

pub use error::{Error, Result};
pub use graph::{cut_value, CutAssignment, WeightedGraph};
