//! Parameterized circuits over a single subsystem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::Statevector;

/// One parameterized rotation. `param` indexes the circuit's shared
/// parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    Rx {
        qubit: usize,
        param: usize,
    },
    Rzx {
        control: usize,
        target: usize,
        param: usize,
    },
    Rxx {
        a: usize,
        b: usize,
        param: usize,
    },
}

impl Gate {
    pub fn param(&self) -> usize {
        match *self {
            Gate::Rx { param, .. } | Gate::Rzx { param, .. } | Gate::Rxx { param, .. } => param,
        }
    }

    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Rx { qubit, .. } => (qubit, None),
            Gate::Rzx {
                control, target, ..
            } => (control, Some(target)),
            Gate::Rxx { a, b, .. } => (a, Some(b)),
        }
    }

    pub(crate) fn apply(&self, state: &mut Statevector, theta: f64) {
        match *self {
            Gate::Rx { qubit, .. } => state.rx(qubit, theta),
            Gate::Rzx {
                control, target, ..
            } => state.rzx(control, target, theta),
            Gate::Rxx { a, b, .. } => state.rxx(a, b, theta),
        }
    }

    /// Applies the gate's Pauli generator `G` (the rotation is
    /// `exp(-i theta G / 2)`).
    pub(crate) fn apply_generator(&self, state: &mut Statevector) {
        match *self {
            Gate::Rx { qubit, .. } => state.pauli_x(qubit),
            Gate::Rzx {
                control, target, ..
            } => state.pauli_zx(control, target),
            Gate::Rxx { a, b, .. } => state.pauli_xx(a, b),
        }
    }
}

/// Ordered gate list with a shared parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
}

impl AnsatzCircuit {
    /// Validates qubit indices and that every parameter in `0..n_params` is
    /// referenced by at least one gate.
    pub fn new(n_qubits: usize, gates: Vec<Gate>, n_params: usize) -> Result<Self> {
        let mut used = vec![false; n_params];
        for (k, g) in gates.iter().enumerate() {
            let (a, b) = g.qubits();
            if a >= n_qubits || b.is_some_and(|b| b >= n_qubits) {
                return Err(Error::Dimension(format!(
                    "gate {k} addresses a qubit >= {n_qubits}"
                )));
            }
            if b == Some(a) {
                return Err(Error::Dimension(format!("gate {k} repeats qubit {a}")));
            }
            if g.param() >= n_params {
                return Err(Error::Dimension(format!(
                    "gate {k} uses parameter {} of {n_params}",
                    g.param()
                )));
            }
            used[g.param()] = true;
        }
        if let Some(p) = used.iter().position(|u| !u) {
            return Err(Error::InvalidInput(format!(
                "parameter {p} is not used by any gate"
            )));
        }
        Ok(Self {
            n_qubits,
            gates,
            n_params,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params {
            return Err(Error::Dimension(format!(
                "{} parameters for a circuit with {}",
                params.len(),
                self.n_params
            )));
        }
        Ok(())
    }

    /// Prepares `|0…0⟩` and applies every gate in order.
    pub fn run(&self, params: &[f64]) -> Result<Statevector> {
        let mut state = Statevector::new(self.n_qubits)?;
        self.run_into(&mut state, params)?;
        Ok(state)
    }

    /// Like [`run`](Self::run) but reuses `state`'s allocation.
    pub fn run_into(&self, state: &mut Statevector, params: &[f64]) -> Result<()> {
        self.check_params(params)?;
        if state.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "{}-qubit state for a {}-qubit circuit",
                state.n_qubits(),
                self.n_qubits
            )));
        }
        state.reset();
        for g in &self.gates {
            g.apply(state, params[g.param()]);
        }
        Ok(())
    }

    /// Value and gradient of `⟨ψ(θ)|D|ψ(θ)⟩` for a diagonal observable, by
    /// the parameter-shift rule applied to every gate occurrence.
    ///
    /// Each generator squares to the identity, so a shift of `±π/2` on one
    /// gate gives the exact partial derivative `(f₊ - f₋) / 2`.
    pub fn shift_gradient(&self, params: &[f64], diag: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check_params(params)?;
        check_diag(self.n_qubits, diag)?;
        let shift = std::f64::consts::FRAC_PI_2;
        let mut grad = vec![0.0; self.n_params];
        let mut prefix = Statevector::new(self.n_qubits)?;
        let mut scratch = prefix.clone();
        for (k, g) in self.gates.iter().enumerate() {
            let theta = params[g.param()];
            let side = |delta: f64, scratch: &mut Statevector| {
                scratch.clone_from(&prefix);
                g.apply(scratch, theta + delta);
                for h in &self.gates[k + 1..] {
                    h.apply(scratch, params[h.param()]);
                }
                scratch.expect_diagonal(diag)
            };
            let plus = side(shift, &mut scratch);
            let minus = side(-shift, &mut scratch);
            grad[g.param()] += 0.5 * (plus - minus);
            g.apply(&mut prefix, theta);
        }
        Ok((prefix.expect_diagonal(diag), grad))
    }

    /// Value and gradient of `⟨ψ(θ)|D|ψ(θ)⟩` by reverse-mode (adjoint)
    /// differentiation. Mathematically identical to
    /// [`shift_gradient`](Self::shift_gradient) at O(gates) instead of
    /// O(gates²) cost.
    pub fn adjoint_gradient(&self, params: &[f64], diag: &[f64]) -> Result<(f64, Vec<f64>)> {
        let mut psi = self.run(params)?;
        check_diag(self.n_qubits, diag)?;
        let value = psi.expect_diagonal(diag);
        let mut lambda = psi.clone();
        lambda.scale_diagonal(diag);
        let mut grad = vec![0.0; self.n_params];
        let mut g_psi = psi.clone();
        for g in self.gates.iter().rev() {
            // dE/dθ = Im ⟨λ| G |ψ⟩ with ψ, λ taken just after this gate
            g_psi.clone_from(&psi);
            g.apply_generator(&mut g_psi);
            grad[g.param()] += lambda.inner(&g_psi).im;
            let theta = params[g.param()];
            g.apply(&mut psi, -theta);
            g.apply(&mut lambda, -theta);
        }
        Ok((value, grad))
    }
}

fn check_diag(n_qubits: usize, diag: &[f64]) -> Result<()> {
    if diag.len() != 1 << n_qubits {
        return Err(Error::Dimension(format!(
            "diagonal of length {} for {n_qubits} qubits",
            diag.len()
        )));
    }
    Ok(())
}

/// Hardware-efficient ansatz: per layer an RX on every qubit, then RZX on
/// the chain `(q, q+1)`. Every gate has its own parameter, so a circuit has
/// `layers * (2 * block_size - 1)` parameters.
pub fn build_ansatz(block_size: usize, layers: usize) -> Result<AnsatzCircuit> {
    if block_size == 0 || layers == 0 {
        return Err(Error::InvalidConfig(format!(
            "ansatz needs block_size >= 1 and layers >= 1, got {block_size} and {layers}"
        )));
    }
    let mut gates = Vec::with_capacity(layers * (2 * block_size - 1));
    for _ in 0..layers {
        for q in 0..block_size {
            gates.push(Gate::Rx {
                qubit: q,
                param: gates.len(),
            });
        }
        for q in 0..block_size - 1 {
            gates.push(Gate::Rzx {
                control: q,
                target: q + 1,
                param: gates.len(),
            });
        }
    }
    let n_params = gates.len();
    AnsatzCircuit::new(block_size, gates, n_params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;
    use std::f64::consts::PI;

    #[test]
    fn ansatz_shape() {
        let c = build_ansatz(1, 1).unwrap();
        assert_eq!(c.gates(), &[Gate::Rx { qubit: 0, param: 0 }]);
        assert_eq!(c.n_params(), 1);
        let c = build_ansatz(10, 2).unwrap();
        assert_eq!(c.n_params(), 38);
        let s = c.run(&vec![0.0; 38]).unwrap();
        assert_eq!(s, Statevector::new(10).unwrap());
        assert!(build_ansatz(0, 1).is_err());
    }

    #[test]
    fn circuit_validation() {
        assert!(AnsatzCircuit::new(2, vec![Gate::Rx { qubit: 2, param: 0 }], 1).is_err());
        assert!(AnsatzCircuit::new(
            2,
            vec![Gate::Rxx {
                a: 1,
                b: 1,
                param: 0
            }],
            1
        )
        .is_err());
        assert!(AnsatzCircuit::new(2, vec![Gate::Rx { qubit: 0, param: 0 }], 2).is_err());
        assert!(AnsatzCircuit::new(2, vec![Gate::Rx { qubit: 0, param: 1 }], 1).is_err());
    }

    #[test]
    fn run_examples() {
        let empty = AnsatzCircuit::new(2, vec![], 0).unwrap();
        assert_eq!(empty.run(&[]).unwrap(), Statevector::new(2).unwrap());

        let c = AnsatzCircuit::new(2, vec![Gate::Rx { qubit: 0, param: 0 }], 1).unwrap();
        let s = c.run(&[PI]).unwrap();
        assert!((s.expect_z(0).unwrap() + 1.0).abs() < 1e-15);
        assert!((s.expect_z(1).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(c.run(&[]), Err(Error::Dimension(_))));
    }

    #[test]
    fn gradients_agree_with_finite_differences() {
        let mut rng = rng_from_seed(2);
        // shared parameter between two gates exercises accumulation
        let gates = vec![
            Gate::Rx { qubit: 0, param: 0 },
            Gate::Rx { qubit: 1, param: 1 },
            Gate::Rzx {
                control: 0,
                target: 2,
                param: 2,
            },
            Gate::Rxx {
                a: 1,
                b: 2,
                param: 0,
            },
            Gate::Rx { qubit: 2, param: 3 },
        ];
        let c = AnsatzCircuit::new(3, gates, 4).unwrap();
        for _ in 0..10 {
            let diag: Vec<f64> = (0..8).map(|_| rng.random_range(-2.0..2.0)).collect();
            let params: Vec<f64> = (0..4).map(|_| rng.random_range(-PI..PI)).collect();
            let (v1, shift) = c.shift_gradient(&params, &diag).unwrap();
            let (v2, adjoint) = c.adjoint_gradient(&params, &diag).unwrap();
            assert!((v1 - v2).abs() < 1e-12);
            let h = 1e-5;
            for p in 0..4 {
                let mut up = params.clone();
                up[p] += h;
                let mut dn = params.clone();
                dn[p] -= h;
                let fd = (c.run(&up).unwrap().expect_diagonal(&diag)
                    - c.run(&dn).unwrap().expect_diagonal(&diag))
                    / (2.0 * h);
                assert!((shift[p] - fd).abs() < 1e-8, "shift {} fd {}", shift[p], fd);
                assert!((shift[p] - adjoint[p]).abs() < 1e-12);
            }
        }
    }
}
