//! Dense statevector simulation of one subsystem.
//!
//! Qubit 0 is the least-significant bit of the amplitude index. Rotations
//! follow `R_G(theta) = exp(-i theta G / 2)` for `G` in `{X, Z⊗X, X⊗X}`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Largest register a [`Statevector`] may hold.
pub const MAX_QUBITS: usize = 20;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The reference state `|0…0⟩`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_capacity(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two; the vector
    /// is not renormalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "{len} amplitudes is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_capacity(n_qubits)?;
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Resets to `|0…0⟩` without reallocating.
    pub fn reset(&mut self) {
        self.amps.fill(Complex64::new(0.0, 0.0));
        self.amps[0] = Complex64::new(1.0, 0.0);
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::Dimension(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::Dimension(format!(
                "two-qubit operation on repeated qubit {a}"
            )));
        }
        Ok(())
    }

    pub fn apply_rx(&mut self, q: usize, theta: f64) -> Result<()> {
        self.check_qubit(q)?;
        self.rx(q, theta);
        Ok(())
    }

    /// `exp(-i theta X⊗X / 2)` on qubits `q1`, `q2`.
    pub fn apply_rxx(&mut self, q1: usize, q2: usize, theta: f64) -> Result<()> {
        self.check_pair(q1, q2)?;
        self.rxx(q1, q2, theta);
        Ok(())
    }

    /// `exp(-i theta Z⊗X / 2)` with `Z` on `control` and `X` on `target`.
    pub fn apply_rzx(&mut self, control: usize, target: usize, theta: f64) -> Result<()> {
        self.check_pair(control, target)?;
        self.rzx(control, target, theta);
        Ok(())
    }

    pub(crate) fn rx(&mut self, q: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        let mis = -I * s;
        let m = 1usize << q;
        for base in (0..self.amps.len()).step_by(m << 1) {
            for k in base..base + m {
                let a0 = self.amps[k];
                let a1 = self.amps[k | m];
                self.amps[k] = a0 * c + a1 * mis;
                self.amps[k | m] = a1 * c + a0 * mis;
            }
        }
    }

    pub(crate) fn rxx(&mut self, q1: usize, q2: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        let mis = -I * s;
        let lo = 1usize << q1;
        let flip = lo | (1usize << q2);
        for k in 0..self.amps.len() {
            if k & lo == 0 {
                let p = k ^ flip;
                let a = self.amps[k];
                let b = self.amps[p];
                self.amps[k] = a * c + b * mis;
                self.amps[p] = b * c + a * mis;
            }
        }
    }

    pub(crate) fn rzx(&mut self, control: usize, target: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        let mc = 1usize << control;
        let mt = 1usize << target;
        for k in 0..self.amps.len() {
            if k & mt == 0 {
                let p = k | mt;
                let mis = if k & mc == 0 { -I * s } else { I * s };
                let a = self.amps[k];
                let b = self.amps[p];
                self.amps[k] = a * c + b * mis;
                self.amps[p] = b * c + a * mis;
            }
        }
    }

    /// Applies the Pauli string `X_q` (unscaled generator of RX).
    pub(crate) fn pauli_x(&mut self, q: usize) {
        let m = 1usize << q;
        for k in 0..self.amps.len() {
            if k & m == 0 {
                self.amps.swap(k, k | m);
            }
        }
    }

    pub(crate) fn pauli_xx(&mut self, q1: usize, q2: usize) {
        let lo = 1usize << q1;
        let flip = lo | (1usize << q2);
        for k in 0..self.amps.len() {
            if k & lo == 0 {
                self.amps.swap(k, k ^ flip);
            }
        }
    }

    pub(crate) fn pauli_zx(&mut self, control: usize, target: usize) {
        let mc = 1usize << control;
        let mt = 1usize << target;
        for k in 0..self.amps.len() {
            if k & mt == 0 {
                let p = k | mt;
                self.amps.swap(k, p);
                if k & mc != 0 {
                    self.amps[k] = -self.amps[k];
                    self.amps[p] = -self.amps[p];
                }
            }
        }
    }

    /// `⟨Z_q⟩`.
    pub fn expect_z(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let m = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if k & m == 0 {
                    a.norm_sqr()
                } else {
                    -a.norm_sqr()
                }
            })
            .sum())
    }

    /// `⟨Z_q1 Z_q2⟩`; `q1 == q2` is rejected.
    pub fn expect_zz(&self, q1: usize, q2: usize) -> Result<f64> {
        self.check_pair(q1, q2)?;
        let mask = (1usize << q1) | (1usize << q2);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if (k & mask).count_ones() % 2 == 0 {
                    a.norm_sqr()
                } else {
                    -a.norm_sqr()
                }
            })
            .sum())
    }

    /// `⟨Z_q⟩` for every qubit in one pass.
    pub fn z_expectations(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.n_qubits];
        for (k, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            for (q, zq) in z.iter_mut().enumerate() {
                if k >> q & 1 == 0 {
                    *zq += p;
                } else {
                    *zq -= p;
                }
            }
        }
        z
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨ψ|D|ψ⟩` for a diagonal operator given by its diagonal.
    pub fn expect_diagonal(&self, diag: &[f64]) -> f64 {
        self.amps
            .iter()
            .zip(diag)
            .map(|(a, d)| a.norm_sqr() * d)
            .sum()
    }

    /// Multiplies amplitude `k` by `diag[k]`.
    pub(crate) fn scale_diagonal(&mut self, diag: &[f64]) {
        for (a, d) in self.amps.iter_mut().zip(diag) {
            *a *= d;
        }
    }

    /// `⟨self|other⟩`.
    pub(crate) fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `m` independent measurements in the computational basis, as basis
    /// indices.
    pub fn sample_indices(&self, m: usize, rng: &mut crate::rng::Rng) -> Vec<usize> {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        (0..m)
            .map(|_| {
                let u = rng.random::<f64>() * total;
                cdf.partition_point(|&c| c <= u).min(self.amps.len() - 1)
            })
            .collect()
    }

    /// `m` measured bit strings (entry `q` is qubit `q`), deterministic per
    /// seed.
    pub fn sample_bits(&self, m: usize, seed: u64) -> Vec<Vec<u8>> {
        let mut rng = rng_from_seed(seed);
        self.sample_indices(m, &mut rng)
            .into_iter()
            .map(|k| (0..self.n_qubits).map(|q| (k >> q & 1) as u8).collect())
            .collect()
    }

    /// Text dump, one `index re im` line per amplitude.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, a) in self.amps.iter().enumerate() {
            writeln!(out, "{k} {:.17e} {:.17e}", a.re, a.im).unwrap();
        }
        out
    }
}

fn check_capacity(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{n_qubits} qubits outside supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &Statevector, b: &Statevector, tol: f64) -> bool {
        a.amps
            .iter()
            .zip(&b.amps)
            .all(|(x, y)| (x - y).norm() <= tol)
    }

    fn random_state(n: usize, rng: &mut crate::rng::Rng) -> Statevector {
        let mut amps: Vec<Complex64> = (0..1 << n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Statevector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn init_state() {
        let s = Statevector::new(1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = Statevector::new(3).unwrap();
        assert_eq!(s.amplitudes().len(), 8);
        assert_eq!(s.norm_sqr(), 1.0);
        assert!(matches!(Statevector::new(0), Err(Error::Capacity(_))));
        assert!(matches!(Statevector::new(21), Err(Error::Capacity(_))));
    }

    #[test]
    fn rx_examples() {
        let mut s = Statevector::new(1).unwrap();
        s.apply_rx(0, PI).unwrap();
        assert!((s.amps[1] - c(0.0, -1.0)).norm() < 1e-15);
        assert!((s.expect_z(0).unwrap() + 1.0).abs() < 1e-15);

        let mut s = Statevector::new(2).unwrap();
        s.apply_rx(1, 0.0).unwrap();
        assert_eq!(s, Statevector::new(2).unwrap());

        let mut s = Statevector::new(1).unwrap();
        s.apply_rx(0, PI / 2.0).unwrap();
        assert!(s.expect_z(0).unwrap().abs() < 1e-15);

        let mut s = Statevector::new(1).unwrap();
        s.apply_rx(0, 0.7).unwrap();
        assert!((s.expect_z(0).unwrap() - 0.7f64.cos()).abs() < 1e-15);
        assert!(s.apply_rx(1, 0.1).is_err());
    }

    #[test]
    fn rxx_examples() {
        let mut s = Statevector::new(2).unwrap();
        s.apply_rxx(0, 1, 0.0).unwrap();
        assert_eq!(s, Statevector::new(2).unwrap());

        // |01⟩ (qubit 0 set) -> -i|10⟩
        let mut s =
            Statevector::from_amplitudes(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
                .unwrap();
        s.apply_rxx(0, 1, PI).unwrap();
        assert!((s.amps[2] - c(0.0, -1.0)).norm() < 1e-15);
        assert!(s.amps[1].norm() < 1e-15);

        let mut s = Statevector::new(2).unwrap();
        s.apply_rxx(0, 1, PI / 2.0).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amps[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((s.amps[3] - c(0.0, -r)).norm() < 1e-15);

        assert!(s.apply_rxx(1, 1, 0.3).is_err());
        assert!(s.apply_rxx(0, 2, 0.3).is_err());
    }

    #[test]
    fn rzx_examples() {
        let mut s = Statevector::new(2).unwrap();
        s.apply_rzx(0, 1, 0.0).unwrap();
        assert_eq!(s, Statevector::new(2).unwrap());

        let mut s = Statevector::new(2).unwrap();
        s.apply_rzx(0, 1, PI).unwrap();
        assert!((s.expect_z(1).unwrap() + 1.0).abs() < 1e-15);
        assert!((s.expect_z(0).unwrap() - 1.0).abs() < 1e-15);

        // control |1⟩ rotates the target by -theta
        let mut a = Statevector::new(2).unwrap();
        a.apply_rx(0, PI).unwrap();
        a.apply_rzx(0, 1, 0.8).unwrap();
        let mut b = Statevector::new(2).unwrap();
        b.apply_rx(0, PI).unwrap();
        b.apply_rx(1, -0.8).unwrap();
        assert!(close(&a, &b, 1e-14));
        assert!(a.apply_rzx(0, 0, 0.1).is_err());
    }

    #[test]
    fn rxx_reproduces_matrix() {
        for &theta in &[0.0, 0.37, PI / 2.0, PI, -2.1] {
            let (cs, sn) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let m = [
                [c(cs, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -sn)],
                [c(0.0, 0.0), c(cs, 0.0), c(0.0, -sn), c(0.0, 0.0)],
                [c(0.0, 0.0), c(0.0, -sn), c(cs, 0.0), c(0.0, 0.0)],
                [c(0.0, -sn), c(0.0, 0.0), c(0.0, 0.0), c(cs, 0.0)],
            ];
            for col in 0..4 {
                let mut amps = vec![c(0.0, 0.0); 4];
                amps[col] = c(1.0, 0.0);
                let mut s = Statevector::from_amplitudes(amps).unwrap();
                s.apply_rxx(0, 1, theta).unwrap();
                for (amp, m_row) in s.amps.iter().zip(&m) {
                    assert!((amp - m_row[col]).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn rx_composition() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let mut s = random_state(3, &mut rng);
            let mut t = s.clone();
            let (a, b) = (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            s.apply_rx(1, a).unwrap();
            s.apply_rx(1, b).unwrap();
            t.apply_rx(1, a + b).unwrap();
            assert!(close(&s, &t, 1e-12));
        }
    }

    #[test]
    fn norm_preserved_by_random_circuits() {
        let mut rng = rng_from_seed(5);
        let mut s = Statevector::new(5).unwrap();
        for _ in 0..50 {
            let a = rng.random_range(0..5);
            let b = (a + rng.random_range(1..5)) % 5;
            let t = rng.random_range(-PI..PI);
            match rng.random_range(0..3) {
                0 => s.apply_rx(a, t).unwrap(),
                1 => s.apply_rzx(a, b, t).unwrap(),
                _ => s.apply_rxx(a, b, t).unwrap(),
            }
        }
        assert!((s.norm_sqr() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn generators_match_rotation_derivative() {
        // d/dθ R(θ)|ψ⟩ at θ = 0 equals -i/2 G|ψ⟩
        let mut rng = rng_from_seed(8);
        let psi = random_state(3, &mut rng);
        let h = 1e-6;
        type Apply = fn(&mut Statevector, f64);
        type Gen = fn(&mut Statevector);
        let cases: [(Apply, Gen); 3] = [
            (|s, t| s.rx(2, t), |s| s.pauli_x(2)),
            (|s, t| s.rzx(0, 2, t), |s| s.pauli_zx(0, 2)),
            (|s, t| s.rxx(1, 2, t), |s| s.pauli_xx(1, 2)),
        ];
        for (apply, generator) in cases {
            let mut plus = psi.clone();
            apply(&mut plus, h);
            let mut minus = psi.clone();
            apply(&mut minus, -h);
            let mut g = psi.clone();
            generator(&mut g);
            for k in 0..8 {
                let fd = (plus.amps[k] - minus.amps[k]) / (2.0 * h);
                let exact = -I * 0.5 * g.amps[k];
                assert!((fd - exact).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn expectations_match_dense_oracle() {
        let mut rng = rng_from_seed(11);
        for n in 2..=6 {
            let s = random_state(n, &mut rng);
            for q in 0..n {
                // diagonal of Z_q as an explicit operator
                let diag: Vec<f64> = (0..1 << n)
                    .map(|k| if k >> q & 1 == 0 { 1.0 } else { -1.0 })
                    .collect();
                let oracle: f64 = (0..1 << n)
                    .map(|k| (s.amps[k].conj() * diag[k] * s.amps[k]).re)
                    .sum();
                assert!((s.expect_z(q).unwrap() - oracle).abs() <= 1e-12);
                assert!((s.z_expectations()[q] - oracle).abs() <= 1e-12);
                for r in 0..n {
                    if r == q {
                        continue;
                    }
                    let oracle: f64 = (0..1usize << n)
                        .map(|k| {
                            let zq = if k >> q & 1 == 0 { 1.0 } else { -1.0 };
                            let zr = if k >> r & 1 == 0 { 1.0 } else { -1.0 };
                            (s.amps[k].conj() * (zq * zr) * s.amps[k]).re
                        })
                        .sum();
                    assert!((s.expect_zz(q, r).unwrap() - oracle).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn bell_state_expectations() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = Statevector::from_amplitudes(vec![c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)])
            .unwrap();
        assert!((s.expect_zz(0, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!(s.expect_z(0).unwrap().abs() < 1e-15);
        assert!(s.expect_zz(0, 0).is_err());
        assert!(s.expect_z(2).is_err());
    }

    #[test]
    fn sampling() {
        let s = Statevector::new(3).unwrap();
        assert!(s.sample_bits(50, 1).iter().all(|b| b == &[0, 0, 0]));

        let mut s = Statevector::new(1).unwrap();
        s.apply_rx(0, PI).unwrap();
        assert!(s.sample_bits(50, 1).iter().all(|b| b == &[1]));

        let mut s = Statevector::new(1).unwrap();
        s.apply_rx(0, PI / 2.0).unwrap();
        let draws = s.sample_bits(10_000, 7);
        let ones = draws.iter().filter(|b| b[0] == 1).count() as f64 / 10_000.0;
        assert!((ones - 0.5).abs() <= 0.05);
        assert_eq!(draws, s.sample_bits(10_000, 7));
    }

    #[test]
    fn sampling_frequencies_chi_square() {
        let mut rng = rng_from_seed(21);
        let s = random_state(3, &mut rng);
        let m = 100_000;
        let mut counts = [0usize; 8];
        for k in s.sample_indices(m, &mut rng) {
            counts[k] += 1;
        }
        let chi2: f64 = s
            .probabilities()
            .iter()
            .zip(counts)
            .map(|(p, o)| {
                let e = p * m as f64;
                (o as f64 - e).powi(2) / e
            })
            .sum();
        // 7 degrees of freedom; 99.9% quantile is 24.3
        assert!(chi2 < 24.3, "chi2 = {chi2}");
    }

    #[test]
    fn dump_format() {
        let s = Statevector::new(1).unwrap();
        let d = s.dump();
        let lines: Vec<&str> = d.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("0 1.0"));
    }
}
