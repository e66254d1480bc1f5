use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QsimError, Result};
use crate::gate::{Gate, MAX_QUBITS};
use crate::observable::{Observable, Pauli};

/// Dense state of an `n`-qubit register: 2^n complex amplitudes.
///
/// Qubit 0 is the least-significant bit of the basis index, so basis state
/// `|i>` assigns bit `(i >> q) & 1` to qubit `q`. Bitstrings rendered for
/// histograms are the plain binary form of the index, most significant qubit
/// first.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Computational-basis state `|basis_index>`.
    pub fn basis(n_qubits: usize, basis_index: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(QsimError::QubitCapExceeded { requested: n_qubits, max: MAX_QUBITS });
        }
        let len = 1usize << n_qubits;
        if basis_index >= len {
            return Err(QsimError::BasisIndexOutOfRange { index: basis_index, n_qubits });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[basis_index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    /// State with the given amplitudes, renormalized. The input norm must be
    /// within 1e-6 of 1 so that genuinely unnormalized data is rejected while
    /// accumulated rounding is tolerated.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(QsimError::NonPowerOfTwoLength { len });
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(QsimError::QubitCapExceeded { requested: n_qubits, max: MAX_QUBITS });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(QsimError::NotNormalizable { norm });
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Statevector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|amplitude|^2` per basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner_product(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies one gate, returning the new state.
    pub fn apply_gate(&self, gate: &Gate) -> Result<Statevector> {
        gate.validate(self.n_qubits)?;
        if let Gate::DenseUnitary { matrix, .. } = gate {
            crate::gate::check_unitary(matrix)?;
        }
        let mut out = self.clone();
        out.apply_resolved(gate, &[]);
        Ok(out)
    }

    /// In-place gate application with parameter slots already resolved.
    /// Wiring must have been validated beforehand.
    pub(crate) fn apply_resolved(&mut self, gate: &Gate, values: &[f64]) {
        match gate {
            Gate::Hadamard { target } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.apply_single(*target, [
                    Complex64::new(s, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(-s, 0.0),
                ]);
            }
            Gate::PauliX { target } => {
                let m = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::RotX { target, angle } => {
                let half = angle.resolve(values) / 2.0;
                let (s, c) = half.sin_cos();
                self.apply_single(*target, [
                    Complex64::new(c, 0.0),
                    Complex64::new(0.0, -s),
                    Complex64::new(0.0, -s),
                    Complex64::new(c, 0.0),
                ]);
            }
            Gate::RotY { target, angle } => {
                let half = angle.resolve(values) / 2.0;
                let (s, c) = half.sin_cos();
                self.apply_single(*target, [
                    Complex64::new(c, 0.0),
                    Complex64::new(-s, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(c, 0.0),
                ]);
            }
            Gate::RotZ { target, angle } => {
                let half = angle.resolve(values) / 2.0;
                let phase_lo = Complex64::from_polar(1.0, -half);
                let phase_hi = Complex64::from_polar(1.0, half);
                let m = 1usize << target;
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a *= if i & m == 0 { phase_lo } else { phase_hi };
                }
            }
            Gate::Cnot { control, target } => {
                let cm = 1usize << control;
                let tm = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::ControlledRotY { control, target, angle } => {
                let half = angle.resolve(values) / 2.0;
                let (s, c) = half.sin_cos();
                self.apply_controlled_single(*control, *target, [
                    Complex64::new(c, 0.0),
                    Complex64::new(-s, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(c, 0.0),
                ]);
            }
            Gate::ControlledPhase { control, target, angle } => {
                let phase = Complex64::from_polar(1.0, angle.resolve(values));
                let mask = (1usize << control) | (1usize << target);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a *= phase;
                    }
                }
            }
            Gate::DenseUnitary { targets, controls, matrix } => {
                self.apply_dense(targets, controls, matrix);
            }
        }
    }

    /// 2x2 matrix `[[m00, m01], [m10, m11]]` (row-major in the array) applied
    /// to one qubit.
    fn apply_single(&mut self, target: usize, m: [Complex64; 4]) {
        let step = 1usize << target;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for i0 in base..base + step {
                let i1 = i0 + step;
                let a0 = self.amps[i0];
                let a1 = self.amps[i1];
                self.amps[i0] = m[0] * a0 + m[1] * a1;
                self.amps[i1] = m[2] * a0 + m[3] * a1;
            }
            base += 2 * step;
        }
    }

    fn apply_controlled_single(&mut self, control: usize, target: usize, m: [Complex64; 4]) {
        let step = 1usize << target;
        let cm = 1usize << control;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for i0 in base..base + step {
                if i0 & cm == 0 {
                    continue;
                }
                let i1 = i0 + step;
                let a0 = self.amps[i0];
                let a1 = self.amps[i1];
                self.amps[i0] = m[0] * a0 + m[1] * a1;
                self.amps[i1] = m[2] * a0 + m[3] * a1;
            }
            base += 2 * step;
        }
    }

    fn apply_dense(
        &mut self,
        targets: &[usize],
        controls: &[usize],
        matrix: &nalgebra::DMatrix<Complex64>,
    ) {
        let sub = 1usize << targets.len();
        let target_mask: usize = targets.iter().map(|q| 1usize << q).sum();
        let control_mask: usize = controls.iter().map(|q| 1usize << q).sum();
        // spread[s] places bit j of the sub-register index s at targets[j].
        let mut spread = vec![0usize; sub];
        for (s, entry) in spread.iter_mut().enumerate() {
            for (j, q) in targets.iter().enumerate() {
                if s >> j & 1 == 1 {
                    *entry |= 1usize << q;
                }
            }
        }
        let mut gathered = vec![Complex64::new(0.0, 0.0); sub];
        for outer in 0..self.amps.len() {
            if outer & target_mask != 0 || outer & control_mask != control_mask {
                continue;
            }
            for (s, g) in gathered.iter_mut().enumerate() {
                *g = self.amps[outer | spread[s]];
            }
            for r in 0..sub {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, g) in gathered.iter().enumerate() {
                    acc += matrix[(r, c)] * g;
                }
                self.amps[outer | spread[r]] = acc;
            }
        }
    }

    /// `<psi|O|psi>`. The imaginary residue (rounding noise, below 1e-12 for
    /// Hermitian observables) is discarded.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        let mut total = 0.0;
        for (coeff, letters) in obs.terms() {
            if letters.len() != self.n_qubits {
                return Err(QsimError::ObservableSizeMismatch {
                    term_len: letters.len(),
                    n_qubits: self.n_qubits,
                });
            }
            if letters.iter().all(|p| matches!(p, Pauli::I | Pauli::Z)) {
                let zmask: usize = letters
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| matches!(p, Pauli::Z))
                    .map(|(q, _)| 1usize << q)
                    .sum();
                let mut acc = 0.0;
                for (i, a) in self.amps.iter().enumerate() {
                    let sign = if (i & zmask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * a.norm_sqr();
                }
                total += coeff * acc;
            } else {
                let mut transformed = self.clone();
                for (q, p) in letters.iter().enumerate() {
                    transformed.apply_pauli(q, *p);
                }
                total += coeff * self.inner_product(&transformed).re;
            }
        }
        Ok(total)
    }

    fn apply_pauli(&mut self, qubit: usize, p: Pauli) {
        let m = 1usize << qubit;
        match p {
            Pauli::I => {}
            Pauli::X => {
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Pauli::Y => {
                let i_unit = Complex64::new(0.0, 1.0);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let lo = self.amps[i];
                        let hi = self.amps[i | m];
                        self.amps[i] = -i_unit * hi;
                        self.amps[i | m] = i_unit * lo;
                    }
                }
            }
            Pauli::Z => {
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a = -*a;
                    }
                }
            }
        }
    }

    /// Draws `shots` basis-state samples from `|amplitude|^2`.
    ///
    /// The generator is ChaCha8 keyed by the 64-bit seed; each shot consumes
    /// one f64 and is mapped through the cumulative distribution, so
    /// histograms are bit-reproducible across platforms for a fixed seed.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<BTreeMap<String, u64>> {
        if shots == 0 {
            return Err(QsimError::ZeroShots);
        }
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0f64;
        for a in &self.amps {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let total = acc;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c <= u).min(self.amps.len() - 1);
            *counts.entry(self.bitstring(idx)).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// Binary rendering of a basis index, most significant qubit first.
    pub fn bitstring(&self, index: usize) -> String {
        format!("{index:0width$b}", width = self.n_qubits)
    }
}
