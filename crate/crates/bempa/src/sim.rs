//! Dense statevector simulation: gate application, Pauli-sum expectation
//! values, finite-difference gradients, and particle-number diagnostics.
//!
//! Gate application follows circuit list order with no fusion, so runs are
//! auditable and bit-deterministic: identical inputs give identical outputs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{a_unitary, b_unitary, xx_plus_yy_unitary, Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::model::ModeSystem;
use crate::pauli::PauliSum;

/// Dense simulation is refused above this register size.
pub const SIM_QUBIT_CAP: usize = 16;

/// Tolerance on the imaginary part of a Hermitian expectation value.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Step used by the central finite-difference gradient.
pub const GRADIENT_STEP: f64 = 1e-6;

/// Normalized state over `2^n` amplitudes, qubit 0 least significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// Computational basis state |index⟩.
    pub fn basis(n_qubits: usize, index: u64) -> Result<Self> {
        check_sim_cap(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index as usize >= dim {
            return Err(Error::Domain(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::default(); dim];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
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

    /// Apply `circuit` to |initial⟩ with concrete parameter values.
    pub fn run_circuit(circuit: &Circuit, params: &[f64], initial: u64) -> Result<Self> {
        if params.len() != circuit.n_params {
            return Err(Error::DimensionMismatch(format!(
                "circuit expects {} parameters, got {}",
                circuit.n_params,
                params.len()
            )));
        }
        let mut state = Self::basis(circuit.n_qubits, initial)?;
        for gate in circuit.gates() {
            state.apply_gate(gate, params);
        }
        Ok(state)
    }

    pub fn apply_gate(&mut self, gate: &Gate, params: &[f64]) {
        let angle = gate.param.map(|p| p.angle(params));
        match gate.kind {
            GateKind::X => self.apply_x(gate.qubits[0]),
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.apply_1q(
                    gate.qubits[0],
                    [
                        [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
                        [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
                    ],
                );
            }
            GateKind::S => self.apply_phase(gate.qubits[0], Complex64::new(0.0, 1.0)),
            GateKind::Sdg => self.apply_phase(gate.qubits[0], Complex64::new(0.0, -1.0)),
            GateKind::Cnot => self.apply_cnot(gate.qubits[0], gate.qubits[1]),
            GateKind::Cz => self.apply_cz(gate.qubits[0], gate.qubits[1]),
            GateKind::Rx => {
                let half = angle.unwrap() / 2.0;
                let (sin, cos) = half.sin_cos();
                self.apply_1q(
                    gate.qubits[0],
                    [
                        [Complex64::new(cos, 0.0), Complex64::new(0.0, -sin)],
                        [Complex64::new(0.0, -sin), Complex64::new(cos, 0.0)],
                    ],
                );
            }
            GateKind::Ry => {
                let half = angle.unwrap() / 2.0;
                let (sin, cos) = half.sin_cos();
                self.apply_1q(
                    gate.qubits[0],
                    [
                        [Complex64::new(cos, 0.0), Complex64::new(-sin, 0.0)],
                        [Complex64::new(sin, 0.0), Complex64::new(cos, 0.0)],
                    ],
                );
            }
            GateKind::Rz => {
                let half = angle.unwrap() / 2.0;
                let lo = Complex64::from_polar(1.0, -half);
                let hi = Complex64::from_polar(1.0, half);
                let q = gate.qubits[0];
                let bit = 1usize << q;
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    *amp *= if i & bit == 0 { lo } else { hi };
                }
            }
            GateKind::XxPlusYy => {
                self.apply_dense(&gate.qubits, &xx_plus_yy_unitary(angle.unwrap()))
            }
            GateKind::AGate => self.apply_dense(&gate.qubits, &a_unitary(angle.unwrap())),
            GateKind::BGate => self.apply_dense(&gate.qubits, &b_unitary(angle.unwrap())),
        }
    }

    fn apply_x(&mut self, q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    fn apply_phase(&mut self, q: usize, phase: Complex64) {
        let bit = 1usize << q;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *amp *= phase;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Apply a dense `2^k × 2^k` unitary to the listed qubits; local qubit j
    /// of the matrix is the j-th listed register qubit.
    fn apply_dense(&mut self, qubits: &[usize], u: &DMatrix<Complex64>) {
        let k = qubits.len();
        let local_dim = 1usize << k;
        debug_assert_eq!(u.nrows(), local_dim);
        let gate_mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
        let mut gathered = vec![Complex64::default(); local_dim];
        for base in 0..self.amps.len() {
            if base & gate_mask != 0 {
                continue;
            }
            for (local, slot) in gathered.iter_mut().enumerate() {
                *slot = self.amps[expand(base, qubits, local)];
            }
            for row in 0..local_dim {
                let mut acc = Complex64::default();
                for (col, &g) in gathered.iter().enumerate() {
                    acc += u[(row, col)] * g;
                }
                self.amps[expand(base, qubits, row)] = acc;
            }
        }
    }

    /// Probability of measuring basis state `index`.
    pub fn probability(&self, index: u64) -> f64 {
        self.amps[index as usize].norm_sqr()
    }

    /// Amplitudes above `threshold`, for debugging dumps.
    pub fn significant_amplitudes(&self, threshold: f64) -> Vec<(u64, Complex64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(i, a)| (i as u64, *a))
            .collect()
    }
}

fn expand(base: usize, qubits: &[usize], local: usize) -> usize {
    let mut idx = base;
    for (j, &q) in qubits.iter().enumerate() {
        if local >> j & 1 == 1 {
            idx |= 1 << q;
        }
    }
    idx
}

fn check_sim_cap(n_qubits: usize) -> Result<()> {
    if n_qubits > SIM_QUBIT_CAP {
        return Err(Error::Resource(format!(
            "statevector of {n_qubits} qubits exceeds the {SIM_QUBIT_CAP}-qubit cap"
        )));
    }
    Ok(())
}

/// ⟨s|H|s⟩ evaluated term by term without materializing the matrix.
/// Fails if the imaginary part exceeds [`HERMITICITY_TOLERANCE`].
pub fn expectation(state: &Statevector, h: &PauliSum) -> Result<f64> {
    if state.n_qubits != h.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "state on {} qubits vs operator on {}",
            state.n_qubits,
            h.n_qubits()
        )));
    }
    let mut total = Complex64::default();
    for (string, coeff) in h.terms() {
        let masks = string.masks();
        let mut term = Complex64::default();
        for (b, amp) in state.amps.iter().enumerate() {
            let (target, phase) = masks.apply_to_basis(b as u64);
            term += state.amps[target as usize].conj() * phase * amp;
        }
        total += coeff * term;
    }
    if total.im.abs() > HERMITICITY_TOLERANCE {
        return Err(Error::Hermiticity(format!(
            "expectation has imaginary part {:.3e}",
            total.im
        )));
    }
    Ok(total.re)
}

/// Central finite-difference gradient of `E(params) = ⟨H⟩` with step
/// [`GRADIENT_STEP`]. Deterministic for fixed inputs.
pub fn gradient(
    circuit: &Circuit,
    h: &PauliSum,
    params: &[f64],
    initial: u64,
) -> Result<Vec<f64>> {
    let mut grad = Vec::with_capacity(params.len());
    let mut shifted = params.to_vec();
    for i in 0..params.len() {
        shifted[i] = params[i] + GRADIENT_STEP;
        let plus = expectation(&Statevector::run_circuit(circuit, &shifted, initial)?, h)?;
        shifted[i] = params[i] - GRADIENT_STEP;
        let minus = expectation(&Statevector::run_circuit(circuit, &shifted, initial)?, h)?;
        shifted[i] = params[i];
        grad.push((plus - minus) / (2.0 * GRADIENT_STEP));
    }
    Ok(grad)
}

/// Particle-number diagnostics of a state against a target sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorLeakage {
    /// ⟨N̂_tot⟩ − 𝒩.
    pub ntot_deviation: f64,
    /// Probability mass outside the 𝒩-particle codeword subspace.
    pub out_of_sector_mass: f64,
}

/// Measure ⟨N̂_tot⟩ − 𝒩 and the probability mass outside the 𝒩-sector.
/// Basis states that are not valid codewords (possible for non-power-of-two
/// truncations and for the unary encoding) count as out-of-sector and
/// contribute zero to ⟨N̂_tot⟩, mirroring the compiled operator, which acts
/// as zero there.
pub fn sector_leakage(
    state: &Statevector,
    system: &ModeSystem,
    n_target: usize,
) -> Result<SectorLeakage> {
    if state.n_qubits != system.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "state on {} qubits vs system on {}",
            state.n_qubits,
            system.n_qubits()
        )));
    }
    let mut ntot = 0.0;
    let mut out_mass = 0.0;
    for (basis, amp) in state.amps.iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        match system.decode_basis(basis as u64) {
            Some(levels) => {
                let n: usize = levels.iter().sum();
                ntot += p * n as f64;
                if n != n_target {
                    out_mass += p;
                }
            }
            None => out_mass += p,
        }
    }
    Ok(SectorLeakage {
        ntot_deviation: ntot - n_target as f64,
        out_of_sector_mass: out_mass,
    })
}
