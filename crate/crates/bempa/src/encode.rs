//! Qubit encodings of d-level modes and the mode-operator compiler.
//!
//! Standard binary and Gray pack a level into ⌈log₂ d⌉ qubits; unary
//! (one-hot) spends d qubits per mode. The compiler expands a d×d mode
//! operator over codeword projectors and substitutes, per qubit,
//! |0⟩⟨1| = ½(X+iY), |1⟩⟨0| = ½(X−iY), |0⟩⟨0| = ½(I+Z), |1⟩⟨1| = ½(I−Z),
//! then collects Pauli terms. Non-power-of-two truncations embed into the
//! next power of two with the unused levels acting as zero rows and columns.
//!
//! For unary the substitution touches only the qubits named by a transition
//! (σ⁺_i σ⁻_j for |i⟩⟨j|), which reproduces the operator exactly on the
//! one-hot codeword subspace.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, QubitLayout};
use crate::error::{Error, Result};
use crate::model::ModeSystem;
use crate::pauli::{PauliOp, PauliString, PauliSum};

/// Qubit encoding of a d-level mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    StdBinary,
    Gray,
    Unary,
}

impl Encoding {
    /// Qubits needed per mode: ⌈log₂ d⌉ for the compact codes, d for unary.
    pub fn qubits_per_mode(self, d: usize) -> usize {
        assert!(d >= 2, "mode truncation must be at least 2 levels");
        match self {
            Encoding::StdBinary | Encoding::Gray => usize::BITS as usize - (d - 1).leading_zeros() as usize,
            Encoding::Unary => d,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Encoding::StdBinary => "std_binary",
            Encoding::Gray => "gray",
            Encoding::Unary => "unary",
        }
    }
}

impl std::fmt::Display for Encoding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A codeword: `width` bits packed into `bits`, bit k worth 2^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bitstring {
    pub bits: u64,
    pub width: usize,
}

impl std::fmt::Display for Bitstring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for k in (0..self.width).rev() {
            write!(f, "{}", self.bits >> k & 1)?;
        }
        Ok(())
    }
}

/// Gray codeword of a binary value: g = b XOR (b >> 1).
pub fn gray_of_binary(b: u64) -> u64 {
    b ^ (b >> 1)
}

/// Inverse of [`gray_of_binary`]: XOR of all right-shifts.
pub fn binary_of_gray(g: u64) -> u64 {
    let mut b = g;
    let mut mask = g >> 1;
    while mask != 0 {
        b ^= mask;
        mask >>= 1;
    }
    b
}

/// Codeword of `level` under `enc` for a d-level mode.
pub fn encode_level(d: usize, level: usize, enc: Encoding) -> Result<Bitstring> {
    if level >= d {
        return Err(Error::Domain(format!(
            "level {level} out of range for a {d}-level mode"
        )));
    }
    let width = enc.qubits_per_mode(d);
    let bits = match enc {
        Encoding::StdBinary => level as u64,
        Encoding::Gray => gray_of_binary(level as u64),
        Encoding::Unary => 1u64 << level,
    };
    Ok(Bitstring { bits, width })
}

/// Level of a codeword, or an error if the codeword is invalid for `d`.
pub fn decode_level(d: usize, bits: u64, enc: Encoding) -> Result<usize> {
    let level = match enc {
        Encoding::StdBinary => bits as usize,
        Encoding::Gray => binary_of_gray(bits) as usize,
        Encoding::Unary => {
            if bits.count_ones() != 1 {
                return Err(Error::Domain(format!(
                    "unary codeword {bits:#b} is not one-hot"
                )));
            }
            bits.trailing_zeros() as usize
        }
    };
    if level >= d {
        return Err(Error::Domain(format!(
            "codeword decodes to level {level}, beyond truncation {d}"
        )));
    }
    Ok(level)
}

/// A d×d operator on one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl ModeOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 2 {
            return Err(Error::Domain(format!(
                "mode operator must be square with dim >= 2, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self {
            dim: matrix.nrows(),
            matrix,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Truncated annihilation operator: â[k-1, k] = √k.
    pub fn annihilator(d: usize) -> Self {
        let mut m = DMatrix::zeros(d, d);
        for k in 1..d {
            m[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
        }
        Self { dim: d, matrix: m }
    }

    /// Truncated creation operator: transpose of the annihilator.
    pub fn creator(d: usize) -> Self {
        let a = Self::annihilator(d);
        Self {
            dim: d,
            matrix: a.matrix.transpose(),
        }
    }

    /// Number operator n̂ = diag(0, …, d−1).
    pub fn number(d: usize) -> Self {
        let m = DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::new(r as f64, 0.0)
            } else {
                Complex64::default()
            }
        });
        Self { dim: d, matrix: m }
    }

    /// Self-interaction term n̂(n̂−1) = diag(k(k−1)).
    pub fn interaction(d: usize) -> Self {
        let m = DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::new((r * r.saturating_sub(1)) as f64, 0.0)
            } else {
                Complex64::default()
            }
        });
        Self { dim: d, matrix: m }
    }
}

/// Per-qubit projector substitution branches for one (bra bit, ket bit) pair.
/// Each pair expands to two weighted Paulis; `branch(false)` is the I/X-type
/// choice and `branch(true)` the Z/Y-type choice.
fn substitution(bit_row: bool, bit_col: bool, pick_second: bool) -> (PauliOp, Complex64) {
    let half = 0.5;
    match (bit_row, bit_col, pick_second) {
        // |0⟩⟨0| = ½(I + Z)
        (false, false, false) => (PauliOp::I, Complex64::new(half, 0.0)),
        (false, false, true) => (PauliOp::Z, Complex64::new(half, 0.0)),
        // |1⟩⟨1| = ½(I − Z)
        (true, true, false) => (PauliOp::I, Complex64::new(half, 0.0)),
        (true, true, true) => (PauliOp::Z, Complex64::new(-half, 0.0)),
        // |0⟩⟨1| = ½(X + iY)
        (false, true, false) => (PauliOp::X, Complex64::new(half, 0.0)),
        (false, true, true) => (PauliOp::Y, Complex64::new(0.0, half)),
        // |1⟩⟨0| = ½(X − iY)
        (true, false, false) => (PauliOp::X, Complex64::new(half, 0.0)),
        (true, false, true) => (PauliOp::Y, Complex64::new(0.0, -half)),
    }
}

/// Compile a mode operator to a Pauli sum on `enc.qubits_per_mode(d)` qubits.
/// Restricted to valid codewords the realization equals `op.matrix()`; for
/// the compact codes the unused levels of a non-power-of-two truncation act
/// as zero rows/columns on the full space.
pub fn compile_mode_operator(op: &ModeOperator, enc: Encoding) -> PauliSum {
    let d = op.dim();
    let k = enc.qubits_per_mode(d);
    let mut sum = PauliSum::zero(k);
    match enc {
        Encoding::StdBinary | Encoding::Gray => {
            for row in 0..d {
                for col in 0..d {
                    let m = op.matrix()[(row, col)];
                    if m.norm() == 0.0 {
                        continue;
                    }
                    let code_row = encode_level(d, row, enc).unwrap().bits;
                    let code_col = encode_level(d, col, enc).unwrap().bits;
                    for mask in 0..1u64 << k {
                        let mut coeff = m;
                        let mut ops = Vec::with_capacity(k);
                        for q in 0..k {
                            let (pauli, factor) = substitution(
                                code_row >> q & 1 == 1,
                                code_col >> q & 1 == 1,
                                mask >> q & 1 == 1,
                            );
                            ops.push(pauli);
                            coeff *= factor;
                        }
                        sum.add_term(PauliString::from_ops(ops), coeff);
                    }
                }
            }
        }
        Encoding::Unary => {
            for row in 0..d {
                for col in 0..d {
                    let m = op.matrix()[(row, col)];
                    if m.norm() == 0.0 {
                        continue;
                    }
                    if row == col {
                        // |i⟩⟨i| → ½(I − Z_i) on the one-hot subspace.
                        sum.add_term(PauliString::identity(k), m * 0.5);
                        sum.add_term(
                            PauliString::single(k, row, PauliOp::Z),
                            m * -0.5,
                        );
                    } else {
                        // |i⟩⟨j| → σ⁺_i σ⁻_j = ¼(X−iY)_i (X+iY)_j.
                        let quarter = m * 0.25;
                        let paulis = [
                            (PauliOp::X, PauliOp::X, Complex64::new(1.0, 0.0)),
                            (PauliOp::X, PauliOp::Y, Complex64::new(0.0, 1.0)),
                            (PauliOp::Y, PauliOp::X, Complex64::new(0.0, -1.0)),
                            (PauliOp::Y, PauliOp::Y, Complex64::new(1.0, 0.0)),
                        ];
                        for (op_i, op_j, factor) in paulis {
                            let mut ops = vec![PauliOp::I; k];
                            ops[row] = op_i;
                            ops[col] = op_j;
                            sum.add_term(PauliString::from_ops(ops), quarter * factor);
                        }
                    }
                }
            }
        }
    }
    sum
}

/// One product term of a system operator: `coeff · Π_f op_f(mode_f)`.
#[derive(Debug, Clone)]
pub struct SystemTerm {
    pub coeff: Complex64,
    pub factors: Vec<(usize, ModeOperator)>,
}

impl SystemTerm {
    pub fn new(coeff: f64, factors: Vec<(usize, ModeOperator)>) -> Self {
        Self {
            coeff: Complex64::new(coeff, 0.0),
            factors,
        }
    }
}

/// Compile a sum of mode-operator products to a Pauli sum on the full
/// register of `system`. Modes absent from a product act as identity; mode
/// indices must be distinct within each product.
pub fn compile_system_operator(terms: &[SystemTerm], system: &ModeSystem) -> Result<PauliSum> {
    let n_qubits = system.n_qubits();
    let mut total = PauliSum::zero(n_qubits);
    for term in terms {
        let mut seen = vec![false; system.n_modes()];
        let mut embedded = PauliSum::scalar(n_qubits, term.coeff);
        for (mode, op) in &term.factors {
            if *mode >= system.n_modes() {
                return Err(Error::Domain(format!(
                    "mode index {mode} out of range for {}-mode system",
                    system.n_modes()
                )));
            }
            if seen[*mode] {
                return Err(Error::Domain(format!(
                    "duplicate mode {mode} within one operator product"
                )));
            }
            seen[*mode] = true;
            if op.dim() != system.d() {
                return Err(Error::DimensionMismatch(format!(
                    "mode operator of dim {} on a d={} system",
                    op.dim(),
                    system.d()
                )));
            }
            let local = compile_mode_operator(op, system.encoding());
            let lifted = lift_to_system(&local, *mode, system);
            embedded = embedded.mul(&lifted)?;
        }
        total.add_assign(&embedded);
    }
    Ok(total)
}

/// Re-index a per-mode Pauli sum onto the system register.
fn lift_to_system(local: &PauliSum, mode: usize, system: &ModeSystem) -> PauliSum {
    let n_qubits = system.n_qubits();
    let mut lifted = PauliSum::zero(n_qubits);
    for (string, coeff) in local.terms() {
        let mut ops = vec![PauliOp::I; n_qubits];
        for (q_local, &op) in string.ops().iter().enumerate() {
            ops[system.qubit_for(mode, q_local)] = op;
        }
        lifted.add_term(PauliString::from_ops(ops), *coeff);
    }
    lifted
}

/// CNOT circuit converting each listed mode from standard binary to Gray
/// code in place: basis |b⟩ ↦ |b XOR (b >> 1)⟩ per mode, depth k−1.
pub fn binary_to_gray_circuit(layout: &QubitLayout, modes: &[usize]) -> Result<Circuit> {
    let mut circuit = Circuit::new(layout.n_qubits());
    let k = layout.k_per_mode();
    for &mode in modes {
        if mode >= layout.n_modes() {
            return Err(Error::Domain(format!(
                "mode {mode} out of range for a {}-mode layout",
                layout.n_modes()
            )));
        }
        // Bit j of the Gray word is b_j XOR b_{j+1}; ascending order keeps
        // every control reading the original binary bit.
        for j in 0..k.saturating_sub(1) {
            circuit.push(Gate::cnot(layout.qubit(mode, j + 1), layout.qubit(mode, j)))?;
        }
    }
    Ok(circuit)
}

/// JSON wrapper for compiled Hamiltonians: term list plus model metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompiledOperatorJson {
    pub n_modes: usize,
    pub d: usize,
    pub encoding: Encoding,
    #[serde(flatten)]
    pub operator: crate::pauli::PauliSumJson,
}

impl CompiledOperatorJson {
    pub fn new(system: &ModeSystem, operator: &PauliSum) -> Self {
        Self {
            n_modes: system.n_modes(),
            d: system.d(),
            encoding: system.encoding(),
            operator: operator.to_json(),
        }
    }
}
