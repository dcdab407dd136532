//! Pauli frame (tableau) tracking under Clifford conjugation.
//!
//! The frame keeps, for every qubit i, the pair of signed Pauli strings that
//! Z_i and X_i map to under the Clifford word built so far: appending a gate g
//! substitutes the current rows into g's conjugation images, so after
//! processing the word g₁ g₂ … gₜ the rows equal (g₁⋯gₜ) Z_i (g₁⋯gₜ)† with the
//! first-processed gate leftmost. Update rules:
//!
//! * CNOT(i→j): p_j ← p_j·p_i and p̃_i ← p̃_i·p̃_j,
//! * H_i: p_i ↔ p̃_i,
//! * S_i: p̃_i ← −i·p_i·p̃_i (the product of an anticommuting pair absorbs
//!   the imaginary unit, leaving a ±1 sign),
//! * S†_i: p̃_i ← +i·p_i·p̃_i.
//!
//! Rows stay Pauli strings with a real ±1 sign throughout.

use std::fmt;

use num_complex::Complex64;

use crate::circuit::{Gate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{PauliOp, PauliString};

/// A Pauli string with a ±1 sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPauli {
    pub negative: bool,
    pub string: PauliString,
}

impl SignedPauli {
    pub fn positive(string: PauliString) -> Self {
        Self {
            negative: false,
            string,
        }
    }

    pub fn coefficient(&self) -> Complex64 {
        if self.negative {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    /// `self · other`, requiring the combined phase to land on ±1.
    fn multiply(&self, other: &SignedPauli, extra_i_exponent: u8) -> Result<SignedPauli> {
        let (k, string) = self.string.multiply_raw(&other.string)?;
        let k = (k + extra_i_exponent) % 4;
        let mut negative = self.negative ^ other.negative;
        match k {
            0 => {}
            2 => negative = !negative,
            _ => {
                return Err(Error::Domain(
                    "frame row product produced an imaginary phase".into(),
                ))
            }
        }
        Ok(SignedPauli { negative, string })
    }
}

impl fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { "-" } else { "+" }, self.string)
    }
}

/// One frame row: the images of Z_i and X_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameRow {
    /// Image of Z_i, written p_i.
    pub z_image: SignedPauli,
    /// Image of X_i, written p̃_i.
    pub x_image: SignedPauli,
}

/// The full 2n-row frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliFrame {
    rows: Vec<FrameRow>,
}

impl PauliFrame {
    /// Default frame for |0…0⟩: p_i = Z_i, p̃_i = X_i.
    pub fn default_frame(n_qubits: usize) -> Self {
        let rows = (0..n_qubits)
            .map(|q| FrameRow {
                z_image: SignedPauli::positive(PauliString::single(n_qubits, q, PauliOp::Z)),
                x_image: SignedPauli::positive(PauliString::single(n_qubits, q, PauliOp::X)),
            })
            .collect();
        Self { rows }
    }

    pub fn n_qubits(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, qubit: usize) -> &FrameRow {
        &self.rows[qubit]
    }

    /// Image of Z_qubit under the tracked Clifford word.
    pub fn z_image(&self, qubit: usize) -> &SignedPauli {
        &self.rows[qubit].z_image
    }

    pub fn x_image(&self, qubit: usize) -> &SignedPauli {
        &self.rows[qubit].x_image
    }

    pub fn is_default(&self) -> bool {
        *self == Self::default_frame(self.n_qubits())
    }

    /// Apply one Clifford gate in place; see [`frame_apply`] for the pure
    /// version.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate.kind {
            GateKind::Cnot => {
                let control = gate.qubits[0];
                let target = gate.qubits[1];
                let new_p_target = self.rows[target]
                    .z_image
                    .multiply(&self.rows[control].z_image, 0)?;
                let new_x_control = self.rows[control]
                    .x_image
                    .multiply(&self.rows[target].x_image, 0)?;
                self.rows[target].z_image = new_p_target;
                self.rows[control].x_image = new_x_control;
            }
            GateKind::H => {
                let q = gate.qubits[0];
                let row = &mut self.rows[q];
                std::mem::swap(&mut row.z_image, &mut row.x_image);
            }
            GateKind::S => {
                let q = gate.qubits[0];
                // S X S† = Y: multiply by p_i and absorb -i.
                let new = self.rows[q].z_image.multiply(&self.rows[q].x_image, 3)?;
                self.rows[q].x_image = new;
            }
            GateKind::Sdg => {
                let q = gate.qubits[0];
                // S† X S = -Y: multiply by p_i and absorb +i.
                let new = self.rows[q].z_image.multiply(&self.rows[q].x_image, 1)?;
                self.rows[q].x_image = new;
            }
            other => {
                return Err(Error::UnsupportedGate(format!(
                    "frame conjugation supports CNOT/H/S/Sdg, got {other:?}"
                )))
            }
        }
        Ok(())
    }

    /// Check the symplectic invariant: each p_i anticommutes with p̃_i and
    /// commutes with every other row's entries.
    pub fn satisfies_invariant(&self) -> bool {
        let anticommute = |a: &SignedPauli, b: &SignedPauli| {
            let (k1, _) = a.string.multiply_raw(&b.string).unwrap();
            let (k2, _) = b.string.multiply_raw(&a.string).unwrap();
            (k1 + 2) % 4 == k2
        };
        for i in 0..self.rows.len() {
            if !anticommute(&self.rows[i].z_image, &self.rows[i].x_image) {
                return false;
            }
            for j in 0..self.rows.len() {
                if i == j {
                    continue;
                }
                for a in [&self.rows[i].z_image, &self.rows[i].x_image] {
                    for b in [&self.rows[j].z_image, &self.rows[j].x_image] {
                        if anticommute(a, b) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "( {} | {} )", row.z_image, row.x_image)?;
        }
        Ok(())
    }
}

/// Pure form of [`PauliFrame::apply`].
pub fn frame_apply(frame: &PauliFrame, gate: &Gate) -> Result<PauliFrame> {
    let mut next = frame.clone();
    next.apply(gate)?;
    Ok(next)
}
