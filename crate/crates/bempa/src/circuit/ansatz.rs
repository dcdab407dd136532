//! Ansatz builders: the particle-conserving BEMPA circuits and the
//! hardware-efficient baselines used with the penalty method.
//!
//! BEMPA places A gates inside significant-figure blocks (coupling the same
//! figure of two modes) and B gates across adjacent blocks (two figure-k
//! qubits plus one figure-(k+1) qubit), so every reachable state keeps the
//! initial total particle count exactly.

use crate::circuit::{Circuit, Gate, ParamRef, QubitLayout};
use crate::encode::{encode_level, Encoding};
use crate::error::{Error, Result};

/// Which BEMPA gate pattern to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BempaVariant {
    /// One bridge B gate per A-gate pair and figure, with the bridge mode
    /// rotating across layers.
    Standard,
    /// Every A gate is followed by B gates bridging to each mode's next
    /// significant figure.
    Exhaustive,
}

/// Strategy choosing the mode whose figure-(k+1) qubit a B gate bridges to.
/// Pluggable so alternative placements can be benchmarked.
pub trait BridgeSchedule {
    fn bridge_mode(&self, layer: usize, pair_start: usize, n_modes: usize) -> usize;
}

/// Default schedule: layer ℓ bridges the pair starting at mode i to mode
/// (i + ℓ) mod n, so coverage rotates across layers.
#[derive(Debug, Clone, Copy, Default)]
pub struct RotatingBridge;

impl BridgeSchedule for RotatingBridge {
    fn bridge_mode(&self, layer: usize, pair_start: usize, n_modes: usize) -> usize {
        (pair_start + layer) % n_modes
    }
}

/// Mode pairs (i, i+1) bricked by layer parity. Falls back to the
/// even-parity pairs when the odd set is empty (two-mode systems).
fn bricked_pairs(layer: usize, n_modes: usize) -> Vec<usize> {
    let start = layer % 2;
    let pairs: Vec<usize> = (start..n_modes.saturating_sub(1)).step_by(2).collect();
    if pairs.is_empty() && n_modes >= 2 {
        (0..n_modes - 1).step_by(2).collect()
    } else {
        pairs
    }
}

/// Build a BEMPA circuit with the default rotating bridge schedule.
///
/// `occupations` are initial quanta per mode; their encoded standard-binary
/// bits define the returned initial basis state, which the circuit's
/// number-conserving gates then mix within the fixed-𝒩 subspace. Requires a
/// power-of-two truncation (d = 2^k) so every codeword is a valid level.
pub fn build_bempa(
    layout: &QubitLayout,
    occupations: &[usize],
    layers: usize,
    variant: BempaVariant,
) -> Result<(Circuit, u64)> {
    build_bempa_with_schedule(layout, occupations, layers, variant, &RotatingBridge)
}

/// [`build_bempa`] with a custom bridge schedule.
pub fn build_bempa_with_schedule(
    layout: &QubitLayout,
    occupations: &[usize],
    layers: usize,
    variant: BempaVariant,
    schedule: &dyn BridgeSchedule,
) -> Result<(Circuit, u64)> {
    let n_modes = layout.n_modes();
    let k = layout.k_per_mode();
    let d = 1usize << k;
    if occupations.len() != n_modes {
        return Err(Error::DimensionMismatch(format!(
            "{} occupations for {} modes",
            occupations.len(),
            n_modes
        )));
    }
    for (mode, &occ) in occupations.iter().enumerate() {
        if occ >= d {
            return Err(Error::Domain(format!(
                "occupation {occ} on mode {mode} exceeds the d={d} truncation"
            )));
        }
    }
    let codewords: Vec<u64> = occupations
        .iter()
        .map(|&occ| encode_level(d, occ, Encoding::StdBinary).map(|b| b.bits))
        .collect::<Result<_>>()?;
    let initial = layout.basis_index(&codewords);

    let mut circuit = Circuit::new(layout.n_qubits());
    for layer in 0..layers {
        let pairs = bricked_pairs(layer, n_modes);
        match variant {
            BempaVariant::Standard => {
                // A gates first, on every figure.
                for figure in 0..k {
                    for &i in &pairs {
                        let p = circuit.new_param();
                        circuit.push(Gate::a(
                            layout.qubit(i, figure),
                            layout.qubit(i + 1, figure),
                            ParamRef::new(p),
                        ))?;
                    }
                }
                // Bridge B gates between consecutive figures.
                for figure in 0..k.saturating_sub(1) {
                    for &i in &pairs {
                        let bridge = schedule.bridge_mode(layer, i, n_modes);
                        let p = circuit.new_param();
                        circuit.push(Gate::b(
                            layout.qubit(i, figure),
                            layout.qubit(i + 1, figure),
                            layout.qubit(bridge, figure + 1),
                            ParamRef::new(p),
                        ))?;
                    }
                }
            }
            BempaVariant::Exhaustive => {
                for figure in 0..k {
                    for &i in &pairs {
                        let p = circuit.new_param();
                        circuit.push(Gate::a(
                            layout.qubit(i, figure),
                            layout.qubit(i + 1, figure),
                            ParamRef::new(p),
                        ))?;
                        if figure + 1 < k {
                            for bridge in 0..n_modes {
                                let p = circuit.new_param();
                                circuit.push(Gate::b(
                                    layout.qubit(i, figure),
                                    layout.qubit(i + 1, figure),
                                    layout.qubit(bridge, figure + 1),
                                    ParamRef::new(p),
                                ))?;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((circuit, initial))
}

/// X gates preparing the encoded occupations from |0…0⟩; the basis index
/// returned by [`build_bempa`] is exactly this circuit's action on vacuum.
pub fn preparation_circuit(layout: &QubitLayout, occupations: &[usize]) -> Result<Circuit> {
    let d = 1usize << layout.k_per_mode();
    let mut circuit = Circuit::new(layout.n_qubits());
    for (mode, &occ) in occupations.iter().enumerate() {
        let code = encode_level(d, occ, Encoding::StdBinary)?;
        for figure in 0..code.width {
            if code.bits >> figure & 1 == 1 {
                circuit.push(Gate::x(layout.qubit(mode, figure)))?;
            }
        }
    }
    Ok(circuit)
}

/// Greedy left-to-right fill of `n_target` quanta capped at d−1 per mode;
/// the default initial occupations when none are configured.
pub fn default_occupations(n_modes: usize, d: usize, n_target: usize) -> Result<Vec<usize>> {
    if n_target > n_modes * (d - 1) {
        return Err(Error::Domain(format!(
            "cannot place {n_target} quanta in {n_modes} modes of {d} levels"
        )));
    }
    let mut remaining = n_target;
    let mut occ = vec![0usize; n_modes];
    for slot in occ.iter_mut() {
        let take = remaining.min(d - 1);
        *slot = take;
        remaining -= take;
    }
    Ok(occ)
}

/// Hardware-efficient baselines used with the penalty method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PenaltyAnsatz {
    /// Per-qubit Ry rotations followed by a CNOT chain.
    RyCx,
    /// Per-qubit Rx, nearest-neighbour CZ chain, per-qubit Ry.
    RxCzRy,
    /// Nearest-neighbour exp(−iθ(XX+YY)) pairs followed by per-qubit Ry.
    XxYyRy,
}

/// Layered baseline circuit on `n_qubits`; parameters are independent per
/// layer and per gate. Zero layers yields the identity circuit.
pub fn build_penalty_ansatz(kind: PenaltyAnsatz, n_qubits: usize, layers: usize) -> Result<Circuit> {
    if n_qubits < 2 {
        return Err(Error::Domain(
            "penalty ansatze need at least two qubits".into(),
        ));
    }
    let mut circuit = Circuit::new(n_qubits);
    for _ in 0..layers {
        match kind {
            PenaltyAnsatz::RyCx => {
                for q in 0..n_qubits {
                    let p = circuit.new_param();
                    circuit.push(Gate::ry(q, ParamRef::new(p)))?;
                }
                for q in 0..n_qubits - 1 {
                    circuit.push(Gate::cnot(q, q + 1))?;
                }
            }
            PenaltyAnsatz::RxCzRy => {
                for q in 0..n_qubits {
                    let p = circuit.new_param();
                    circuit.push(Gate::rx(q, ParamRef::new(p)))?;
                }
                for q in 0..n_qubits - 1 {
                    circuit.push(Gate::cz(q, q + 1))?;
                }
                for q in 0..n_qubits {
                    let p = circuit.new_param();
                    circuit.push(Gate::ry(q, ParamRef::new(p)))?;
                }
            }
            PenaltyAnsatz::XxYyRy => {
                for q in 0..n_qubits - 1 {
                    let p = circuit.new_param();
                    circuit.push(Gate::xx_plus_yy(q, q + 1, ParamRef::new(p)))?;
                }
                for q in 0..n_qubits {
                    let p = circuit.new_param();
                    circuit.push(Gate::ry(q, ParamRef::new(p)))?;
                }
            }
        }
    }
    Ok(circuit)
}
