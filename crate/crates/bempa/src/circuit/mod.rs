//! Gate and circuit intermediate representation.
//!
//! Circuits are ordered gate lists over a fixed register with symbolic
//! parameters: a parametric gate stores a parameter index plus a fixed scale,
//! so four rotations can share one angle with individual signs. Gates are
//! applied to states in list order (`gates[0]` acts first).

mod ansatz;
mod decompose;
mod frame;
mod gates;

pub use ansatz::{
    build_bempa, build_bempa_with_schedule, build_penalty_ansatz, default_occupations,
    preparation_circuit, BempaVariant, BridgeSchedule, PenaltyAnsatz, RotatingBridge,
};
pub use decompose::{b_decomposition, b_decomposition_stages, verify_decomposition, RzStage};
pub use frame::{frame_apply, PauliFrame, SignedPauli};
pub use gates::{a_generator, a_unitary, b_generator, b_unitary, xx_plus_yy_unitary};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gate vocabulary. `AGate`/`BGate` are the particle-conserving composites;
/// everything else is elementary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    X,
    H,
    S,
    Sdg,
    Cnot,
    Cz,
    Rx,
    Ry,
    Rz,
    /// `exp(-i θ (XX + YY))` on a qubit pair.
    XxPlusYy,
    /// Two-qubit Givens rotation on the {|01⟩, |10⟩} block.
    AGate,
    /// Three-qubit rotation exchanging two low-figure quanta for one
    /// high-figure quantum.
    BGate,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::H | GateKind::S | GateKind::Sdg => 1,
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            GateKind::Cnot | GateKind::Cz | GateKind::XxPlusYy | GateKind::AGate => 2,
            GateKind::BGate => 3,
        }
    }

    pub fn is_parametric(self) -> bool {
        matches!(
            self,
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::XxPlusYy | GateKind::AGate | GateKind::BGate
        )
    }

    /// Depth cost under the CNOT + arbitrary-one-qubit accounting: runs of
    /// single-qubit gates fuse into one layer, two-qubit Cliffords take one
    /// layer, and the composite rotations carry their cited decomposition
    /// depths (A: 5, B: 13; the XX+YY block is locally equivalent to A).
    pub fn depth_cost(self) -> usize {
        match self {
            GateKind::AGate | GateKind::XxPlusYy => 5,
            GateKind::BGate => 13,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Cnot => "cx",
            GateKind::Cz => "cz",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::XxPlusYy => "xxyy",
            GateKind::AGate => "a",
            GateKind::BGate => "b",
        }
    }
}

/// Reference to one entry of the parameter vector, with a fixed multiplier:
/// the gate angle is `scale * params[index]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRef {
    pub index: usize,
    pub scale: f64,
}

impl ParamRef {
    pub fn new(index: usize) -> Self {
        Self { index, scale: 1.0 }
    }

    pub fn scaled(index: usize, scale: f64) -> Self {
        Self { index, scale }
    }

    pub fn angle(&self, params: &[f64]) -> f64 {
        self.scale * params[self.index]
    }
}

/// One gate instance: kind, ordered qubits, optional parameter reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub param: Option<ParamRef>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>, param: Option<ParamRef>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::Domain(format!(
                "{:?} takes {} qubit(s), got {}",
                kind,
                kind.arity(),
                qubits.len()
            )));
        }
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qubits.len() {
            return Err(Error::Domain(format!("{kind:?} qubits must be distinct")));
        }
        if kind.is_parametric() != param.is_some() {
            return Err(Error::Domain(format!(
                "{:?} {} a parameter reference",
                kind,
                if kind.is_parametric() { "requires" } else { "does not take" }
            )));
        }
        Ok(Self { kind, qubits, param })
    }

    pub fn x(q: usize) -> Self {
        Self::new(GateKind::X, vec![q], None).unwrap()
    }
    pub fn h(q: usize) -> Self {
        Self::new(GateKind::H, vec![q], None).unwrap()
    }
    pub fn s(q: usize) -> Self {
        Self::new(GateKind::S, vec![q], None).unwrap()
    }
    pub fn sdg(q: usize) -> Self {
        Self::new(GateKind::Sdg, vec![q], None).unwrap()
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cnot, vec![control, target], None).unwrap()
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Self::new(GateKind::Cz, vec![a, b], None).unwrap()
    }
    pub fn rx(q: usize, p: ParamRef) -> Self {
        Self::new(GateKind::Rx, vec![q], Some(p)).unwrap()
    }
    pub fn ry(q: usize, p: ParamRef) -> Self {
        Self::new(GateKind::Ry, vec![q], Some(p)).unwrap()
    }
    pub fn rz(q: usize, p: ParamRef) -> Self {
        Self::new(GateKind::Rz, vec![q], Some(p)).unwrap()
    }
    pub fn xx_plus_yy(a: usize, b: usize, p: ParamRef) -> Self {
        Self::new(GateKind::XxPlusYy, vec![a, b], Some(p)).unwrap()
    }
    pub fn a(q0: usize, q1: usize, p: ParamRef) -> Self {
        Self::new(GateKind::AGate, vec![q0, q1], Some(p)).unwrap()
    }
    /// B gate on `(low0, low1, high)`: the first two qubits carry significant
    /// figure k, the third carries k+1.
    pub fn b(low0: usize, low1: usize, high: usize, p: ParamRef) -> Self {
        Self::new(GateKind::BGate, vec![low0, low1, high], Some(p)).unwrap()
    }
}

/// Ordered gate list over `n_qubits` with `n_params` symbolic parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_params: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            n_params: 0,
            gates: Vec::new(),
        }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for &q in &gate.qubits {
            if q >= self.n_qubits {
                return Err(Error::Domain(format!(
                    "gate qubit {q} out of range for {}-qubit circuit",
                    self.n_qubits
                )));
            }
        }
        if let Some(p) = &gate.param {
            if p.index >= self.n_params {
                self.n_params = p.index + 1;
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Allocate a fresh parameter slot.
    pub fn new_param(&mut self) -> usize {
        let idx = self.n_params;
        self.n_params += 1;
        idx
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "appending {}-qubit circuit to {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        for g in &other.gates {
            let mut g = g.clone();
            if let Some(p) = &mut g.param {
                p.index += self.n_params;
            }
            self.gates.push(g);
        }
        self.n_params += other.n_params;
        Ok(())
    }

    /// Circuit depth under the CNOT + arbitrary-one-qubit gate set: greedy
    /// layering in which a maximal run of single-qubit gates on one wire
    /// occupies a single layer (they fuse into one arbitrary rotation) and
    /// composite gates advance their wires by [`GateKind::depth_cost`].
    pub fn depth(&self) -> usize {
        let mut wire_depth = vec![0usize; self.n_qubits];
        // Whether the last op on a wire was a fusable single-qubit gate.
        let mut run_open = vec![false; self.n_qubits];
        for gate in &self.gates {
            if gate.qubits.len() == 1 {
                let q = gate.qubits[0];
                if !run_open[q] {
                    wire_depth[q] += 1;
                    run_open[q] = true;
                }
            } else {
                let start = gate.qubits.iter().map(|&q| wire_depth[q]).max().unwrap();
                let end = start + gate.kind.depth_cost();
                for &q in &gate.qubits {
                    wire_depth[q] = end;
                    run_open[q] = false;
                }
            }
        }
        wire_depth.into_iter().max().unwrap_or(0)
    }

    /// OpenQASM-flavoured text dump (debug aid, not a stable format).
    pub fn to_qasm_like(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("qreg q[{}];\n", self.n_qubits));
        for gate in &self.gates {
            let qs: Vec<String> = gate.qubits.iter().map(|q| format!("q[{q}]")).collect();
            match &gate.param {
                Some(p) => {
                    let scale = if (p.scale - 1.0).abs() < 1e-15 {
                        String::new()
                    } else {
                        format!("{}*", p.scale)
                    };
                    out.push_str(&format!(
                        "{}({}t[{}]) {};\n",
                        gate.kind.name(),
                        scale,
                        p.index,
                        qs.join(",")
                    ));
                }
                None => out.push_str(&format!("{} {};\n", gate.kind.name(), qs.join(","))),
            }
        }
        out
    }

    /// JSON gate-list dump (debug aid, not a stable format).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n_qubits": self.n_qubits,
            "n_params": self.n_params,
            "gates": self.gates,
        })
    }
}

/// Map from (mode, significant figure) to qubit index with all qubits of
/// equal figure clustered contiguously (significant figure blocks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitLayout {
    n_modes: usize,
    k_per_mode: usize,
}

impl QubitLayout {
    pub fn sfb(n_modes: usize, k_per_mode: usize) -> Self {
        assert!(n_modes > 0 && k_per_mode > 0);
        Self { n_modes, k_per_mode }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn k_per_mode(&self) -> usize {
        self.k_per_mode
    }

    pub fn n_qubits(&self) -> usize {
        self.n_modes * self.k_per_mode
    }

    /// Qubit holding bit `figure` (worth 2^figure quanta) of `mode`.
    pub fn qubit(&self, mode: usize, figure: usize) -> usize {
        assert!(mode < self.n_modes && figure < self.k_per_mode);
        figure * self.n_modes + mode
    }

    /// Inverse of [`qubit`](Self::qubit).
    pub fn mode_figure(&self, qubit: usize) -> (usize, usize) {
        assert!(qubit < self.n_qubits());
        (qubit % self.n_modes, qubit / self.n_modes)
    }

    /// Basis-state index whose set bits encode the given per-mode codewords.
    pub fn basis_index(&self, codewords: &[u64]) -> u64 {
        assert_eq!(codewords.len(), self.n_modes);
        let mut idx = 0u64;
        for (mode, &code) in codewords.iter().enumerate() {
            for figure in 0..self.k_per_mode {
                if code >> figure & 1 == 1 {
                    idx |= 1 << self.qubit(mode, figure);
                }
            }
        }
        idx
    }

    /// Per-mode codewords packed out of a basis-state index.
    pub fn codewords(&self, basis: u64) -> Vec<u64> {
        (0..self.n_modes)
            .map(|mode| {
                (0..self.k_per_mode)
                    .map(|figure| (basis >> self.qubit(mode, figure) & 1) << figure)
                    .sum()
            })
            .collect()
    }
}
