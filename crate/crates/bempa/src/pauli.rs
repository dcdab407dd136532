//! Weighted Pauli-string algebra with dense matrix realization.
//!
//! Conventions shared by the whole crate:
//!
//! * qubit 0 is the least-significant bit of every basis-state index,
//! * Pauli strings print as `"X0 Y1 Z3"` with identity positions omitted and
//!   the all-identity string printing as `"I"`,
//! * coefficients with magnitude below [`PRUNE_TOLERANCE`] are dropped when
//!   sums are assembled, so compilation residue never accumulates.
//!
//! Everything here is immutable after construction and safe to share across
//! worker threads.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped when assembling sums.
pub const PRUNE_TOLERANCE: f64 = 1e-12;

/// Dense matrix realizations are refused above this qubit count.
pub const MATRIX_QUBIT_CAP: usize = 14;

/// Single-qubit Pauli operator.
///
/// The derived ordering `I < X < Y < Z` induces the canonical lexicographic
/// order on [`PauliString`] used for deterministic iteration and tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    /// Symplectic (x, z) bit pair: I=(0,0), X=(1,0), Z=(0,1), Y=(1,1).
    pub fn xz_bits(self) -> (bool, bool) {
        match self {
            PauliOp::I => (false, false),
            PauliOp::X => (true, false),
            PauliOp::Y => (true, true),
            PauliOp::Z => (false, true),
        }
    }

    pub fn from_xz_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliOp::I,
            (true, false) => PauliOp::X,
            (true, true) => PauliOp::Y,
            (false, true) => PauliOp::Z,
        }
    }

    /// Product of two single-qubit Paulis as `(i^k, result)`.
    ///
    /// `X*Y = iZ`, `Y*X = -iZ`, and cyclically; equal operators square to I.
    pub fn compose(self, other: PauliOp) -> (u8, PauliOp) {
        use PauliOp::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }
}

/// Phase from an exponent of i.
fn phase_from_exponent(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A tensor product of single-qubit Paulis over a fixed register.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    ops: Vec<PauliOp>,
}

impl PauliString {
    /// All-identity string on `n_qubits`.
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            ops: vec![PauliOp::I; n_qubits],
        }
    }

    pub fn from_ops(ops: Vec<PauliOp>) -> Self {
        Self { ops }
    }

    /// Identity except `op` at `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, op: PauliOp) -> Self {
        assert!(qubit < n_qubits, "qubit index out of range");
        let mut ops = vec![PauliOp::I; n_qubits];
        ops[qubit] = op;
        Self { ops }
    }

    pub fn n_qubits(&self) -> usize {
        self.ops.len()
    }

    pub fn op(&self, qubit: usize) -> PauliOp {
        self.ops[qubit]
    }

    pub fn ops(&self) -> &[PauliOp] {
        &self.ops
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|&op| op == PauliOp::I)
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> usize {
        self.ops.iter().filter(|&&op| op != PauliOp::I).count()
    }

    /// Operator product `self * other` as `(phase, string)` with
    /// `phase ∈ {1, i, -1, -i}`.
    pub fn multiply(&self, other: &PauliString) -> Result<(Complex64, PauliString)> {
        let (k, s) = self.multiply_raw(other)?;
        Ok((phase_from_exponent(k), s))
    }

    /// Like [`multiply`](Self::multiply) but with the phase as an exponent of i.
    pub fn multiply_raw(&self, other: &PauliString) -> Result<(u8, PauliString)> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "pauli product of {} vs {} qubits",
                self.n_qubits(),
                other.n_qubits()
            )));
        }
        let mut k = 0u8;
        let mut ops = Vec::with_capacity(self.ops.len());
        for (&a, &b) in self.ops.iter().zip(&other.ops) {
            let (dk, op) = a.compose(b);
            k = (k + dk) % 4;
            ops.push(op);
        }
        Ok((k, PauliString { ops }))
    }

    /// True iff at every position the two operators are equal or at least one
    /// is the identity. Qubit-wise commuting strings can be measured in one
    /// shared basis.
    pub fn qubit_wise_commutes(&self, other: &PauliString) -> Result<bool> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "qubit-wise commutation of {} vs {} qubits",
                self.n_qubits(),
                other.n_qubits()
            )));
        }
        Ok(self.ops.iter().zip(&other.ops).all(|(&a, &b)| {
            a == PauliOp::I || b == PauliOp::I || a == b
        }))
    }

    /// Bitmask views used by the simulator: `x` marks X/Y positions (bit
    /// flips), `z` marks Z/Y positions (phase flips), `y_count` counts Y's.
    ///
    /// The string equals `i^y_count · X^x · Z^z` so that
    /// `P|b⟩ = i^y_count · (-1)^popcount(b & z) · |b XOR x⟩`.
    pub fn masks(&self) -> PauliMasks {
        let mut x = 0u64;
        let mut z = 0u64;
        let mut y_count = 0u32;
        for (q, &op) in self.ops.iter().enumerate() {
            let (xb, zb) = op.xz_bits();
            if xb {
                x |= 1 << q;
            }
            if zb {
                z |= 1 << q;
            }
            if op == PauliOp::Y {
                y_count += 1;
            }
        }
        PauliMasks { x, z, y_count }
    }

    /// Dense `2^n × 2^n` realization, qubit 0 least significant.
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        check_matrix_cap(self.n_qubits())?;
        let dim = 1usize << self.n_qubits();
        let masks = self.masks();
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (row, phase) = masks.apply_to_basis(col as u64);
            m[(row as usize, col)] = phase;
        }
        Ok(m)
    }

    /// Parse `"X0 Y1 Z3"`, `""`, or `"I"` on a register of `n_qubits`.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let trimmed = text.trim();
        let mut ops = vec![PauliOp::I; n_qubits];
        if trimmed.is_empty() || trimmed == "I" {
            return Ok(Self { ops });
        }
        for token in trimmed.split_whitespace() {
            let mut chars = token.chars();
            let sym = chars.next().ok_or_else(|| {
                Error::Domain(format!("empty pauli token in {text:?}"))
            })?;
            let op = match sym {
                'X' => PauliOp::X,
                'Y' => PauliOp::Y,
                'Z' => PauliOp::Z,
                'I' => PauliOp::I,
                other => {
                    return Err(Error::Domain(format!(
                        "unknown pauli symbol {other:?} in {text:?}"
                    )))
                }
            };
            let idx: usize = chars.as_str().parse().map_err(|_| {
                Error::Domain(format!("bad qubit index in pauli token {token:?}"))
            })?;
            if idx >= n_qubits {
                return Err(Error::Domain(format!(
                    "qubit index {idx} out of range for {n_qubits}-qubit string"
                )));
            }
            if ops[idx] != PauliOp::I {
                return Err(Error::Domain(format!(
                    "duplicate qubit index {idx} in {text:?}"
                )));
            }
            ops[idx] = op;
        }
        Ok(Self { ops })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        let mut first = true;
        for (q, &op) in self.ops.iter().enumerate() {
            if op == PauliOp::I {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}{}", op.symbol(), q)?;
            first = false;
        }
        Ok(())
    }
}

/// Bitmask form of a Pauli string; see [`PauliString::masks`].
#[derive(Debug, Clone, Copy)]
pub struct PauliMasks {
    pub x: u64,
    pub z: u64,
    pub y_count: u32,
}

impl PauliMasks {
    /// Image of a computational basis state: `P|b⟩ = phase · |b'⟩`.
    pub fn apply_to_basis(&self, b: u64) -> (u64, Complex64) {
        let signs = (b & self.z).count_ones();
        let k = (self.y_count + 2 * signs) % 4;
        (b ^ self.x, phase_from_exponent(k as u8))
    }
}

/// Weighted sum of Pauli strings over a fixed register.
///
/// Terms live in a `BTreeMap` keyed by the canonical string order, so
/// iteration (and every reduction built on it) is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    /// `c · I`.
    pub fn scalar(n_qubits: usize, c: Complex64) -> Self {
        let mut s = Self::zero(n_qubits);
        s.add_term(PauliString::identity(n_qubits), c);
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &PauliString) -> Complex64 {
        self.terms.get(s).copied().unwrap_or_default()
    }

    /// Accumulate one term, pruning magnitudes below [`PRUNE_TOLERANCE`].
    pub fn add_term(&mut self, string: PauliString, coeff: Complex64) {
        assert_eq!(
            string.n_qubits(),
            self.n_qubits,
            "term qubit count must match the sum"
        );
        let new = self.terms.get(&string).copied().unwrap_or_default() + coeff;
        if new.norm() < PRUNE_TOLERANCE {
            self.terms.remove(&string);
        } else {
            self.terms.insert(string, new);
        }
    }

    pub fn add_assign(&mut self, other: &PauliSum) {
        assert_eq!(self.n_qubits, other.n_qubits);
        for (s, c) in other.terms() {
            self.add_term(s.clone(), *c);
        }
    }

    pub fn scaled(&self, factor: Complex64) -> PauliSum {
        let mut out = PauliSum::zero(self.n_qubits);
        for (s, c) in self.terms() {
            out.add_term(s.clone(), c * factor);
        }
        out
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &PauliSum) -> PauliSum {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Operator product of two sums.
    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "sum product of {} vs {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        let mut out = PauliSum::zero(self.n_qubits);
        for (sa, ca) in self.terms() {
            for (sb, cb) in other.terms() {
                let (phase, s) = sa.multiply(sb)?;
                out.add_term(s, ca * cb * phase);
            }
        }
        Ok(out)
    }

    /// Largest |Im(coeff)|; zero for a Hermitian sum.
    pub fn max_imag_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.im.abs())
            .fold(0.0, f64::max)
    }

    /// Sum of |coeff| over all terms.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Dense realization `Σ aᵢ Pᵢ`; refuses registers above
    /// [`MATRIX_QUBIT_CAP`].
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        check_matrix_cap(self.n_qubits)?;
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (string, coeff) in self.terms() {
            let masks = string.masks();
            for col in 0..dim {
                let (row, phase) = masks.apply_to_basis(col as u64);
                m[(row as usize, col)] += coeff * phase;
            }
        }
        Ok(m)
    }

    pub fn to_json(&self) -> PauliSumJson {
        PauliSumJson {
            n_qubits: self.n_qubits,
            terms: self
                .terms()
                .map(|(s, c)| PauliTermJson {
                    pauli: s.to_string(),
                    coeff_re: c.re,
                    coeff_im: c.im,
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PauliSumJson) -> Result<PauliSum> {
        let mut sum = PauliSum::zero(json.n_qubits);
        for t in &json.terms {
            let s = PauliString::parse(&t.pauli, json.n_qubits)?;
            sum.add_term(s, Complex64::new(t.coeff_re, t.coeff_im));
        }
        Ok(sum)
    }
}

/// Serialized form: a term list of `{pauli, coeff_re, coeff_im}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PauliSumJson {
    pub n_qubits: usize,
    pub terms: Vec<PauliTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PauliTermJson {
    pub pauli: String,
    pub coeff_re: f64,
    pub coeff_im: f64,
}

fn check_matrix_cap(n_qubits: usize) -> Result<()> {
    if n_qubits > MATRIX_QUBIT_CAP {
        return Err(Error::Resource(format!(
            "dense realization of {n_qubits} qubits exceeds the {MATRIX_QUBIT_CAP}-qubit cap"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_string(rng: &mut SplitMix64, n: usize) -> PauliString {
        let ops = (0..n)
            .map(|_| match rng.next_u64() % 4 {
                0 => PauliOp::I,
                1 => PauliOp::X,
                2 => PauliOp::Y,
                _ => PauliOp::Z,
            })
            .collect();
        PauliString::from_ops(ops)
    }

    #[test]
    fn single_qubit_product_table() {
        // XZ = -iY on qubit 0 of a 2-qubit register.
        let x = PauliString::single(2, 0, PauliOp::X);
        let z = PauliString::single(2, 0, PauliOp::Z);
        let (phase, prod) = x.multiply(&z).unwrap();
        assert_eq!(phase, c(0.0, -1.0));
        assert_eq!(prod, PauliString::single(2, 0, PauliOp::Y));
    }

    #[test]
    fn multiply_identity_and_involution() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..50 {
            let a = random_string(&mut rng, 5);
            let id = PauliString::identity(5);
            let (phase, prod) = a.multiply(&id).unwrap();
            assert_eq!(phase, c(1.0, 0.0));
            assert_eq!(prod, a);
            let (phase, prod) = a.multiply(&a).unwrap();
            assert_eq!(phase, c(1.0, 0.0));
            assert!(prod.is_identity());
        }
    }

    #[test]
    fn zz_involution() {
        let zz = PauliString::parse("Z0 Z1", 2).unwrap();
        let (phase, prod) = zz.multiply(&zz).unwrap();
        assert_eq!(phase, c(1.0, 0.0));
        assert!(prod.is_identity());
    }

    #[test]
    fn multiply_associative() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..50 {
            let a = random_string(&mut rng, 4);
            let b = random_string(&mut rng, 4);
            let d = random_string(&mut rng, 4);
            let (p1, ab) = a.multiply(&b).unwrap();
            let (p2, ab_d) = ab.multiply(&d).unwrap();
            let (q1, bd) = b.multiply(&d).unwrap();
            let (q2, a_bd) = a.multiply(&bd).unwrap();
            assert_eq!(ab_d, a_bd);
            assert!((p1 * p2 - q1 * q2).norm() < 1e-15);
        }
    }

    #[test]
    fn multiply_dimension_error() {
        let a = PauliString::identity(2);
        let b = PauliString::identity(3);
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn weight_counts_non_identity() {
        assert_eq!(PauliString::identity(3).weight(), 0);
        assert_eq!(PauliString::parse("X0 Y1 X2", 3).unwrap().weight(), 3);
        assert_eq!(PauliString::parse("X0 X1", 2).unwrap().weight(), 2);
    }

    #[test]
    fn qubit_wise_commutation() {
        let zz = PauliString::parse("Z0 Z1", 2).unwrap();
        let zi = PauliString::parse("Z0", 2).unwrap();
        let x0 = PauliString::parse("X0", 2).unwrap();
        let xy = PauliString::parse("X0 Y1", 2).unwrap();
        assert!(zz.qubit_wise_commutes(&zi).unwrap());
        assert!(!zi.qubit_wise_commutes(&x0).unwrap());
        assert!(xy.qubit_wise_commutes(&xy).unwrap());
        assert!(zz
            .qubit_wise_commutes(&PauliString::identity(3))
            .is_err());
    }

    /// QWC strings must commute as matrices.
    #[test]
    fn qwc_implies_zero_commutator() {
        let mut rng = SplitMix64::new(5);
        let mut checked = 0;
        while checked < 20 {
            let a = random_string(&mut rng, 4);
            let b = random_string(&mut rng, 4);
            if !a.qubit_wise_commutes(&b).unwrap() {
                continue;
            }
            checked += 1;
            let ma = a.to_matrix().unwrap();
            let mb = b.to_matrix().unwrap();
            let comm = &ma * &mb - &mb * &ma;
            assert!(comm.iter().all(|e| e.norm() < 1e-12));
        }
    }

    /// `to_matrix` is a homomorphism: matrix of the product equals the
    /// product of matrices, including the tracked phase.
    #[test]
    fn to_matrix_respects_products() {
        let mut rng = SplitMix64::new(99);
        for n in 1..=6 {
            for _ in 0..8 {
                let a = random_string(&mut rng, n);
                let b = random_string(&mut rng, n);
                let (phase, prod) = a.multiply(&b).unwrap();
                let lhs = prod.to_matrix().unwrap() * phase;
                let rhs = a.to_matrix().unwrap() * b.to_matrix().unwrap();
                let diff = (&lhs - &rhs).iter().map(|e| e.norm()).fold(0.0, f64::max);
                assert!(diff < 1e-12, "n={n} diff={diff}");
            }
        }
    }

    #[test]
    fn z_matrix_is_diag_1_minus1() {
        let z = PauliString::single(1, 0, PauliOp::Z).to_matrix().unwrap();
        assert_eq!(z[(0, 0)], c(1.0, 0.0));
        assert_eq!(z[(1, 1)], c(-1.0, 0.0));
        assert_eq!(z[(0, 1)], c(0.0, 0.0));
        assert_eq!(z[(1, 0)], c(0.0, 0.0));
    }

    #[test]
    fn empty_sum_matrix_is_zero() {
        let m = PauliSum::zero(2).to_matrix().unwrap();
        assert!(m.iter().all(|e| e.norm() == 0.0));
    }

    /// ½(X0 Y1 - Y0 X1) realizes i|01⟩⟨10| - i|10⟩⟨01| where the ket |q0 q1⟩
    /// lists qubit 0 first, so |01⟩ is basis index 2 and |10⟩ is index 1.
    #[test]
    fn a_generator_matrix_by_hand() {
        let mut g = PauliSum::zero(2);
        g.add_term(PauliString::parse("X0 Y1", 2).unwrap(), c(0.5, 0.0));
        g.add_term(PauliString::parse("Y0 X1", 2).unwrap(), c(-0.5, 0.0));
        let m = g.to_matrix().unwrap();
        let mut expected = DMatrix::<Complex64>::zeros(4, 4);
        expected[(2, 1)] = c(0.0, 1.0);
        expected[(1, 2)] = c(0.0, -1.0);
        let diff = (&m - &expected).iter().map(|e| e.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-15, "diff={diff}");
    }

    #[test]
    fn sum_pruning_drops_residue() {
        let mut s = PauliSum::zero(1);
        let z = PauliString::single(1, 0, PauliOp::Z);
        s.add_term(z.clone(), c(1.0, 0.0));
        s.add_term(z.clone(), c(-1.0 + 1e-15, 0.0));
        assert!(s.is_zero());
    }

    #[test]
    fn matrix_cap_enforced() {
        let s = PauliSum::zero(MATRIX_QUBIT_CAP + 1);
        assert!(matches!(s.to_matrix(), Err(Error::Resource(_))));
    }

    #[test]
    fn text_form_round_trip() {
        let s = PauliString::parse("X0 Y1 Z3", 4).unwrap();
        assert_eq!(s.to_string(), "X0 Y1 Z3");
        assert_eq!(PauliString::parse(&s.to_string(), 4).unwrap(), s);
        assert_eq!(PauliString::identity(3).to_string(), "I");
        assert_eq!(
            PauliString::parse("I", 3).unwrap(),
            PauliString::identity(3)
        );
        assert!(PauliString::parse("X9", 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut s = PauliSum::zero(3);
        s.add_term(PauliString::parse("X0 Z2", 3).unwrap(), c(0.25, -1.5));
        s.add_term(PauliString::identity(3), c(2.0, 0.0));
        let json = s.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let parsed: PauliSumJson = serde_json::from_str(&text).unwrap();
        let back = PauliSum::from_json(&parsed).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn sum_product_matches_matrices() {
        let mut rng = SplitMix64::new(3);
        let mut a = PauliSum::zero(3);
        let mut b = PauliSum::zero(3);
        for _ in 0..4 {
            a.add_term(random_string(&mut rng, 3), c(rng.uniform(-1.0, 1.0), 0.0));
            b.add_term(random_string(&mut rng, 3), c(rng.uniform(-1.0, 1.0), 0.0));
        }
        let prod = a.mul(&b).unwrap();
        let lhs = prod.to_matrix().unwrap();
        let rhs = a.to_matrix().unwrap() * b.to_matrix().unwrap();
        let diff = (&lhs - &rhs).iter().map(|e| e.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }
}
