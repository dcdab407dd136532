//! Exact unitaries and Pauli generators for the particle-conserving gates.
//!
//! Ket labels list qubit 0 first, and qubit 0 is the least-significant bit of
//! basis indices. The A gate rotates the {|01⟩, |10⟩} block (indices 2 and 1);
//! the B gate rotates the {|110⟩, |001⟩} block (indices 3 and 4), exchanging
//! two figure-k quanta on its first two qubits for one figure-(k+1) quantum on
//! its third.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::{PauliString, PauliSum};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Generator of the A gate: ½(X₀Y₁ − Y₀X₁) = i|01⟩⟨10| − i|10⟩⟨01|.
pub fn a_generator() -> PauliSum {
    let mut g = PauliSum::zero(2);
    g.add_term(PauliString::parse("X0 Y1", 2).unwrap(), c(0.5, 0.0));
    g.add_term(PauliString::parse("Y0 X1", 2).unwrap(), c(-0.5, 0.0));
    g
}

/// Generator of the B gate:
/// ¼(X₀X₁Y₂ − X₀Y₁X₂ − Y₀X₁X₂ − Y₀Y₁Y₂) = i|001⟩⟨110| − i|110⟩⟨001|.
pub fn b_generator() -> PauliSum {
    let mut g = PauliSum::zero(3);
    g.add_term(PauliString::parse("X0 X1 Y2", 3).unwrap(), c(0.25, 0.0));
    g.add_term(PauliString::parse("X0 Y1 X2", 3).unwrap(), c(-0.25, 0.0));
    g.add_term(PauliString::parse("Y0 X1 X2", 3).unwrap(), c(-0.25, 0.0));
    g.add_term(PauliString::parse("Y0 Y1 Y2", 3).unwrap(), c(-0.25, 0.0));
    g
}

/// Embed a plane rotation by `theta` on basis indices `(hi, lo)` of an
/// otherwise-identity `dim × dim` matrix. The convention matches
/// `exp(-i·theta·G)` for `G = i|lo⟩⟨hi| - i|hi⟩⟨lo|`:
/// `|hi⟩ → cos·|hi⟩ + sin·|lo⟩` and `|lo⟩ → cos·|lo⟩ − sin·|hi⟩`.
fn plane_rotation(dim: usize, hi: usize, lo: usize, theta: f64) -> DMatrix<Complex64> {
    let mut u = DMatrix::identity(dim, dim);
    let (sin, cos) = theta.sin_cos();
    u[(hi, hi)] = c(cos, 0.0);
    u[(lo, lo)] = c(cos, 0.0);
    u[(hi, lo)] = c(-sin, 0.0);
    u[(lo, hi)] = c(sin, 0.0);
    u
}

/// `Â(θ) = exp(−iθ·G_A)`: identity on {|00⟩, |11⟩}, a real rotation on the
/// ordered {|01⟩, |10⟩} block. Hamming weight of every basis state is
/// preserved.
pub fn a_unitary(theta: f64) -> DMatrix<Complex64> {
    // |01⟩ = index 2 (qubit 1 set), |10⟩ = index 1 (qubit 0 set).
    plane_rotation(4, 1, 2, theta)
}

/// `B̂(α) = exp(−iα·G_B)`: identity except a real rotation mixing
/// |110⟩ (indices: qubits 0 and 1 set, index 3) with |001⟩ (qubit 2 set,
/// index 4).
pub fn b_unitary(alpha: f64) -> DMatrix<Complex64> {
    plane_rotation(8, 3, 4, alpha)
}

/// `exp(−iθ(X₀X₁ + Y₀Y₁))`: identity on {|00⟩, |11⟩}, an XY-style mixing of
/// {|01⟩, |10⟩} with imaginary off-diagonals.
pub fn xx_plus_yy_unitary(theta: f64) -> DMatrix<Complex64> {
    let mut u = DMatrix::identity(4, 4);
    let (sin, cos) = (2.0 * theta).sin_cos();
    u[(1, 1)] = c(cos, 0.0);
    u[(2, 2)] = c(cos, 0.0);
    u[(1, 2)] = c(0.0, -sin);
    u[(2, 1)] = c(0.0, -sin);
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, unitary_from_generator};
    use crate::rng::SplitMix64;

    #[test]
    fn a_at_zero_is_identity() {
        let u = a_unitary(0.0);
        assert!(max_abs(&(&u - DMatrix::<Complex64>::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn a_at_half_pi_swaps_block_with_sign() {
        // θ = π/2 sends |01⟩ → −|10⟩ and |10⟩ → |01⟩.
        let u = a_unitary(std::f64::consts::FRAC_PI_2);
        assert!((u[(1, 2)] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((u[(2, 1)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(u[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn a_preserves_hamming_weight() {
        let u = a_unitary(0.83);
        let weight = |i: usize| (i as u32).count_ones();
        for col in 0..4 {
            for row in 0..4 {
                if weight(row) != weight(col) {
                    assert!(u[(row, col)].norm() < 1e-15);
                }
            }
        }
    }

    /// Closed form matches the dense matrix exponential of the generator.
    #[test]
    fn a_matches_generator_exponential() {
        let g = a_generator().to_matrix().unwrap();
        let mut rng = SplitMix64::new(17);
        for _ in 0..10 {
            let theta = rng.uniform(-3.0, 3.0);
            let expected = unitary_from_generator(&g, theta);
            assert!(max_abs(&(&a_unitary(theta) - &expected)) < 1e-12);
        }
    }

    #[test]
    fn b_at_zero_is_identity() {
        let u = b_unitary(0.0);
        assert!(max_abs(&(&u - DMatrix::<Complex64>::identity(8, 8))) < 1e-15);
    }

    /// Nonzero off-diagonal entries appear only on the {|110⟩, |001⟩} block
    /// (indices 3 and 4), matching the stated sparsity pattern.
    #[test]
    fn b_sparsity_pattern() {
        let u = b_unitary(1.1);
        for row in 0..8 {
            for col in 0..8 {
                let expected_nonzero = row == col || (row == 3 && col == 4) || (row == 4 && col == 3);
                if !expected_nonzero {
                    assert!(u[(row, col)].norm() < 1e-15, "unexpected entry at ({row},{col})");
                }
            }
        }
        // Identity outside the rotated block.
        for i in [0usize, 1, 2, 5, 6, 7] {
            assert!((u[(i, i)] - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn b_matches_generator_exponential() {
        let g = b_generator().to_matrix().unwrap();
        let mut rng = SplitMix64::new(29);
        for _ in 0..10 {
            let alpha = rng.uniform(-3.0, 3.0);
            let expected = unitary_from_generator(&g, alpha);
            assert!(max_abs(&(&b_unitary(alpha) - &expected)) < 1e-12);
        }
    }

    /// The generator mixes exactly |110⟩ (index 3) and |001⟩ (index 4):
    /// two figure-k quanta ↔ one figure-(k+1) quantum.
    #[test]
    fn b_generator_matrix_elements() {
        let g = b_generator().to_matrix().unwrap();
        assert!((g[(4, 3)] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((g[(3, 4)] - c(0.0, -1.0)).norm() < 1e-15);
        for row in 0..8 {
            for col in 0..8 {
                if (row, col) != (4, 3) && (row, col) != (3, 4) {
                    assert!(g[(row, col)].norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn xx_plus_yy_matches_generator_exponential() {
        let mut g = PauliSum::zero(2);
        g.add_term(PauliString::parse("X0 X1", 2).unwrap(), c(1.0, 0.0));
        g.add_term(PauliString::parse("Y0 Y1", 2).unwrap(), c(1.0, 0.0));
        let gm = g.to_matrix().unwrap();
        let mut rng = SplitMix64::new(31);
        for _ in 0..10 {
            let theta = rng.uniform(-2.0, 2.0);
            let expected = unitary_from_generator(&gm, theta);
            assert!(max_abs(&(&xx_plus_yy_unitary(theta) - &expected)) < 1e-12);
        }
    }
}
