//! Dense linear-algebra helpers shared by the reference oracles.
//!
//! Everything here operates on desk-scale matrices (a few thousand rows at
//! most); nalgebra's Hermitian eigensolver does the heavy lifting.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian
/// complex matrix.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let dim = m.nrows();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Eigenvalues (ascending) and eigenvectors of a real symmetric matrix.
pub fn symmetric_eigen_f64(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let dim = m.nrows();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let eig = m.clone().symmetric_eigen();
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `exp(-i·angle·h)` for Hermitian `h`, via eigendecomposition.
pub fn unitary_from_generator(h: &DMatrix<Complex64>, angle: f64) -> DMatrix<Complex64> {
    let (values, vectors) = hermitian_eigen(h);
    let dim = h.nrows();
    let phases = DVector::from_iterator(
        dim,
        values
            .iter()
            .map(|&lambda| Complex64::from_polar(1.0, -angle * lambda)),
    );
    let mut scaled = vectors.clone();
    for (k, col) in scaled.column_iter_mut().enumerate() {
        let mut col = col;
        col *= phases[k];
    }
    &scaled * vectors.adjoint()
}

/// Largest entry magnitude of `ab - ba`.
pub fn commutator_max_abs(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let comm = a * b - b * a;
    comm.iter().map(|e| e.norm()).fold(0.0, f64::max)
}

/// Largest entry magnitude of a matrix.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|e| e.norm()).fold(0.0, f64::max)
}

/// Max-entry distance between two unitaries after fixing the global phase
/// that minimizes the Frobenius distance (the phase of `tr(target† u)`).
pub fn phase_aligned_distance(u: &DMatrix<Complex64>, target: &DMatrix<Complex64>) -> f64 {
    let trace = (target.adjoint() * u).trace();
    let phase = if trace.norm() > 1e-300 {
        trace / trace.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let aligned = u * phase.conj();
    max_abs(&(&aligned - target))
}
