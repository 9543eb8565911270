//! Dense reference routines for small registers.
//!
//! Everything here scales as `4^n` and exists to serve as an independent
//! check or baseline: symmetry operators as explicit matrices, spectral
//! decomposition of real-symmetric operators, and sector weights obtained
//! by eigenprojection rather than through any phase-evolution route.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::OperatorHandle;
use crate::state::StateVector;

/// Cap for dense-matrix constructions.
pub const DENSE_QUBIT_LIMIT: usize = 12;

pub(crate) fn check_dense_size(n_qubits: usize) -> Result<()> {
    if n_qubits > DENSE_QUBIT_LIMIT {
        return Err(Error::RegisterTooLarge {
            n_qubits,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    Ok(())
}

/// Materialise an operator handle as a complex matrix (column by column).
pub fn operator_matrix(n_qubits: usize, op: &OperatorHandle) -> Result<DMatrix<Complex64>> {
    check_dense_size(n_qubits)?;
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::zeros(dim, dim);
    for c in 0..dim {
        let col = op.applied(&StateVector::basis(n_qubits, c));
        for r in 0..dim {
            m[(r, c)] = col.amplitude(r);
        }
    }
    Ok(m)
}

/// Parity operator `Z x Z x ... x Z` (diagonal, entries +-1).
pub fn parity_matrix(n_qubits: usize) -> DMatrix<f64> {
    let dim = 1usize << n_qubits;
    DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            if (r as u64).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        }
    })
}

/// Particle-number operator (diagonal, entries = popcount).
pub fn number_matrix(n_qubits: usize) -> DMatrix<f64> {
    let dim = 1usize << n_qubits;
    DMatrix::from_fn(
        dim,
        dim,
        |r, c| if r == c { f64::from((r as u64).count_ones()) } else { 0.0 },
    )
}

/// Total-spin operator `S^2 = n(4-n)/4 + sum_{i<j} P_ij` with `P_ij` the
/// pair-permutation operators; real symmetric in the computational basis.
pub fn spin_squared_matrix(n_qubits: usize) -> DMatrix<f64> {
    let dim = 1usize << n_qubits;
    let n = n_qubits as f64;
    let mut m = DMatrix::zeros(dim, dim);
    let constant = n * (4.0 - n) / 4.0;
    for k in 0..dim {
        m[(k, k)] += constant;
        for i in 0..n_qubits {
            for j in (i + 1)..n_qubits {
                let bi = (k >> i) & 1;
                let bj = (k >> j) & 1;
                let swapped = if bi == bj { k } else { k ^ ((1 << i) | (1 << j)) };
                m[(swapped, k)] += 1.0;
            }
        }
    }
    m
}

/// Eigendecomposition of a real-symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    // nalgebra returns eigenpairs unsorted; order them ascending
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(eig.eigenvectors.nrows(), order.len());
    for (new, &old) in order.iter().enumerate() {
        vectors.set_column(new, &eig.eigenvectors.column(old));
    }
    (values, vectors)
}

/// Weight of `state` on each eigenvalue cluster of a real-symmetric
/// operator. `targets` lists the eigenvalues to resolve; eigenvectors are
/// assigned to the nearest target within `tol`.
pub fn eigenprojection_weights(
    matrix: &DMatrix<f64>,
    state: &StateVector,
    targets: &[f64],
    tol: f64,
) -> Vec<f64> {
    let (values, vectors) = symmetric_eigen(matrix);
    let mut weights = vec![0.0; targets.len()];
    for (i, lambda) in values.iter().enumerate() {
        let (best, dist) = targets
            .iter()
            .enumerate()
            .map(|(t, target)| (t, (lambda - target).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("targets is non-empty");
        assert!(
            dist < tol,
            "eigenvalue {lambda} not within {tol} of any target"
        );
        // overlap of the (real) eigenvector with the complex state
        let mut overlap = Complex64::ZERO;
        for (r, v) in vectors.column(i).iter().enumerate() {
            overlap += v * state.amplitude(r);
        }
        weights[best] += overlap.norm_sqr();
    }
    weights
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
