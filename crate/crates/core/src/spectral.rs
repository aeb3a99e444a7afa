//! Double-precision helpers shared by the spectral modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::linalg::Matrix;
use crate::rational::{to_f64, Rational};

pub type CMatrix = DMatrix<Complex64>;

pub fn to_real(m: &Matrix) -> DMatrix<f64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, cols, |i, j| to_f64(&m[i][j]))
}

pub fn to_real_vec(v: &[Rational]) -> DVector<f64> {
    DVector::from_iterator(v.len(), v.iter().map(to_f64))
}

pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `f(S)` for a symmetric matrix via its eigendecomposition.
pub fn symmetric_function(s: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let e = s.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(f));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

/// Eigenvalues of a complex matrix from its Schur form.
pub fn complex_eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let t = m.clone().schur().unpack().1;
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Ascending singular values.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut v: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(f64::INFINITY)
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}
