use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hermite::degree_indices;
use crate::error::{domain, Result};
use crate::spectral::{self, CMatrix};

/// Normalized monomial basis of `Symᵏ(ℂᵐ)`.
pub fn symmetric_power_basis(m: usize, k: usize) -> Vec<Vec<u32>> {
    degree_indices(m, k as u32)
}

struct Calibrated {
    /// `g_ω = 2|A|` in a unitary basis of `(V, J_ω)`.
    g: CMatrix,
    /// `Tr|A| / 2`, real trace.
    shift: f64,
}

/// `A = G⁻¹ω` in `G`-orthonormal coordinates.
fn normalized(omega: &DMatrix<f64>, metric: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = omega.nrows();
    if n == 0 || !n.is_multiple_of(2) || omega.ncols() != n || metric.nrows() != n || metric.ncols() != n {
        return domain("form and metric must be square of the same even size");
    }
    if (omega + omega.transpose()).norm() > 1e-12 * (1.0 + omega.norm()) {
        return domain("form is not antisymmetric");
    }
    let eig = metric.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&e| e <= 0.0) {
        return domain("metric is not positive definite");
    }
    let r_inv = spectral::symmetric_function(metric, |e| 1.0 / e.sqrt());
    let a = &r_inv * omega * &r_inv;
    let s = a.clone().singular_values();
    if s.min() <= 1e-12 * s.max().max(1.0) {
        return domain("form is degenerate");
    }
    Ok(a)
}

/// Symplectic eigenvalues `μ_i` of `ω` relative to the metric, ascending (each once).
pub fn symplectic_eigenvalues(omega: &DMatrix<f64>, metric: &DMatrix<f64>) -> Result<Vec<f64>> {
    let a = normalized(omega, metric)?;
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(f64::total_cmp);
    Ok(s.chunks(2).map(|c| (c[0] + c[1]) / 2.0).collect())
}

fn calibrate(omega: &DMatrix<f64>, metric: &DMatrix<f64>) -> Result<Calibrated> {
    let a = normalized(omega, metric)?;
    let n = a.nrows();
    let abs = spectral::symmetric_function(&(-(&a * &a)), f64::sqrt);
    let j = spectral::symmetric_function(&abs, |e| 1.0 / e) * &a;
    let gw = &abs * 2.0;
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::new();
    for i in 0..n {
        if basis.len() * 2 == n {
            break;
        }
        let mut v = nalgebra::DVector::<f64>::zeros(n);
        v[i] = 1.0;
        for u in &basis {
            let ju = &j * u;
            v -= u * u.dot(&v);
            v -= &ju * ju.dot(&v);
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
    }
    let m = basis.len();
    let g = CMatrix::from_fn(m, m, |r, c| {
        let gu = &gw * &basis[c];
        Complex64::new(basis[r].dot(&gu), (&j * &basis[r]).dot(&gu))
    });
    Ok(Calibrated { g, shift: abs.trace() / 2.0 })
}

/// `s_k(g_ω) + Tr|ω|/2` on `Symᵏ(V, J_ω)`, with `g_ω = 2|G⁻¹ω|` extended as a derivation.
pub fn fock_layer_operator(omega: &DMatrix<f64>, metric: &DMatrix<f64>, k: usize) -> Result<CMatrix> {
    let cal = calibrate(omega, metric)?;
    let m = cal.g.nrows();
    let basis = symmetric_power_basis(m, k);
    let index = |alpha: &[u32]| basis.iter().position(|b| b == alpha);
    let mut out = CMatrix::identity(basis.len(), basis.len()) * Complex64::new(cal.shift, 0.0);
    for (col, alpha) in basis.iter().enumerate() {
        for i in 0..m {
            out[(col, col)] += cal.g[(i, i)] * alpha[i] as f64;
            if alpha[i] == 0 {
                continue;
            }
            for jx in 0..m {
                if jx == i {
                    continue;
                }
                let mut beta = alpha.clone();
                beta[i] -= 1;
                beta[jx] += 1;
                let row = index(&beta).expect("same degree");
                out[(row, col)] += cal.g[(jx, i)] * ((alpha[i] * (alpha[jx] + 1)) as f64).sqrt();
            }
        }
    }
    Ok(out)
}

/// `γ_k = (s_k + Tr|ω|/2) ⊗ 1 + 1 ⊗ γ`, indexed as `monomial · r + fiber`.
pub fn gamma_k(omega: &DMatrix<f64>, metric: &DMatrix<f64>, gamma: &CMatrix, k: usize) -> Result<CMatrix> {
    if gamma.nrows() != gamma.ncols() {
        return domain("γ must be square");
    }
    let layer = fock_layer_operator(omega, metric, k)?;
    let r = gamma.nrows();
    let s = layer.nrows();
    Ok(CMatrix::from_fn(s * r, s * r, |i, j| {
        let (a, f) = (i / r, i % r);
        let (b, h) = (j / r, j % r);
        let mut v = if f == h { layer[(a, b)] } else { Complex64::new(0.0, 0.0) };
        if a == b {
            v += gamma[(f, h)];
        }
        v
    }))
}
