//! Lagrangian subspaces: Maslov triple index and η-invariants of pairs.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Rational};
use crate::spectral::{self, CMatrix};

pub const DEFAULT_PHASE_TOLERANCE: f64 = 1e-8;

/// `(ℝ^{2d}, ω, J)` with `ω(x, y) = xᵀ Ω y` and metric `g(x, y) = ω(x, J y)`.
#[derive(Clone, Debug)]
pub struct SymplecticSpace {
    omega: Matrix,
    j: DMatrix<f64>,
    metric: DMatrix<f64>,
}

impl SymplecticSpace {
    /// Uses the compatible structure `J = (−Ω²)^{−1/2} Ωᵀ`, for which `ΩJ = (−Ω²)^{1/2}`.
    pub fn new(omega: Matrix) -> Result<Self> {
        let n = omega.len();
        if !n.is_multiple_of(2) || omega.iter().any(|r| r.len() != n) {
            return domain("symplectic form must be a square matrix of even size");
        }
        for i in 0..n {
            for k in 0..n {
                if omega[i][k] != -omega[k][i].clone() {
                    return domain("symplectic form must be antisymmetric");
                }
            }
        }
        if linalg::det(&omega).is_zero() {
            return domain("symplectic form is degenerate");
        }
        let w = spectral::to_real(&omega);
        let neg_sq = -(&w * &w);
        let inv_root = spectral::symmetric_function(&neg_sq, |x| 1.0 / x.sqrt());
        let j = inv_root * w.transpose();
        Self::with_complex_structure(omega, j)
    }

    /// `Ω = [[0, I], [−I, 0]]`.
    pub fn standard(d: usize) -> Self {
        let mut m = linalg::zero_matrix(2 * d, 2 * d);
        for i in 0..d {
            m[i][d + i] = crate::rational::q(1);
            m[d + i][i] = crate::rational::q(-1);
        }
        Self::new(m).expect("standard form is symplectic")
    }

    pub fn with_complex_structure(omega: Matrix, j: DMatrix<f64>) -> Result<Self> {
        let n = omega.len();
        if j.nrows() != n || j.ncols() != n {
            return domain("complex structure has the wrong size");
        }
        if (&j * &j + DMatrix::identity(n, n)).norm() > 1e-9 {
            return domain("J² ≠ −1");
        }
        let metric = spectral::to_real(&omega) * &j;
        if (&metric - metric.transpose()).norm() > 1e-9 || metric.clone().symmetric_eigen().eigenvalues.min() <= 0.0 {
            return domain("ωJ is not symmetric positive definite");
        }
        Ok(SymplecticSpace { omega, j, metric })
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    pub fn complex_structure(&self) -> &DMatrix<f64> {
        &self.j
    }

    fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let oy = linalg::matvec(&self.omega, y);
        crate::rational::dot(x, &oy)
    }

    /// Span is `d`-dimensional and `ω` vanishes on it.
    pub fn is_lagrangian(&self, basis: &[Vec<Rational>]) -> bool {
        let d = self.dim() / 2;
        if basis.iter().any(|v| v.len() != self.dim()) || linalg::rank(&basis.to_vec()) != d || basis.len() != d {
            return false;
        }
        basis.iter().all(|x| basis.iter().all(|y| self.pair(x, y).is_zero()))
    }

    fn require_lagrangian(&self, basis: &[Vec<Rational>]) -> Result<()> {
        if self.is_lagrangian(basis) {
            Ok(())
        } else {
            domain("input is not a Lagrangian subspace")
        }
    }

    /// Signature of `Q(x₁,x₂,x₃) = ω(x₁,x₂) + ω(x₂,x₃) + ω(x₃,x₁)` on `L₁ ⊕ L₂ ⊕ L₃`.
    pub fn maslov_triple(&self, l1: &[Vec<Rational>], l2: &[Vec<Rational>], l3: &[Vec<Rational>]) -> Result<i64> {
        for l in [l1, l2, l3] {
            self.require_lagrangian(l)?;
        }
        let d = l1.len();
        let half = crate::rational::qf(1, 2);
        let mut gram = linalg::zero_matrix(3 * d, 3 * d);
        let ls = [l1, l2, l3];
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            for (i, x) in ls[a].iter().enumerate() {
                for (k, y) in ls[b].iter().enumerate() {
                    let v = &half * self.pair(x, y);
                    gram[a * d + i][b * d + k] += v.clone();
                    gram[b * d + k][a * d + i] += v;
                }
            }
        }
        Ok(linalg::signature(&gram))
    }

    fn orthonormal_frame(&self, basis: &[Vec<Rational>]) -> Result<Vec<nalgebra::DVector<f64>>> {
        let mut frame: Vec<nalgebra::DVector<f64>> = Vec::new();
        for v in basis {
            let mut u = spectral::to_real_vec(v);
            for f in &frame {
                let c = (f.transpose() * &self.metric * &u)[0];
                u -= f * c;
            }
            let norm = (u.transpose() * &self.metric * &u)[0].sqrt();
            if !(norm > 1e-12) {
                return domain("Lagrangian basis is numerically singular");
            }
            frame.push(u / norm);
        }
        Ok(frame)
    }

    /// `U` with `L₂ = U·L₁` in the `J`-unitary frame of `L₁`.
    fn unitary_between(&self, l1: &[Vec<Rational>], l2: &[Vec<Rational>]) -> Result<CMatrix> {
        let f1 = self.orthonormal_frame(l1)?;
        let f2 = self.orthonormal_frame(l2)?;
        let d = f1.len();
        let jf1: Vec<_> = f1.iter().map(|f| &self.j * f).collect();
        let g = |x: &nalgebra::DVector<f64>, y: &nalgebra::DVector<f64>| (x.transpose() * &self.metric * y)[0];
        Ok(CMatrix::from_fn(d, d, |k, jdx| Complex64::new(g(&f2[jdx], &f1[k]), g(&f2[jdx], &jf1[k]))))
    }

    /// `η(L₁, L₂) = Σ g(e^{iθ_j})` over the eigenphases of the symmetric unitary taking `L₁` to `L₂`.
    pub fn eta_pair(&self, l1: &[Vec<Rational>], l2: &[Vec<Rational>], tolerance: f64) -> Result<EtaValue> {
        self.require_lagrangian(l1)?;
        self.require_lagrangian(l2)?;
        let u = self.unitary_between(l1, l2)?;
        // U Uᵀ does not depend on the chosen frame of L₂; its square root is the symmetric unitary.
        let s = &u * u.transpose();
        let mut value = 0.0;
        let mut near_degenerate = false;
        let mut phases = Vec::new();
        for mu in spectral::complex_eigenvalues(&s) {
            let theta = mu.arg() / 2.0;
            phases.push(theta);
            if theta.abs() <= tolerance {
                near_degenerate = true;
                continue;
            }
            value += phase_weight(theta);
        }
        Ok(EtaValue { value, near_degenerate, phases })
    }

    /// `|Mas(L₁,L₂,L₃) − (η₁₂ + η₂₃ + η₃₁)|`.
    pub fn lion_cocycle_check(&self, l1: &[Vec<Rational>], l2: &[Vec<Rational>], l3: &[Vec<Rational>], tolerance: f64) -> Result<CocycleCheck> {
        let maslov = self.maslov_triple(l1, l2, l3)?;
        let etas = [self.eta_pair(l1, l2, tolerance)?, self.eta_pair(l2, l3, tolerance)?, self.eta_pair(l3, l1, tolerance)?];
        let sum: f64 = etas.iter().map(|e| e.value).sum();
        Ok(CocycleCheck {
            maslov,
            etas: [etas[0].value, etas[1].value, etas[2].value],
            residual: (maslov as f64 - sum).abs(),
            near_degenerate: etas.iter().any(|e| e.near_degenerate),
        })
    }
}

/// Lagrangian subspace of `(ℝ^{2d}, Ω)` grown one vector at a time from small random
/// integer combinations inside the `ω`-orthogonal of the current isotropic span.
pub fn random_lagrangian(omega: &Matrix, rng: &mut impl Rng) -> Vec<Vec<Rational>> {
    let n = omega.len();
    let mut basis: Vec<Vec<Rational>> = Vec::with_capacity(n / 2);
    while basis.len() < n / 2 {
        let constraints: Matrix = basis.iter().map(|v| linalg::matvec(&linalg::transpose(omega), v)).collect();
        let ker = linalg::kernel(&constraints, n);
        let mut v = vec![Rational::zero(); n];
        for k in &ker {
            let c = Rational::from_integer(rng.random_range(-3..=3).into());
            v = rational::add(&v, &rational::scale(&c, k));
        }
        let mut trial = basis.clone();
        trial.push(v);
        if linalg::rank(&trial) == trial.len() {
            basis = trial;
        }
    }
    basis
}

/// `g(e^{iθ})`: `1 − 2θ/π` on `(0, π)`, `−1 − 2θ/π` on `(−π, 0)`, zero at `0` and `π`.
pub fn phase_weight(theta: f64) -> f64 {
    if theta > 0.0 && theta < PI {
        1.0 - 2.0 * theta / PI
    } else if theta < 0.0 && theta > -PI {
        -1.0 - 2.0 * theta / PI
    } else {
        0.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaValue {
    pub value: f64,
    /// Some phase sat within tolerance of 0 (the pair is not transversal).
    pub near_degenerate: bool,
    pub phases: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleCheck {
    pub maslov: i64,
    pub etas: [f64; 3],
    pub residual: f64,
    pub near_degenerate: bool,
}
