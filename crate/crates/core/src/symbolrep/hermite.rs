use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use super::FlatRepresentation;
use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::rational::to_f64;
use crate::spectral::{self, CMatrix};

/// Multi-indices `α ∈ ℕ^d` with `|α| ≤ max_degree`, ordered by degree, so every lower-degree basis is a prefix.
#[derive(Clone, Debug)]
pub struct HermiteBasis {
    d: usize,
    indices: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

fn compositions(d: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == d {
        prefix.push(k);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=k).rev() {
        prefix.push(first);
        compositions(d, k - first, prefix, out);
        prefix.pop();
    }
}

/// Multi-indices of total degree exactly `k` in `d` variables.
pub(crate) fn degree_indices(d: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if d == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    compositions(d, k, &mut Vec::new(), &mut out);
    out
}

impl HermiteBasis {
    pub fn new(d: usize, max_degree: usize) -> Self {
        let mut indices = Vec::new();
        for k in 0..=max_degree as u32 {
            indices.extend(degree_indices(d, k));
            if d == 0 {
                break;
            }
        }
        let lookup = indices.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        HermiteBasis { d, indices, lookup }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn index(&self, alpha: &[u32]) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    pub fn multi_index(&self, i: usize) -> &[u32] {
        &self.indices[i]
    }

    fn ladder(&self, j: usize, raise: bool) -> SparseOp {
        let mut rows = vec![Vec::new(); self.len()];
        for (col, alpha) in self.indices.iter().enumerate() {
            let mut beta = alpha.clone();
            let v = if raise {
                beta[j] += 1;
                ((alpha[j] + 1) as f64).sqrt()
            } else {
                if alpha[j] == 0 {
                    continue;
                }
                beta[j] -= 1;
                (alpha[j] as f64).sqrt()
            };
            if let Some(row) = self.index(&beta) {
                rows[row].push((col, Complex64::new(v, 0.0)));
            }
        }
        SparseOp { rows }
    }

    /// `a_j` with `⟨α − e_j| a_j |α⟩ = √α_j`.
    pub fn annihilation(&self, j: usize) -> SparseOp {
        self.ladder(j, false)
    }

    /// `a_j†`, truncated at the top degree.
    pub fn creation(&self, j: usize) -> SparseOp {
        self.ladder(j, true)
    }
}

/// Row-sparse complex square matrix.
#[derive(Clone, Debug)]
pub struct SparseOp {
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseOp {
    pub fn zero(n: usize) -> Self {
        SparseOp { rows: vec![Vec::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        SparseOp { rows: (0..n).map(|i| vec![(i, Complex64::new(1.0, 0.0))]).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, Complex64)>] {
        &self.rows
    }

    pub fn mul(&self, other: &SparseOp) -> SparseOp {
        let n = other.dim();
        let mut acc = vec![Complex64::zero(); n];
        let mut touched = Vec::new();
        let mut seen = vec![false; n];
        let rows = self
            .rows
            .iter()
            .map(|row| {
                for &(k, v) in row {
                    for &(c, w) in &other.rows[k] {
                        if !seen[c] {
                            seen[c] = true;
                            touched.push(c);
                        }
                        acc[c] += v * w;
                    }
                }
                touched.sort_unstable();
                let out: Vec<(usize, Complex64)> = touched.iter().filter(|&&c| acc[c] != Complex64::zero()).map(|&c| (c, acc[c])).collect();
                for &c in &touched {
                    acc[c] = Complex64::zero();
                    seen[c] = false;
                }
                touched.clear();
                out
            })
            .collect();
        SparseOp { rows }
    }

    pub fn add_scaled(&self, c: Complex64, other: &SparseOp) -> SparseOp {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut m: Vec<(usize, Complex64)> = a.clone();
                for &(col, v) in b {
                    match m.iter_mut().find(|(k, _)| *k == col) {
                        Some((_, x)) => *x += c * v,
                        None => m.push((col, c * v)),
                    }
                }
                m.retain(|(_, v)| *v != Complex64::zero());
                m.sort_by_key(|(k, _)| *k);
                m
            })
            .collect();
        SparseOp { rows }
    }

    pub fn to_dense(&self, size: usize) -> CMatrix {
        let mut m = CMatrix::zeros(size, size);
        for (r, row) in self.rows.iter().enumerate().take(size) {
            for &(c, v) in row {
                if c < size {
                    m[(r, c)] = v;
                }
            }
        }
        m
    }
}

/// Hermite functions adapted to a Gaussian `exp(−½ tᵀ(A + iB)t)`: `t = L(a + a†)/√2`, `LLᵀ = A⁻¹`,
/// and `∂_t = L⁻ᵀ(a − a†)/√2 − iBt`.
#[derive(Clone, Debug)]
pub struct HermiteFrame {
    l: DMatrix<f64>,
    b: DMatrix<f64>,
    adapted: bool,
}

fn sign_function(x: &CMatrix) -> Option<CMatrix> {
    let mut s = x.clone();
    for _ in 0..100 {
        let inv = s.clone().try_inverse()?;
        let next = (&s + inv) * Complex64::new(0.5, 0.0);
        let delta = (&next - &s).norm();
        s = next;
        if delta <= 1e-14 * s.norm() {
            return Some(s);
        }
    }
    None
}

impl HermiteFrame {
    pub fn identity(d: usize) -> Self {
        HermiteFrame { l: DMatrix::identity(d, d), b: DMatrix::zeros(d, d), adapted: false }
    }

    /// Frame whose ground state is the ground state of the quadratic part of the sub-Laplacian.
    /// Falls back to the standard frame when that part is degenerate.
    pub fn adapted(rep: &FlatRepresentation, metric: Option<&Matrix>) -> Self {
        let d = rep.dim();
        let g = rep.algebra();
        let gens = g.weight_indices(1);
        let inv = match metric.and_then(linalg::inverse) {
            Some(m) => m,
            None => linalg::identity(gens.len()),
        };
        if d == 0 || inv.len() != gens.len() {
            return Self::identity(d);
        }
        // z = (t, P) with P = −i∂; dπX = i(w·z + c)
        let w: Vec<Vec<f64>> = gens
            .iter()
            .map(|&k| {
                let op = rep.generator(k);
                let mut v = vec![0.0; 2 * d];
                for j in 0..d {
                    let mut e = vec![0u32; d];
                    e[j] = 1;
                    v[j] = to_f64(&op.potential.coefficient(&e));
                    v[d + j] = to_f64(&op.field[j].coefficient(&vec![0; d]));
                }
                v
            })
            .collect();
        let mut m = DMatrix::<f64>::zeros(2 * d, 2 * d);
        for (a, wa) in w.iter().enumerate() {
            for (b, wb) in w.iter().enumerate() {
                let c = to_f64(&inv[a][b]);
                for i in 0..2 * d {
                    for j in 0..2 * d {
                        m[(i, j)] += c * wa[i] * wb[j];
                    }
                }
            }
        }
        Self::from_quadratic(&m).unwrap_or_else(|| Self::identity(d))
    }

    /// Ground-state frame of `zᵀMz`, from the annihilator eigenspace of `MΩ`.
    pub fn from_quadratic(m: &DMatrix<f64>) -> Option<Self> {
        let d = m.nrows() / 2;
        let mut omega = DMatrix::<f64>::zeros(2 * d, 2 * d);
        for i in 0..d {
            omega[(i, d + i)] = 1.0;
            omega[(d + i, i)] = -1.0;
        }
        let x = spectral::complexify(&(m * &omega)) * Complex64::new(0.0, -1.0);
        let s = sign_function(&x)?;
        let id = CMatrix::identity(2 * d, 2 * d);
        for sgn in [1.0, -1.0] {
            let p = (&id + &s * Complex64::new(sgn, 0.0)) * Complex64::new(0.5, 0.0);
            let svd = p.svd(true, false);
            let u = svd.u?;
            let mut order: Vec<usize> = (0..2 * d).collect();
            order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
            let c = CMatrix::from_fn(2 * d, d, |r, k| u[(r, order[k])]);
            let ca = c.rows(0, d).into_owned();
            let cb = c.rows(d, d).into_owned();
            let Some(cbi) = cb.try_inverse() else { continue };
            let z = ca * cbi * Complex64::new(0.0, 1.0);
            let z = (&z + z.transpose()) * Complex64::new(0.5, 0.0);
            let a = z.map(|v| v.re);
            let b = z.map(|v| v.im);
            let eig = a.clone().symmetric_eigen().eigenvalues;
            if eig.iter().all(|&e| e > 1e-10) {
                let l = spectral::symmetric_function(&a, |e| 1.0 / e.sqrt());
                return Some(HermiteFrame { l, b, adapted: true });
            }
        }
        None
    }

    pub fn is_adapted(&self) -> bool {
        self.adapted
    }

    /// Position operators `t_j` and derivatives `∂_j` on the basis.
    pub fn position_and_derivative(&self, basis: &HermiteBasis) -> (Vec<SparseOp>, Vec<SparseOp>) {
        let d = basis.d;
        let n = basis.len();
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let a: Vec<SparseOp> = (0..d).map(|j| basis.annihilation(j)).collect();
        let ad: Vec<SparseOp> = (0..d).map(|j| basis.creation(j)).collect();
        let x: Vec<SparseOp> = (0..d).map(|j| a[j].add_scaled(Complex64::new(1.0, 0.0), &ad[j])).collect();
        let p: Vec<SparseOp> = (0..d).map(|j| a[j].add_scaled(Complex64::new(-1.0, 0.0), &ad[j])).collect();
        let lit = self.l.clone().try_inverse().expect("frame matrix is invertible").transpose();
        let combo = |coeffs: &dyn Fn(usize) -> Complex64, ops: &[SparseOp]| {
            let mut acc = SparseOp::zero(n);
            for (k, op) in ops.iter().enumerate() {
                let c = coeffs(k);
                if c != Complex64::zero() {
                    acc = acc.add_scaled(c, op);
                }
            }
            acc
        };
        let t: Vec<SparseOp> = (0..d).map(|j| combo(&|k| Complex64::new(self.l[(j, k)] * r2, 0.0), &x)).collect();
        let dt: Vec<SparseOp> = (0..d)
            .map(|j| {
                let base = combo(&|k| Complex64::new(lit[(j, k)] * r2, 0.0), &p);
                let shift = combo(&|k| Complex64::new(0.0, -self.b[(j, k)]), &t);
                base.add_scaled(Complex64::new(1.0, 0.0), &shift)
            })
            .collect();
        (t, dt)
    }

    /// `dπ(X_i)` for every basis element, on the given basis.
    pub fn generator_ops(&self, rep: &FlatRepresentation, basis: &HermiteBasis) -> Vec<SparseOp> {
        let n = basis.len();
        let (t, dt) = self.position_and_derivative(basis);
        let mut powers: HashMap<Vec<u32>, SparseOp> = HashMap::new();
        let mut monomial = |e: &Vec<u32>| -> SparseOp {
            if let Some(op) = powers.get(e) {
                return op.clone();
            }
            let mut op = SparseOp::identity(n);
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    op = op.mul(&t[j]);
                }
            }
            powers.insert(e.clone(), op.clone());
            op
        };
        let mut eval = |p: &Poly| -> SparseOp {
            let mut acc = SparseOp::zero(n);
            for (e, c) in p.terms() {
                acc = acc.add_scaled(Complex64::new(to_f64(c), 0.0), &monomial(e));
            }
            acc
        };
        rep.generators()
            .iter()
            .map(|g| {
                let mut op = SparseOp::zero(n).add_scaled(Complex64::new(0.0, 1.0), &eval(&g.potential));
                for (j, a) in g.field.iter().enumerate() {
                    if !a.is_zero() {
                        op = op.add_scaled(Complex64::new(1.0, 0.0), &eval(a).mul(&dt[j]));
                    }
                }
                op
            })
            .collect()
    }
}
