//! Graded nilpotent Lie algebras given by exact structure constants.

mod bch;
mod flag;
mod mohsen;

use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Subspace};
use crate::rational::{self, Rational};

pub use bch::{bch, dynkin_terms, MAX_BCH_STEP};
pub use flag::{jordan_holder_basis, JordanHolderFlag};
pub use mohsen::{mohsen_flag, mohsen_modification};

/// Structure-constant table `[X_i, X_j] = Σ_k c_ij^k X_k` with positive integer weights.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    weights: Vec<u32>,
    names: Vec<String>,
    table: Vec<Vec<Vec<(usize, Rational)>>>,
    step: OnceLock<Option<usize>>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.table == other.table
    }
}

/// A violated axiom. Indices are 0-based basis positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum Diagnostic {
    Antisymmetry { i: usize, j: usize, k: usize },
    Jacobi { i: usize, j: usize, l: usize, k: usize },
    Grading { i: usize, j: usize, k: usize },
    Nilpotency,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Antisymmetry { i, j, k } => write!(f, "antisymmetry fails: c_{{{},{}}}^{} != -c_{{{},{}}}^{}", i + 1, j + 1, k + 1, j + 1, i + 1, k + 1),
            Diagnostic::Jacobi { i, j, l, k } => write!(f, "Jacobi identity fails on (X{}, X{}, X{}) in component {}", i + 1, j + 1, l + 1, k + 1),
            Diagnostic::Grading { i, j, k } => write!(f, "grading violated: [X{}, X{}] has an X{} component of the wrong weight", i + 1, j + 1, k + 1),
            Diagnostic::Nilpotency => write!(f, "descending central series does not reach 0"),
        }
    }
}

impl LieAlgebra {
    /// Builds an algebra from 0-based entries `(i, j, k, c)` meaning `c_ij^k = c`.
    /// When only one of `(i, j)` and `(j, i)` is listed, the other is filled in antisymmetrically.
    pub fn new(name: impl Into<String>, weights: Vec<u32>, names: Option<Vec<String>>, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        if weights.contains(&0) {
            return Err(Error::Malformed("weights must be positive integers".into()));
        }
        let names = match names {
            Some(v) if v.len() != n => return Err(Error::Malformed(format!("{} basis names for dimension {n}", v.len()))),
            Some(v) => v,
            None => (1..=n).map(|i| format!("X{i}")).collect(),
        };
        let mut dense = vec![vec![vec![Rational::zero(); n]; n]; n];
        let mut given = vec![vec![false; n]; n];
        for (i, j, k, c) in entries {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Malformed(format!("bracket index ({}, {}, {}) out of range for dimension {n}", i + 1, j + 1, k + 1)));
            }
            dense[*i][*j][*k] += c;
            given[*i][*j] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if given[i][j] && !given[j][i] && i != j {
                    for k in 0..n {
                        dense[j][i][k] = -dense[i][j][k].clone();
                    }
                }
            }
        }
        let table = dense
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()).collect())
            .collect();
        Ok(LieAlgebra { name: name.into(), weights, names, table, step: OnceLock::new() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn max_weight(&self) -> u32 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.table[i][j].iter().find(|(kk, _)| *kk == k).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Nonzero entries `(i, j, k, c)` with `i < j`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                for (k, c) in &self.table[i][j] {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rational> {
        let mut v = rational::zeros(self.dim());
        for (k, c) in &self.table[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = rational::zeros(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || self.table[i][j].is_empty() {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in &self.table[i][j] {
                    out[k.to_owned()] += &f * c;
                }
            }
        }
        out
    }

    /// Matrix of `ad(x)`; column `j` is `[x, X_j]`.
    pub fn ad(&self, x: &[Rational]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Rational>> = (0..n).map(|j| self.bracket(x, &rational::unit(n, j))).collect();
        linalg::transpose(&cols)
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let n = self.dim();
        let mut diags = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.structure_constant(i, j, k) != -self.structure_constant(j, i, k) && i <= j {
                        diags.push(Diagnostic::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for (k, _) in &self.table[i][j] {
                    if self.weights[*k] != self.weights[i] + self.weights[j] {
                        diags.push(Diagnostic::Grading { i, j, k: *k });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let (ei, ej, el) = (rational::unit(n, i), rational::unit(n, j), rational::unit(n, l));
                    let a = self.bracket(&self.bracket(&ei, &ej), &el);
                    let b = self.bracket(&self.bracket(&ej, &el), &ei);
                    let c = self.bracket(&self.bracket(&el, &ei), &ej);
                    if let Some(k) = (0..n).find(|&k| !(&a[k] + &b[k] + &c[k]).is_zero()) {
                        diags.push(Diagnostic::Jacobi { i, j, l, k });
                    }
                }
            }
        }
        if self.step().is_none() {
            diags.push(Diagnostic::Nilpotency);
        }
        diags
    }

    fn bracket_space(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vs = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                let v = self.bracket(x, y);
                if !rational::is_zero_vec(&v) {
                    vs.push(v);
                }
            }
        }
        Subspace::span(self.dim(), &vs)
    }

    /// `g ⊇ [g,g] ⊇ … ⊇ 0` and the step length.
    pub fn descending_central_series(&self) -> Result<(Vec<Subspace>, usize)> {
        let n = self.dim();
        let full = Subspace::full(n);
        let mut chain = vec![full.clone()];
        loop {
            let last = chain.last().unwrap();
            if last.dim() == 0 {
                let step = chain.len() - 1;
                return Ok((chain, step));
            }
            let next = self.bracket_space(&full, last);
            if next.dim() == last.dim() {
                return Err(Error::NotNilpotent);
            }
            chain.push(next);
        }
    }

    /// Step length, or `None` when the algebra is not nilpotent.
    pub fn step(&self) -> Option<usize> {
        *self.step.get_or_init(|| self.descending_central_series().ok().map(|(_, s)| s))
    }

    pub fn derived_algebra(&self) -> Subspace {
        let full = Subspace::full(self.dim());
        self.bracket_space(&full, &full)
    }

    /// Kernel of `x ↦ ([X_1,x], …, [X_n,x])`.
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        let mut rows = Vec::new();
        for i in 0..n {
            // row k of the block for X_i: x ↦ Σ_j x_j c_ij^k
            let mut block = linalg::zero_matrix(n, n);
            for j in 0..n {
                for (k, c) in &self.table[i][j] {
                    block[*k][j] = c.clone();
                }
            }
            rows.extend(block);
        }
        Subspace::span(n, &linalg::kernel(&rows, n))
    }

    /// `{x : [g, x] ⊆ s}`
    pub fn centralizer_mod(&self, s: &Subspace) -> Subspace {
        let n = self.dim();
        // x ↦ ([X_i, x] mod s) via the orthogonal complement of s
        let perp = s.orthogonal_complement();
        let mut rows = Vec::new();
        for i in 0..n {
            let ad_i: Matrix = {
                let cols: Vec<Vec<Rational>> = (0..n).map(|j| self.bracket_basis(i, j)).collect();
                linalg::transpose(&cols)
            };
            for p in perp.basis() {
                rows.push((0..n).map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &p[k] * &ad_i[k][j])).collect());
            }
        }
        Subspace::span(n, &linalg::kernel(&rows, n))
    }

    pub fn upper_central_series(&self) -> Vec<Subspace> {
        let n = self.dim();
        let mut chain = vec![Subspace::zero(n)];
        loop {
            let next = self.centralizer_mod(chain.last().unwrap());
            if next.dim() == chain.last().unwrap().dim() {
                return chain;
            }
            chain.push(next);
        }
    }

    /// `δ_t v`: component `j` scaled by `t^{w_j}`.
    pub fn dilation_apply(&self, t: &Rational, v: &[Rational]) -> Result<Vec<Rational>> {
        if t <= &Rational::zero() {
            return crate::error::domain(format!("dilation parameter must be positive, got {}", rational::format_rational(t)));
        }
        Ok(v.iter().zip(&self.weights).map(|(x, &w)| x * rational::pow(t, w)).collect())
    }

    pub fn dilation_matrix(&self, t: &Rational) -> Result<Matrix> {
        let n = self.dim();
        let mut m = linalg::zero_matrix(n, n);
        for j in 0..n {
            m[j] = self.dilation_apply(t, &rational::unit(n, j))?;
        }
        Ok(linalg::transpose(&m))
    }

    /// `M` (columns are images of basis vectors) preserves brackets and the grading.
    pub fn is_graded_automorphism(&self, m: &Matrix) -> bool {
        let n = self.dim();
        if m.len() != n || m.iter().any(|r| r.len() != n) || linalg::det(m).is_zero() {
            return false;
        }
        for k in 0..n {
            for j in 0..n {
                if !m[k][j].is_zero() && self.weights[k] != self.weights[j] {
                    return false;
                }
            }
        }
        let cols: Vec<Vec<Rational>> = linalg::transpose(m);
        for i in 0..n {
            for j in i + 1..n {
                let lhs = linalg::matvec(m, &self.bracket_basis(i, j));
                let rhs = self.bracket(&cols[i], &cols[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_automorphism(&self, m: &Matrix) -> bool {
        let n = self.dim();
        if m.len() != n || linalg::det(m).is_zero() {
            return false;
        }
        let cols: Vec<Vec<Rational>> = linalg::transpose(m);
        (0..n).all(|i| (i + 1..n).all(|j| linalg::matvec(m, &self.bracket_basis(i, j)) == self.bracket(&cols[i], &cols[j])))
    }

    /// Indices of basis vectors of weight `w`.
    pub fn weight_indices(&self, w: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == w).collect()
    }

    pub fn step2_normal_form(&self) -> Result<Step2NormalForm> {
        let step = self.step().ok_or(Error::NotNilpotent)?;
        if step > 2 {
            return Err(Error::UnsupportedStep { step, reason: "the (V, W) normal form needs step length at most 2".into() });
        }
        let w_space = self.derived_algebra();
        let v_space = w_space.orthogonal_complement();
        let (_, pivots) = linalg::rref(w_space.basis());
        let p = w_space.dim();
        let vb = v_space.basis();
        let mut omegas = vec![linalg::zero_matrix(vb.len(), vb.len()); p];
        for a in 0..vb.len() {
            for b in 0..vb.len() {
                let br = self.bracket(&vb[a], &vb[b]);
                for (k, &piv) in pivots.iter().enumerate() {
                    omegas[k][a][b] = br[piv].clone();
                }
            }
        }
        Ok(Step2NormalForm { v: v_space, w: w_space, omegas })
    }
}

/// `g = V ⊕ C(g)` with `[x, y] = Σ_k ω^k(x_V, y_V) w_k` for the standard inner product.
#[derive(Clone, Debug, PartialEq)]
pub struct Step2NormalForm {
    /// Orthogonal complement of the derived algebra.
    pub v: Subspace,
    /// The derived algebra `C(g) = [g, g]`; its RREF rows are `w_1, …, w_p`.
    pub w: Subspace,
    /// `ω^k[a][b]`: coefficient of `w_k` in `[v_a, v_b]`.
    pub omegas: Vec<Matrix>,
}

impl Step2NormalForm {
    pub fn inner_product(&self) -> &'static str {
        "standard"
    }

    /// Rebuilds `[x, y]` from the normal-form data.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.v.ambient();
        let vb = self.v.basis();
        let wb = self.w.basis();
        let mut basis = vb.clone();
        basis.extend(wb.iter().cloned());
        let coords = |z: &[Rational]| -> Vec<Rational> {
            let a = linalg::transpose(&basis);
            linalg::solve(&a, z).expect("V and W span g")
        };
        let (cx, cy) = (coords(x), coords(y));
        let mut out = rational::zeros(n);
        for (k, om) in self.omegas.iter().enumerate() {
            let mut s = Rational::zero();
            for a in 0..vb.len() {
                for b in 0..vb.len() {
                    if !om[a][b].is_zero() {
                        s += &cx[a] * &cy[b] * &om[a][b];
                    }
                }
            }
            rational::axpy(&mut out, &s, &wb[k]);
        }
        out
    }
}
