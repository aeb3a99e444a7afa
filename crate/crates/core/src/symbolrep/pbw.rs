use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{domain, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::{self, Matrix};
use crate::rational::{to_f64, Rational};
use crate::spectral::CMatrix;

/// Rewrites a word `X_{w_1}⋯X_{w_k}` in ascending PBW order, returning multi-index → coefficient.
pub fn pbw_normal_form(g: &LieAlgebra, word: &[usize]) -> BTreeMap<Vec<u32>, Rational> {
    let mut out = BTreeMap::new();
    let mut stack: Vec<(Vec<usize>, Rational)> = vec![(word.to_vec(), Rational::from_integer(1.into()))];
    while let Some((w, c)) = stack.pop() {
        match w.windows(2).position(|p| p[0] > p[1]) {
            None => {
                let mut alpha = vec![0u32; g.dim()];
                for &i in &w {
                    alpha[i] += 1;
                }
                let e: &mut Rational = out.entry(alpha).or_insert_with(Rational::zero);
                *e += c;
            }
            Some(p) => {
                let (a, b) = (w[p], w[p + 1]);
                let mut swapped = w.clone();
                swapped.swap(p, p + 1);
                stack.push((swapped, c.clone()));
                for (k, s) in g.bracket_basis(a, b).into_iter().enumerate() {
                    if !s.is_zero() {
                        let mut nw = w[..p].to_vec();
                        nw.push(k);
                        nw.extend_from_slice(&w[p + 2..]);
                        stack.push((nw, &c * &s));
                    }
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Homogeneous element of `U(g) ⊗ End(ℂʳ)` in ascending PBW order.
#[derive(Clone, Debug)]
pub struct PBWSymbol {
    degree: u32,
    rank: usize,
    terms: Vec<(CMatrix, Vec<u32>)>,
}

fn weighted_degree(g: &LieAlgebra, alpha: &[u32]) -> u32 {
    alpha.iter().zip(g.weights()).map(|(a, w)| a * w).sum()
}

impl PBWSymbol {
    pub fn new(g: &LieAlgebra, degree: u32, rank: usize, terms: Vec<(CMatrix, Vec<u32>)>) -> Result<Self> {
        for (c, alpha) in &terms {
            if c.nrows() != rank || c.ncols() != rank {
                return domain(format!("coefficient is {}×{}, expected {rank}×{rank}", c.nrows(), c.ncols()));
            }
            if alpha.len() != g.dim() {
                return domain("multi-index length differs from the algebra dimension");
            }
            if weighted_degree(g, alpha) != degree {
                return domain(format!("term of degree {} in a symbol of degree {degree}", weighted_degree(g, alpha)));
            }
        }
        let mut s = PBWSymbol { degree, rank, terms: Vec::new() };
        for (c, alpha) in terms {
            s.push(c, alpha);
        }
        Ok(s)
    }

    fn push(&mut self, c: CMatrix, alpha: Vec<u32>) {
        match self.terms.iter_mut().find(|(_, a)| *a == alpha) {
            Some((existing, _)) => *existing += c,
            None => self.terms.push((c, alpha)),
        }
        self.terms.retain(|(c, _)| c.iter().any(|z| *z != Complex64::zero()));
    }

    /// Terms given as arbitrary words, normal-ordered on the way in.
    pub fn from_words(g: &LieAlgebra, degree: u32, rank: usize, words: &[(CMatrix, Vec<usize>)]) -> Result<Self> {
        let mut terms = Vec::new();
        for (c, w) in words {
            if w.iter().any(|&i| i >= g.dim()) {
                return domain("word refers to a basis element outside the algebra");
            }
            for (alpha, s) in pbw_normal_form(g, w) {
                terms.push((c * Complex64::new(to_f64(&s), 0.0), alpha));
            }
        }
        Self::new(g, degree, rank, terms)
    }

    pub fn zero(degree: u32, rank: usize) -> Self {
        PBWSymbol { degree, rank, terms: Vec::new() }
    }

    /// Degree-0 identity.
    pub fn identity(g: &LieAlgebra, rank: usize) -> Self {
        PBWSymbol { degree: 0, rank, terms: vec![(CMatrix::identity(rank, rank), vec![0; g.dim()])] }
    }

    /// `−Σ_{k,l} (G⁻¹)_{kl} X_k X_l` over the weight-1 generators, `G` the metric (identity when absent).
    pub fn sub_laplacian(g: &LieAlgebra, metric: Option<&Matrix>) -> Result<Self> {
        let gens = g.weight_indices(1);
        let m = gens.len();
        let inv = match metric {
            None => linalg::identity(m),
            Some(met) => {
                if met.len() != m || met.iter().any(|r| r.len() != m) {
                    return domain(format!("metric must be {m}×{m}"));
                }
                let (pos, _, _) = linalg::inertia(met);
                if pos != m {
                    return domain("metric is not positive definite");
                }
                linalg::inverse(met).expect("positive definite")
            }
        };
        let mut words = Vec::new();
        for (a, &k) in gens.iter().enumerate() {
            for (b, &l) in gens.iter().enumerate() {
                if !inv[a][b].is_zero() {
                    words.push((CMatrix::identity(1, 1) * Complex64::new(-to_f64(&inv[a][b]), 0.0), vec![k, l]));
                }
            }
        }
        Self::from_words(g, 2, 1, &words)
    }

    /// `Σ_l γ_l ⊗ (−i Z_l)` over the weight-2 basis elements, so that `ξ` is represented by `Σ γ_l ξ(Z_l)`.
    pub fn central_potential(g: &LieAlgebra, gamma: &[CMatrix]) -> Result<Self> {
        let zs = g.weight_indices(2);
        if gamma.len() != zs.len() {
            return domain(format!("expected {} gamma matrices, got {}", zs.len(), gamma.len()));
        }
        let rank = gamma.first().map_or(1, CMatrix::nrows);
        let terms = zs
            .iter()
            .zip(gamma)
            .map(|(&z, c)| {
                let mut alpha = vec![0; g.dim()];
                alpha[z] = 1;
                (c * Complex64::new(0.0, -1.0), alpha)
            })
            .collect();
        Self::new(g, 2, rank, terms)
    }

    /// `a ⊗ I_r` for a scalar symbol `a`.
    pub fn tensor_identity(&self, r: usize) -> Result<Self> {
        if self.rank != 1 {
            return domain("only scalar symbols can be tensored with an identity");
        }
        let terms = self.terms.iter().map(|(c, a)| (CMatrix::identity(r, r) * c[(0, 0)], a.clone())).collect();
        Ok(PBWSymbol { degree: self.degree, rank: r, terms })
    }

    /// Block-diagonal sum of symbols of equal degree.
    pub fn block_diagonal(g: &LieAlgebra, blocks: &[PBWSymbol]) -> Result<Self> {
        let degree = blocks.first().map_or(0, |b| b.degree);
        if blocks.iter().any(|b| b.degree != degree) {
            return domain("blocks have different degrees");
        }
        let rank: usize = blocks.iter().map(|b| b.rank).sum();
        let mut terms = Vec::new();
        let mut off = 0;
        for b in blocks {
            for (c, alpha) in &b.terms {
                let mut big = CMatrix::zeros(rank, rank);
                big.view_mut((off, off), (b.rank, b.rank)).copy_from(c);
                terms.push((big, alpha.clone()));
            }
            off += b.rank;
        }
        Self::new(g, degree, rank, terms)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree || self.rank != other.rank {
            return domain("symbols differ in degree or rank");
        }
        let mut s = self.clone();
        for (c, a) in &other.terms {
            s.push(c.clone(), a.clone());
        }
        Ok(s)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut s = self.clone();
        for (m, _) in &mut s.terms {
            *m *= c;
        }
        s.terms.retain(|(c, _)| c.iter().any(|z| *z != Complex64::zero()));
        s
    }

    /// Product in `U(g) ⊗ End(ℂʳ)`, normal-ordered.
    pub fn mul(&self, g: &LieAlgebra, other: &Self) -> Result<Self> {
        if self.rank != other.rank {
            return domain("symbols differ in rank");
        }
        let word = |alpha: &[u32]| -> Vec<usize> { alpha.iter().enumerate().flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize)).collect() };
        let mut words = Vec::new();
        for (c1, a1) in &self.terms {
            for (c2, a2) in &other.terms {
                let mut w = word(a1);
                w.extend(word(a2));
                words.push((c1 * c2, w));
            }
        }
        Self::from_words(g, self.degree + other.degree, self.rank, &words)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[(CMatrix, Vec<u32>)] {
        &self.terms
    }
}
