//! Coadjoint orbits: Kirillov forms, flat orbits, jump indices, polarizations.

mod pfaffian;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::liealg::{bch, JordanHolderFlag, LieAlgebra};
use crate::linalg::{self, Matrix, Subspace};
use crate::rational::{self, qf, Rational};

pub use pfaffian::{pfaffian, pfaffian_on_center_dual, PfaffianPolynomial};

/// `ω_ξ(X_i, X_j) = ξ([X_i, X_j])`.
pub fn kirillov_form(g: &LieAlgebra, xi: &[Rational]) -> Matrix {
    let n = g.dim();
    let mut m = linalg::zero_matrix(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rational::dot(&g.bracket_basis(i, j), xi);
            m[j][i] = -v.clone();
            m[i][j] = v;
        }
    }
    m
}

/// Radical of `ω_ξ` on the span of the given basis indices.
fn radical_on(g: &LieAlgebra, xi: &[Rational], idx: &[usize]) -> Subspace {
    let n = g.dim();
    let gram: Matrix = idx.iter().map(|&a| idx.iter().map(|&b| rational::dot(&g.bracket_basis(a, b), xi)).collect()).collect();
    let ker = linalg::kernel(&gram, idx.len());
    let vs: Vec<Vec<Rational>> = ker
        .iter()
        .map(|c| {
            let mut v = rational::zeros(n);
            for (coef, &a) in c.iter().zip(idx) {
                v[a] = coef.clone();
            }
            v
        })
        .collect();
    Subspace::span(n, &vs)
}

/// `stab(ξ|g_k)`: the radical of `ω_ξ` restricted to the flag ideal `g_k`.
pub fn stabilizer(g: &LieAlgebra, flag: &JordanHolderFlag, xi: &[Rational], k: usize) -> Subspace {
    radical_on(g, xi, &flag.permutation()[..k])
}

/// `stab(ξ)` in all of `g`.
pub fn stabilizer_full(g: &LieAlgebra, xi: &[Rational]) -> Subspace {
    let idx: Vec<usize> = (0..g.dim()).collect();
    radical_on(g, xi, &idx)
}

/// Extends `ξ ∈ z*` (flag center coordinates) by zero to `g*`.
pub fn extend_center_covector(g: &LieAlgebra, flag: &JordanHolderFlag, xi_z: &[Rational]) -> Vec<Rational> {
    let mut xi = rational::zeros(g.dim());
    for (&i, v) in flag.center_indices().iter().zip(xi_z) {
        xi[i] = v.clone();
    }
    xi
}

pub fn restrict_to_center(flag: &JordanHolderFlag, xi: &[Rational]) -> Vec<Rational> {
    flag.center_indices().iter().map(|&i| xi[i].clone()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlatReason {
    Flat,
    OddCodimension,
    PfaffianVanishes,
}

#[derive(Clone, Debug)]
pub struct FlatOrbitVerdict {
    pub flat: bool,
    pub reason: FlatReason,
    pub pfaffian: PfaffianPolynomial,
    /// A point of `z*` (flag center coordinates) with `Pf ≠ 0`.
    pub witness: Option<Vec<Rational>>,
}

/// Decides `Pf ≢ 0` exactly and, when it holds, finds a witness `ξ ∈ z*`.
pub fn has_flat_orbits(g: &LieAlgebra, flag: &JordanHolderFlag) -> Result<FlatOrbitVerdict> {
    let pf = pfaffian_on_center_dual(g, flag)?;
    if pf.odd_codimension {
        return Ok(FlatOrbitVerdict { flat: false, reason: FlatReason::OddCodimension, pfaffian: pf, witness: None });
    }
    if pf.is_identically_zero() {
        return Ok(FlatOrbitVerdict { flat: false, reason: FlatReason::PfaffianVanishes, pfaffian: pf, witness: None });
    }
    let witness = find_witness(&pf);
    Ok(FlatOrbitVerdict { flat: true, reason: FlatReason::Flat, pfaffian: pf, witness: Some(witness) })
}

fn find_witness(pf: &PfaffianPolynomial) -> Vec<Rational> {
    let m = pf.center.len();
    if m == 0 {
        return Vec::new();
    }
    // 0/1 points by increasing support, so unit covectors come first
    if m <= 12 {
        let mut masks: Vec<u32> = (1..1u32 << m).collect();
        masks.sort_by_key(|&b| (b.count_ones(), (0..m).filter(|i| (b >> i) & 1 == 1).collect::<Vec<_>>()));
        for b in masks {
            let xi: Vec<Rational> = (0..m).map(|i| Rational::from_integer(((b >> i) & 1).into())).collect();
            if !pf.eval(&xi).is_zero() {
                return xi;
            }
        }
    }
    let mut point = vec![-2i64; m];
    loop {
        if point.iter().any(|&c| c != 0) {
            let xi = rational::ints(&point);
            if !pf.eval(&xi).is_zero() {
                return xi;
            }
        }
        let mut k = m;
        loop {
            if k == 0 {
                return random_witness(pf);
            }
            k -= 1;
            if point[k] < 2 {
                point[k] += 1;
                break;
            }
            point[k] = -2;
        }
    }
}

fn random_witness(pf: &PfaffianPolynomial) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut height = 3i64;
    loop {
        for _ in 0..64 {
            let xi: Vec<Rational> = (0..pf.center.len()).map(|_| qf(rng.random_range(-height..=height), rng.random_range(1..=height))).collect();
            if !pf.eval(&xi).is_zero() {
                return xi;
            }
        }
        height *= 2;
    }
}

/// `rank ω_ξ = n − dim z`.
pub fn is_flat(g: &LieAlgebra, xi: &[Rational]) -> bool {
    linalg::rank(&kirillov_form(g, xi)) == g.dim() - g.center().dim()
}

/// `det(ω_ξ|g/z) = 1` for `ξ ∈ z*` in flag center coordinates.
pub fn is_on_gamma_partial(g: &LieAlgebra, flag: &JordanHolderFlag, xi_z: &[Rational]) -> bool {
    linalg::det(&pfaffian::center_form_at(g, flag, xi_z)).is_one()
}

/// `(J^1_ξ, …, J^n_ξ)` with 1-based flag positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct JumpProfile(pub Vec<BTreeSet<usize>>);

impl JumpProfile {
    pub fn last(&self) -> &BTreeSet<usize> {
        self.0.last().expect("profile of a nonzero algebra")
    }

    pub fn orbit_dim(&self) -> usize {
        self.last().len()
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| {
                let v: Vec<String> = s.iter().map(usize::to_string).collect();
                format!("{{{}}}", v.join(","))
            })
            .collect();
        parts.join(" ")
    }
}

pub fn jump_indices(g: &LieAlgebra, flag: &JordanHolderFlag, xi: &[Rational]) -> JumpProfile {
    let n = g.dim();
    let perm = flag.permutation();
    let mut sets = Vec::with_capacity(n);
    for k in 1..=n {
        let stab = stabilizer(g, flag, xi, k);
        let mut jk = BTreeSet::new();
        for j in 1..=k {
            let below = stab.sum(&flag.level(j - 1));
            if !below.contains(&rational::unit(n, perm[j - 1])) {
                jk.insert(j);
            }
        }
        sets.push(jk);
    }
    JumpProfile(sets)
}

#[derive(Clone, Debug)]
pub struct StrataSummary {
    /// Profile → indices into the sample list.
    pub strata: BTreeMap<JumpProfile, Vec<usize>>,
    /// The observed profile of largest orbit dimension (ties: smallest profile).
    pub top: JumpProfile,
}

/// Groups samples by jump profile. Sampling evidence only.
pub fn enumerate_strata(g: &LieAlgebra, flag: &JordanHolderFlag, samples: &[Vec<Rational>]) -> Result<StrataSummary> {
    if samples.is_empty() {
        return domain("enumerate_strata needs at least one sample");
    }
    let mut strata: BTreeMap<JumpProfile, Vec<usize>> = BTreeMap::new();
    for (i, xi) in samples.iter().enumerate() {
        strata.entry(jump_indices(g, flag, xi)).or_default().push(i);
    }
    let top = strata.keys().max_by(|a, b| a.orbit_dim().cmp(&b.orbit_dim()).then(b.cmp(a))).cloned().unwrap();
    Ok(StrataSummary { strata, top })
}

/// `h_V(ξ) = Σ_k stab(ξ|g_k)`, checked to be an isotropic subalgebra of codimension `rank ω_ξ / 2`.
pub fn vergne_polarization(g: &LieAlgebra, flag: &JordanHolderFlag, xi: &[Rational]) -> Result<Subspace> {
    let n = g.dim();
    let mut h = Subspace::zero(n);
    for k in 1..=n {
        h = h.sum(&stabilizer(g, flag, xi, k));
    }
    let rank = linalg::rank(&kirillov_form(g, xi));
    if n - h.dim() != rank / 2 {
        return Err(Error::Invariant(format!("polarization has codimension {} but rank/2 = {}", n - h.dim(), rank / 2)));
    }
    for (a, x) in h.basis().iter().enumerate() {
        for y in &h.basis()[a + 1..] {
            let b = g.bracket(x, y);
            if !rational::dot(&b, xi).is_zero() {
                return Err(Error::Invariant("polarization is not isotropic".into()));
            }
            if !h.contains(&b) {
                return Err(Error::Invariant("polarization is not a subalgebra".into()));
            }
        }
    }
    Ok(h)
}

/// `(Mᵀ ξ)|_z` for `ξ ∈ z*`, with `M` an automorphism (columns are images).
pub fn aut_action_on_lambda(g: &LieAlgebra, flag: &JordanHolderFlag, m: &Matrix, xi_z: &[Rational]) -> Result<Vec<Rational>> {
    if !g.is_automorphism(m) {
        return domain("matrix is not a Lie algebra automorphism");
    }
    let xi = extend_center_covector(g, flag, xi_z);
    let pulled = linalg::matvec(&linalg::transpose(m), &xi);
    Ok(restrict_to_center(flag, &pulled))
}

/// `ξ ∘ exp(−ad X)`, the coadjoint action of `exp X`.
pub fn coadjoint_move(g: &LieAlgebra, x: &[Rational], xi: &[Rational]) -> Vec<Rational> {
    let n = g.dim();
    let neg_ad: Matrix = g.ad(x).into_iter().map(|r| rational::neg(&r)).collect();
    let mut e = linalg::identity(n);
    let mut term = linalg::identity(n);
    for k in 1..=n {
        term = linalg::matmul(&term, &neg_ad);
        let f = qf(1, k as i64);
        term = term.into_iter().map(|r| rational::scale(&f, &r)).collect();
        if term.iter().all(|r| rational::is_zero_vec(r)) {
            break;
        }
        e = e.iter().zip(&term).map(|(a, b)| rational::add(a, b)).collect();
    }
    linalg::matvec(&linalg::transpose(&e), xi)
}

/// Splitting `g/z → g` fixed by the flag: complement coordinates to a vector of `g`.
pub fn splitting(g: &LieAlgebra, flag: &JordanHolderFlag, xbar: &[Rational]) -> Vec<Rational> {
    let mut v = rational::zeros(g.dim());
    for (&i, c) in flag.complement().iter().zip(xbar) {
        v[i] = c.clone();
    }
    v
}

/// Group law of `G/Z` in complement coordinates.
pub fn quotient_product(g: &LieAlgebra, flag: &JordanHolderFlag, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
    let c = bch(g, &splitting(g, flag, x), &splitting(g, flag, y))?;
    Ok(flag.complement().iter().map(|&i| c[i].clone()).collect())
}

/// `τ(x̄)τ(ȳ)τ(x̄ȳ)⁻¹ ∈ Z` in flag center coordinates.
///
/// Since `z` is central, `log` of this product is the center part of `bch(τx̄, τȳ)`;
/// the full product is still formed to keep the definition visible.
pub fn central_cocycle(g: &LieAlgebra, flag: &JordanHolderFlag, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
    let c = bch(g, &splitting(g, flag, x), &splitting(g, flag, y))?;
    let tau_xy = splitting(g, flag, &flag.complement().iter().map(|&i| c[i].clone()).collect::<Vec<_>>());
    let w = bch(g, &c, &rational::neg(&tau_xy))?;
    if flag.complement().iter().any(|&i| !w[i].is_zero()) {
        return Err(Error::Invariant("cocycle value left the center".into()));
    }
    Ok(restrict_to_center(flag, &w))
}

/// Nondegenerate part of `ω_ξ`: basis indices spanning a complement of `stab(ξ)` and the form on them.
pub fn reduced_symplectic_form(g: &LieAlgebra, xi: &[Rational]) -> (Vec<usize>, Matrix) {
    let n = g.dim();
    let mut span = stabilizer_full(g, xi);
    let mut idx = Vec::new();
    for i in 0..n {
        let e = rational::unit(n, i);
        if !span.contains(&e) {
            span = span.sum(&Subspace::span(n, &[e]));
            idx.push(i);
        }
    }
    let om = kirillov_form(g, xi);
    let form = idx.iter().map(|&a| idx.iter().map(|&b| om[a][b].clone()).collect()).collect();
    (idx, form)
}

/// Small nonzero rational test points for sampling `g*`.
pub fn sample_covectors(dim: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..dim).map(|_| qf(rng.random_range(-4..=4), rng.random_range(1..=3))).collect()).collect()
}


#[cfg(test)]
mod tests;
