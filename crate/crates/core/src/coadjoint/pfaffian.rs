use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liealg::{JordanHolderFlag, LieAlgebra};
use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::rational::{q, Rational};

/// `Pf(Σ_l ξ_l ω_l)` on `z*`, in the center coordinates fixed by the flag.
#[derive(Clone, Debug, PartialEq)]
pub struct PfaffianPolynomial {
    pub poly: Poly,
    /// Set when `codim z` is odd; `poly` is then the zero polynomial.
    pub odd_codimension: bool,
    /// Basis indices of the center, in flag order; variable `l` pairs with `center[l]`.
    pub center: Vec<usize>,
}

impl PfaffianPolynomial {
    pub fn is_identically_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, xi: &[Rational]) -> Rational {
        self.poly.eval(xi)
    }

    pub fn render(&self, g: &LieAlgebra) -> String {
        let names: Vec<String> = self.center.iter().map(|&i| format!("xi_{}", g.basis_names()[i])).collect();
        self.poly.render(&names)
    }
}

/// Matrix of linear forms `ξ([X_a, X_b])` over the flag complement, `ξ ∈ z*`.
pub(crate) fn center_form_matrix(g: &LieAlgebra, flag: &JordanHolderFlag) -> Vec<Vec<Poly>> {
    let comp = flag.complement();
    let center = flag.center_indices();
    comp.iter()
        .map(|&a| {
            comp.iter()
                .map(|&b| {
                    let coeffs: Vec<Rational> = center.iter().map(|&z| g.structure_constant(a, b, z)).collect();
                    Poly::linear(&coeffs)
                })
                .collect()
        })
        .collect()
}

/// Evaluates the form matrix at a point of `z*`.
pub(crate) fn center_form_at(g: &LieAlgebra, flag: &JordanHolderFlag, xi: &[Rational]) -> Matrix {
    let comp = flag.complement();
    let center = flag.center_indices();
    comp.iter()
        .map(|&a| {
            comp.iter()
                .map(|&b| center.iter().zip(xi).fold(Rational::zero(), |acc, (&z, x)| acc + g.structure_constant(a, b, z) * x))
                .collect()
        })
        .collect()
}

/// Pfaffian by first-row expansion, skipping zero entries and memoizing on the remaining index set.
pub fn pfaffian(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    if n % 2 == 1 {
        return Poly::zero(nvars);
    }
    assert!(n <= 128, "pfaffian expansion supports at most 128 rows");
    let mut memo: HashMap<u128, Poly> = HashMap::new();
    let all: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    expand(m, all, nvars, &mut memo)
}

fn expand(m: &[Vec<Poly>], set: u128, nvars: usize, memo: &mut HashMap<u128, Poly>) -> Poly {
    if set == 0 {
        return Poly::one(nvars);
    }
    if let Some(p) = memo.get(&set) {
        return p.clone();
    }
    let idx: Vec<usize> = (0..m.len()).filter(|&i| set >> i & 1 == 1).collect();
    let i = idx[0];
    let mut acc = Poly::zero(nvars);
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        if m[i][j].is_zero() {
            continue;
        }
        let rest = set & !(1u128 << i) & !(1u128 << j);
        let sub = expand(m, rest, nvars, memo);
        if sub.is_zero() {
            continue;
        }
        let term = &m[i][j] * &sub;
        acc = if pos % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    memo.insert(set, acc.clone());
    acc
}

pub fn pfaffian_on_center_dual(g: &LieAlgebra, flag: &JordanHolderFlag) -> Result<PfaffianPolynomial> {
    let m = flag.center_dim();
    let codim = g.dim() - m;
    let center = flag.center_indices().to_vec();
    if codim % 2 == 1 {
        return Ok(PfaffianPolynomial { poly: Poly::zero(m), odd_codimension: true, center });
    }
    let mat = center_form_matrix(g, flag);
    let poly = pfaffian(&mat, m);
    if !square_matches_determinant(g, flag, &poly, codim) {
        return Err(Error::Invariant("Pf^2 != det on the center dual".into()));
    }
    Ok(PfaffianPolynomial { poly, odd_codimension: false, center })
}

/// Exact check of `Pf² = det` as homogeneous polynomials of degree `codim`:
/// both sides agree on `{1} × L`, `L` the principal lattice of that degree in the remaining variables.
fn square_matches_determinant(g: &LieAlgebra, flag: &JordanHolderFlag, pf: &Poly, codim: usize) -> bool {
    let m = flag.center_dim();
    if m == 0 {
        return codim == 0;
    }
    let sq = pf * pf;
    let mut ok = true;
    lattice(m - 1, codim as u32, &mut Vec::new(), &mut |pt| {
        if !ok {
            return;
        }
        let mut xi = vec![Rational::one()];
        xi.extend(pt.iter().map(|&a| q(a as i64)));
        if sq.eval(&xi) != linalg::det(&center_form_at(g, flag, &xi)) {
            ok = false;
        }
    });
    ok
}

fn lattice(vars: usize, budget: u32, prefix: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if prefix.len() == vars {
        f(prefix);
        return;
    }
    for a in 0..=budget {
        prefix.push(a);
        lattice(vars, budget - a, prefix, f);
        prefix.pop();
    }
}
