use num_traits::Zero;

use super::{jordan_holder_basis, JordanHolderFlag, LieAlgebra};
use crate::error::Result;
use crate::rational::{q, Rational};

/// `g* ⊕ g ⊕ ℝ` with `g` acting on `g*` coadjointly and the pairing cocycle
/// `c((η, X), (η', X')) = η(D X') − η'(D X)`, `D` the grading derivation.
///
/// Basis order: `X_1*, …, X_n*`, then `X_1, …, X_n`, then the central `T`.
/// Weights: `X_j*` gets `N + 1 − w_j`, `T` gets `N + 1`, with `N` the top weight.
pub fn mohsen_modification(g: &LieAlgebra) -> Result<LieAlgebra> {
    let n = g.dim();
    let top = g.max_weight();
    let dual = |j: usize| j;
    let prim = |j: usize| n + j;
    let t = 2 * n;
    let mut weights: Vec<u32> = g.weights().iter().map(|w| top + 1 - w).collect();
    weights.extend_from_slice(g.weights());
    weights.push(top + 1);
    let mut names: Vec<String> = g.basis_names().iter().map(|s| format!("{s}*")).collect();
    names.extend(g.basis_names().iter().cloned());
    names.push("T".into());

    let mut e: Vec<(usize, usize, usize, Rational)> = Vec::new();
    for (i, j, k, c) in g.entries() {
        e.push((prim(i), prim(j), prim(k), c));
    }
    // [X_i, X_j*] = ad*(X_i) X_j* − w_i δ_ij T, with (ad*(X) η)(Y) = −η([X, Y])
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let c = g.structure_constant(i, l, j);
                if !c.is_zero() {
                    e.push((prim(i), dual(j), dual(l), -c));
                }
            }
        }
        e.push((prim(i), dual(i), t, q(-(g.weights()[i] as i64))));
    }
    LieAlgebra::new(format!("mohsen-of-{}", g.name()), weights, Some(names), &e)
}

/// Flag of the modification adapted to the ideal `ℝT ⊕ g*`: `T`, the duals in reverse
/// flag order of `g`, then the flag of `g`.
pub fn mohsen_flag(g: &LieAlgebra) -> Result<JordanHolderFlag> {
    let n = g.dim();
    let base = jordan_holder_basis(g)?;
    let mut perm = vec![2 * n];
    perm.extend(base.permutation().iter().rev());
    perm.extend(base.permutation().iter().map(|&i| n + i));
    JordanHolderFlag::from_permutation(&mohsen_modification(g)?, perm)
}
