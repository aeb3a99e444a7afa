use serde::{Deserialize, Serialize};

use super::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::rational;

/// A basis ordering `X_{π(1)}, …, X_{π(n)}` whose initial spans are ideals,
/// with the center spanned by the first `dim z` vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JordanHolderFlag {
    perm: Vec<usize>,
    center_dim: usize,
}

impl JordanHolderFlag {
    /// Checks a user-supplied 0-based permutation.
    pub fn from_permutation(g: &LieAlgebra, perm: Vec<usize>) -> Result<Self> {
        let n = g.dim();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Malformed(format!("flag must be a permutation of 1..{n}")));
        }
        let z = g.center();
        let flag = JordanHolderFlag { perm, center_dim: z.dim() };
        if flag.level(z.dim()) != z {
            return Err(Error::Domain("the first dim(z) flag vectors must span the center".into()));
        }
        for k in 1..=n {
            let gk = flag.level(k);
            for i in 0..n {
                for v in gk.basis() {
                    if !gk.contains(&g.bracket(&rational::unit(n, i), v)) {
                        return Err(Error::Domain(format!("flag level {k} is not an ideal")));
                    }
                }
            }
        }
        Ok(flag)
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn center_dim(&self) -> usize {
        self.center_dim
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `g_k`, the span of the first `k` flag vectors.
    pub fn level(&self, k: usize) -> Subspace {
        Subspace::coordinate(self.perm.len(), &self.perm[..k])
    }

    /// Basis indices of the complement of the center, in flag order.
    pub fn complement(&self) -> &[usize] {
        &self.perm[self.center_dim..]
    }

    pub fn center_indices(&self) -> &[usize] {
        &self.perm[..self.center_dim]
    }
}

/// Greedy coordinate Jordan-Hölder basis: the center first, then repeatedly a basis
/// vector that is central modulo the span so far, preferring higher weight and then
/// lower index. Fails when the center or a refinement is not coordinate-aligned.
pub fn jordan_holder_basis(g: &LieAlgebra) -> Result<JordanHolderFlag> {
    let n = g.dim();
    let z = g.center();
    let mut central: Vec<usize> = (0..n).filter(|&i| z.contains(&rational::unit(n, i))).collect();
    if central.len() != z.dim() {
        return Err(Error::Domain("center is not spanned by basis vectors; supply a flag explicitly".into()));
    }
    let by_weight = |v: &mut Vec<usize>| v.sort_by_key(|&i| (std::cmp::Reverse(g.weights()[i]), i));
    by_weight(&mut central);
    let mut perm = central;
    while perm.len() < n {
        let span = Subspace::coordinate(n, &perm);
        let mut candidates: Vec<usize> = (0..n)
            .filter(|i| !perm.contains(i))
            .filter(|&i| (0..n).all(|j| span.contains(&g.bracket_basis(j, i))))
            .collect();
        if candidates.is_empty() {
            return Err(Error::Domain("no coordinate Jordan-Hölder basis exists; supply a flag explicitly".into()));
        }
        by_weight(&mut candidates);
        perm.push(candidates[0]);
    }
    Ok(JordanHolderFlag { perm, center_dim: z.dim() })
}
