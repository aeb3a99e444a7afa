//! Represented symbols in flat-orbit representations, truncated to Hermite bases.

mod fock;
mod hermite;
mod pbw;

use num_complex::Complex64;
use num_traits::Zero;

use crate::coadjoint::{is_flat, vergne_polarization};
use crate::error::{domain, Error, Result};
use crate::liealg::{JordanHolderFlag, LieAlgebra};
use crate::linalg::{self, Subspace};
use crate::poly::Poly;
use crate::rational::{self, qf, Rational};
use crate::spectral::CMatrix;

pub use fock::{fock_layer_operator, gamma_k, symmetric_power_basis, symplectic_eigenvalues};
pub use hermite::{HermiteBasis, HermiteFrame, SparseOp};
pub use pbw::{pbw_normal_form, PBWSymbol};

/// `Σ_j field_j(t) ∂_j + i·potential(t)` on functions of `t ∈ ℝ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrderOperator {
    pub field: Vec<Poly>,
    pub potential: Poly,
}

impl FirstOrderOperator {
    fn zero(d: usize) -> Self {
        FirstOrderOperator { field: vec![Poly::zero(d); d], potential: Poly::zero(d) }
    }

    fn directional(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero(f.nvars());
        for (j, a) in self.field.iter().enumerate() {
            acc = &acc + &(a * &f.derivative(j));
        }
        acc
    }

    /// `[A, B] = (a·∇b − b·∇a)·∂ + i(a·∇q − b·∇p)`.
    pub fn commutator(&self, other: &Self) -> Self {
        let field = self.field.iter().zip(&other.field).map(|(a, b)| &self.directional(b) - &other.directional(a)).collect();
        let potential = &self.directional(&other.potential) - &other.directional(&self.potential);
        FirstOrderOperator { field, potential }
    }

    fn axpy(&mut self, c: &Rational, other: &Self) {
        for (a, b) in self.field.iter_mut().zip(&other.field) {
            *a = &*a + &b.scale(c);
        }
        self.potential = &self.potential + &other.potential.scale(c);
    }

    /// Largest increase of Hermite degree: `t^α ∂` raises by `|α| + 1`, `t^α` by `|α|`.
    pub fn degree_raise(&self) -> u32 {
        let f = self.field.iter().filter_map(Poly::total_degree).map(|k| k + 1).max().unwrap_or(0);
        f.max(self.potential.total_degree().unwrap_or(0))
    }

    pub fn render(&self) -> String {
        let d = self.field.len();
        let names: Vec<String> = (1..=d).map(|j| format!("t{j}")).collect();
        let mut parts = Vec::new();
        for (j, a) in self.field.iter().enumerate() {
            if !a.is_zero() {
                parts.push(format!("({})·∂{}", a.render(&names), j + 1));
            }
        }
        if !self.potential.is_zero() {
            parts.push(format!("i·({})", self.potential.render(&names)));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Induced representation from the Vergne polarization, realized on `L²(ℝ^d)`.
#[derive(Clone, Debug)]
pub struct FlatRepresentation {
    algebra: LieAlgebra,
    flag: JordanHolderFlag,
    xi: Vec<Rational>,
    polarization: Subspace,
    complement: Vec<usize>,
    generators: Vec<FirstOrderOperator>,
    frame: HermiteFrame,
}

type PolyVec = Vec<Poly>;

fn exp_neg_ad(ad: &linalg::Matrix, var: usize, v: &PolyVec) -> PolyVec {
    let d = v[0].nvars();
    let mut out = v.clone();
    let mut term = v.clone();
    let tvar = Poly::var(d, var);
    for m in 1..=v.len() {
        let mut next = vec![Poly::zero(d); v.len()];
        for (r, row) in ad.iter().enumerate() {
            for (c, a) in row.iter().enumerate() {
                if !a.is_zero() && !term[c].is_zero() {
                    next[r] = &next[r] + &term[c].scale(a);
                }
            }
        }
        let f = qf(-1, m as i64);
        term = next.iter().map(|p| &p.scale(&f) * &tvar).collect();
        if term.iter().all(Poly::is_zero) {
            break;
        }
        for (o, t) in out.iter_mut().zip(&term) {
            *o = &*o + t;
        }
    }
    out
}

fn constant_vec(v: &[Rational], d: usize) -> PolyVec {
    v.iter().map(|c| Poly::constant(d, c.clone())).collect()
}

impl FlatRepresentation {
    /// Step ≤ 2 with `ξ` flat, or the 4-dimensional step-3 (Engel) algebra with `ξ` nonzero on the center.
    pub fn new(g: &LieAlgebra, flag: &JordanHolderFlag, xi: &[Rational]) -> Result<Self> {
        let n = g.dim();
        if xi.len() != n {
            return domain(format!("covector has {} coordinates, algebra has dimension {n}", xi.len()));
        }
        let step = g.step().ok_or(Error::NotNilpotent)?;
        let engel = n == 4 && step == 3;
        if step > 2 && !engel {
            return Err(Error::UnsupportedStep { step, reason: "flat representations are built for step ≤ 2 and the Engel algebra".into() });
        }
        if engel {
            let center = g.center();
            if center.basis().iter().all(|z| rational::dot(z, xi).is_zero()) {
                return domain("Engel representation needs ξ nonzero on the center");
            }
        } else if !is_flat(g, xi) {
            return domain("ξ is not a flat covector");
        }
        let h = vergne_polarization(g, flag, xi)?;
        let perm = flag.permutation();
        let complement: Vec<usize> = (1..=n).filter(|&j| !h.sum(&flag.level(j - 1)).contains(&rational::unit(n, perm[j - 1]))).map(|j| perm[j - 1]).collect();
        let d = complement.len();
        if h.dim() + d != n {
            return Err(Error::Invariant("complement of the polarization has the wrong size".into()));
        }
        let mut cols: Vec<Vec<Rational>> = h.basis().clone();
        cols.extend(complement.iter().map(|&k| rational::unit(n, k)));
        let binv = linalg::inverse(&linalg::transpose(&cols)).ok_or_else(|| Error::Invariant("polarization and complement do not span".into()))?;
        let hd = h.dim();
        let kcoords = |v: &PolyVec| -> PolyVec {
            (hd..n)
                .map(|r| {
                    let mut acc = Poly::zero(d);
                    for (c, p) in v.iter().enumerate() {
                        if !binv[r][c].is_zero() && !p.is_zero() {
                            acc = &acc + &p.scale(&binv[r][c]);
                        }
                    }
                    acc
                })
                .collect()
        };
        let ads: Vec<linalg::Matrix> = complement.iter().map(|&k| g.ad(&rational::unit(n, k))).collect();

        let vfields: Vec<PolyVec> = (0..d)
            .map(|i| {
                let mut v = constant_vec(&rational::unit(n, complement[i]), d);
                for j in i + 1..d {
                    v = exp_neg_ad(&ads[j], j, &v);
                }
                v
            })
            .collect();
        let m: Vec<PolyVec> = vfields.iter().map(&kcoords).collect(); // m[i][l]: K-coordinate l of V_i
        for i in 0..d {
            for l in 0..d {
                let expect = if l == i { Poly::one(d) } else { Poly::zero(d) };
                if l >= i && m[i][l] != expect {
                    return Err(Error::Invariant("moving frame is not unitriangular".into()));
                }
            }
        }

        let mut generators = Vec::with_capacity(n);
        for x in 0..n {
            let mut y = constant_vec(&rational::unit(n, x), d);
            for j in 0..d {
                y = exp_neg_ad(&ads[j], j, &y);
            }
            let neg_y: PolyVec = y.iter().map(|p| -p).collect();
            let rhs = kcoords(&neg_y);
            let mut a = vec![Poly::zero(d); d];
            for l in (0..d).rev() {
                let mut v = rhs[l].clone();
                for i in l + 1..d {
                    v = &v - &(&m[i][l] * &a[i]);
                }
                a[l] = v;
            }
            let mut b = neg_y;
            for (ai, vi) in a.iter().zip(&vfields) {
                for (bc, vc) in b.iter_mut().zip(vi) {
                    *bc = &*bc - &(ai * vc);
                }
            }
            if kcoords(&b).iter().any(|p| !p.is_zero()) {
                return Err(Error::Invariant("residual left the polarization".into()));
            }
            let mut potential = Poly::zero(d);
            for (bc, xc) in b.iter().zip(xi) {
                potential = &potential - &bc.scale(xc);
            }
            generators.push(FirstOrderOperator { field: a, potential });
        }

        let rep = FlatRepresentation {
            algebra: g.clone(),
            flag: flag.clone(),
            xi: xi.to_vec(),
            polarization: h,
            complement,
            generators,
            frame: HermiteFrame::identity(d),
        };
        rep.check_homomorphism()?;
        let frame = HermiteFrame::adapted(&rep, None);
        Ok(FlatRepresentation { frame, ..rep })
    }

    /// `[dπX_i, dπX_j] = dπ[X_i, X_j]` on all basis pairs, exactly.
    pub fn check_homomorphism(&self) -> Result<()> {
        let n = self.algebra.dim();
        let d = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.generators[i].commutator(&self.generators[j]);
                let mut rhs = FirstOrderOperator::zero(d);
                for (k, c) in self.algebra.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        rhs.axpy(c, &self.generators[k]);
                    }
                }
                if lhs != rhs {
                    let names = self.algebra.basis_names();
                    return Err(Error::Invariant(format!("representation fails on [{}, {}]", names[i], names[j])));
                }
            }
        }
        Ok(())
    }

    /// Recomputes the Hermite frame from the sub-Laplacian of `metric` (on the weight-1 span).
    pub fn with_metric(mut self, metric: &linalg::Matrix) -> Self {
        self.frame = HermiteFrame::adapted(&self, Some(metric));
        self
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn flag(&self) -> &JordanHolderFlag {
        &self.flag
    }

    pub fn xi(&self) -> &[Rational] {
        &self.xi
    }

    pub fn polarization(&self) -> &Subspace {
        &self.polarization
    }

    /// Basis indices whose flag positions parametrize `G/H`.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Number of variables `d = rank ω_ξ / 2`.
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn generator(&self, i: usize) -> &FirstOrderOperator {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[FirstOrderOperator] {
        &self.generators
    }

    pub fn frame(&self) -> &HermiteFrame {
        &self.frame
    }
}

pub fn flat_rep(g: &LieAlgebra, flag: &JordanHolderFlag, xi: &[Rational]) -> Result<FlatRepresentation> {
    FlatRepresentation::new(g, flag, xi)
}

/// Dense block of an operator on Hermite degrees `≤ N`, tensored with `ℂʳ`.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub degree: usize,
    pub vars: usize,
    pub rank: usize,
    pub matrix: CMatrix,
}

impl TruncatedOperator {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `Σ a_α ⊗ dπ(X^α)`, composed on degree `N + m` (m the largest Hermite raise of any term) and restricted to degree `≤ N`.
pub fn represent_symbol(rep: &FlatRepresentation, symbol: &PBWSymbol, n: usize) -> TruncatedOperator {
    let d = rep.dim();
    let raises: Vec<u32> = rep.generators.iter().map(FirstOrderOperator::degree_raise).collect();
    let pad = symbol.terms().iter().map(|(_, alpha)| alpha.iter().zip(&raises).map(|(a, r)| a * r).sum::<u32>()).max().unwrap_or(0) as usize;
    let basis = HermiteBasis::new(d, n + pad);
    let small = HermiteBasis::new(d, n).len();
    let r = symbol.rank();
    let mut out = CMatrix::zeros(small * r, small * r);
    if symbol.terms().is_empty() {
        return TruncatedOperator { degree: n, vars: d, rank: r, matrix: out };
    }
    let ops = rep.frame.generator_ops(rep, &basis);
    for (coef, alpha) in symbol.terms() {
        let mut op = SparseOp::identity(basis.len());
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                op = op.mul(&ops[i]);
            }
        }
        for (row, entries) in op.rows().iter().enumerate().take(small) {
            for &(col, v) in entries {
                if col < small {
                    for f1 in 0..r {
                        for f2 in 0..r {
                            let c = coef[(f1, f2)];
                            if c != Complex64::zero() {
                                out[(row * r + f1, col * r + f2)] += c * v;
                            }
                        }
                    }
                }
            }
        }
    }
    TruncatedOperator { degree: n, vars: d, rank: r, matrix: out }
}

/// Represented sub-Laplacian `−Σ dπ(X_j)²` over an orthonormal basis of the weight-1 span.
pub fn harmonic_oscillator(rep: &FlatRepresentation, n: usize) -> Result<TruncatedOperator> {
    harmonic_oscillator_with_metric(rep, None, n)
}

pub fn harmonic_oscillator_with_metric(rep: &FlatRepresentation, metric: Option<&linalg::Matrix>, n: usize) -> Result<TruncatedOperator> {
    if rep.algebra.step() != Some(2) || rep.dim() == 0 {
        return domain("harmonic oscillator needs a flat covector of a step-2 algebra");
    }
    let symbol = PBWSymbol::sub_laplacian(&rep.algebra, metric)?;
    let rep = match metric {
        Some(m) => rep.clone().with_metric(m),
        None => rep.clone(),
    };
    Ok(represent_symbol(&rep, &symbol, n))
}
