//! Standard families of graded nilpotent Lie algebras.

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::rational::{q, Rational};

type Entry = (usize, usize, usize, Rational);

fn one(i: usize, j: usize, k: usize) -> Entry {
    (i, j, k, q(1))
}

/// `h_n`: `[X_j, Y_j] = Z`, basis `X_1..X_n, Y_1..Y_n, Z`.
pub fn heisenberg(n: usize) -> Result<LieAlgebra> {
    if n == 0 {
        return Err(Error::Domain("heisenberg needs n >= 1".into()));
    }
    let mut names: Vec<String> = (1..=n).map(|j| format!("X{j}")).collect();
    names.extend((1..=n).map(|j| format!("Y{j}")));
    names.push("Z".into());
    let mut w = vec![1; 2 * n];
    w.push(2);
    let e: Vec<Entry> = (0..n).map(|j| one(j, n + j, 2 * n)).collect();
    LieAlgebra::new(format!("heisenberg-{n}"), w, Some(names), &e)
}

/// Realification of the complex Heisenberg algebra `h_n ⊗ ℂ`.
pub fn complex_heisenberg(n: usize) -> Result<LieAlgebra> {
    if n == 0 {
        return Err(Error::Domain("complex-heisenberg needs n >= 1".into()));
    }
    // X_j = (Xr_j, Xi_j) at 2j, 2j+1; Y_j at 2n + 2j, 2n + 2j + 1; Z at 4n, 4n + 1
    let mut names = Vec::new();
    for j in 1..=n {
        names.push(format!("X{j}re"));
        names.push(format!("X{j}im"));
    }
    for j in 1..=n {
        names.push(format!("Y{j}re"));
        names.push(format!("Y{j}im"));
    }
    names.push("Zre".into());
    names.push("Zim".into());
    let mut w = vec![1; 4 * n];
    w.extend([2, 2]);
    let (zr, zi) = (4 * n, 4 * n + 1);
    let mut e = Vec::new();
    for j in 0..n {
        let (xr, xi, yr, yi) = (2 * j, 2 * j + 1, 2 * n + 2 * j, 2 * n + 2 * j + 1);
        e.push(one(xr, yr, zr));
        e.push((xi, yi, zr, q(-1)));
        e.push(one(xr, yi, zi));
        e.push(one(xi, yr, zi));
    }
    LieAlgebra::new(format!("complex-heisenberg-{n}"), w, Some(names), &e)
}

/// `h_{n_1} × … × h_{n_k}` with the centers kept separate.
pub fn heisenberg_product(ns: &[usize]) -> Result<LieAlgebra> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::Domain("heisenberg-product needs a nonempty list of positive sizes".into()));
    }
    let mut names = Vec::new();
    let mut w = Vec::new();
    let mut e = Vec::new();
    for (c, &n) in ns.iter().enumerate() {
        let base = w.len();
        for j in 1..=n {
            names.push(format!("X{}_{}", c + 1, j));
        }
        for j in 1..=n {
            names.push(format!("Y{}_{}", c + 1, j));
        }
        names.push(format!("Z{}", c + 1));
        w.extend(vec![1; 2 * n]);
        w.push(2);
        for j in 0..n {
            e.push(one(base + j, base + n + j, base + 2 * n));
        }
    }
    let label: Vec<String> = ns.iter().map(usize::to_string).collect();
    LieAlgebra::new(format!("heisenberg-product-{}", label.join("-")), w, Some(names), &e)
}

/// `[X_i, X_{i+1}] = Y_i`, basis `X_1..X_n, Y_1..Y_{n-1}`.
pub fn quotient_chain(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(Error::Domain("quotient-chain needs n >= 2".into()));
    }
    let mut names: Vec<String> = (1..=n).map(|j| format!("X{j}")).collect();
    names.extend((1..n).map(|j| format!("Y{j}")));
    let mut w = vec![1; n];
    w.extend(vec![2; n - 1]);
    let e: Vec<Entry> = (0..n - 1).map(|i| one(i, i + 1, n + i)).collect();
    LieAlgebra::new(format!("quotient-chain-{n}"), w, Some(names), &e)
}

/// Free step-2 nilpotent algebra on `q` generators: `[e_i, e_j] = e_ij`.
pub fn free_step2(qn: usize) -> Result<LieAlgebra> {
    if qn < 2 {
        return Err(Error::Domain("free-step2 needs q >= 2".into()));
    }
    let mut names: Vec<String> = (1..=qn).map(|j| format!("E{j}")).collect();
    let mut w = vec![1; qn];
    let mut e = Vec::new();
    for i in 0..qn {
        for j in i + 1..qn {
            e.push(one(i, j, names.len()));
            names.push(format!("E{}{}", i + 1, j + 1));
            w.push(2);
        }
    }
    LieAlgebra::new(format!("free-step2-{qn}"), w, Some(names), &e)
}

/// Engel algebra: `[Y_2, Y_4] = Y_1`, `[Y_3, Y_4] = Y_2`, weights 3, 2, 1, 1.
pub fn engel() -> Result<LieAlgebra> {
    let names = ["Y1", "Y2", "Y3", "Y4"].map(String::from).to_vec();
    LieAlgebra::new("engel", vec![3, 2, 1, 1], Some(names), &[one(1, 3, 0), one(2, 3, 1)])
}

/// Strictly upper triangular `(n+1)×(n+1)` matrices, `E_ij` of weight `j - i`.
pub fn upper_triangular(n: usize) -> Result<LieAlgebra> {
    if n == 0 {
        return Err(Error::Domain("upper-triangular needs n >= 1".into()));
    }
    let size = n + 1;
    let mut idx = Vec::new();
    for d in 1..size {
        for i in 0..size - d {
            idx.push((i, i + d));
        }
    }
    let pos = |a: usize, b: usize| idx.iter().position(|&p| p == (a, b)).unwrap();
    let names: Vec<String> = idx.iter().map(|(a, b)| format!("E{}{}", a + 1, b + 1)).collect();
    let w: Vec<u32> = idx.iter().map(|(a, b)| (b - a) as u32).collect();
    let mut e = Vec::new();
    for &(a, b) in &idx {
        for &(c, d) in &idx {
            if b == c {
                e.push(one(pos(a, b), pos(c, d), pos(a, d)));
            }
        }
    }
    LieAlgebra::new(format!("upper-triangular-{n}"), w, Some(names), &e)
}

/// Abelian `ℝ^n` in weight 1.
pub fn abelian(n: usize) -> Result<LieAlgebra> {
    LieAlgebra::new(format!("abelian-{n}"), vec![1; n], None, &[])
}

/// Heisenberg-type algebra `V ⊕ ℝZ` with `[e_i, e_j] = ω_ij Z` for an antisymmetric `ω`.
pub fn heisenberg_type(omega: &[Vec<Rational>]) -> Result<LieAlgebra> {
    let m = omega.len();
    let mut w = vec![1; m];
    w.push(2);
    let mut e = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if omega[i][j] != Rational::from_integer(0.into()) {
                e.push((i, j, m, omega[i][j].clone()));
            }
        }
    }
    let mut names: Vec<String> = (1..=m).map(|j| format!("e{j}")).collect();
    names.push("Z".into());
    LieAlgebra::new("heisenberg-type", w, Some(names), &e)
}
