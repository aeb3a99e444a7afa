//! Exact linear algebra over the rationals.

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

pub type Matrix = Vec<Vec<Rational>>;

pub fn zero_matrix(rows: usize, cols: usize) -> Matrix {
    vec![rational::zeros(cols); rows]
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| rational::unit(n, i)).collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = rational::zeros(cols);
            for (k, x) in row.iter().enumerate() {
                rational::axpy(&mut out, x, &b[k]);
            }
            out
        })
        .collect()
}

pub fn matvec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| rational::dot(row, v)).collect()
}

/// Reduced row-echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut rows: Matrix = m.iter().filter(|r| !rational::is_zero_vec(r)).cloned().collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                rational::axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel `{v : m v = 0}`; `cols` is needed when `m` has no rows.
pub fn kernel(m: &Matrix, cols: usize) -> Matrix {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = rational::zeros(cols);
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn det(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = -(&row[c] * &inv);
                rational::axpy(row, &f, &pivot_row);
            }
        }
    }
    d
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(rational::unit(n, i));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Some solution of `m x = b`, if one exists.
pub fn solve(m: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = rational::zeros(cols);
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix by congruence diagonalization.
pub fn inertia(sym: &Matrix) -> (usize, usize, usize) {
    let n = sym.len();
    let mut a = sym.clone();
    let (mut pos, mut negc) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let diag = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let pair = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(|&(i, j)| i < j && !a[i][j].is_zero());
                match pair {
                    None => break,
                    Some((i, j)) => {
                        // row/col i += row/col j makes a[i][i] = 2 a[i][j] != 0
                        for k in 0..n {
                            let v = a[j][k].clone();
                            a[i][k] += v;
                        }
                        for k in 0..n {
                            let v = a[k][j].clone();
                            a[k][i] += v;
                        }
                        i
                    }
                }
            }
        };
        let piv = a[p][p].clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            negc += 1;
        }
        active.retain(|&i| i != p);
        let prow = a[p].clone();
        for &i in &active {
            if !a[i][p].is_zero() {
                let f = -(&a[i][p] / &piv);
                rational::axpy(&mut a[i], &f, &prow);
            }
        }
        for &i in &active {
            a[i][p] = Rational::zero();
            a[p][i] = Rational::zero();
        }
    }
    (pos, negc, n - pos - negc)
}

pub fn signature(sym: &Matrix) -> i64 {
    let (p, n, _) = inertia(sym);
    p as i64 - n as i64
}

/// A linear subspace of Q^n stored as its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Matrix,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        let (rows, _) = rref(&vectors.to_vec());
        Subspace { ambient, rows }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, rows: identity(ambient) }
    }

    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let v: Matrix = indices.iter().map(|&i| rational::unit(ambient, i)).collect();
        Subspace::span(ambient, &v)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.rows
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if rational::is_zero_vec(v) {
            return true;
        }
        let mut m = self.rows.clone();
        m.push(v.to_vec());
        rank(&m) == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut m = self.rows.clone();
        m.extend(other.rows.iter().cloned());
        Subspace::span(self.ambient, &m)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // a·U = b·W  <=>  (a, -b) in ker [U^T | -W^T]
        let (p, r) = (self.dim(), other.dim());
        if p == 0 || r == 0 {
            return Subspace::zero(self.ambient);
        }
        let m: Matrix = (0..self.ambient)
            .map(|c| {
                let mut row: Vec<Rational> = self.rows.iter().map(|u| u[c].clone()).collect();
                row.extend(other.rows.iter().map(|w| -w[c].clone()));
                row
            })
            .collect();
        let vs: Matrix = kernel(&m, p + r)
            .iter()
            .map(|k| {
                let mut v = rational::zeros(self.ambient);
                for (a, u) in k[..p].iter().zip(&self.rows) {
                    rational::axpy(&mut v, a, u);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vs)
    }

    /// Orthogonal complement for the standard inner product.
    pub fn orthogonal_complement(&self) -> Subspace {
        Subspace::span(self.ambient, &kernel(&self.rows, self.ambient))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ints, q, qf};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| ints(r)).collect()
    }

    #[test]
    fn rref_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(rational::is_zero_vec(&matvec(&a, &k[0])));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(det(&a), q(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(matmul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), q(-1));
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, &ints(&[3, 1])).unwrap(), ints(&[2, 1]));
        let s = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&s, &ints(&[1, 3])).is_none());
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        // ab - bc - ca as a symmetric Gram matrix
        let h = qf(1, 2);
        let g = vec![
            vec![q(0), h.clone(), -h.clone()],
            vec![h.clone(), q(0), -h.clone()],
            vec![-h.clone(), -h.clone(), q(0)],
        ];
        assert_eq!(inertia(&g), (1, 2, 0));
        assert_eq!(signature(&m(&[&[0, 1], &[1, 0]])), 0);
        assert_eq!(inertia(&m(&[&[1, 0], &[0, 0]])), (1, 0, 1));
    }

    #[test]
    fn subspace_canonical() {
        let a = Subspace::span(3, &[ints(&[1, 1, 0]), ints(&[0, 1, 0])]);
        let b = Subspace::span(3, &[ints(&[2, 0, 0]), ints(&[1, -1, 0])]);
        assert_eq!(a, b);
        let c = Subspace::span(3, &[ints(&[0, 1, 1])]);
        assert_eq!(a.intersect(&c).dim(), 0);
        assert_eq!(a.sum(&c), Subspace::full(3));
        let d = Subspace::span(3, &[ints(&[0, 1, 0]), ints(&[0, 0, 1])]);
        assert_eq!(a.intersect(&d), Subspace::coordinate(3, &[1]));
        assert_eq!(a.orthogonal_complement(), Subspace::coordinate(3, &[2]));
    }
}
