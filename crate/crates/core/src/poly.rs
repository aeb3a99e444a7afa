//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{self, Rational};

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    /// `Σ c_i x_i`
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let m = e.iter().zip(x).fold(c.clone(), |m, (&k, xi)| if k == 0 { m } else { m * rational::pow(xi, k) });
            acc + m
        })
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(rational::to_f64(c), |m, (&k, xi)| m * xi.powi(k as i32)))
            .sum()
    }

    /// Substitutes `x_i -> images[i]` (all in a common ring of `target_vars` variables).
    pub fn compose(&self, images: &[Poly], target_vars: usize) -> Poly {
        let mut out = Poly::zero(target_vars);
        for (e, c) in &self.terms {
            let mut m = Poly::constant(target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = &m * &images[i].pow(k);
                }
            }
            out = &out + &m;
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            if mono.is_empty() || !a.is_one() {
                let _ = write!(s, "{}", rational::format_rational(&a));
                if !mono.is_empty() {
                    s.push('*');
                }
            }
            s.push_str(&mono.join("*"));
        }
        s
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut acc: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { nvars: self.nvars.max(o.nvars), terms: acc }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn arithmetic() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let s = &x + &y;
        let d = &x - &y;
        let p = &s * &d;
        assert_eq!(p, &x.pow(2) - &y.pow(2));
        assert!(p.is_homogeneous());
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(p.eval(&[q(3), q(1)]), q(8));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn derivative_and_compose() {
        let x = Poly::var(1, 0);
        let p = &x.pow(3).scale(&qf(1, 3)) + &Poly::constant(1, q(2));
        assert_eq!(p.derivative(0), x.pow(2));
        let sq = p.compose(&[&x + &Poly::one(1)], 1);
        assert_eq!(sq.eval(&[q(0)]), p.eval(&[q(1)]));
    }

    #[test]
    fn rendering() {
        let n: Vec<String> = vec!["a".into(), "b".into()];
        let p = &Poly::var(2, 0).pow(2) - &Poly::var(2, 1).scale(&q(3));
        assert_eq!(p.render(&n), "a^2 - 3*b");
        assert_eq!(Poly::zero(2).render(&n), "0");
    }
}
