//! `log(exp X exp Y)` through the Dynkin commutator series.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::LieAlgebra;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Highest step length the coefficient table covers.
pub const MAX_BCH_STEP: usize = 6;

/// A word over {X = 0, Y = 1}, read as the right-nested bracket `[w_1, [w_2, … w_m]]`.
type Word = Vec<u8>;

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn compositions(m: usize, prefix: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if m == 0 {
        out.push(prefix.clone());
        return;
    }
    for total in 1..=m {
        for p in 0..=total {
            prefix.push((p, total - p));
            compositions(m - total, prefix, out);
            prefix.pop();
        }
    }
}

fn build_table() -> Vec<Vec<(Word, Rational)>> {
    let mut by_degree = vec![Vec::new()];
    for m in 1..=MAX_BCH_STEP {
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        let mut comps = Vec::new();
        compositions(m, &mut Vec::new(), &mut comps);
        for blocks in comps {
            let n = blocks.len();
            let mut denom = BigInt::from(n * m);
            let mut word = Word::new();
            for &(p, qq) in &blocks {
                denom *= factorial(p) * factorial(qq);
                word.extend(std::iter::repeat_n(0u8, p));
                word.extend(std::iter::repeat_n(1u8, qq));
            }
            if word.len() >= 2 && word[word.len() - 1] == word[word.len() - 2] {
                continue;
            }
            let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            *acc.entry(word).or_insert_with(Rational::zero) += Rational::new(sign, denom);
        }
        by_degree.push(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect());
    }
    by_degree
}

/// Nonzero Dynkin coefficients of total degree `m` (`1 ≤ m ≤ 6`).
pub fn dynkin_terms(m: usize) -> &'static [(Vec<u8>, Rational)] {
    static TABLE: OnceLock<Vec<Vec<(Word, Rational)>>> = OnceLock::new();
    &TABLE.get_or_init(build_table)[m]
}

/// `Z` with `exp(Z) = exp(X) exp(Y)`, exact.
pub fn bch(g: &LieAlgebra, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
    let step = g.step().ok_or(Error::NotNilpotent)?;
    if step > MAX_BCH_STEP {
        return Err(Error::UnsupportedStep { step, reason: format!("BCH coefficients are tabulated through step {MAX_BCH_STEP}") });
    }
    let mut out = rational::add(x, y);
    let mut cache: HashMap<Word, Vec<Rational>> = HashMap::new();
    for m in 2..=step {
        for (word, c) in dynkin_terms(m) {
            let v = nested(g, word, x, y, &mut cache);
            rational::axpy(&mut out, c, &v);
        }
    }
    Ok(out)
}

fn nested(g: &LieAlgebra, word: &[u8], x: &[Rational], y: &[Rational], cache: &mut HashMap<Word, Vec<Rational>>) -> Vec<Rational> {
    if let Some(v) = cache.get(word) {
        return v.clone();
    }
    let head = if word[0] == 0 { x } else { y };
    let v = if word.len() == 1 {
        head.to_vec()
    } else {
        let tail = nested(g, &word[1..], x, y, cache);
        if rational::is_zero_vec(&tail) {
            tail
        } else {
            g.bracket(head, &tail)
        }
    };
    cache.insert(word.to_vec(), v.clone());
    v
}
