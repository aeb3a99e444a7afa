use proptest::prelude::*;

use crate::rational::{qf, Rational};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

pub fn rational_vec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(small_rational(), n)
}

pub fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=5).prop_map(|(n, d)| qf(n, d))
}
