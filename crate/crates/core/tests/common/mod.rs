#![allow(dead_code)]

use num_traits::Zero;
use proptest::prelude::*;
use resdiff::{Polynomial, Rational, RootSpec};

pub fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// Polynomial of exact degree in `degrees`.
pub fn polynomial(degrees: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Polynomial> {
    degrees
        .prop_flat_map(|n| (nonzero_rational(), prop::collection::vec(rational(), n)))
        .prop_map(|(lead, rest)| {
            let mut c = vec![lead];
            c.extend(rest);
            Polynomial::new(c).unwrap()
        })
}

/// `k` distinct rationals sharing a denominator.
pub fn distinct_rationals(k: usize, nonzero: bool) -> impl Strategy<Value = Vec<Rational>> {
    (prop::collection::btree_set(-15i64..=15, k + 1), 1i64..=3)
        .prop_map(move |(nums, d)| {
            nums.into_iter()
                .filter(|&n| !(nonzero && n == 0))
                .take(k)
                .map(|n| Rational::new(n.into(), d.into()))
                .collect::<Vec<_>>()
        })
        .prop_filter("enough values", move |v| v.len() == k)
}

/// Root spec with `distinct` roots of multiplicity at most `max_mult`.
pub fn root_spec(
    distinct: std::ops::RangeInclusive<usize>,
    max_mult: usize,
    nonzero: bool,
) -> impl Strategy<Value = RootSpec> {
    distinct
        .prop_flat_map(move |k| {
            (
                nonzero_rational(),
                distinct_rationals(k, nonzero),
                prop::collection::vec(1..=max_mult, k),
            )
        })
        .prop_map(|(lead, roots, mults)| {
            RootSpec::new(lead, roots.into_iter().zip(mults).collect()).unwrap()
        })
}

/// Spec whose first root has multiplicity `s`; all further roots simple.
pub fn spec_with_multiple_root(
    s: usize,
    others: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = RootSpec> {
    others
        .prop_flat_map(|k| (nonzero_rational(), distinct_rationals(k + 1, true)))
        .prop_map(move |(lead, roots)| {
            let mut list = vec![(roots[0].clone(), s)];
            list.extend(roots[1..].iter().map(|r| (r.clone(), 1)));
            RootSpec::new(lead, list).unwrap()
        })
}
