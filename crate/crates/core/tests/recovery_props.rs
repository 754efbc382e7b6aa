mod common;

use common::{distinct_rationals, nonzero_rational, rational, spec_with_multiple_root};
use num_traits::Zero;
use proptest::prelude::*;
use resdiff::poly::rat_pow;
use resdiff::{
    analyze, detect_multiplicity, gradient, partial, partials_up_to, recover_first_order,
    recover_higher_order, DerivativeRequest, RootSpec, Side,
};

/// All multisets of `order` indices from `0..=top`, sorted.
fn multisets(top: usize, order: usize) -> Vec<Vec<usize>> {
    if order == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in multisets(top, order - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for j in start..=top {
            let mut v = rest.clone();
            v.push(j);
            out.push(v);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn routes_agree_when_both_certify(spec in spec_with_multiple_root(2, 0..=3)) {
        prop_assume!(spec.degree() >= 2);
        let f = spec.expand();
        let a = analyze(&f).unwrap();
        if let (Some(Ok(x)), Some(Ok(y))) = (&a.first_order, &a.higher_order) {
            prop_assert_eq!(&x.root, &y.root);
        }
        let cert = a.certificate.expect("a lone double root always certifies");
        prop_assert_eq!(&cert.root, &spec.roots[0].0);
        prop_assert!(cert.verified);
    }

    #[test]
    fn order_s_ratios_are_powers_of_the_root(s in 2usize..=3, spec in spec_with_multiple_root(3, 0..=2)) {
        // rebuild with multiplicity s
        let mut roots = spec.roots.clone();
        roots[0].1 = s;
        let spec = RootSpec::new(spec.leading.clone(), roots).unwrap();
        let n = spec.degree();
        prop_assume!(n <= 5 && s < n);
        let f = spec.expand();
        let df = f.derivative(1);
        let w = spec.roots[0].0.clone();
        let values: Vec<(Vec<usize>, _)> = multisets(n - 1, s)
            .into_iter()
            .map(|idx| {
                let v = partial(&f, &df, &DerivativeRequest::new(Side::B, idx.clone()).unwrap()).unwrap();
                (idx, v)
            })
            .collect();
        for (j, vj) in &values {
            for (k, vk) in &values {
                let sj: usize = j.iter().sum();
                let sk: usize = k.iter().sum();
                let lattice = rat_pow(&w, sk as i64 - sj as i64).unwrap();
                prop_assert_eq!(vj, &(vk * lattice));
            }
        }
        prop_assert!(!values[0].1.is_zero());
    }

    #[test]
    fn first_order_gradient_is_geometric(s in 2usize..=3, spec in spec_with_multiple_root(2, 1..=3), mult in 1usize..=2) {
        let mut roots = spec.roots.clone();
        roots[0].1 = s;
        // another root of lower multiplicity is allowed on this route
        roots[1].1 = mult.min(s - 1);
        let spec = RootSpec::new(spec.leading.clone(), roots).unwrap();
        let f = spec.expand();
        let n = spec.degree();
        let w = spec.roots[0].0.clone();
        let grad = gradient(&f, &f.derivative(s - 1), Side::A).unwrap();
        for (j, dj) in grad.iter().enumerate() {
            prop_assert_eq!(dj, &(&grad[n] * rat_pow(&w, (n - j) as i64).unwrap()));
        }
        // a second root shared with f^(s-1) flattens the gradient to zero
        let coincide = spec.roots[1..].iter().any(|(r, _)| f.derivative(s - 1).evaluate(r).is_zero());
        prop_assert_eq!(grad[n].is_zero(), coincide);
        if !coincide {
            prop_assert_eq!(recover_first_order(&f, s).unwrap().root, w);
        }
    }

    #[test]
    fn partials_below_multiplicity_vanish(s in 2usize..=3, spec in spec_with_multiple_root(2, 0..=2)) {
        let mut roots = spec.roots.clone();
        roots[0].1 = s;
        let spec = RootSpec::new(spec.leading.clone(), roots).unwrap();
        let f = spec.expand();
        // holds whenever w has multiplicity s, certified or not
        for (idx, v) in partials_up_to(&f, &f.derivative(1), Side::B, s - 1).unwrap() {
            prop_assert!(v.is_zero(), "{:?} = {}", idx, v);
        }
        // the route may decline when a simple root also zeroes f^(s)
        if let Ok(cert) = recover_higher_order(&f, s) {
            prop_assert_eq!(&cert.root, &spec.roots[0].0);
        } else {
            prop_assert!(spec.roots[1..].iter().any(|(r, _)| f.derivative(s).evaluate(r).is_zero()));
        }
    }

    #[test]
    fn chain_zeros_precede_first_nonzero(spec in spec_with_multiple_root(3, 0..=3)) {
        let report = detect_multiplicity(&spec.expand()).unwrap();
        prop_assert!(report.s_max <= report.reduced.degree().unwrap());
        let (last, before) = report.chain.split_last().unwrap();
        prop_assert!(before.iter().all(|(_, v)| v.is_zero()));
        prop_assert!(!last.1.is_zero());
    }

    #[test]
    fn shifting_moves_the_root(spec in spec_with_multiple_root(2, 0..=3), c in rational()) {
        prop_assume!(spec.flat_roots().all(|r| !(r + &c).is_zero()));
        let f = spec.expand();
        let w = analyze(&f).unwrap().certificate.unwrap().root;
        let shifted = analyze(&f.shift(&c)).unwrap().certificate.unwrap().root;
        prop_assert_eq!(shifted, w + c);
    }

    #[test]
    fn second_order_partials_all_or_nothing(
        roots in distinct_rationals(4, true),
        second_double in any::<bool>(),
        lead in nonzero_rational(),
    ) {
        // (z - w)^2 with simple companions, or a second double root
        let list = if second_double {
            vec![(roots[0].clone(), 2), (roots[1].clone(), 2)]
        } else {
            vec![(roots[0].clone(), 2), (roots[1].clone(), 1), (roots[2].clone(), 1)]
        };
        let f = RootSpec::new(lead, list).unwrap().expand();
        let order_two: Vec<_> = partials_up_to(&f, &f.derivative(1), Side::B, 2)
            .unwrap()
            .into_iter()
            .filter(|(idx, _)| idx.len() == 2)
            .collect();
        if second_double {
            prop_assert!(order_two.iter().all(|(_, v)| v.is_zero()));
        } else {
            prop_assert!(order_two.iter().all(|(_, v)| !v.is_zero()));
        }
    }
}
