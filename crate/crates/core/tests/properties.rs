use num_traits::Zero;
use proptest::prelude::*;

use reldisc::combinat::{rank_colex, rat, unrank_colex};
use reldisc::discrepancy::{disc_exact, overlap};
use reldisc::fourier::{decompose, norm_sq, truncate, variance};
use reldisc::gk::{system_residual, AlphaVector};
use reldisc::hypergraph::{Hypergraph, SliceFunction};
use reldisc::inclusion::{lift, solve_h};
use reldisc::io::{function_to_json, hypergraph_to_json, parse_function, parse_hypergraph};
use reldisc::wvector::{w1, w2_sq};

fn function(n: usize, k: usize) -> impl Strategy<Value = SliceFunction> {
    let len = reldisc::combinat::choose(n, k) as usize;
    prop::collection::vec((-6i64..=6, 1i64..=4), len).prop_map(move |v| {
        SliceFunction::new(n, k, v.into_iter().map(|(p, q)| rat(p, q)).collect()).unwrap()
    })
}

fn hypergraph(n: usize, k: usize) -> impl Strategy<Value = Hypergraph> {
    let len = reldisc::combinat::choose(n, k) as usize;
    prop::collection::vec(any::<bool>(), len).prop_map(move |bits| {
        let mut it = bits.into_iter();
        Hypergraph::from_fn(n, k, |_| it.next().unwrap()).unwrap()
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn colex_round_trip(n in 1usize..30, k in 0usize..6, seed in any::<u64>()) {
        let k = k.min(n);
        let total = reldisc::combinat::choose(n, k);
        let idx = seed % total;
        let s = unrank_colex(idx, n, k).unwrap();
        prop_assert_eq!(rank_colex(&s), idx);
    }

    #[test]
    fn weights_are_relabel_invariant(f in function(7, 3), perm in permutation(7), r in 1usize..=3) {
        let g = f.relabel(&perm).unwrap();
        prop_assert_eq!(w2_sq(&f, r).unwrap(), w2_sq(&g, r).unwrap());
        prop_assert_eq!(w1(&f, r).unwrap(), w1(&g, r).unwrap());
    }

    #[test]
    fn weights_are_homogeneous(f in function(6, 3), p in -5i64..=5, q in 1i64..=5, r in 1usize..=3) {
        let c = rat(p, q);
        let scaled = f.scale(&c);
        prop_assert_eq!(w2_sq(&scaled, r).unwrap(), w2_sq(&f, r).unwrap() * &c * &c);
        let shifted = f.add(&SliceFunction::constant(6, 3, c).unwrap()).unwrap();
        prop_assert_eq!(w2_sq(&shifted, r).unwrap(), w2_sq(&f, r).unwrap());
    }

    #[test]
    fn decomposition_is_exact(f in function(7, 3)) {
        let d = decompose(&f).unwrap();
        prop_assert_eq!(d.reconstruct(), f.clone());
        let parts: reldisc::Rational = d.norms_sq().iter().sum();
        prop_assert_eq!(parts, norm_sq(&f));
        let var: reldisc::Rational = d.norms_sq()[1..].iter().sum();
        prop_assert_eq!(var, variance(&f));
    }

    #[test]
    fn truncation_lands_in_the_image(f in function(7, 3), ell in 1usize..=3) {
        let t = truncate(&f, ell).unwrap();
        let h = solve_h(&t, ell).unwrap();
        prop_assert!(h.is_some());
        prop_assert_eq!(lift(&h.unwrap(), 3).unwrap(), t);
    }

    #[test]
    fn lift_then_solve(h in function(8, 1)) {
        let f = lift(&h, 4).unwrap();
        prop_assert_eq!(solve_h(&f, 2).unwrap(), Some(h));
        for r in 2..=4 {
            prop_assert!(w2_sq(&f, r).unwrap().is_zero());
        }
    }

    #[test]
    fn overlap_and_disc_are_symmetric(g in hypergraph(5, 2), h in hypergraph(5, 2)) {
        prop_assert_eq!(overlap(&g, &h).unwrap(), overlap(&h, &g).unwrap());
        prop_assert_eq!(disc_exact(&g, &h).unwrap().value, disc_exact(&h, &g).unwrap().value);
    }

    #[test]
    fn json_round_trips(g in hypergraph(6, 3), f in function(6, 2)) {
        prop_assert_eq!(parse_hypergraph(&hypergraph_to_json(&g)).unwrap(), g);
        prop_assert_eq!(parse_function(&function_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn complement_residual_flip(bits in prop::collection::vec(any::<bool>(), 3..12), r in 1usize..11) {
        // 1 - α has residual -residual(α) for r >= 1.
        let m = bits.len() - 1;
        let r = r.min(m);
        let a = AlphaVector::new(bits.clone()).unwrap();
        let b = AlphaVector::new(bits.iter().map(|x| !x).collect()).unwrap();
        prop_assert_eq!(system_residual(&a, r).unwrap(), -system_residual(&b, r).unwrap());
    }
}
