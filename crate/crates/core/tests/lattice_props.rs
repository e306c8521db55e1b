//! Properties of Λ⁺ and of the propagation maps, over random weights.

use horolab::root_core::{dominance_leq, dual_weight, is_in_lambda_plus, Weight};
use horolab::space_catalog::{catalog, make_space, Family, SpaceData};
use horolab::weight_limits::{iota, restrict};
use proptest::prelude::*;

fn spaces() -> Vec<SpaceData> {
    catalog(3, 7)
}

fn weight(s: &SpaceData, k: &[i64]) -> Weight {
    s.rs.from_omega_int(&k[..s.rank])
}

fn chain(idx: usize) -> Vec<SpaceData> {
    let (fam, params): (Family, Vec<Vec<usize>>) = match idx % 5 {
        0 => (Family::SoPq, vec![vec![1, 2], vec![1, 4], vec![1, 7]]),
        1 => (Family::SuPq, vec![vec![2, 3], vec![2, 4], vec![2, 6]]),
        2 => (Family::SpPq, vec![vec![1, 2], vec![1, 3], vec![1, 5]]),
        3 => (Family::SlnR, vec![vec![3], vec![4], vec![6]]),
        _ => (Family::Sl2Product, vec![vec![1], vec![2], vec![4]]),
    };
    params.iter().map(|p| make_space(fam, p).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_plus_is_a_monoid(i in 0usize..40, a in prop::collection::vec(0i64..5, 4), b in prop::collection::vec(0i64..5, 4)) {
        let all = spaces();
        let s = &all[i % all.len()];
        let (x, y) = (weight(s, &a), weight(s, &b));
        prop_assert!(is_in_lambda_plus(&x, &s.rs) && is_in_lambda_plus(&y, &s.rs));
        prop_assert!(is_in_lambda_plus(&x.add(&y), &s.rs));
        prop_assert!(is_in_lambda_plus(&Weight::zero(s.rank), &s.rs));
    }

    #[test]
    fn dominance_is_a_partial_order(i in 0usize..40, a in prop::collection::vec(0i64..4, 4), b in prop::collection::vec(0i64..4, 4), c in prop::collection::vec(0i64..4, 4)) {
        let all = spaces();
        let s = &all[i % all.len()];
        let (x, y, z) = (weight(s, &a), weight(s, &b), weight(s, &c));
        prop_assert!(dominance_leq(&x, &x, &s.rs));
        if dominance_leq(&x, &y, &s.rs) && dominance_leq(&y, &x, &s.rs) {
            prop_assert_eq!(&x, &y);
        }
        if dominance_leq(&x, &y, &s.rs) && dominance_leq(&y, &z, &s.rs) {
            prop_assert!(dominance_leq(&x, &z, &s.rs));
        }
    }

    #[test]
    fn dual_is_an_involution_on_lambda_plus(i in 0usize..40, a in prop::collection::vec(0i64..5, 4)) {
        let all = spaces();
        let s = &all[i % all.len()];
        let x = weight(s, &a);
        let d = dual_weight(&x, &s.rs).unwrap();
        prop_assert!(is_in_lambda_plus(&d, &s.rs));
        prop_assert_eq!(dual_weight(&d, &s.rs).unwrap(), x);
    }

    #[test]
    fn iota_is_additive_transitive_and_split(idx in 0usize..5, a in prop::collection::vec(0i64..5, 4), b in prop::collection::vec(0i64..5, 4)) {
        let c = chain(idx);
        let (x, y) = (weight(&c[0], &a), weight(&c[0], &b));
        let ix = iota(&x, &c[0], &c[2]).unwrap();
        prop_assert_eq!(iota(&x.add(&y), &c[0], &c[2]).unwrap(), ix.add(&iota(&y, &c[0], &c[2]).unwrap()));
        prop_assert_eq!(&iota(&iota(&x, &c[0], &c[1]).unwrap(), &c[1], &c[2]).unwrap(), &ix);
        prop_assert_eq!(restrict(&ix, &c[2], &c[0]).unwrap(), x);
    }
}
