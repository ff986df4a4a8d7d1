//! Property tests for conjugation invariance and algebraic identities.

use proptest::prelude::*;

use altpow::dims::{alt_dim, TwistSpec};
use altpow::group::{parse_group, PermGroup};
use altpow::perm::Perm;
use altpow::tuples::commuting_tuple_classes;
use altpow::wreath::{classify_element, classify_permutation, wreath_product, WreathElement};

fn s_n(n: usize) -> PermGroup {
    PermGroup::symmetric(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wreath_labels_are_conjugation_invariant(x in 0usize..72, y in 0usize..72) {
        let g = parse_group("S3").unwrap();
        let w = wreath_product(&g, 2).unwrap();
        let (a, b) = (&w.elements()[x], &w.elements()[y]);
        let la = classify_permutation(&g, 2, a).unwrap();
        let lb = classify_permutation(&g, 2, &a.conjugate_by(b)).unwrap();
        prop_assert_eq!(la, lb);
    }

    #[test]
    fn inverse_pair_over_transposition(i in 0usize..6) {
        let g = parse_group("S3").unwrap();
        let h = g.elements()[i].clone();
        let e = WreathElement { base: vec![h.clone(), h.inverse()], top: Perm::parse(2, "(0 1)").unwrap() };
        let label = classify_element(&g, 2, &e).unwrap();
        prop_assert_eq!(label.cycle_type.parts(), &[2][..]);
        let classes = g.conjugacy_classes();
        prop_assert!(label.assignments[&2].iter().all(|&c| classes[c].representative.is_identity()));
    }

    #[test]
    fn dims_invariant_under_conjugate_subgroups(
        gens in proptest::collection::vec(proptest::sample::select(vec!["(0 1)", "(2 3)", "(0 1 2)", "(1 3)", "(0 2)(1 3)"]), 1..3),
        conj in 0usize..24,
        d in -2i64..4,
        n in 0usize..3,
    ) {
        let s4 = s_n(4);
        let perms: Vec<Perm> = gens.iter().map(|s| Perm::parse(4, s).unwrap()).collect();
        let h = PermGroup::closure(4, perms).unwrap();
        let hc = h.conjugate(&s4.elements()[conj]);
        let a = alt_dim(&h, &TwistSpec::Trivial, d, 2, n).unwrap();
        let b = alt_dim(&hc, &TwistSpec::Trivial, d, 2, n).unwrap();
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn tuple_class_counts_invariant_under_conjugation(conj in 0usize..120, p in proptest::sample::select(vec![2u64, 3])) {
        let s5 = s_n(5);
        let h = PermGroup::closure(5, vec![Perm::parse(5, "(0 1 2 3)").unwrap(), Perm::parse(5, "(0 2)").unwrap()]).unwrap();
        let hc = h.conjugate(&s5.elements()[conj]);
        let profile = |g: &PermGroup| {
            let mut v: Vec<(u64, usize)> = commuting_tuple_classes(g, 1, p, &[false, true])
                .unwrap()
                .iter()
                .map(|c| (c.centralizer_order, c.orbit_count))
                .collect();
            v.sort();
            v
        };
        prop_assert_eq!(profile(&h), profile(&hc));
    }
}
