//! Cross-checks between independent evaluators.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use altpow::arith::{int_pow, rat, recip, Rational};
use altpow::dims::{alt_dim_with, EngineChoice, TwistSpec};
use altpow::group::{parse_group, PermGroup};
use altpow::perm::orbit_count;
use altpow::pi_finite::{groupoid_cardinality, loop_tower, order_degree_profile, permutation_weight};
use altpow::tuples::{all_commuting_tuples, commuting_tuple_classes};

fn flags(t: usize, first_free: bool) -> Vec<bool> {
    let mut v = vec![true; t + 1];
    v[0] = !first_free;
    v
}

#[test]
fn loop_tower_profiles_match_tuple_classes() {
    for m in 1..=6u32 {
        let g = PermGroup::symmetric(m as usize).unwrap();
        for p in [2u64, 3] {
            for t in 0..=2 {
                let x = loop_tower(m, p, t);
                let classes = commuting_tuple_classes(&g, t, p, &flags(t, true)).unwrap();
                let mut brute: Vec<(BigUint, u32)> = classes
                    .iter()
                    .map(|c| (BigUint::from(c.centralizer_order), c.orbit_count as u32))
                    .collect();
                brute.sort();
                assert_eq!(order_degree_profile(&x), brute, "m={m} p={p} t={t}");
            }
        }
    }
}

/// Unweighted sums over all tuples, divided by `|G|`, equal the class sums.
#[test]
fn class_sums_match_raw_tuple_sums() {
    for spec in ["S3", "S4", "D4", "A4", "Z6", "deg=5; (0 1 2), (3 4)"] {
        let g = parse_group(spec).unwrap();
        for p in [2u64, 3] {
            for t in 0..=1 {
                for first_free in [false, true] {
                    let f = flags(t, first_free);
                    let raw = all_commuting_tuples(&g, t, p, &f);
                    for d in [-2i64, 1, 3] {
                        let db = BigInt::from(d);
                        let lhs = raw
                            .iter()
                            .map(|tuple| rat(int_pow(&db, orbit_count(tuple, g.degree()) as u64)))
                            .fold(Rational::zero(), |a, b| a + b)
                            / rat(g.order() as i64);
                        let rhs = commuting_tuple_classes(&g, t, p, &f)
                            .unwrap()
                            .iter()
                            .map(|c| rat(int_pow(&db, c.orbit_count as u64)) * recip(&BigUint::from(c.centralizer_order)))
                            .fold(Rational::zero(), |a, b| a + b);
                        assert_eq!(lhs, rhs, "{spec} p={p} t={t} free={first_free} d={d}");
                    }
                }
            }
        }
    }
}

#[test]
fn dimension_engines_agree() {
    for m in 1..=6u32 {
        let g = PermGroup::symmetric(m as usize).unwrap();
        for p in [2u64, 3] {
            for n in 0..=2 {
                for d in -3..=3i64 {
                    let s = alt_dim_with(&g, &TwistSpec::Trivial, d, p, n, EngineChoice::Structural).unwrap();
                    let b = alt_dim_with(&g, &TwistSpec::Trivial, d, p, n, EngineChoice::BruteForce).unwrap();
                    assert_eq!(s.value, b.value, "m={m} p={p} n={n} d={d}");
                    let direct = groupoid_cardinality(&loop_tower(m, p, n), permutation_weight(d));
                    assert_eq!(s.value.as_rational(), Some(&direct));
                }
            }
        }
    }
}
