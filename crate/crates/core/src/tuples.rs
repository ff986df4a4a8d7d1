//! Commuting tuples of group elements up to simultaneous conjugacy.
//!
//! Classes of commuting `(t+1)`-tuples `(g_0, …, g_t)` in `G` are enumerated
//! recursively: conjugacy classes of `G`, then classes of `C_G(g_0)`, then of
//! `C_G(g_0, g_1)`, and so on. Taking the minimal element of each class at
//! every level gives a canonical representative, so no pairwise conjugacy
//! test is needed and the output does not depend on scheduling.

use serde::Serialize;

use crate::arith::is_p_power;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::par;
use crate::perm::{orbit_count, Perm};

/// One simultaneous-conjugacy class of commuting tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutingTupleClass {
    pub representative: Vec<Perm>,
    /// `|C_G(g_0, …, g_t)|`.
    pub centralizer_order: u64,
    /// Orbits of `⟨g_0, …, g_t⟩` on the ambient points.
    pub orbit_count: usize,
    /// Which coordinates were restricted to `p`-power order.
    pub torsion_profile: Vec<bool>,
}

/// Enumerates classes of commuting `(t+1)`-tuples with `g_i` of `p`-power
/// order wherever `constrain[i]` is set.
pub fn commuting_tuple_classes(
    group: &PermGroup,
    t: usize,
    p: u64,
    constrain: &[bool],
) -> Result<Vec<CommutingTupleClass>> {
    if constrain.len() != t + 1 {
        return Err(Error::ConstraintMismatch(format!(
            "expected {} constraint flags, got {}",
            t + 1,
            constrain.len()
        )));
    }
    if !crate::arith::is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let top: Vec<&Perm> = group
        .conjugacy_classes()
        .iter()
        .map(|c| &c.representative)
        .filter(|g| !constrain[0] || is_p_power(g.order(), p))
        .collect();
    let mut out = par::flat_map(&top, |rep| {
        let mut acc = Vec::new();
        let centralizer = group.centralizer(rep);
        descend(&centralizer, vec![(*rep).clone()], t, p, constrain, &mut acc);
        acc
    });
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

fn descend(
    centralizer: &PermGroup,
    prefix: Vec<Perm>,
    t: usize,
    p: u64,
    constrain: &[bool],
    out: &mut Vec<CommutingTupleClass>,
) {
    let depth = prefix.len();
    if depth == t + 1 {
        out.push(CommutingTupleClass {
            orbit_count: orbit_count(&prefix, centralizer.degree()),
            representative: prefix,
            centralizer_order: centralizer.order() as u64,
            torsion_profile: constrain.to_vec(),
        });
        return;
    }
    for class in centralizer.conjugacy_classes() {
        let g = &class.representative;
        if constrain[depth] && !is_p_power(g.order(), p) {
            continue;
        }
        let mut tuple = prefix.clone();
        tuple.push(g.clone());
        if depth == t {
            // Last coordinate: only the centralizer order is needed.
            out.push(CommutingTupleClass {
                orbit_count: orbit_count(&tuple, centralizer.degree()),
                representative: tuple,
                centralizer_order: class.centralizer_order,
                torsion_profile: constrain.to_vec(),
            });
        } else {
            descend(&centralizer.centralizer(g), tuple, t, p, constrain, out);
        }
    }
}

/// All commuting `(t+1)`-tuples (not up to conjugacy) satisfying the
/// constraints. Exponential; meant for small oracle checks.
pub fn all_commuting_tuples(group: &PermGroup, t: usize, p: u64, constrain: &[bool]) -> Vec<Vec<Perm>> {
    let mut out = vec![Vec::new()];
    for depth in 0..=t {
        let mut next = Vec::new();
        for prefix in &out {
            for g in group.elements() {
                if constrain[depth] && !is_p_power(g.order(), p) {
                    continue;
                }
                if prefix.iter().all(|h: &Perm| h.commutes_with(g)) {
                    let mut tuple = prefix.clone();
                    tuple.push(g.clone());
                    next.push(tuple);
                }
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn s2_pairs() {
        let s2 = PermGroup::symmetric(2).unwrap();
        let classes = commuting_tuple_classes(&s2, 1, 2, &[false, false]).unwrap();
        assert_eq!(classes.len(), 4);
        assert!(classes.iter().all(|c| c.centralizer_order == 2));
    }

    #[test]
    fn s3_two_power_classes() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let classes = commuting_tuple_classes(&s3, 0, 2, &[true]).unwrap();
        let reps: Vec<String> = classes.iter().map(|c| c.representative[0].to_string()).collect();
        assert_eq!(reps, vec!["()", "(1 2)"]);
    }

    #[test]
    fn trivial_group_has_one_class() {
        let g = PermGroup::trivial(4);
        for t in 0..3 {
            let c = commuting_tuple_classes(&g, t, 3, &vec![false; t + 1]).unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(c[0].orbit_count, 4);
        }
    }

    #[test]
    fn depth_zero_matches_conjugacy_classes() {
        let g = PermGroup::symmetric(5).unwrap();
        let c = commuting_tuple_classes(&g, 0, 2, &[false]).unwrap();
        assert_eq!(c.len(), g.conjugacy_classes().len());
        for (a, b) in c.iter().zip(g.conjugacy_classes()) {
            assert_eq!(a.representative[0], b.representative);
            assert_eq!(a.centralizer_order, b.centralizer_order);
        }
    }

    #[test]
    fn abelian_counts() {
        let g = PermGroup::closure(
            5,
            vec![Perm::parse(5, "(0 1 2)").unwrap(), Perm::parse(5, "(3 4)").unwrap()],
        )
        .unwrap();
        for t in 0..3usize {
            let c = commuting_tuple_classes(&g, t, 2, &vec![false; t + 1]).unwrap();
            assert_eq!(c.len(), 6usize.pow(t as u32 + 1));
        }
    }

    #[test]
    fn flag_length_is_checked() {
        let g = PermGroup::symmetric(3).unwrap();
        assert!(matches!(
            commuting_tuple_classes(&g, 1, 2, &[false]),
            Err(Error::ConstraintMismatch(_))
        ));
    }

    /// Exhaustive check: representatives are pairwise non-conjugate and every
    /// commuting tuple is conjugate to one of them.
    #[test]
    fn deduplication_is_sound() {
        for m in 1..=5usize {
            let g = PermGroup::symmetric(m).unwrap();
            for t in 0..=2usize {
                if m == 5 && t == 2 {
                    continue; // covered by the release-mode integration suite
                }
                for flags in flag_patterns(t + 1) {
                    let reps = commuting_tuple_classes(&g, t, 2, &flags).unwrap();
                    let rep_set: HashSet<Vec<Perm>> =
                        reps.iter().map(|c| c.representative.clone()).collect();
                    let mut covered = 0usize;
                    let mut seen_reps = HashSet::new();
                    let mut seen = HashSet::new();
                    for tuple in all_commuting_tuples(&g, t, 2, &flags) {
                        if seen.contains(&tuple) {
                            continue;
                        }
                        let orbit: HashSet<Vec<Perm>> = g
                            .elements()
                            .iter()
                            .map(|x| tuple.iter().map(|h| h.conjugate_by(x)).collect())
                            .collect();
                        let hits: Vec<_> = orbit.iter().filter(|o| rep_set.contains(*o)).collect();
                        assert_eq!(hits.len(), 1, "m={m} t={t} tuple={tuple:?}");
                        seen_reps.insert(hits[0].clone());
                        covered += orbit.len();
                        seen.extend(orbit);
                    }
                    assert_eq!(seen_reps.len(), reps.len());
                    assert_eq!(covered, seen.len());
                }
            }
        }
    }

    fn flag_patterns(n: usize) -> Vec<Vec<bool>> {
        (0..1u32 << n)
            .map(|mask| (0..n).map(|i| mask & (1 << i) != 0).collect())
            .collect()
    }
}
