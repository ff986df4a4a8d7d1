//! Sylow-intersection decomposition of `1` in the `p`-completed Burnside
//! ring, and its consequence for loop-space integrals.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{int_pow, rat, rational_string, recip, Rational};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::par;
use crate::perm::Perm;
use crate::tuples::commuting_tuple_classes;

/// Largest number of Sylow subgroups for which all subsets are enumerated.
pub const SYLOW_GUARD: usize = 12;

/// `(-1)^{k-1} |P_{i_1} ∩ ⋯ ∩ P_{i_k}| / |G| · [G / ∩]`.
#[derive(Clone, Debug)]
pub struct YoshidaTerm {
    pub members: Vec<usize>,
    pub subgroup: PermGroup,
    pub coefficient: Rational,
}

impl YoshidaTerm {
    pub fn arity(&self) -> usize {
        self.members.len()
    }
}

impl Serialize for YoshidaTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("YoshidaTerm", 5)?;
        st.serialize_field("sylows", &self.members)?;
        st.serialize_field("arity", &self.arity())?;
        st.serialize_field("subgroup", &self.subgroup.spec_string())?;
        st.serialize_field("subgroup_order", &self.subgroup.order().to_string())?;
        st.serialize_field("coefficient", &rational_string(&self.coefficient))?;
        st.end()
    }
}

/// One term per nonempty subset of the Sylow `p`-subgroups, in order of
/// the subset bitmask.
pub fn yoshida_terms(g: &PermGroup, p: u64) -> Result<Vec<YoshidaTerm>> {
    let sylows = g.sylow_subgroups(p)?;
    let r = sylows.len();
    if r > SYLOW_GUARD {
        return Err(Error::TooManySylows {
            count: r,
            guard: SYLOW_GUARD,
        });
    }
    let masks: Vec<u32> = (1..(1u32 << r)).collect();
    let order = BigUint::from(g.order());
    Ok(par::map(&masks, |&mask| {
        let members: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
        let mut sub = sylows[members[0]].clone();
        for &i in &members[1..] {
            sub = sub.intersection(&sylows[i]);
        }
        let sign = if members.len() % 2 == 1 { 1 } else { -1 };
        let coefficient = rat(sign * BigInt::from(sub.order())) * recip(&order);
        YoshidaTerm {
            members,
            subgroup: sub,
            coefficient,
        }
    }))
}

/// `∫ d^{orbits}` over classes of commuting `(t+1)`-tuples in `k`, with the
/// coordinates flagged in `constrain` of `p`-power order.
pub fn tuple_integral(k: &PermGroup, p: u64, d: i64, t: usize, constrain: &[bool]) -> Result<Rational> {
    let db = BigInt::from(d);
    Ok(commuting_tuple_classes(k, t, p, constrain)?
        .iter()
        .map(|c| rat(int_pow(&db, c.orbit_count as u64)) * recip(&BigUint::from(c.centralizer_order)))
        .fold(Rational::zero(), |a, b| a + b))
}

#[derive(Clone, Debug, Serialize)]
pub struct LoopDecompositionReport {
    pub group: String,
    pub p: u64,
    pub d: i64,
    pub t: usize,
    pub sylow_count: usize,
    pub terms: usize,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    /// Set when the first coordinate was left unconstrained; the verdict is
    /// then an observation, not a theorem.
    pub experimental: bool,
}

/// Compares `∫_{L_p^{t+1} BG} d^{orbits}` with the Yoshida-weighted sum of
/// the same integral over Sylow intersections. With `mixed` the first loop
/// coordinate is unconstrained.
pub fn verify_loop_decomposition(g: &PermGroup, p: u64, d: i64, t: usize, mixed: bool) -> Result<LoopDecompositionReport> {
    let mut constrain = vec![true; t + 1];
    if mixed {
        constrain[0] = false;
    }
    let terms = yoshida_terms(g, p)?;
    let lhs = tuple_integral(g, p, d, t, &constrain)?;

    // Many subsets share an intersection; integrate each distinct one once.
    let mut distinct: HashMap<Vec<Perm>, usize> = HashMap::new();
    let mut reps: Vec<&PermGroup> = Vec::new();
    let slots: Vec<usize> = terms
        .iter()
        .map(|term| {
            *distinct.entry(term.subgroup.elements().to_vec()).or_insert_with(|| {
                reps.push(&term.subgroup);
                reps.len() - 1
            })
        })
        .collect();
    let integrals = par::try_map(&reps, |k| tuple_integral(k, p, d, t, &constrain))?;
    let rhs = terms
        .iter()
        .zip(&slots)
        .map(|(term, &s)| &term.coefficient * &integrals[s])
        .fold(Rational::zero(), |a, b| a + b);
    Ok(LoopDecompositionReport {
        group: g.spec_string(),
        p,
        d,
        t,
        sylow_count: terms.iter().filter(|t| t.arity() == 1).count(),
        terms: terms.len(),
        holds: lhs == rhs,
        lhs: rational_string(&lhs),
        rhs: rational_string(&rhs),
        experimental: mixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;
    use crate::group::parse_group;
    use crate::pi_finite::{base_space, free_loops, groupoid_cardinality};

    #[test]
    fn s3_terms() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let terms = yoshida_terms(&s3, 2).unwrap();
        assert_eq!(terms.len(), 7);
        let mut by_arity = [0usize; 4];
        for t in &terms {
            by_arity[t.arity()] += 1;
            let expected = match t.arity() {
                1 => rat_frac(1, 3),
                2 => rat_frac(-1, 6),
                _ => rat_frac(1, 6),
            };
            assert_eq!(t.coefficient, expected);
            if t.arity() > 1 {
                assert_eq!(t.subgroup.order(), 1);
            }
        }
        assert_eq!(by_arity, [0, 3, 3, 1]);
        let terms = yoshida_terms(&s3, 3).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].coefficient, rat_frac(1, 2));
        assert_eq!(terms[0].subgroup.order(), 3);
    }

    #[test]
    fn p_group_has_one_term() {
        let d4 = PermGroup::dihedral(4).unwrap();
        let terms = yoshida_terms(&d4, 2).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].coefficient, rat(1));
        assert_eq!(terms[0].subgroup, d4);
    }

    #[test]
    fn guard_trips() {
        let s5 = PermGroup::symmetric(5).unwrap();
        assert!(matches!(yoshida_terms(&s5, 2), Err(Error::TooManySylows { count: 15, .. })));
    }

    #[test]
    fn coefficients_match_inclusion_exclusion() {
        // Σ coeff · |G|/|∩| = Σ_k (-1)^{k-1} C(r, k) = 1.
        for (spec, p) in [("S3", 2), ("S4", 2), ("S4", 3), ("A4", 3), ("Z6", 2)] {
            let g = parse_group(spec).unwrap();
            let total = yoshida_terms(&g, p)
                .unwrap()
                .iter()
                .map(|t| &t.coefficient * rat(g.order() as i64) / rat(t.subgroup.order() as i64))
                .fold(Rational::zero(), |a, b| a + b);
            assert_eq!(total, rat(1), "{spec} p={p}");
        }
    }

    #[test]
    fn documented_examples() {
        let s3 = PermGroup::symmetric(3).unwrap();
        assert!(verify_loop_decomposition(&s3, 2, 2, 1, false).unwrap().holds);
        let a4 = PermGroup::alternating(4).unwrap();
        assert!(verify_loop_decomposition(&a4, 3, 2, 0, false).unwrap().holds);
    }

    #[test]
    fn constant_function_matches_p_typical_cardinality() {
        for m in 2..=4u32 {
            let g = PermGroup::symmetric(m as usize).unwrap();
            let integral = tuple_integral(&g, 2, 1, 0, &[true]).unwrap();
            let x = free_loops(&base_space(m), Some(2));
            assert_eq!(integral, groupoid_cardinality(&x, |_| rat(1)));
            let report = verify_loop_decomposition(&g, 2, 1, 0, false).unwrap();
            assert!(report.holds);
            assert_eq!(report.lhs, rational_string(&integral));
        }
    }
}
