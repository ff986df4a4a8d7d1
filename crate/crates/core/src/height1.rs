//! Height-1 dimensions for the character `sgn^(1)`: the splitting criterion
//! for classes of `S_m` in its double cover, the sets `O(m)`, `D(m)` and
//! their 2-power parts, and the closed forms.

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::int_pow;
use crate::error::Result;
use crate::par;
use crate::perm_core::{partitions, CycleType};
use crate::pi_finite::{base_space, free_loops, groupoid_cardinality, permutation_weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchurClass {
    pub lambda: CycleType,
    pub splits: bool,
    pub in_o: bool,
    pub in_d: bool,
}

/// `O`: no even parts. `D`: distinct parts with an odd number of even ones.
pub fn schur_splits(lambda: &CycleType) -> SchurClass {
    let even = lambda.even_parts();
    let in_o = even == 0;
    let in_d = lambda.has_distinct_parts() && even % 2 == 1;
    SchurClass {
        lambda: lambda.clone(),
        splits: in_o || in_d,
        in_o,
        in_d,
    }
}

/// 2-power-torsion cycle types in `O(m)` and `D(m)`.
pub fn od2_sets(m: u32) -> (Vec<CycleType>, Vec<CycleType>) {
    let mut o2 = Vec::new();
    let mut d2 = Vec::new();
    for lambda in partitions(m).into_iter().filter(|l| l.is_p_power_type(2)) {
        let s = schur_splits(&lambda);
        if s.in_o {
            o2.push(lambda);
        } else if s.in_d {
            d2.push(lambda);
        }
    }
    (o2, d2)
}

fn pow(d: i64, e: usize) -> BigInt {
    int_pow(&BigInt::from(d), e as u64)
}

/// `d^ℓ` for `d ≥ 0` and `d^ℓ + (-d)^ℓ - 1` for `d < 0`.
fn term(d: i64, cycles: usize) -> BigInt {
    if d >= 0 {
        pow(d, cycles)
    } else {
        pow(d, cycles) + pow(-d, cycles) - 1
    }
}

/// `dim alt_{sgn^(1)}` of a `d`-dimensional object, by enumeration of the
/// splitting 2-power classes.
pub fn alt_dim_h1(m: u32, d: i64) -> BigInt {
    let (o2, d2) = od2_sets(m);
    o2.iter().chain(&d2).map(|l| term(d, l.num_cycles())).sum()
}

/// Which parity of `|{i > 0 : b_i = 1}|` carries the extra binary-partition
/// term in the closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityConvention {
    /// Extra term when the count is even.
    AsPrinted,
    /// Extra term when the count is odd, as enumeration requires.
    Resolved,
}

/// `(|{i > 0 : b_i = 1}|, |{i ≥ 0 : b_i = 1}|)` for `m = Σ b_i 2^i`.
pub fn binary_counts(m: u32) -> (u32, u32) {
    ((m >> 1).count_ones(), m.count_ones())
}

pub fn alt_dim_h1_closed(m: u32, d: i64, convention: ParityConvention) -> BigInt {
    let (even_bits, bits) = binary_counts(m);
    let extra = match convention {
        ParityConvention::AsPrinted => even_bits % 2 == 0,
        ParityConvention::Resolved => even_bits % 2 == 1,
    };
    let mut v = term(d, m as usize);
    if extra {
        v += term(d, bits as usize);
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityRow {
    pub m: u32,
    pub d: i64,
    pub enumeration: String,
    pub as_printed: String,
    pub resolved: String,
    pub as_printed_matches: bool,
    pub resolved_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityReport {
    pub rows: Vec<ParityRow>,
    pub as_printed_mismatches: usize,
    pub resolved_mismatches: usize,
}

/// Compares both closed-form conventions with enumeration.
pub fn parity_discrepancy_report(ms: std::ops::RangeInclusive<u32>, ds: &[i64]) -> ParityReport {
    let pairs: Vec<(u32, i64)> = ms.flat_map(|m| ds.iter().map(move |&d| (m, d))).collect();
    let rows = par::map(&pairs, |&(m, d)| {
        let e = alt_dim_h1(m, d);
        let a = alt_dim_h1_closed(m, d, ParityConvention::AsPrinted);
        let r = alt_dim_h1_closed(m, d, ParityConvention::Resolved);
        ParityRow {
            m,
            d,
            as_printed_matches: a == e,
            resolved_matches: r == e,
            enumeration: e.to_string(),
            as_printed: a.to_string(),
            resolved: r.to_string(),
        }
    });
    ParityReport {
        as_printed_mismatches: rows.iter().filter(|r| !r.as_printed_matches).count(),
        resolved_mismatches: rows.iter().filter(|r| !r.resolved_matches).count(),
        rows,
    }
}

/// `Σ_{O(m) ∪ D(m)} d^ℓ` over all cycle types.
pub fn superdim2_alt(m: u32, d: u64) -> BigInt {
    partitions(m)
        .iter()
        .filter(|l| schur_splits(l).splits)
        .map(|l| int_pow(&BigInt::from(d), l.num_cycles() as u64))
        .sum()
}

/// Integral of `d^{orbits}` over `L L BΣ_m`: classes of commuting pairs.
pub fn superdim2_sym(m: u32, d: u64) -> Result<BigInt> {
    let x = free_loops(&free_loops(&base_space(m), None), None);
    let q = groupoid_cardinality(&x, permutation_weight(d as i64));
    if !q.is_integer() {
        return Err(crate::Error::EngineDisagreement(format!(
            "commuting-pair integral is not integral: {q}"
        )));
    }
    Ok(q.to_integer())
}

/// Whether `m` is outside the regime `m ≥ 4` where the splitting criterion
/// is stated.
pub fn outside_regime(m: u32) -> bool {
    m < 4
}
