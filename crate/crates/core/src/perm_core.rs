//! Partitions, cycle types, and conjugacy data of symmetric groups.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{factorial, is_p_power};

/// The cycle type of a permutation of `m` points: a partition of `m` with
/// parts stored in descending order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<u32>,
}

impl CycleType {
    /// Builds a cycle type from parts in any order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Option<Self> {
        if parts.contains(&0) {
            return None;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(CycleType { parts })
    }

    pub fn identity(m: u32) -> Self {
        CycleType {
            parts: vec![1; m as usize],
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The degree `m`.
    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of cycles, including fixed points.
    pub fn num_cycles(&self) -> usize {
        self.parts.len()
    }

    /// Multiplicities `k ↦ N_k` of each cycle length that occurs.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut out = BTreeMap::new();
        for &k in &self.parts {
            *out.entry(k).or_insert(0) += 1;
        }
        out
    }

    /// `∏_k k^{N_k} · N_k!`, the order of the centralizer of any permutation
    /// with this cycle type.
    pub fn centralizer_order(&self) -> BigUint {
        self.multiplicities()
            .into_iter()
            .fold(BigUint::from(1u32), |acc, (k, n)| {
                acc * BigUint::from(k).pow(n) * factorial(n as u64)
            })
    }

    /// Size of the conjugacy class in `S_m`.
    pub fn class_size(&self) -> BigUint {
        factorial(self.degree() as u64) / self.centralizer_order()
    }

    pub fn is_p_power_type(&self, p: u64) -> bool {
        self.parts.iter().all(|&k| is_p_power(k as u64, p))
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        if (self.degree() as usize - self.parts.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn has_distinct_parts(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] != w[1])
    }

    pub fn even_parts(&self) -> usize {
        self.parts.iter().filter(|&&k| k % 2 == 0).count()
    }

    /// Order of any permutation of this type (lcm of the parts).
    pub fn element_order(&self) -> u64 {
        self.parts
            .iter()
            .fold(1u64, |acc, &k| crate::arith::lcm(acc, k as u64))
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, k) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for CycleType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycleType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        CycleType::new(parts).ok_or_else(|| serde::de::Error::custom("cycle lengths must be positive"))
    }
}

/// All partitions of `m` in reverse-lexicographic order, e.g.
/// `[3], [2,1], [1,1,1]` for `m = 3`.
pub fn partitions(m: u32) -> Vec<CycleType> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(m, m, &mut current, &mut out);
    out
}

fn fill(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<CycleType>) {
    if remaining == 0 {
        out.push(CycleType {
            parts: current.clone(),
        });
        return;
    }
    for k in (1..=remaining.min(max_part)).rev() {
        current.push(k);
        fill(remaining - k, k, current, out);
        current.pop();
    }
}

pub fn num_cycles(lambda: &CycleType) -> usize {
    lambda.num_cycles()
}

pub fn centralizer_order(lambda: &CycleType) -> BigUint {
    lambda.centralizer_order()
}

pub fn is_p_power_type(lambda: &CycleType, p: u64) -> bool {
    lambda.is_p_power_type(p)
}
