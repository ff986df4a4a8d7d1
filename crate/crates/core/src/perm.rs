//! Permutations of `{0, …, n-1}` and disjoint-cycle notation.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm_core::CycleType;

/// A permutation given by the image of each point. The derived ordering
/// (lexicographic on images) is the canonical element ordering used for
/// minimal representatives; the identity is its least element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `n` points from a list of cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a as usize >= n || b as usize >= n {
                    return Err(Error::InvalidPermutation(format!(
                        "point out of range in cycle {cycle:?} for degree {n}"
                    )));
                }
                if touched[a as usize] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {a} appears twice in {cycles:?}"
                    )));
                }
                touched[a as usize] = true;
                images[a as usize] = b;
            }
        }
        Perm::from_images(images)
    }

    /// Parses disjoint-cycle notation such as `(0 1 2)(3 4)`; `()` or `e` is
    /// the identity. Commas inside a cycle are accepted as separators.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "id" {
            return Ok(Perm::identity(n));
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidPermutation(format!("expected '(' in {s:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::InvalidPermutation(format!("unbalanced parentheses in {s:?}")))?;
            let body = &open[..close];
            let points = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad point {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = open[close + 1..].trim_start();
        }
        Perm::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Function composition: `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.compose(self).compose(&g.inverse())
    }

    pub fn pow(&self, k: u64) -> Perm {
        let mut out = Perm::identity(self.degree());
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.images
            .iter()
            .zip(other.images.iter())
            .all(|(&a, &b)| self.images[b as usize] == other.images[a as usize])
    }

    /// Disjoint cycles, each starting at its minimal point, ordered by that
    /// point. Fixed points are included as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start as u32;
            while !seen[i as usize] {
                seen[i as usize] = true;
                cycle.push(i);
                i = self.images[i as usize];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::new(self.cycles().iter().map(|c| c.len() as u32).collect())
            .expect("cycles are nonempty")
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1, |acc, c| crate::arith::lcm(acc, c.len() as u64))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Deserializes from an image array; cycle strings need the degree and are
/// parsed with [`Perm::parse`] instead.
impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<u32>::deserialize(d)?;
        Perm::from_images(images).map_err(serde::de::Error::custom)
    }
}

/// Number of orbits of `⟨elements⟩` on the `degree` points.
pub fn orbit_count(elements: &[Perm], degree: usize) -> usize {
    let mut parent: Vec<usize> = (0..degree).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut count = degree;
    for g in elements {
        for i in 0..degree {
            let a = find(&mut parent, i);
            let b = find(&mut parent, g.apply(i as u32) as usize);
            if a != b {
                parent[a.max(b)] = a.min(b);
                count -= 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = Perm::parse(5, "(0 1 2)(3 4)").unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(Perm::parse(3, "()").unwrap(), Perm::identity(3));
        assert!(Perm::parse(3, "(0 3)").is_err());
        assert!(Perm::parse(3, "(0 1)(1 2)").is_err());
        assert!(Perm::parse(3, "(0 1").is_err());
    }

    #[test]
    fn composition_applies_right_first() {
        let a = Perm::parse(3, "(0 1)").unwrap();
        let b = Perm::parse(3, "(1 2)").unwrap();
        // b sends 1 -> 2, a fixes 2.
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(a.compose(&a.inverse()), Perm::identity(3));
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(orbit_count(&[Perm::identity(5)], 5), 5);
        assert_eq!(orbit_count(&[Perm::parse(4, "(0 1 2 3)").unwrap()], 4), 1);
        let a = Perm::parse(4, "(0 1)(2 3)").unwrap();
        let b = Perm::parse(4, "(0 2)(1 3)").unwrap();
        assert_eq!(orbit_count(std::slice::from_ref(&a), 4), 2);
        assert_eq!(orbit_count(&[a, b], 4), 1);
    }

    #[test]
    fn order_and_type() {
        let p = Perm::parse(6, "(0 1 2 3)(4 5)").unwrap();
        assert_eq!(p.order(), 4);
        assert_eq!(p.cycle_type().parts(), &[4, 2]);
        assert!(p.pow(4).is_identity());
    }
}
