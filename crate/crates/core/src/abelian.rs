//! Finite abelian groups in invariant-factor form, Smith normal form, and
//! root extensions `A⟨k; x⟩ = (A ⊕ Z) / ⟨(x, -k)⟩`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::is_p_power;

/// `Z/d_1 ⊕ … ⊕ Z/d_r` with `d_1 | d_2 | … | d_r`, every `d_i ≥ 2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianGroup {
    invariant_factors: Vec<u64>,
}

/// An element of an [`AbelianGroup`], one residue per invariant factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AbElement {
    pub coords: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_invariant_factors(if n <= 1 { vec![] } else { vec![n] })
            .expect("cyclic group")
    }

    /// Validates the divisibility chain.
    pub fn from_invariant_factors(factors: Vec<u64>) -> Option<Self> {
        if factors.iter().any(|&d| d < 2) {
            return None;
        }
        if factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return None;
        }
        Some(AbelianGroup {
            invariant_factors: factors,
        })
    }

    /// Normalises any list of cyclic orders into invariant-factor form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let n = orders.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, &d) in orders.iter().enumerate() {
            m[i][i] = d as i64;
        }
        let snf = smith_normal_form(&m);
        AbelianGroup {
            invariant_factors: snf.diagonal.into_iter().filter(|&d| d > 1).map(|d| d as u64).collect(),
        }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn zero(&self) -> AbElement {
        AbElement {
            coords: vec![0; self.rank()],
        }
    }

    pub fn contains(&self, x: &AbElement) -> bool {
        x.coords.len() == self.rank()
            && x.coords.iter().zip(&self.invariant_factors).all(|(&c, &d)| c < d)
    }

    /// All elements in lexicographic order of coordinates.
    pub fn elements(&self) -> Vec<AbElement> {
        let mut out = vec![self.zero()];
        for (i, &d) in self.invariant_factors.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for x in &out {
                for c in 0..d {
                    let mut y = x.clone();
                    y.coords[i] = c;
                    next.push(y);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    pub fn add(&self, a: &AbElement, b: &AbElement) -> AbElement {
        AbElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.invariant_factors)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        }
    }

    pub fn element_order(&self, x: &AbElement) -> u64 {
        x.coords
            .iter()
            .zip(&self.invariant_factors)
            .fold(1u64, |acc, (&c, &d)| acc.lcm(&(d / c.gcd(&d))))
    }

    pub fn is_p_power_element(&self, x: &AbElement, p: u64) -> bool {
        is_p_power(self.element_order(x), p)
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Display for AbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Smith normal form `U · M · V = D` of a square integer matrix; only the
/// diagonal and the column transform `V` are kept.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diagonal: Vec<i64>,
    pub col_transform: Vec<Vec<i64>>,
}

pub fn smith_normal_form(m: &[Vec<i64>]) -> Snf {
    let n = m.len();
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let mut v: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();

    for t in 0..n {
        loop {
            // Pivot: the nonzero entry of smallest absolute value.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    for i in t..n {
                        a[i][j] -= q * a[i][t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into row t and retry.
            let pivot = a[t][t];
            let offender = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % pivot != 0));
            match offender {
                Some(i) => {
                    for j in t..n {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for j in t..n {
                a[t][j] = -a[t][j];
            }
        }
    }
    Snf {
        diagonal: (0..n).map(|i| a[i][i]).collect(),
        col_transform: v,
    }
}

fn swap_cols(m: &mut [Vec<i64>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// `A⟨k; x⟩` together with the images of `A`'s generators and of the new
/// root in its invariant-factor coordinates.
#[derive(Clone, Debug)]
pub struct RootExtension {
    pub group: AbelianGroup,
    pub embedding: Vec<AbElement>,
    pub root: AbElement,
}

/// Adjoins a `k`-th root of `x` to the abelian group `a`:
/// `(A ⊕ Z) / ⟨(x, -k)⟩`, of order `k · |A|`.
pub fn root_extension(a: &AbelianGroup, x: &AbElement, k: u64) -> RootExtension {
    assert!(k >= 1, "root degree must be positive");
    assert!(a.contains(x), "element {x} not in {a}");
    let r = a.rank();
    let n = r + 1;
    let mut rel = vec![vec![0i64; n]; n];
    for (i, &d) in a.invariant_factors().iter().enumerate() {
        rel[i][i] = d as i64;
    }
    for (i, &c) in x.coords.iter().enumerate() {
        rel[r][i] = c as i64;
    }
    rel[r][r] = -(k as i64);
    let snf = smith_normal_form(&rel);
    let kept: Vec<usize> = (0..n).filter(|&i| snf.diagonal[i] > 1).collect();
    let group = AbelianGroup {
        invariant_factors: kept.iter().map(|&i| snf.diagonal[i] as u64).collect(),
    };
    let image = |row: usize| AbElement {
        coords: kept
            .iter()
            .map(|&i| snf.col_transform[row][i].rem_euclid(snf.diagonal[i]) as u64)
            .collect(),
    };
    RootExtension {
        embedding: (0..r).map(image).collect(),
        root: image(r),
        group,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab(f: &[u64]) -> AbelianGroup {
        AbelianGroup::from_invariant_factors(f.to_vec()).unwrap()
    }

    #[test]
    fn root_extension_examples() {
        let z2 = ab(&[2]);
        let e = root_extension(&z2, &AbElement { coords: vec![1] }, 2);
        assert_eq!(e.group.invariant_factors(), &[4]);
        let e = root_extension(&AbelianGroup::trivial(), &AbElement { coords: vec![] }, 5);
        assert_eq!(e.group.invariant_factors(), &[5]);
        let e = root_extension(&ab(&[3]), &AbElement { coords: vec![0] }, 2);
        assert_eq!(e.group.invariant_factors(), &[6]);
        let e = root_extension(&ab(&[2]), &AbElement { coords: vec![0] }, 2);
        assert_eq!(e.group.invariant_factors(), &[2, 2]);
    }

    #[test]
    fn root_is_a_kth_root() {
        // In A⟨k;x⟩ the root r satisfies k·r = image of x.
        let a = ab(&[2, 4]);
        for x in a.elements() {
            for k in 1..5u64 {
                let ext = root_extension(&a, &x, k);
                let mut kr = ext.group.zero();
                for _ in 0..k {
                    kr = ext.group.add(&kr, &ext.root);
                }
                let mut img = ext.group.zero();
                for (i, &c) in x.coords.iter().enumerate() {
                    for _ in 0..c {
                        img = ext.group.add(&img, &ext.embedding[i]);
                    }
                }
                assert_eq!(kr, img, "x={x} k={k}");
            }
        }
    }

    #[test]
    fn invariant_form_normalisation() {
        assert_eq!(AbelianGroup::from_cyclic_orders(&[2, 3]).invariant_factors(), &[6]);
        assert_eq!(AbelianGroup::from_cyclic_orders(&[4, 2]).invariant_factors(), &[2, 4]);
        assert_eq!(AbelianGroup::from_cyclic_orders(&[1, 1]).invariant_factors(), &[] as &[u64]);
        assert!(AbelianGroup::from_invariant_factors(vec![4, 2]).is_none());
    }

    #[test]
    fn element_orders() {
        let a = ab(&[2, 6]);
        assert_eq!(a.element_order(&AbElement { coords: vec![1, 2] }), 6);
        assert_eq!(a.element_order(&AbElement { coords: vec![0, 3] }), 2);
        assert!(a.is_p_power_element(&AbElement { coords: vec![1, 3] }, 2));
        assert_eq!(a.elements().len(), 12);
    }

    proptest! {
        #[test]
        fn root_extension_order(f in prop::collection::vec(1u64..4, 0..3), k in 1u64..7, seed in 0u64..1000) {
            let a = AbelianGroup::from_cyclic_orders(&f.iter().map(|x| x + 1).collect::<Vec<_>>());
            let elems = a.elements();
            let x = &elems[(seed as usize) % elems.len()];
            let ext = root_extension(&a, x, k);
            prop_assert_eq!(ext.group.order(), k * a.order());
            for w in ext.group.invariant_factors().windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
    }
}
