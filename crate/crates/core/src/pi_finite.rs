//! Formal 1-finite spaces `⊔ B(∏_j A_j ≀ S_{n_j})` with abelian `A_j`, closed
//! under free loops `L` and `p`-typical loops `L_p`.
//!
//! A loop of `B(A ≀ S_n)` is a conjugacy class of `A ≀ S_n`: a cycle type
//! `τ ⊢ n` and, for each cycle length `k`, a multiset of `N_k(τ)` elements of
//! `A` (the cycle products). Its centralizer is
//! `∏_k ∏_x A⟨k; x⟩ ≀ S_{mult(x)}`. The sum of the `mult`s is the number of
//! orbits of the accumulated `Z^t`-action on the original points.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::abelian::{root_extension, AbElement, AbelianGroup};
use crate::arith::{factorial, is_p_power, recip, Rational};
use crate::cyclotomic::CycValue;
use crate::par;
use crate::perm_core::{partitions, CycleType};

/// `A ≀ S_n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct WreathFactor {
    pub base: AbelianGroup,
    pub mult: u32,
}

impl WreathFactor {
    pub fn order(&self) -> BigUint {
        BigUint::from(self.base.order()).pow(self.mult) * factorial(self.mult as u64)
    }
}

/// One connected component `B(∏_j A_j ≀ S_{n_j})`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    pub factors: Vec<WreathFactor>,
    pub sign: i8,
    pub orbit_degree: u32,
    pub group_order: BigUint,
    pub provenance: Vec<String>,
}

impl Component {
    fn new(factors: Vec<WreathFactor>, sign: i8, provenance: Vec<String>) -> Self {
        let factors: Vec<WreathFactor> = factors.into_iter().filter(|f| f.mult > 0).collect();
        let orbit_degree = factors.iter().map(|f| f.mult).sum();
        let group_order = factors.iter().map(WreathFactor::order).product();
        Component {
            factors,
            sign,
            orbit_degree,
            group_order,
            provenance,
        }
    }
}

impl Serialize for Component {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Component", 5)?;
        st.serialize_field("factors", &self.factors)?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("orbit_degree", &self.orbit_degree)?;
        st.serialize_field("group_order", &self.group_order.to_string())?;
        st.serialize_field("provenance", &self.provenance)?;
        st.end()
    }
}

/// A formal disjoint union of components, sorted by provenance.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PiFiniteType {
    pub components: Vec<Component>,
}

impl PiFiniteType {
    fn from_components(mut components: Vec<Component>) -> Self {
        components.sort_by(|a, b| a.provenance.cmp(&b.provenance));
        debug_assert!(components.windows(2).all(|w| w[0].provenance != w[1].provenance));
        PiFiniteType { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// `BΣ_m`: one component `B(1 ≀ S_m)` with orbit degree `m`.
pub fn base_space(m: u32) -> PiFiniteType {
    PiFiniteType::from_components(vec![Component::new(
        vec![WreathFactor {
            base: AbelianGroup::trivial(),
            mult: m,
        }],
        1,
        Vec::new(),
    )])
}

/// `B(A ≀ S_n)` as a single-component space.
pub fn wreath_space(base: AbelianGroup, n: u32) -> PiFiniteType {
    PiFiniteType::from_components(vec![Component::new(
        vec![WreathFactor { base, mult: n }],
        1,
        Vec::new(),
    )])
}

/// One loop choice for a single wreath factor.
struct FactorLoop {
    factors: Vec<WreathFactor>,
    label: String,
}

/// Multisets of size `size` drawn from `0..n`, as sorted index vectors.
fn multisets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

fn factor_loops(factor: &WreathFactor, p: Option<u64>) -> Vec<FactorLoop> {
    let a = &factor.base;
    let elements: Vec<AbElement> = a
        .elements()
        .into_iter()
        .filter(|x| p.is_none_or(|p| a.is_p_power_element(x, p)))
        .collect();
    let mut out = Vec::new();
    for tau in partitions(factor.mult) {
        if let Some(p) = p {
            if !tau.is_p_power_type(p) {
                continue;
            }
        }
        // Per cycle length: every multiset of cycle products.
        let mut partial: Vec<(Vec<WreathFactor>, Vec<String>)> = vec![(Vec::new(), Vec::new())];
        for (k, nk) in tau.multiplicities().into_iter().rev() {
            let mut next = Vec::new();
            for ms in multisets(elements.len(), nk as usize) {
                let mut groups: Vec<(usize, u32)> = Vec::new();
                for &i in &ms {
                    match groups.last_mut() {
                        Some((j, c)) if *j == i => *c += 1,
                        _ => groups.push((i, 1)),
                    }
                }
                let new_factors: Vec<WreathFactor> = groups
                    .iter()
                    .map(|&(i, c)| WreathFactor {
                        base: root_extension(a, &elements[i], k as u64).group,
                        mult: c,
                    })
                    .collect();
                let label = format!(
                    "{k}:{}",
                    ms.iter().map(|&i| elements[i].to_string()).collect::<String>()
                );
                for (fs, ls) in &partial {
                    let mut fs = fs.clone();
                    fs.extend(new_factors.iter().cloned());
                    let mut ls = ls.clone();
                    ls.push(label.clone());
                    next.push((fs, ls));
                }
            }
            partial = next;
        }
        for (fs, ls) in partial {
            out.push(FactorLoop {
                factors: fs,
                label: format!("{tau}{{{}}}", ls.join(";")),
            });
        }
    }
    out
}

fn component_loops(c: &Component, p: Option<u64>) -> Vec<Component> {
    let mut partial: Vec<(Vec<WreathFactor>, Vec<String>)> = vec![(Vec::new(), Vec::new())];
    for f in &c.factors {
        let options = factor_loops(f, p);
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for (fs, ls) in &partial {
            for o in &options {
                let mut fs = fs.clone();
                fs.extend(o.factors.iter().cloned());
                let mut ls = ls.clone();
                ls.push(o.label.clone());
                next.push((fs, ls));
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|(fs, ls)| {
            let mut prov = c.provenance.clone();
            prov.push(if ls.is_empty() { "*".to_string() } else { ls.join("x") });
            Component::new(fs, c.sign, prov)
        })
        .collect()
}

/// `L X`, or `L_p X` when `p` is given (only `p`-power cycle lengths and
/// cycle products of `p`-power order).
pub fn free_loops(x: &PiFiniteType, p: Option<u64>) -> PiFiniteType {
    PiFiniteType::from_components(par::flat_map(&x.components, |c| component_loops(c, p)))
}

/// `L_p^t L BΣ_m`.
pub fn loop_tower(m: u32, p: u64, t: usize) -> PiFiniteType {
    let mut x = free_loops(&base_space(m), None);
    for _ in 0..t {
        x = free_loops(&x, Some(p));
    }
    x
}

/// `Σ_c sign(c) · weight(c) / |π_1(c)|`.
pub fn groupoid_cardinality<F>(x: &PiFiniteType, weight: F) -> Rational
where
    F: Fn(&Component) -> Rational + Sync + Send,
{
    par::map(&x.components, |c| {
        Rational::from_integer(c.sign.into()) * weight(c) * recip(&c.group_order)
    })
    .into_iter()
    .fold(Rational::zero(), |a, b| a + b)
}

/// Cyclotomic-valued variant of [`groupoid_cardinality`].
pub fn groupoid_cardinality_cyc<F>(x: &PiFiniteType, weight: F) -> CycValue
where
    F: Fn(&Component) -> CycValue + Sync + Send,
{
    par::map(&x.components, |c| {
        let scale = Rational::from_integer(c.sign.into()) * recip(&c.group_order);
        weight(c).scale(&scale)
    })
    .into_iter()
    .sum()
}

/// `d^{orbit_degree}` as a weight, for the permutation character.
pub fn permutation_weight(d: i64) -> impl Fn(&Component) -> Rational + Sync + Send {
    move |c| Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(d), c.orbit_degree as usize))
}

/// Multiset of `(group_order, orbit_degree)` over components, sorted.
pub fn order_degree_profile(x: &PiFiniteType) -> Vec<(BigUint, u32)> {
    let mut v: Vec<_> = x
        .components
        .iter()
        .map(|c| (c.group_order.clone(), c.orbit_degree))
        .collect();
    v.sort();
    v
}

/// Group orders of the components of `L B(G ≀ S_m)` for an arbitrary finite
/// group `G`, one per conjugacy class of the wreath product.
pub fn wreath_loop_orders(g: &crate::group::PermGroup, m: u32) -> Vec<BigUint> {
    crate::wreath::wreath_class_table(g, m)
        .into_iter()
        .map(|(_, order)| order)
        .collect()
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fs: Vec<String> = self
            .factors
            .iter()
            .map(|w| format!("({})wrS{}", w.base, w.mult))
            .collect();
        write!(
            f,
            "{}B[{}] |pi1|={} orbits={}",
            if self.sign < 0 { "-" } else { "" },
            fs.join(" x "),
            self.group_order,
            self.orbit_degree
        )
    }
}

/// Checks `p`-typicality for an individual cycle type (used by callers that
/// filter `π_0 L BΣ_m` directly).
pub fn is_p_typical(tau: &CycleType, p: u64) -> bool {
    tau.parts().iter().all(|&k| is_p_power(k as u64, p))
}

/// `∫ 1` over a single-component `B(A ≀ S_n)` loop space; always `1`.
pub fn loop_mass(base: AbelianGroup, n: u32) -> Rational {
    groupoid_cardinality(&free_loops(&wreath_space(base, n), None), |_| Rational::one())
}
