//! Conjugacy classes and centralizer orders of `G ≀ S_m`.
//!
//! A class is labelled by the cycle type of its `S_m` part together with,
//! for each cycle length `k`, the multiset of `G`-classes of the cycle
//! products. The centralizer order is
//! `∏_k ∏_x (k · |C_G(x)|)^{mult(x)} · mult(x)!`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::par;
use crate::perm::Perm;
use crate::perm_core::{partitions, CycleType};

/// Label of a class of `G ≀ S_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathClassLabel {
    pub cycle_type: CycleType,
    /// Cycle length `k` ↦ sorted indices into `G.conjugacy_classes()`, one
    /// per `k`-cycle.
    pub assignments: BTreeMap<u32, Vec<usize>>,
}

impl WreathClassLabel {
    /// JSON form with class representatives spelled out.
    pub fn describe(&self, g: &PermGroup) -> LabelView {
        let classes = g.conjugacy_classes();
        LabelView {
            cycle_type: self.cycle_type.clone(),
            assignments: self
                .assignments
                .iter()
                .map(|(k, v)| {
                    (
                        k.to_string(),
                        v.iter().map(|&i| classes[i].representative.to_string()).collect(),
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LabelView {
    pub cycle_type: CycleType,
    pub assignments: BTreeMap<String, Vec<String>>,
}

fn multisets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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
    go(0, n, size, &mut cur, &mut out);
    out
}

fn label_centralizer_order(g: &PermGroup, label: &WreathClassLabel) -> BigUint {
    let classes = g.conjugacy_classes();
    let mut order = BigUint::from(1u32);
    for (&k, ms) in &label.assignments {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for &c in ms {
            *counts.entry(c).or_insert(0) += 1;
        }
        for (c, mult) in counts {
            let base = BigUint::from(k as u64 * classes[c].centralizer_order);
            order *= base.pow(mult) * factorial(mult as u64);
        }
    }
    order
}

/// Every class of `G ≀ S_m` with its centralizer order, from the formula.
pub fn wreath_class_table(g: &PermGroup, m: u32) -> Vec<(WreathClassLabel, BigUint)> {
    let nclasses = g.conjugacy_classes().len();
    let types = partitions(m);
    let mut out = par::flat_map(&types, |tau| {
        let mut labels = vec![BTreeMap::new()];
        for (k, nk) in tau.multiplicities() {
            let options = multisets(nclasses, nk as usize);
            labels = labels
                .into_iter()
                .flat_map(|base: BTreeMap<u32, Vec<usize>>| {
                    options.iter().map(move |ms| {
                        let mut b = base.clone();
                        b.insert(k, ms.clone());
                        b
                    })
                })
                .collect();
        }
        labels
            .into_iter()
            .map(|assignments| {
                let label = WreathClassLabel {
                    cycle_type: tau.clone(),
                    assignments,
                };
                let order = label_centralizer_order(g, &label);
                (label, order)
            })
            .collect()
    });
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// An element `(h_0, …, h_{m-1}; σ)` of `G ≀ S_m`, acting on block `i`
/// by `h_i` and then moving it to block `σ(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathElement {
    pub base: Vec<Perm>,
    pub top: Perm,
}

impl WreathElement {
    /// The imprimitive permutation on `m · deg(G)` points.
    pub fn to_permutation(&self, g_degree: usize) -> Perm {
        let m = self.top.degree();
        let mut images = vec![0u32; m * g_degree];
        for i in 0..m {
            let target = self.top.apply(i as u32) as usize;
            for x in 0..g_degree {
                images[i * g_degree + x] = (target * g_degree) as u32 + self.base[i].apply(x as u32);
            }
        }
        Perm::from_images(images).expect("wreath element is a bijection")
    }
}

/// `G ≀ S_m` as a permutation group on `m · deg(G)` points.
pub fn wreath_product(g: &PermGroup, m: u32) -> Result<PermGroup> {
    let deg = g.degree();
    let m = m as usize;
    let id = g.identity();
    let mut gens = Vec::new();
    for h in g.generators() {
        let mut base = vec![id.clone(); m];
        base[0] = h.clone();
        gens.push(
            WreathElement {
                base,
                top: Perm::identity(m),
            }
            .to_permutation(deg),
        );
    }
    if m >= 2 {
        for top in [
            Perm::from_cycles(m, &[vec![0, 1]])?,
            Perm::from_cycles(m, &[(0..m as u32).collect()])?,
        ] {
            gens.push(
                WreathElement {
                    base: vec![id.clone(); m],
                    top,
                }
                .to_permutation(deg),
            );
        }
    }
    PermGroup::closure((m * deg).max(1), gens)
}

/// Label of an imprimitive permutation of `m · deg(G)` points that
/// preserves the blocks.
pub fn classify_permutation(g: &PermGroup, m: u32, perm: &Perm) -> Result<WreathClassLabel> {
    let deg = g.degree();
    let m = m as usize;
    let block_images: Vec<u32> = (0..m)
        .map(|i| perm.apply((i * deg) as u32) / deg as u32)
        .collect();
    let top = Perm::from_images(block_images)
        .map_err(|_| Error::Invalid("permutation does not preserve the block system".into()))?;
    let mut assignments: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for cycle in top.cycles() {
        let b = cycle[0] as usize;
        let k = cycle.len();
        // π^k restricted to block b, read as a permutation of G's points.
        let mut images = Vec::with_capacity(deg);
        for x in 0..deg {
            let mut pt = (b * deg + x) as u32;
            for _ in 0..k {
                pt = perm.apply(pt);
            }
            images.push(pt - (b * deg) as u32);
        }
        let product = Perm::from_images(images)?;
        let class = g
            .class_of(&product)
            .ok_or_else(|| Error::Invalid(format!("cycle product {product} is not in G")))?;
        assignments.entry(k as u32).or_default().push(class);
    }
    for v in assignments.values_mut() {
        v.sort_unstable();
    }
    Ok(WreathClassLabel {
        cycle_type: top.cycle_type(),
        assignments,
    })
}

/// Label of `(h; σ)`: cycle products taken along each cycle of `σ` from its
/// minimal point, recorded up to `G`-conjugacy.
pub fn classify_element(g: &PermGroup, m: u32, element: &WreathElement) -> Result<WreathClassLabel> {
    if element.base.len() != m as usize || element.top.degree() != m as usize {
        return Err(Error::Invalid("wreath element has the wrong shape".into()));
    }
    if let Some(h) = element.base.iter().find(|h| !g.contains(h)) {
        return Err(Error::Invalid(format!("{h} is not in G")));
    }
    classify_permutation(g, m, &element.to_permutation(g.degree()))
}

/// Outcome of comparing the formula table with brute force on the explicit
/// wreath product.
#[derive(Clone, Debug, Serialize)]
pub struct WreathVerification {
    pub wreath_order: String,
    pub formula_classes: usize,
    pub brute_force_classes: usize,
    pub centralizers_match: bool,
    pub labels_bijective: bool,
    pub classify_invariant: bool,
    pub mass_is_one: bool,
}

impl WreathVerification {
    pub fn passed(&self) -> bool {
        self.formula_classes == self.brute_force_classes
            && self.centralizers_match
            && self.labels_bijective
            && self.classify_invariant
            && self.mass_is_one
    }
}

pub fn verify_wreath_table(g: &PermGroup, m: u32) -> Result<WreathVerification> {
    let table = wreath_class_table(g, m);
    let big = wreath_product(g, m)?;
    let formula: HashMap<&WreathClassLabel, &BigUint> = table.iter().map(|(l, o)| (l, o)).collect();

    let mut labels_bijective = true;
    let mut centralizers_match = true;
    let mut seen = HashMap::new();
    let mut rep_labels = Vec::new();
    for class in big.conjugacy_classes() {
        let label = classify_permutation(g, m, &class.representative)?;
        match formula.get(&label) {
            Some(&o) => centralizers_match &= *o == BigUint::from(class.centralizer_order),
            None => labels_bijective = false,
        }
        labels_bijective &= seen.insert(label.clone(), ()).is_none();
        rep_labels.push(label);
    }
    labels_bijective &= seen.len() == table.len();

    let class_idx = big.class_indices();
    let mut classify_invariant = true;
    for (i, x) in big.elements().iter().enumerate() {
        let label = classify_permutation(g, m, x)?;
        classify_invariant &= label == rep_labels[class_idx[i]];
    }

    let mass: crate::arith::Rational = table
        .iter()
        .map(|(_, o)| crate::arith::recip(o))
        .fold(crate::arith::rat(0), |a, b| a + b);

    Ok(WreathVerification {
        wreath_order: big.order().to_string(),
        formula_classes: table.len(),
        brute_force_classes: big.conjugacy_classes().len(),
        centralizers_match,
        labels_bijective,
        classify_invariant,
        mass_is_one: mass == crate::arith::rat(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, recip};

    #[test]
    fn trivial_base_reduces_to_symmetric_group() {
        let g = PermGroup::trivial(1);
        for m in 1..7u32 {
            let table = wreath_class_table(&g, m);
            let parts = partitions(m);
            assert_eq!(table.len(), parts.len());
            for (label, order) in &table {
                assert_eq!(*order, label.cycle_type.centralizer_order());
            }
        }
    }

    #[test]
    fn z2_wr_s2_is_dihedral() {
        let z2 = PermGroup::cyclic(2).unwrap();
        let table = wreath_class_table(&z2, 2);
        let mut orders: Vec<u64> = table.iter().map(|(_, o)| o.to_string().parse().unwrap()).collect();
        orders.sort();
        assert_eq!(orders, vec![4, 4, 4, 8, 8]);
        let mass = table.iter().fold(rat(0), |a, (_, o)| a + recip(o));
        assert_eq!(mass, rat(1));
    }

    #[test]
    fn classify_examples() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let id = WreathElement {
            base: vec![s3.identity(); 2],
            top: Perm::identity(2),
        };
        let l = classify_element(&s3, 2, &id).unwrap();
        assert_eq!(l.cycle_type.parts(), &[1, 1]);
        assert_eq!(l.assignments[&1], vec![0, 0]);

        let g = Perm::parse(3, "(0 1 2)").unwrap();
        let swap = WreathElement {
            base: vec![g.clone(), g.inverse()],
            top: Perm::parse(2, "(0 1)").unwrap(),
        };
        let l = classify_element(&s3, 2, &swap).unwrap();
        assert_eq!(l.cycle_type.parts(), &[2]);
        assert_eq!(l.assignments[&2], vec![0]);
    }

    #[test]
    fn small_tables_match_brute_force() {
        for (g, m) in [
            (PermGroup::cyclic(2).unwrap(), 2),
            (PermGroup::cyclic(3).unwrap(), 2),
            (PermGroup::symmetric(3).unwrap(), 2),
        ] {
            let v = verify_wreath_table(&g, m).unwrap();
            assert!(v.passed(), "{v:?}");
        }
    }
}
