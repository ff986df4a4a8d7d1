//! Explicit finite permutation groups with full element enumeration.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::arith::{is_p_power, p_valuation};
use crate::error::{Error, Result};
use crate::perm::Perm;

pub const DEFAULT_ORDER_BOUND: u64 = 100_000;

static ORDER_BOUND: AtomicU64 = AtomicU64::new(DEFAULT_ORDER_BOUND);

/// Sets the process-wide bound on the order of any group we enumerate.
pub fn set_order_bound(bound: u64) {
    ORDER_BOUND.store(bound, Ordering::Relaxed);
}

pub fn order_bound() -> u64 {
    ORDER_BOUND.load(Ordering::Relaxed)
}

/// A conjugacy class: its minimal element, size, and centralizer order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: Perm,
    pub size: u64,
    pub centralizer_order: u64,
}

/// A finite group of permutations of `degree` points. Elements are kept in
/// canonical (sorted) order.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    classes: OnceLock<Vec<ConjugacyClass>>,
    class_of: OnceLock<Vec<usize>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            elements: self.elements.clone(),
            index: self.index.clone(),
            classes: OnceLock::new(),
            class_of: OnceLock::new(),
        }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(deg={}, order={}, gens={:?})", self.degree, self.order(), self.generators)
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

fn bound_error(order: usize) -> Error {
    Error::OrderBoundExceeded {
        order: format!(">{order}"),
        bound: order_bound(),
    }
}

/// Breadth-first closure of `seed` under right multiplication by `gens`.
fn close(seed: Vec<Perm>, gens: &[Perm], bound: u64) -> Result<Vec<Perm>> {
    let mut set: HashSet<Perm> = seed.iter().cloned().collect();
    let mut queue: VecDeque<Perm> = seed.into_iter().collect();
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g);
            if !set.contains(&y) {
                if set.len() as u64 >= bound {
                    return Err(bound_error(set.len()));
                }
                set.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<Perm> = set.into_iter().collect();
    v.sort_unstable();
    Ok(v)
}

impl PermGroup {
    /// The group generated by `generators`, enumerated by breadth-first closure.
    pub fn closure(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {g} has degree {} but the group has degree {degree}",
                    g.degree()
                )));
            }
        }
        let elements = close(vec![Perm::identity(degree)], &generators, order_bound())?;
        Ok(Self::assemble(degree, generators, elements))
    }

    fn assemble(degree: usize, generators: Vec<Perm>, elements: Vec<Perm>) -> Self {
        let index = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PermGroup {
            degree,
            generators,
            elements,
            index,
            classes: OnceLock::new(),
            class_of: OnceLock::new(),
        }
    }

    /// Wraps a list that is already known to be a subgroup, picking a small
    /// generating set greedily in canonical order.
    pub fn from_subgroup_elements(degree: usize, mut elements: Vec<Perm>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let mut gens: Vec<Perm> = Vec::new();
        let mut span: HashSet<Perm> = HashSet::from([Perm::identity(degree)]);
        for x in &elements {
            if span.contains(x) {
                continue;
            }
            gens.push(x.clone());
            let seed: Vec<Perm> = span.iter().cloned().collect();
            span = close(seed, &gens, u64::MAX)
                .expect("unbounded closure")
                .into_iter()
                .collect();
            if span.len() == elements.len() {
                break;
            }
        }
        Self::assemble(degree, gens, elements)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::assemble(degree, Vec::new(), vec![Perm::identity(degree)])
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[vec![0, 1]])?);
        }
        if n >= 3 {
            gens.push(Perm::from_cycles(n, &[(0..n as u32).collect()])?);
        }
        Self::closure(n, gens)
    }

    pub fn alternating(n: usize) -> Result<Self> {
        let gens = (2..n)
            .map(|k| Perm::from_cycles(n, &[vec![0, 1, k as u32]]))
            .collect::<Result<Vec<_>>>()?;
        Self::closure(n, gens)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n <= 1 {
            return Ok(Self::trivial(n.max(1)));
        }
        Self::closure(n, vec![Perm::from_cycles(n, &[(0..n as u32).collect()])?])
    }

    /// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> Result<Self> {
        let rot = Perm::from_cycles(n, &[(0..n as u32).collect()])?;
        let refl: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
        Self::closure(n, vec![rot, Perm::from_images(refl)?])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn order_big(&self) -> BigUint {
        BigUint::from(self.elements.len())
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.index.contains_key(g)
    }

    /// Position of `g` in the canonical element order.
    pub fn index_of(&self, g: &Perm) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.commutes_with(b)))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|g| other.contains(g))
    }

    /// Conjugacy classes in canonical order of their minimal elements.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        self.classes.get_or_init(|| self.compute_classes().0)
    }

    /// For each element index, the index of its conjugacy class.
    pub fn class_indices(&self) -> &[usize] {
        self.class_of.get_or_init(|| self.compute_classes().1)
    }

    pub fn class_of(&self, g: &Perm) -> Option<usize> {
        self.index_of(g).map(|i| self.class_indices()[i])
    }

    fn compute_classes(&self) -> (Vec<ConjugacyClass>, Vec<usize>) {
        let n = self.elements.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        let inverses: Vec<Perm> = self.generators.iter().map(Perm::inverse).collect();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            class_of[start] = cid;
            let mut queue = VecDeque::from([start]);
            let mut size = 1u64;
            while let Some(i) = queue.pop_front() {
                let x = &self.elements[i];
                for (g, ginv) in self.generators.iter().zip(&inverses) {
                    let y = g.compose(x).compose(ginv);
                    let j = self.index[&y];
                    if class_of[j] == usize::MAX {
                        class_of[j] = cid;
                        size += 1;
                        queue.push_back(j);
                    }
                }
            }
            classes.push(ConjugacyClass {
                representative: self.elements[start].clone(),
                size,
                centralizer_order: n as u64 / size,
            });
        }
        (classes, class_of)
    }

    /// `C_G(x)` as a subgroup on the same points.
    pub fn centralizer(&self, x: &Perm) -> PermGroup {
        let elems: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| g.commutes_with(x))
            .cloned()
            .collect();
        PermGroup::from_subgroup_elements(self.degree, elems)
    }

    /// Simultaneous centralizer of all entries of `xs`.
    pub fn centralizer_of_all(&self, xs: &[Perm]) -> PermGroup {
        let elems: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| xs.iter().all(|x| g.commutes_with(x)))
            .cloned()
            .collect();
        PermGroup::from_subgroup_elements(self.degree, elems)
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate(&self, g: &Perm) -> PermGroup {
        let elems = self.elements.iter().map(|h| h.conjugate_by(g)).collect();
        PermGroup::from_subgroup_elements(self.degree, elems)
    }

    pub fn intersection(&self, other: &PermGroup) -> PermGroup {
        let elems = self
            .elements
            .iter()
            .filter(|g| other.contains(g))
            .cloned()
            .collect();
        PermGroup::from_subgroup_elements(self.degree, elems)
    }

    /// All Sylow `p`-subgroups: one maximal `p`-subgroup grown greedily from
    /// `p`-elements, then its full conjugation orbit, in canonical order.
    pub fn sylow_subgroups(&self, p: u64) -> Result<Vec<PermGroup>> {
        let p_elements: Vec<&Perm> = self
            .elements
            .iter()
            .filter(|g| is_p_power(g.order(), p))
            .collect();
        let mut sylow = PermGroup::trivial(self.degree);
        loop {
            let mut grew = false;
            for x in &p_elements {
                if sylow.contains(x) {
                    continue;
                }
                let mut gens = sylow.generators.clone();
                gens.push((*x).clone());
                let candidate = PermGroup::closure(self.degree, gens)?;
                if is_p_power(candidate.order() as u64, p) {
                    sylow = candidate;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        debug_assert_eq!(
            p_valuation(&sylow.order_big(), p),
            p_valuation(&self.order_big(), p)
        );

        let mut seen: HashSet<Vec<Perm>> = HashSet::from([sylow.elements.clone()]);
        let mut orbit = vec![sylow];
        let mut i = 0;
        while i < orbit.len() {
            for g in &self.generators {
                let c = orbit[i].conjugate(g);
                if seen.insert(c.elements.clone()) {
                    orbit.push(c);
                }
            }
            i += 1;
        }
        orbit.sort_by(|a, b| a.elements.cmp(&b.elements));
        Ok(orbit)
    }

    /// Canonical group-spec string: degree plus sorted non-identity generators.
    pub fn spec_string(&self) -> String {
        let mut gens: Vec<&Perm> = self.generators.iter().filter(|g| !g.is_identity()).collect();
        gens.sort();
        gens.dedup();
        let gens: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        format!("deg={}; {}", self.degree, gens.join(", "))
    }
}

/// Parses a group spec.
///
/// Accepted forms are `deg=4; (0 1 2 3), (0 1)` and the named families
/// `S<n>`, `A<n>`, `Z<n>` (or `C<n>`), and `D<n>` (dihedral of order `2n`).
pub fn parse_group(spec: &str) -> Result<PermGroup> {
    let s = spec.trim();
    if let Some(rest) = s.strip_prefix("deg=").or_else(|| s.strip_prefix("deg =")) {
        let (deg, gens) = match rest.split_once(';') {
            Some((d, g)) => (d, g),
            None => (rest, ""),
        };
        let degree: usize = deg
            .trim()
            .parse()
            .map_err(|_| Error::GroupSpec(format!("bad degree in {spec:?}")))?;
        if degree == 0 {
            return Err(Error::GroupSpec("degree must be positive".into()));
        }
        let mut perms = Vec::new();
        for token in split_generators(gens) {
            perms.push(Perm::parse(degree, &token)?);
        }
        return PermGroup::closure(degree, perms);
    }
    let named = |prefix: &[&str]| -> Option<usize> {
        prefix.iter().find_map(|p| s.strip_prefix(p)).and_then(|n| n.parse().ok())
    };
    if let Some(n) = named(&["S", "Sym"]) {
        return PermGroup::symmetric(n.max(1));
    }
    if let Some(n) = named(&["A", "Alt"]) {
        return PermGroup::alternating(n.max(1));
    }
    if let Some(n) = named(&["Z", "C", "Z/"]) {
        return PermGroup::cyclic(n);
    }
    if let Some(n) = named(&["D"]) {
        if n < 3 {
            return Err(Error::GroupSpec("dihedral groups need n >= 3".into()));
        }
        return PermGroup::dihedral(n);
    }
    Err(Error::GroupSpec(format!("unrecognised group spec {spec:?}")))
}

/// Splits `"(0 1 2), (0 1)(2 3)"` on commas that sit outside parentheses.
fn split_generators(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c)
            }
            ')' => {
                depth -= 1;
                cur.push(c)
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out.into_iter()
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}
