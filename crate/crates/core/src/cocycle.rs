//! Normalized `Q/Z`-valued cochains on finite groups (trivial action),
//! coboundaries, and transgression along a loop element.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{parse_group, PermGroup};
use crate::perm::Perm;

/// Largest cochain table we are willing to materialise.
pub const MAX_TABLE_ENTRIES: usize = 1 << 22;

/// A reduced fraction `a/b` with `0 ≤ a < b`, read modulo 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QmodZ {
    num: u64,
    den: u64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0);
        let n = num.rem_euclid(den as i64) as u64;
        let g = n.gcd(&den);
        if n == 0 {
            return Self::ZERO;
        }
        QmodZ {
            num: n / g,
            den: den / g,
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn times(self, k: i64) -> Self {
        QmodZ::new((self.num as i64) * k, self.den)
    }

    pub fn parse(s: &str) -> Option<Self> {
        let q = crate::arith::parse_rational(s)?;
        let num: i64 = q.numer().try_into().ok()?;
        let den: u64 = q.denom().try_into().ok()?;
        Some(QmodZ::new(num, den))
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, o: QmodZ) -> QmodZ {
        let den = self.den.lcm(&o.den);
        QmodZ::new(
            (self.num * (den / self.den) + o.num * (den / o.den)) as i64,
            den,
        )
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(-(self.num as i64), self.den)
    }
}

impl Sub for QmodZ {
    type Output = QmodZ;
    fn sub(self, o: QmodZ) -> QmodZ {
        self + (-o)
    }
}

impl std::iter::Sum for QmodZ {
    fn sum<I: Iterator<Item = QmodZ>>(iter: I) -> QmodZ {
        iter.fold(QmodZ::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A permutation group together with its multiplication table, shared by
/// every cochain on it.
pub struct CochainGroup {
    group: PermGroup,
    mul: Vec<u32>,
    identity: usize,
}

impl CochainGroup {
    pub fn new(group: PermGroup) -> Arc<Self> {
        let n = group.order();
        let els = group.elements();
        let mut mul = vec![0u32; n * n];
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                mul[i * n + j] = group.index_of(&a.compose(b)).expect("closed under products") as u32;
            }
        }
        let identity = group.index_of(&group.identity()).expect("identity present");
        Arc::new(CochainGroup { group, mul, identity })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn index(&self, g: &Perm) -> Result<usize> {
        self.group
            .index_of(g)
            .ok_or_else(|| Error::Invalid(format!("{g} is not an element of the group")))
    }
}

/// A normalized inhomogeneous `n`-cochain `G^n → Q/Z`, stored densely.
#[derive(Clone)]
pub struct Cochain {
    group: Arc<CochainGroup>,
    degree: usize,
    table: Vec<QmodZ>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain(deg={}, |G|={}, nonzero={})", self.degree, self.group.order(),
            self.table.iter().filter(|v| !v.is_zero()).count())
    }
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.group.group() == other.group.group()
            && self.table == other.table
    }
}

fn table_len(order: usize, degree: usize) -> Result<usize> {
    let mut len = 1usize;
    for _ in 0..degree {
        len = len
            .checked_mul(order)
            .filter(|&l| l <= MAX_TABLE_ENTRIES)
            .ok_or_else(|| Error::Invalid(format!("cochain table of {order}^{degree} entries is too large")))?;
    }
    Ok(len)
}

impl Cochain {
    pub fn zero(group: Arc<CochainGroup>, degree: usize) -> Result<Self> {
        let len = table_len(group.order(), degree)?;
        Ok(Cochain {
            group,
            degree,
            table: vec![QmodZ::ZERO; len],
        })
    }

    /// Builds a cochain from a function of element indices. Values on tuples
    /// containing the identity are forced to zero.
    pub fn from_fn(group: Arc<CochainGroup>, degree: usize, mut f: impl FnMut(&[usize]) -> QmodZ) -> Result<Self> {
        let mut c = Cochain::zero(group, degree)?;
        let n = c.group.order();
        let e = c.group.identity();
        let mut args = vec![0usize; degree];
        for idx in 0..c.table.len() {
            decode(idx, n, &mut args);
            if !args.contains(&e) {
                c.table[idx] = f(&args);
            }
        }
        Ok(c)
    }

    pub fn group(&self) -> &Arc<CochainGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn get(&self, args: &[usize]) -> QmodZ {
        debug_assert_eq!(args.len(), self.degree);
        let n = self.group.order();
        let idx = args.iter().fold(0usize, |acc, &a| acc * n + a);
        self.table[idx]
    }

    pub fn get_perms(&self, args: &[Perm]) -> Result<QmodZ> {
        let idx = args.iter().map(|g| self.group.index(g)).collect::<Result<Vec<_>>>()?;
        Ok(self.get(&idx))
    }

    pub fn set(&mut self, args: &[usize], value: QmodZ) -> Result<()> {
        if args.contains(&self.group.identity()) && !value.is_zero() {
            return Err(Error::Invalid("cochains are normalized: identity arguments must map to 0".into()));
        }
        let n = self.group.order();
        let idx = args.iter().fold(0usize, |acc, &a| acc * n + a);
        self.table[idx] = value;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(QmodZ::is_zero)
    }

    pub fn is_normalized(&self) -> bool {
        let n = self.group.order();
        let e = self.group.identity();
        let mut args = vec![0usize; self.degree];
        (0..self.table.len()).all(|idx| {
            decode(idx, n, &mut args);
            !args.contains(&e) || self.table[idx].is_zero()
        })
    }

    /// `(δβ)(g_1,…,g_{n+1}) = β(g_2,…) + Σ_i (-1)^i β(…, g_i g_{i+1}, …)
    /// + (-1)^{n+1} β(g_1,…,g_n)`.
    pub fn coboundary(&self) -> Result<Cochain> {
        let n = self.degree;
        let g = self.group.clone();
        let mut scratch = vec![0usize; n];
        Cochain::from_fn(g.clone(), n + 1, |args| {
            let mut total = self.get(&args[1..]);
            for i in 1..=n {
                scratch[..i - 1].copy_from_slice(&args[..i - 1]);
                scratch[i - 1] = g.mul(args[i - 1], args[i]);
                scratch[i..].copy_from_slice(&args[i + 1..]);
                total = total + self.get(&scratch).times(sign(i));
            }
            total + self.get(&args[..n]).times(sign(n + 1))
        })
    }

    pub fn is_cocycle(&self) -> Result<bool> {
        Ok(self.coboundary()?.is_zero())
    }

    /// Transgression at `sigma`: a cochain of one lower degree on `C_G(σ)`,
    /// `Σ_i (-1)^i c(g_1,…,g_i, σ, g_{i+1},…,g_n)`.
    pub fn transgress_step(&self, sigma: &Perm) -> Result<Cochain> {
        if self.degree == 0 {
            return Err(Error::Invalid("cannot transgress a 0-cochain".into()));
        }
        if !self.is_cocycle()? {
            return Err(Error::NotCocycle);
        }
        self.transgress_step_unchecked(sigma)
    }

    fn transgress_step_unchecked(&self, sigma: &Perm) -> Result<Cochain> {
        let s = self.group.index(sigma)?;
        let sub = CochainGroup::new(self.group.group().centralizer(sigma));
        let to_ambient: Vec<usize> = sub
            .group()
            .elements()
            .iter()
            .map(|h| self.group.index(h))
            .collect::<Result<_>>()?;
        let n = self.degree - 1;
        Cochain::from_fn(sub, n, |args| {
            let ambient: Vec<usize> = args.iter().map(|&a| to_ambient[a]).collect();
            insertion_sum(self, &ambient, s)
        })
    }

    pub fn evaluate_degree0(&self) -> QmodZ {
        assert_eq!(self.degree, 0);
        self.table[0]
    }

    /// Canonical JSON document: only nonzero values, in table order.
    pub fn to_json(&self) -> CocycleDoc {
        let n = self.group.order();
        let els = self.group.group().elements();
        let mut args = vec![0usize; self.degree];
        let mut values = Vec::new();
        for (idx, v) in self.table.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            decode(idx, n, &mut args);
            values.push(CocycleEntry {
                args: args.iter().map(|&a| els[a].to_string()).collect(),
                value: v.to_string(),
            });
        }
        CocycleDoc {
            group: self.group.group().spec_string(),
            degree: self.degree,
            values,
        }
    }

    pub fn from_json(doc: &CocycleDoc) -> Result<Cochain> {
        let group = CochainGroup::new(parse_group(&doc.group)?);
        Cochain::from_doc_on(group, doc)
    }

    /// Reads a document whose group is already constructed.
    pub fn from_doc_on(group: Arc<CochainGroup>, doc: &CocycleDoc) -> Result<Cochain> {
        let deg = group.group().degree();
        let mut c = Cochain::zero(group, doc.degree)?;
        for entry in &doc.values {
            if entry.args.len() != doc.degree {
                return Err(Error::Invalid(format!(
                    "entry {:?} has {} arguments, expected {}",
                    entry.args,
                    entry.args.len(),
                    doc.degree
                )));
            }
            let idx = entry
                .args
                .iter()
                .map(|s| c.group.index(&Perm::parse(deg, s)?))
                .collect::<Result<Vec<_>>>()?;
            let v = QmodZ::parse(&entry.value)
                .ok_or_else(|| Error::Invalid(format!("bad value {:?}", entry.value)))?;
            c.set(&idx, v)?;
        }
        Ok(c)
    }
}

impl Add for &Cochain {
    type Output = Cochain;
    fn add(self, o: &Cochain) -> Cochain {
        assert_eq!(self.degree, o.degree);
        Cochain {
            group: self.group.clone(),
            degree: self.degree,
            table: self.table.iter().zip(&o.table).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        Cochain {
            group: self.group.clone(),
            degree: self.degree,
            table: self.table.iter().map(|&a| -a).collect(),
        }
    }
}

#[inline]
fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn decode(mut idx: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
}

/// `Σ_{i=0}^{n} (-1)^i c(a_1,…,a_i, s, a_{i+1},…,a_n)`.
fn insertion_sum(c: &Cochain, args: &[usize], s: usize) -> QmodZ {
    let n = args.len();
    let mut buf = Vec::with_capacity(n + 1);
    let mut total = QmodZ::ZERO;
    for i in 0..=n {
        buf.clear();
        buf.extend_from_slice(&args[..i]);
        buf.push(s);
        buf.extend_from_slice(&args[i..]);
        total = total + c.get(&buf).times(sign(i));
    }
    total
}

/// Transgression at `σ`; see [`Cochain::transgress_step`].
pub fn transgress_step(c: &Cochain, sigma: &Perm) -> Result<Cochain> {
    c.transgress_step(sigma)
}

/// `tg_{σ_t} ⋯ tg_{σ_1}(c)`, evaluated to a scalar. The cocycle degree must
/// equal the tuple length.
pub fn iterated_transgression(c: &Cochain, tuple: &[Perm]) -> Result<QmodZ> {
    if tuple.len() != c.degree {
        return Err(Error::ConstraintMismatch(format!(
            "cocycle degree {} does not match tuple length {}",
            c.degree,
            tuple.len()
        )));
    }
    for (i, a) in tuple.iter().enumerate() {
        if tuple[i + 1..].iter().any(|b| !a.commutes_with(b)) {
            return Err(Error::NotCommuting);
        }
    }
    if !c.is_cocycle()? {
        return Err(Error::NotCocycle);
    }
    iterated_transgression_unchecked(c, tuple)
}

/// Same as [`iterated_transgression`] without the cocycle and commutation
/// checks. Expands the nested insertion sums directly, so no intermediate
/// tables are built.
pub fn iterated_transgression_unchecked(c: &Cochain, tuple: &[Perm]) -> Result<QmodZ> {
    let idx = tuple.iter().map(|g| c.group.index(g)).collect::<Result<Vec<_>>>()?;
    Ok(expand(c, &idx, idx.len(), &[]))
}

/// Value of `F_j(args)` where `F_0 = c` and `F_j = tg_{σ_j} F_{j-1}`.
fn expand(c: &Cochain, sigmas: &[usize], j: usize, args: &[usize]) -> QmodZ {
    if j == 0 {
        return c.get(args);
    }
    let s = sigmas[j - 1];
    let mut total = QmodZ::ZERO;
    let mut buf = Vec::with_capacity(args.len() + 1);
    for i in 0..=args.len() {
        buf.clear();
        buf.extend_from_slice(&args[..i]);
        buf.push(s);
        buf.extend_from_slice(&args[i..]);
        total = total + expand(c, sigmas, j - 1, &buf).times(sign(i));
    }
    total
}

/// JSON form of a cochain.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CocycleDoc {
    pub group: String,
    pub degree: usize,
    #[serde(default)]
    pub values: Vec<CocycleEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CocycleEntry {
    pub args: Vec<String>,
    pub value: String,
}

/// The cyclic group `Z/k` realised on `k` points, with the residue of each
/// element (the image of point 0).
pub fn cyclic_group(k: usize) -> Result<(Arc<CochainGroup>, Vec<u64>)> {
    let g = CochainGroup::new(PermGroup::cyclic(k)?);
    let residues = g.group().elements().iter().map(|p| p.apply(0) as u64).collect();
    Ok((g, residues))
}

/// The carry cocycle `c(a, b) = e · ⌊(a + b)/k⌋ / k` on `Z/k`.
pub fn carry_cocycle(k: usize, e: i64) -> Result<Cochain> {
    let (g, res) = cyclic_group(k)?;
    Cochain::from_fn(g, 2, |args| {
        let (a, b) = (res[args[0]], res[args[1]]);
        QmodZ::new(e * ((a + b) / k as u64) as i64, k as u64)
    })
}

/// `(Z/p)^r` realised on `r·p` points as disjoint `p`-cycles, with the
/// coordinate vector of each element.
pub fn elementary_abelian(p: usize, r: usize) -> Result<(Arc<CochainGroup>, Vec<Vec<u64>>)> {
    let degree = (p * r).max(1);
    let gens = (0..r)
        .map(|i| Perm::from_cycles(degree, &[((i * p) as u32..((i + 1) * p) as u32).collect()]))
        .collect::<Result<Vec<_>>>()?;
    let g = CochainGroup::new(PermGroup::closure(degree, gens)?);
    let coords = g
        .group()
        .elements()
        .iter()
        .map(|x| (0..r).map(|i| (x.apply((i * p) as u32) as usize - i * p) as u64).collect())
        .collect();
    Ok((g, coords))
}

/// The bilinear 2-cocycle `c(a, b) = Σ_ij B_ij a_i b_j / p` on `(Z/p)^r`.
pub fn bilinear_cocycle(p: usize, form: &[Vec<i64>]) -> Result<Cochain> {
    let r = form.len();
    if form.iter().any(|row| row.len() != r) {
        return Err(Error::Invalid("bilinear form must be square".into()));
    }
    let (g, coords) = elementary_abelian(p, r)?;
    Cochain::from_fn(g, 2, |args| {
        let (a, b) = (&coords[args[0]], &coords[args[1]]);
        let mut s = 0i64;
        for i in 0..r {
            for j in 0..r {
                s += form[i][j] * a[i] as i64 * b[j] as i64;
            }
        }
        QmodZ::new(s, p as u64)
    })
}

/// `c((a1,a2),(b1,b2)) = a2·b1/2` on `(Z/2)²`.
pub fn symplectic_cocycle() -> Result<Cochain> {
    bilinear_cocycle(2, &[vec![0, 0], vec![1, 0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cochain(g: &Arc<CochainGroup>, degree: usize, den: u64, rng: &mut ChaCha8Rng) -> Cochain {
        Cochain::from_fn(g.clone(), degree, |_| QmodZ::new(rng.gen_range(0..den as i64), den)).unwrap()
    }

    fn z2() -> Arc<CochainGroup> {
        CochainGroup::new(PermGroup::cyclic(2).unwrap())
    }

    #[test]
    fn qmodz_arithmetic() {
        assert_eq!(QmodZ::new(3, 2), QmodZ::new(1, 2));
        assert_eq!(QmodZ::new(1, 2) + QmodZ::new(1, 2), QmodZ::ZERO);
        assert_eq!(QmodZ::new(1, 3) + QmodZ::new(1, 6), QmodZ::new(1, 2));
        assert_eq!(-QmodZ::new(1, 3), QmodZ::new(2, 3));
        assert_eq!(QmodZ::parse("-1/4"), Some(QmodZ::new(3, 4)));
        assert_eq!(QmodZ::new(2, 4).to_string(), "1/2");
    }

    #[test]
    fn coboundary_examples() {
        let g = CochainGroup::new(PermGroup::symmetric(3).unwrap());
        assert!(Cochain::zero(g.clone(), 1).unwrap().coboundary().unwrap().is_zero());
        let mut c0 = Cochain::zero(g.clone(), 0).unwrap();
        c0.set(&[], QmodZ::new(1, 3)).unwrap();
        assert!(c0.coboundary().unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = random_cochain(&z2(), 1, 4, &mut rng);
        assert!(b.coboundary().unwrap().coboundary().unwrap().is_zero());
    }

    #[test]
    fn cocycle_examples() {
        assert!(carry_cocycle(2, 1).unwrap().is_cocycle().unwrap());
        assert!(symplectic_cocycle().unwrap().is_cocycle().unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = CochainGroup::new(PermGroup::cyclic(3).unwrap());
        let random = random_cochain(&g, 2, 5, &mut rng);
        assert!(!random.is_cocycle().unwrap());
        assert!(random.is_normalized());
    }

    #[test]
    fn transgression_examples() {
        let c = symplectic_cocycle().unwrap();
        let els = c.group().group().elements().to_vec();
        // (1,0) moves block 0, (0,1) moves block 1.
        let s10 = els.iter().find(|x| x.apply(0) == 1 && x.apply(2) == 2).unwrap().clone();
        let s01 = els.iter().find(|x| x.apply(0) == 0 && x.apply(2) == 3).unwrap().clone();
        let tg = transgress_step(&c, &s10).unwrap();
        assert_eq!(tg.get_perms(std::slice::from_ref(&s01)).unwrap(), QmodZ::new(1, 2));
        assert_eq!(
            iterated_transgression(&c, &[s10.clone(), s01.clone()]).unwrap(),
            QmodZ::new(1, 2)
        );
        let e = c.group().group().identity();
        assert!(transgress_step(&c, &e).unwrap().is_zero());
        assert_eq!(iterated_transgression(&c, &[s10, e]).unwrap(), QmodZ::ZERO);
    }

    #[test]
    fn transgression_rejects_bad_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = CochainGroup::new(PermGroup::cyclic(3).unwrap());
        let random = random_cochain(&g, 2, 5, &mut rng);
        let x = g.group().elements()[1].clone();
        assert_eq!(transgress_step(&random, &x), Err(Error::NotCocycle));
        let s3 = CochainGroup::new(PermGroup::symmetric(3).unwrap());
        let zero = Cochain::zero(s3.clone(), 2).unwrap();
        let a = Perm::parse(3, "(0 1)").unwrap();
        let b = Perm::parse(3, "(1 2)").unwrap();
        assert_eq!(iterated_transgression(&zero, &[a, b]), Err(Error::NotCommuting));
    }

    #[test]
    fn coboundaries_transgress_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = CochainGroup::new(PermGroup::dihedral(4).unwrap());
        for _ in 0..20 {
            let beta = random_cochain(&g, 1, 8, &mut rng);
            let c = beta.coboundary().unwrap();
            for sigma in g.group().elements() {
                assert!(transgress_step(&c, sigma).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn step_and_direct_expansion_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (g, _) = elementary_abelian(2, 3).unwrap();
        let beta = random_cochain(&g, 2, 4, &mut rng);
        let c = &beta.coboundary().unwrap() + &bilinear_cocycle(2, &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap().coboundary().unwrap();
        let c = &c + &Cochain::from_fn(g.clone(), 3, |_| QmodZ::ZERO).unwrap();
        let els = g.group().elements();
        for a in els.iter().take(4) {
            for b in els.iter().skip(3).take(3) {
                for d in els.iter().skip(1).take(3) {
                    let t1 = c.transgress_step(a).unwrap();
                    let t2 = t1.transgress_step(b).unwrap();
                    let t3 = t2.transgress_step(d).unwrap();
                    let direct = iterated_transgression(&c, &[a.clone(), b.clone(), d.clone()]).unwrap();
                    assert_eq!(t3.evaluate_degree0(), direct);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let c = symplectic_cocycle().unwrap();
        let doc = c.to_json();
        let text = serde_json::to_string(&doc).unwrap();
        let back = Cochain::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
        let bad = CocycleDoc {
            group: "Z2".into(),
            degree: 2,
            values: vec![CocycleEntry {
                args: vec!["()".into(), "(0 1)".into()],
                value: "1/2".into(),
            }],
        };
        assert!(Cochain::from_json(&bad).is_err());
    }
}
