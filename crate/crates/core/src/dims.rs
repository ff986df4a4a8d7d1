//! Twisted alternating-power dimensions, twisted power operations and
//! induced-character integrals.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{binomial, factorial, int_pow, rat, recip, Rational};
use crate::cocycle::{iterated_transgression_unchecked, Cochain};
use crate::cyclotomic::{CycValue, RootSum};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Perm;
use crate::perm_core::partitions;
use crate::pi_finite::{groupoid_cardinality, loop_tower, permutation_weight};
use crate::tuples::commuting_tuple_classes;
use crate::{height1, par};

/// The character `χ` twisting the tensor power.
#[derive(Clone, Debug)]
pub enum TwistSpec {
    Trivial,
    /// A cocycle on `H` of degree `n + 1`.
    Cocycle(Cochain),
    /// The height-1 character `sgn^(1)` of `S_m`; evaluated in closed form.
    BuiltinSgn1,
}

impl TwistSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TwistSpec::Trivial => "trivial",
            TwistSpec::Cocycle(_) => "cocycle",
            TwistSpec::BuiltinSgn1 => "sgn1",
        }
    }
}

/// Which evaluator(s) to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Structural,
    BruteForce,
    Both,
    ClosedForm,
}

/// Engine request. `Auto` runs every applicable engine.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EngineChoice {
    #[default]
    Auto,
    Structural,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimResult {
    pub value: CycValue,
    pub engine: Engine,
    /// Set when two engines were run.
    pub agreement: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Height0Dims {
    pub sym: BigInt,
    pub alt: BigInt,
}

/// `Sym^m` and `Λ^m` of a `d`-dimensional space, by binomials and by
/// class-sum integrals over `S_m`.
pub fn height0_dims(d: i64, m: u32) -> Result<Height0Dims> {
    let db = BigInt::from(d);
    let sym = binomial(&(&db + BigInt::from(m) - 1), m as u64);
    let alt = binomial(&db, m as u64);
    let mut sym_int = Rational::zero();
    let mut alt_int = Rational::zero();
    for lambda in partitions(m) {
        let term = rat(int_pow(&db, lambda.num_cycles() as u64)) * recip(&lambda.centralizer_order());
        if lambda.sign() < 0 {
            alt_int -= &term;
        } else {
            alt_int += &term;
        }
        sym_int += term;
    }
    if sym_int != rat(sym.clone()) || alt_int != rat(alt.clone()) {
        return Err(Error::EngineDisagreement(format!(
            "height 0, d={d}, m={m}: binomials ({sym}, {alt}) vs integrals ({sym_int}, {alt_int})"
        )));
    }
    Ok(Height0Dims { sym, alt })
}

/// `Σ_{[g]} χ(g) / |C_G(g)|`.
pub fn induced_dim<F>(g: &PermGroup, chi: F) -> Result<CycValue>
where
    F: Fn(&Perm) -> CycValue + Sync + Send,
{
    let classes = g.conjugacy_classes();
    let rep_values = par::map(classes, |c| chi(&c.representative));
    let class_idx = g.class_indices();
    let consistent = par::map(g.elements(), |x| {
        let c = class_idx[g.index_of(x).expect("element of g")];
        chi(x) == rep_values[c]
    });
    if consistent.iter().any(|ok| !ok) {
        return Err(Error::NotClassFunction);
    }
    Ok(classes
        .iter()
        .zip(&rep_values)
        .map(|(c, v)| v.scale(&recip(&BigUint::from(c.centralizer_order))))
        .sum())
}

fn is_full_symmetric(h: &PermGroup) -> bool {
    BigUint::from(h.order()) == factorial(h.degree() as u64)
}

fn check_twist(h: &PermGroup, twist: &TwistSpec, p: u64, n: usize) -> Result<()> {
    match twist {
        TwistSpec::Trivial => Ok(()),
        TwistSpec::Cocycle(c) => {
            if c.degree() != n + 1 {
                return Err(Error::ConstraintMismatch(format!(
                    "twist has degree {} but height {n} needs degree {}",
                    c.degree(),
                    n + 1
                )));
            }
            if c.group().group() != h {
                return Err(Error::ConstraintMismatch(
                    "twist cocycle is defined on a different group".into(),
                ));
            }
            if !c.is_cocycle()? {
                return Err(Error::NotCocycle);
            }
            Ok(())
        }
        TwistSpec::BuiltinSgn1 => {
            if n != 1 || p != 2 {
                return Err(Error::ConstraintMismatch("sgn1 is a height-1 twist at p = 2".into()));
            }
            if !is_full_symmetric(h) {
                return Err(Error::ConstraintMismatch("sgn1 is defined on the full symmetric group".into()));
            }
            Ok(())
        }
    }
}

/// Sum over classes of commuting `(σ; h_1, …, h_n)` in `H`, `h_i` of
/// `p`-power order, of `d^{orbits} · ζ(tg(χ̄)) / |C|`.
pub fn alt_dim_brute_force(h: &PermGroup, twist: &TwistSpec, d: i64, p: u64, n: usize) -> Result<CycValue> {
    let mut constrain = vec![true; n + 1];
    constrain[0] = false;
    let classes = commuting_tuple_classes(h, n, p, &constrain)?;
    let db = BigInt::from(d);
    let cocycle = match twist {
        TwistSpec::Cocycle(c) => Some(c),
        _ => None,
    };
    let partials = par::try_map(&classes, |cl| -> Result<RootSum> {
        let coeff = rat(int_pow(&db, cl.orbit_count as u64)) * recip(&BigUint::from(cl.centralizer_order));
        let mut acc = RootSum::new();
        match cocycle {
            Some(c) => {
                let q = -iterated_transgression_unchecked(c, &cl.representative)?;
                acc.add(q.num() as i64, q.den(), coeff);
            }
            None => acc.add(0, 1, coeff),
        }
        Ok(acc)
    })?;
    Ok(partials.into_iter().fold(RootSum::new(), RootSum::merge).evaluate())
}

/// Structural evaluation on `L_p^n L BΣ_m` for the trivial twist.
pub fn alt_dim_structural(m: u32, d: i64, p: u64, n: usize) -> CycValue {
    CycValue::from_rational(groupoid_cardinality(&loop_tower(m, p, n), permutation_weight(d)))
}

fn require_integral(v: &CycValue, what: &str) -> Result<()> {
    if v.is_integer() {
        Ok(())
    } else {
        Err(Error::EngineDisagreement(format!("{what} is not a rational integer: {v}")))
    }
}

fn combine(structural: Option<CycValue>, brute: Option<CycValue>) -> Result<DimResult> {
    match (structural, brute) {
        (Some(s), Some(b)) => {
            if s != b {
                return Err(Error::EngineDisagreement(format!("structural {s} vs brute force {b}")));
            }
            Ok(DimResult {
                value: s,
                engine: Engine::Both,
                agreement: Some(true),
            })
        }
        (Some(s), None) => Ok(DimResult {
            value: s,
            engine: Engine::Structural,
            agreement: None,
        }),
        (None, Some(b)) => Ok(DimResult {
            value: b,
            engine: Engine::BruteForce,
            agreement: None,
        }),
        (None, None) => Err(Error::Invalid("no engine selected".into())),
    }
}

/// `dim alt_χ` of a `d`-dimensional object at height `n`, for `H ≤ S_m`
/// acting on its `m = H.degree()` points.
pub fn alt_dim(h: &PermGroup, twist: &TwistSpec, d: i64, p: u64, n: usize) -> Result<DimResult> {
    alt_dim_with(h, twist, d, p, n, EngineChoice::Auto)
}

pub fn alt_dim_with(
    h: &PermGroup,
    twist: &TwistSpec,
    d: i64,
    p: u64,
    n: usize,
    engine: EngineChoice,
) -> Result<DimResult> {
    if !crate::arith::is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    check_twist(h, twist, p, n)?;
    let m = h.degree() as u32;
    if let TwistSpec::BuiltinSgn1 = twist {
        return Ok(DimResult {
            value: CycValue::from_int(height1::alt_dim_h1(m, d)),
            engine: Engine::ClosedForm,
            agreement: None,
        });
    }
    let structural_ok = matches!(twist, TwistSpec::Trivial) && is_full_symmetric(h);
    let run_structural = match engine {
        EngineChoice::Structural if !structural_ok => {
            return Err(Error::Invalid(
                "the structural engine needs H = S_m and the trivial twist".into(),
            ))
        }
        EngineChoice::Structural | EngineChoice::Auto => structural_ok,
        EngineChoice::BruteForce => false,
    };
    let run_brute = engine != EngineChoice::Structural;
    let structural = run_structural.then(|| alt_dim_structural(m, d, p, n));
    let brute = if run_brute {
        Some(alt_dim_brute_force(h, twist, d, p, n)?)
    } else {
        None
    };
    let out = combine(structural, brute)?;
    if matches!(twist, TwistSpec::Trivial) {
        require_integral(&out.value, "trivially twisted dimension")?;
    }
    Ok(out)
}

/// `alt_dim` for `H = S_m` without materialising the group unless the brute
/// force engine is requested.
pub fn alt_dim_symmetric(
    m: u32,
    twist: &TwistSpec,
    d: i64,
    p: u64,
    n: usize,
    engine: EngineChoice,
) -> Result<DimResult> {
    match (twist, engine) {
        (TwistSpec::Trivial, EngineChoice::Structural) => {
            if !crate::arith::is_prime(p) {
                return Err(Error::Invalid(format!("{p} is not prime")));
            }
            let value = alt_dim_structural(m, d, p, n);
            require_integral(&value, "trivially twisted dimension")?;
            Ok(DimResult {
                value,
                engine: Engine::Structural,
                agreement: None,
            })
        }
        (TwistSpec::BuiltinSgn1, _) => {
            if n != 1 || p != 2 {
                return Err(Error::ConstraintMismatch("sgn1 is a height-1 twist at p = 2".into()));
            }
            Ok(DimResult {
                value: CycValue::from_int(height1::alt_dim_h1(m, d)),
                engine: Engine::ClosedForm,
                agreement: None,
            })
        }
        _ => alt_dim_with(&PermGroup::symmetric(m.max(1) as usize)?, twist, d, p, n, engine),
    }
}

/// `β^m_{H,χ}(d)`: `m`-th power, twist by `χ̄`, integrate over the loop
/// tower of `BH`. Same tuple sum as [`alt_dim`].
pub fn power_op(h: &PermGroup, twist: &TwistSpec, d: i64, p: u64, n: usize) -> Result<DimResult> {
    alt_dim(h, twist, d, p, n)
}

pub fn power_op_with(
    h: &PermGroup,
    twist: &TwistSpec,
    d: i64,
    p: u64,
    n: usize,
    engine: EngineChoice,
) -> Result<DimResult> {
    alt_dim_with(h, twist, d, p, n, engine)
}

/// `|[d]^{cycles(σ)} / C(σ)|` summed over classes `[σ]` of 2-power order:
/// the orbit-counting form of `dim Sym` at height 1.
pub fn height1_sym_orbit_count(m: u32, d: u64) -> Result<BigInt> {
    let g = PermGroup::symmetric(m.max(1) as usize)?;
    let mut total = BigInt::zero();
    for class in g.conjugacy_classes() {
        let sigma = &class.representative;
        if !crate::arith::is_p_power(sigma.order(), 2) {
            continue;
        }
        let cycles = sigma.cycles();
        let cycle_of: Vec<usize> = {
            let mut v = vec![0; g.degree()];
            for (i, c) in cycles.iter().enumerate() {
                for &x in c {
                    v[x as usize] = i;
                }
            }
            v
        };
        // Burnside: average number of colourings of the cycles fixed by the
        // centralizer.
        let cent = g.centralizer(sigma);
        let mut fixed = BigInt::zero();
        for c in cent.elements() {
            let induced: Vec<usize> = cycles.iter().map(|cy| cycle_of[c.apply(cy[0]) as usize]).collect();
            let mut seen = vec![false; cycles.len()];
            let mut orbits = 0u64;
            for s in 0..cycles.len() {
                if !seen[s] {
                    orbits += 1;
                    let mut x = s;
                    while !seen[x] {
                        seen[x] = true;
                        x = induced[x];
                    }
                }
            }
            fixed += int_pow(&BigInt::from(d), orbits);
        }
        total += fixed / BigInt::from(cent.order());
    }
    Ok(total)
}

/// `Σ_{[σ] 2-power} d^{ℓ(σ)}`.
pub fn height1_sum_of_powers(m: u32, d: i64) -> BigInt {
    partitions(m)
        .iter()
        .filter(|l| l.is_p_power_type(2))
        .map(|l| int_pow(&BigInt::from(d), l.num_cycles() as u64))
        .sum()
}

impl DimResult {
    pub fn is_one(&self) -> bool {
        self.value.as_rational().is_some_and(|q| q.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{carry_cocycle, symplectic_cocycle};

    fn int(v: &CycValue) -> BigInt {
        v.as_integer().expect("integral value")
    }

    #[test]
    fn height0_examples() {
        assert_eq!(
            height0_dims(3, 2).unwrap(),
            Height0Dims { sym: 6.into(), alt: 3.into() }
        );
        for d in 0..5 {
            assert_eq!(height0_dims(d, 0).unwrap(), Height0Dims { sym: 1.into(), alt: 1.into() });
        }
        assert_eq!(height0_dims(1, 5).unwrap(), Height0Dims { sym: 1.into(), alt: 0.into() });
        for m in 0..=10u32 {
            for d in 0..=6i64 {
                let r = height0_dims(d, m).unwrap();
                if (m as i64) > d {
                    assert!(r.alt.is_zero());
                }
            }
        }
    }

    #[test]
    fn induced_dim_examples() {
        let s4 = PermGroup::symmetric(4).unwrap();
        assert_eq!(induced_dim(&s4, |_| CycValue::one()).unwrap(), CycValue::one());
        let s2 = PermGroup::symmetric(2).unwrap();
        let chi = |g: &Perm| CycValue::from_int(3i64.pow(g.cycles().len() as u32));
        assert_eq!(induced_dim(&s2, chi).unwrap(), CycValue::from_int(6));
        let triv = PermGroup::trivial(3);
        assert_eq!(induced_dim(&triv, |_| CycValue::from_int(7)).unwrap(), CycValue::from_int(7));
        let s3 = PermGroup::symmetric(3).unwrap();
        let not_class = |g: &Perm| CycValue::from_int(g.apply(0) as i64);
        assert_eq!(induced_dim(&s3, not_class), Err(Error::NotClassFunction));
    }

    #[test]
    fn alt_dim_examples() {
        let s2 = PermGroup::symmetric(2).unwrap();
        let r = alt_dim(&s2, &TwistSpec::Trivial, 3, 2, 0).unwrap();
        assert_eq!(int(&r.value), 6.into());
        assert_eq!(r.engine, Engine::Both);
        for m in 1..=5usize {
            let sm = PermGroup::symmetric(m).unwrap();
            assert!(alt_dim(&sm, &TwistSpec::Trivial, 1, 2, 0).unwrap().is_one());
            // One loop deeper, d = 1 counts the 2-power classes instead.
            let two_power = partitions(m as u32).iter().filter(|l| l.is_p_power_type(2)).count();
            assert_eq!(int(&alt_dim(&sm, &TwistSpec::Trivial, 1, 2, 1).unwrap().value), two_power.into());
            let triv = PermGroup::trivial(m);
            assert_eq!(
                int(&alt_dim(&triv, &TwistSpec::Trivial, 3, 3, 1).unwrap().value),
                BigInt::from(3).pow(m as u32)
            );
        }
    }

    #[test]
    fn power_op_examples() {
        for m in 1..=5u32 {
            let sm = PermGroup::symmetric(m as usize).unwrap();
            for d in 0..=4i64 {
                let v = power_op(&sm, &TwistSpec::Trivial, d, 2, 0).unwrap();
                assert_eq!(int(&v.value), height0_dims(d, m).unwrap().sym);
            }
            assert!(power_op(&sm, &TwistSpec::Trivial, 0, 3, 1).unwrap().value.is_zero());
        }
    }

    #[test]
    fn twisted_examples() {
        let c = carry_cocycle(2, 1).unwrap();
        let h = c.group().group().clone();
        let v = alt_dim(&h, &TwistSpec::Cocycle(c.clone()), 2, 2, 1).unwrap();
        assert_eq!(v.engine, Engine::BruteForce);
        assert!(v.value.is_integer());
        let wrong_degree = alt_dim(&h, &TwistSpec::Cocycle(c), 2, 2, 2);
        assert!(matches!(wrong_degree, Err(Error::ConstraintMismatch(_))));
        let s = symplectic_cocycle().unwrap();
        let h = s.group().group().clone();
        let v = alt_dim(&h, &TwistSpec::Cocycle(s), 1, 2, 1).unwrap();
        assert!(v.value.as_rational().is_some());
    }

    #[test]
    fn conjugate_subgroups_agree() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let h = PermGroup::closure(4, vec![Perm::parse(4, "(0 1)").unwrap(), Perm::parse(4, "(2 3)").unwrap()]).unwrap();
        let g = Perm::parse(4, "(1 2)").unwrap();
        let hc = h.conjugate(&g);
        assert!(hc.is_subgroup_of(&s4));
        for n in 0..=2 {
            for d in [-2i64, 2, 3] {
                let a = alt_dim(&h, &TwistSpec::Trivial, d, 2, n).unwrap();
                let b = alt_dim(&hc, &TwistSpec::Trivial, d, 2, n).unwrap();
                assert_eq!(a.value, b.value);
            }
        }
    }

    #[test]
    fn sgn1_routes_to_closed_form() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let v = alt_dim(&s4, &TwistSpec::BuiltinSgn1, 2, 2, 1).unwrap();
        assert_eq!(int(&v.value), 18.into());
        assert!(alt_dim(&s4, &TwistSpec::BuiltinSgn1, 2, 3, 1).is_err());
    }

    #[test]
    fn height1_sym_is_burnside_count() {
        for m in 1..=6u32 {
            for d in 0..=4i64 {
                let v = alt_dim_symmetric(m, &TwistSpec::Trivial, d, 2, 1, EngineChoice::Structural).unwrap();
                assert_eq!(int(&v.value), height1_sym_orbit_count(m, d as u64).unwrap(), "m={m} d={d}");
            }
        }
    }

    #[test]
    fn height1_sym_differs_from_sum_of_powers() {
        let v = alt_dim_symmetric(2, &TwistSpec::Trivial, 2, 2, 1, EngineChoice::Auto).unwrap();
        assert_eq!(int(&v.value), 5.into());
        assert_eq!(height1_sum_of_powers(2, 2), 6.into());
    }
}
