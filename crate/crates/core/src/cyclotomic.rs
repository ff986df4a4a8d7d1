//! Exact elements of cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` modulo the
//! `N`-th cyclotomic polynomial, always at the smallest conductor whose
//! field contains it. Two values are equal iff their stored forms are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{rational_string, Rational};

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    debug_assert!(lead == 1);
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Reduces a polynomial in `ζ` modulo `Φ_n`.
fn reduce_mod_phi(mut poly: Vec<Rational>, n: u64) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            let shift = i - deg;
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    poly[shift + j] -= &c * Rational::from_integer(BigInt::from(pj));
                }
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

/// An exact element of `Q(ζ_N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycValue {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl CycValue {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        CycValue {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// `exp(2πi · num/den)`.
    pub fn root_of_unity(num: i64, den: u64) -> Self {
        Self::from_root_sum(den, [(num, Rational::one())])
    }

    /// Builds `Σ coeff · ζ_n^{exp}` from a list of terms.
    pub fn from_root_sum<I>(n: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        assert!(n >= 1);
        let mut poly = vec![Rational::zero(); n as usize];
        for (e, c) in terms {
            let idx = e.rem_euclid(n as i64) as usize;
            poly[idx] += c;
        }
        CycValue::normalized(n, reduce_mod_phi(poly, n))
    }

    fn normalized(n: u64, coeffs: Vec<Rational>) -> Self {
        let v = CycValue {
            conductor: n,
            coeffs,
        };
        v.minimize()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    pub fn is_integer(&self) -> bool {
        self.as_integer().is_some()
    }

    /// Re-expresses the value at conductor `m`, a multiple of the current one.
    fn lift(&self, m: u64) -> Vec<Rational> {
        assert!(m.is_multiple_of(self.conductor));
        if m == self.conductor {
            return self.coeffs.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        reduce_mod_phi(poly, m)
    }

    /// Moves the value to the smallest conductor whose field contains it.
    fn minimize(self) -> Self {
        if self.conductor == 1 {
            return self;
        }
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            return CycValue::from_rational(self.coeffs[0].clone());
        }
        let n = self.conductor;
        for d in 2..n {
            if !n.is_multiple_of(d) {
                continue;
            }
            if let Some(sol) = solve_in_subfield(&self.coeffs, d, n) {
                return CycValue {
                    conductor: d,
                    coeffs: sol,
                };
            }
        }
        self
    }

    fn binary(&self, other: &Self, f: impl Fn(&[Rational], &[Rational], u64) -> Vec<Rational>) -> Self {
        let m = self.conductor.lcm(&other.conductor);
        let a = self.lift(m);
        let b = other.lift(m);
        CycValue::normalized(m, f(&a, &b, m))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycValue::normalized(
            self.conductor,
            self.coeffs.iter().map(|c| c * q).collect(),
        )
    }
}

/// Finds coordinates of `v ∈ Q(ζ_n)` in the power basis of `Q(ζ_d)`, `d | n`,
/// if `v` lies in that subfield.
fn solve_in_subfield(v: &[Rational], d: u64, n: u64) -> Option<Vec<Rational>> {
    let dim_sub = euler_phi(d) as usize;
    let dim = v.len();
    let step = (n / d) as usize;
    // Columns: images of ζ_d^j = ζ_n^{j·step}.
    let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(dim_sub);
    for j in 0..dim_sub {
        let mut poly = vec![Rational::zero(); j * step + 1];
        poly[j * step] = Rational::one();
        cols.push(reduce_mod_phi(poly, n));
    }
    // Augmented matrix rows = coordinates in Q(ζ_n).
    let mut mat: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..dim_sub {
        let Some(p) = (row..dim).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].recip();
        for c in col..=dim_sub {
            let x = &mat[row][c] * &inv;
            mat[row][c] = x;
        }
        for r in 0..dim {
            if r != row && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in col..=dim_sub {
                    let x = &mat[row][c] * &f;
                    mat[r][c] -= x;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    // Inconsistent if a zero row has a nonzero right-hand side.
    if (row..dim).any(|r| !mat[r][dim_sub].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); dim_sub];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = mat[r][dim_sub].clone();
    }
    Some(sol)
}

fn poly_mul(a: &[Rational], b: &[Rational], n: u64) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    reduce_mod_phi(out, n)
}

impl Add for &CycValue {
    type Output = CycValue;
    fn add(self, rhs: &CycValue) -> CycValue {
        self.binary(rhs, |a, b, _| a.iter().zip(b).map(|(x, y)| x + y).collect())
    }
}

impl Sub for &CycValue {
    type Output = CycValue;
    fn sub(self, rhs: &CycValue) -> CycValue {
        self.binary(rhs, |a, b, _| a.iter().zip(b).map(|(x, y)| x - y).collect())
    }
}

impl Mul for &CycValue {
    type Output = CycValue;
    fn mul(self, rhs: &CycValue) -> CycValue {
        self.binary(rhs, poly_mul)
    }
}

impl Neg for &CycValue {
    type Output = CycValue;
    fn neg(self) -> CycValue {
        CycValue {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for CycValue {
    type Output = CycValue;
    fn add(self, rhs: CycValue) -> CycValue {
        &self + &rhs
    }
}

impl Mul for CycValue {
    type Output = CycValue;
    fn mul(self, rhs: CycValue) -> CycValue {
        &self * &rhs
    }
}

impl std::iter::Sum for CycValue {
    fn sum<I: Iterator<Item = CycValue>>(iter: I) -> CycValue {
        iter.fold(CycValue::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for CycValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", rational_string(q));
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = rational_string(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match j {
                0 => write!(f, "{}", s)?,
                _ => {
                    if !c.abs().is_one() {
                        write!(f, "{}*", s)?;
                    }
                    if j == 1 {
                        write!(f, "z{}", self.conductor)?;
                    } else {
                        write!(f, "z{}^{}", self.conductor, j)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycValue({})", self)
    }
}

/// Accumulates `Σ coeff · ζ^{a}` for exponents `a ∈ Q/Z` and converts to a
/// [`CycValue`] once at the end. Cheap to merge, so it suits parallel
/// reductions.
#[derive(Clone, Debug, Default)]
pub struct RootSum {
    terms: BTreeMap<(u64, u64), Rational>,
}

impl RootSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff · exp(2πi · num/den)`; `num/den` need not be reduced.
    pub fn add(&mut self, num: i64, den: u64, coeff: Rational) {
        let g = (num.rem_euclid(den as i64) as u64).gcd(&den);
        let (a, b) = if g == 0 {
            (0, 1)
        } else {
            ((num.rem_euclid(den as i64) as u64) / g, den / g)
        };
        let b = if a == 0 { 1 } else { b };
        *self.terms.entry((a, b)).or_insert_with(Rational::zero) += coeff;
    }

    pub fn merge(mut self, other: RootSum) -> RootSum {
        for (k, v) in other.terms {
            *self.terms.entry(k).or_insert_with(Rational::zero) += v;
        }
        self
    }

    pub fn evaluate(&self) -> CycValue {
        let n = self.terms.keys().fold(1u64, |acc, &(_, b)| acc.lcm(&b));
        CycValue::from_root_sum(
            n,
            self.terms
                .iter()
                .map(|(&(a, b), c)| ((a * (n / b)) as i64, c.clone())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_frac;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for n in 2..13u64 {
            let s: CycValue = (0..n).map(|k| CycValue::root_of_unity(k as i64, n)).sum();
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn minus_one_has_conductor_one() {
        let v = CycValue::root_of_unity(1, 2);
        assert_eq!(v, CycValue::from_int(-1));
        let i = CycValue::root_of_unity(1, 4);
        assert_eq!(i.conductor(), 4);
        assert_eq!(&i * &i, CycValue::from_int(-1));
    }

    #[test]
    fn conductor_is_minimal() {
        // ζ_6 = -ζ_3^2 lives in Q(ζ_3).
        let z6 = CycValue::root_of_unity(1, 6);
        assert_eq!(z6.conductor(), 3);
        // ζ_8 + ζ_8^7 = √2 needs conductor 8.
        let r2 = &CycValue::root_of_unity(1, 8) + &CycValue::root_of_unity(7, 8);
        assert_eq!(r2.conductor(), 8);
        assert_eq!(&r2 * &r2, CycValue::from_int(2));
        // ζ_12^3 = i.
        assert_eq!(CycValue::root_of_unity(3, 12).conductor(), 4);
    }

    #[test]
    fn root_sum_matches_direct_sum() {
        let mut acc = RootSum::new();
        acc.add(1, 4, rat_frac(1, 2));
        acc.add(2, 8, rat_frac(1, 2));
        acc.add(0, 3, rat_frac(3, 1));
        let direct = &CycValue::root_of_unity(1, 4) + &CycValue::from_int(3);
        assert_eq!(acc.evaluate(), direct);
    }
}
