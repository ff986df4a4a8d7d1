//! Truncated power series of dimension sequences.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{rat, rational_string, Rational};
use crate::error::{Error, Result};

/// `Σ_{m ≤ M} a_m t^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimSeries {
    coeffs: Vec<Rational>,
}

impl DimSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        DimSeries { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<num_bigint::BigInt>,
    {
        DimSeries::new(coeffs.into_iter().map(rat).collect())
    }

    /// `1 + 0·t + ⋯` with `len` coefficients.
    pub fn identity(len: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); len];
        if let Some(c) = coeffs.first_mut() {
            *c = Rational::one();
        }
        DimSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        *self == DimSeries::identity(self.len())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_string).collect()
    }
}

/// Cauchy product, with `b_m` replaced by `(-1)^m b_m` when
/// `alternate_signs` is set. The result has the shorter truncation.
pub fn series_product(a: &DimSeries, b: &DimSeries, alternate_signs: bool) -> DimSeries {
    let len = a.len().min(b.len());
    let coeffs = (0..len)
        .map(|m| {
            (0..=m).fold(Rational::zero(), |acc, i| {
                let bj = &b.coeffs[m - i];
                let term = &a.coeffs[i] * bj;
                if alternate_signs && (m - i) % 2 == 1 {
                    acc - term
                } else {
                    acc + term
                }
            })
        })
        .collect();
    DimSeries { coeffs }
}

/// Multiplicative inverse to the same truncation.
pub fn series_inverse(a: &DimSeries) -> Result<DimSeries> {
    if a.coeffs.first().is_none_or(|c| !c.is_one()) {
        return Err(Error::NotUnit);
    }
    let mut inv: Vec<Rational> = Vec::with_capacity(a.len());
    inv.push(Rational::one());
    for m in 1..a.len() {
        let s = (1..=m).fold(Rational::zero(), |acc, i| acc + &a.coeffs[i] * &inv[m - i]);
        inv.push(-s);
    }
    Ok(DimSeries { coeffs: inv })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub d: i64,
    pub max_m: u32,
    pub sym: Vec<String>,
    pub alt: Vec<String>,
    pub product: Vec<String>,
    pub identity_holds: bool,
    pub first_failure: Option<usize>,
}

/// Checks `(Σ Sym_m t^m)(Σ alt_m (-t)^m) = 1` up to `t^{max_m}`.
pub fn verify_identity<S, A>(sym_eval: S, alt_eval: A, max_m: u32, d: i64) -> Result<IdentityReport>
where
    S: Fn(u32) -> Result<Rational>,
    A: Fn(u32) -> Result<Rational>,
{
    let sym = DimSeries::new((0..=max_m).map(&sym_eval).collect::<Result<_>>()?);
    let alt = DimSeries::new((0..=max_m).map(&alt_eval).collect::<Result<_>>()?);
    verify_series(&sym, &alt, d)
}

/// [`verify_identity`] on precomputed series.
pub fn verify_series(sym: &DimSeries, alt: &DimSeries, d: i64) -> Result<IdentityReport> {
    let product = series_product(sym, alt, true);
    let first_failure = product
        .coeffs
        .iter()
        .enumerate()
        .position(|(m, c)| if m == 0 { !c.is_one() } else { !c.is_zero() });
    Ok(IdentityReport {
        d,
        max_m: product.len().saturating_sub(1) as u32,
        sym: sym.to_strings(),
        alt: alt.to_strings(),
        product: product.to_strings(),
        identity_holds: first_failure.is_none(),
        first_failure,
    })
}
