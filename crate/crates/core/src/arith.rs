//! Small exact-arithmetic helpers shared across modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Binomial coefficient C(n, k) for integer `n` (possibly negative) and
/// nonnegative `k`, using the falling-factorial definition.
pub fn binomial(n: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
    }
    num / BigInt::from(factorial(k))
}

pub fn int_pow(base: &BigInt, exp: u64) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rat_frac(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn recip(n: &BigUint) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(n.clone()))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// True iff `n` is a power of `p` (including `p^0 = 1`).
pub fn is_p_power(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

pub fn p_valuation(n: &BigUint, p: u64) -> u32 {
    let mut n = n.clone();
    let p = BigUint::from(p);
    let mut v = 0;
    if n.is_zero() {
        return 0;
    }
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Renders a rational as `"a"` or `"a/b"`.
pub fn rational_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Rational::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_handles_negative_top() {
        assert_eq!(binomial(&BigInt::from(5), 2), BigInt::from(10));
        assert_eq!(binomial(&BigInt::from(3), 5), BigInt::zero());
        // C(-2, 2) = (-2)(-3)/2 = 3
        assert_eq!(binomial(&BigInt::from(-2), 2), BigInt::from(3));
    }

    #[test]
    fn p_powers() {
        assert!(is_p_power(1, 2));
        assert!(is_p_power(8, 2));
        assert!(!is_p_power(6, 2));
        assert!(is_p_power(27, 3));
        assert_eq!(p_valuation(&BigUint::from(24u32), 2), 3);
    }

    #[test]
    fn rational_round_trip() {
        let q = parse_rational("-3/6").unwrap();
        assert_eq!(rational_string(&q), "-1/2");
        assert_eq!(rational_string(&parse_rational("4").unwrap()), "4");
        assert!(parse_rational("1/0").is_none());
    }
}
