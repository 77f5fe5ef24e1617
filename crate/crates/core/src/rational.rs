//! Exact rational helpers shared by every module: the canonical `"num/den"`
//! text form, p-adic valuations of integers and rationals, primality and
//! factorisation of machine-sized integers.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse {input:?} as a rational number")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parses `"num/den"` or a bare integer `"num"`. The result is in lowest
/// terms with a positive denominator.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseRationalError> {
    let err = || ParseRationalError {
        input: s.to_string(),
    };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text form: `num/den`, `den > 0`, `gcd(num, den) = 1`. Integers
/// keep the `/1`.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Display adapter for [`fmt_rational`].
pub struct Canonical<'a>(pub &'a BigRational);

impl fmt::Display for Canonical<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Splits a nonzero integer as `p^v * rest` with `p ∤ rest`.
pub fn split_prime_power(n: &BigInt, p: u64) -> (u64, BigInt) {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u64 {
    split_prime_power(n, p).0
}

/// `v_p(r)` for a nonzero rational; `None` for zero.
pub fn valuation(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let a = int_valuation(r.numer(), p) as i64;
    let b = int_valuation(r.denom(), p) as i64;
    Some(a - b)
}

/// `p^e` as an exact rational, for any sign of `e`.
pub fn prime_power(p: u64, e: i64) -> BigRational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// True when the reduced denominator of `r` is a power of `p`.
pub fn has_p_power_denominator(r: &BigRational, p: u64) -> bool {
    let (_, rest) = split_prime_power(r.denom(), p);
    rest.is_one()
}

/// Least nonnegative representative of `r` modulo `modulus` in the real
/// sense: `r - modulus * floor(r / modulus)`.
pub fn rem_floor(r: &BigRational, modulus: &BigRational) -> BigRational {
    r - modulus * (r / modulus).floor()
}

/// Inverse of `a` modulo `m` (`m > 1`), if it exists, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Image of `r` in `Z / m Z` for `r` with denominator prime to `m`.
pub fn residue(r: &BigRational, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(r.denom(), m)?;
    Some((r.numer() * inv).mod_floor(m))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all of `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of a nonzero big integer, ascending.
///
/// Trial division; intended for the moderately sized numerators and
/// denominators the product formula is evaluated on.
pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    let mut m: BigUint = n.abs().to_biguint().expect("absolute value");
    if let Some(small) = m.to_u64() {
        return factor_u64(small).into_iter().map(|(p, _)| p).collect();
    }
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigUint::from(d) * BigUint::from(d) <= m {
        let bd = BigUint::from(d);
        if (&m % &bd).is_zero() {
            out.push(d);
            while (&m % &bd).is_zero() {
                m /= &bd;
            }
            if let Some(small) = m.to_u64() {
                out.extend(factor_u64(small).into_iter().map(|(p, _)| p));
                out.dedup();
                return out;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        out.push(
            m.to_u64()
                .expect("cofactor exceeds u64 after trial division"),
        );
    }
    out
}

/// Dedekind psi: `N * prod_{p | N} (1 + 1/p)`.
pub fn dedekind_psi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .map(|(p, e)| (p + 1) * p.pow(e - 1))
        .product()
}

pub fn sign_of(r: &BigRational) -> Sign {
    if r.is_zero() {
        Sign::NoSign
    } else if r.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}
