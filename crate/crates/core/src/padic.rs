//! Fixed-precision arithmetic in `Z_p` and `Q_p`, absolute values at every
//! place of `Q`, and the product formula.
//!
//! A [`PAdicValue`] stores `p^v * u` where `u` is a unit known modulo `p^k`;
//! `k` is the relative precision. Exact zero is a separate state with
//! valuation `+inf`. Additive cancellation lowers the precision of the result
//! instead of padding it with invented digits.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, prime_power, split_prime_power};

/// Working precision used when nothing else is requested.
pub const DEFAULT_PRECISION: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PAdicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least one digit")]
    ZeroPrecision,
    #[error("operands live over different primes ({0} and {1})")]
    MismatchedPrime(u64, u64),
    #[error("cannot invert exact zero")]
    DivisionByZero,
    #[error("additive cancellation left no significant digits")]
    PrecisionExhausted,
    #[error("the product formula is only defined for nonzero rationals")]
    ZeroInput,
}

impl PAdicError {
    pub fn name(&self) -> &'static str {
        match self {
            PAdicError::NotPrime(_) => "NotPrime",
            PAdicError::ZeroPrecision => "ZeroPrecision",
            PAdicError::MismatchedPrime(..) => "MismatchedPrime",
            PAdicError::DivisionByZero => "DivisionByZero",
            PAdicError::PrecisionExhausted => "PrecisionExhausted",
            PAdicError::ZeroInput => "ZeroInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, PAdicError>;

fn check_prime(p: u64) -> Result<()> {
    if rational::is_prime(p) {
        Ok(())
    } else {
        Err(PAdicError::NotPrime(p))
    }
}

fn modulus(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

/// Truncated p-adic number `p^valuation * unit (mod p^(valuation + precision))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicValue {
    prime: u64,
    /// `None` is exact zero.
    valuation: Option<i64>,
    unit: BigInt,
    precision: u32,
}

impl PAdicValue {
    /// Exact zero over `Q_p`.
    pub fn zero(p: u64, precision: u32) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(PAdicError::ZeroPrecision);
        }
        Ok(PAdicValue {
            prime: p,
            valuation: None,
            unit: BigInt::zero(),
            precision,
        })
    }

    /// Image of a rational in `Q_p`, truncated to `precision` digits.
    pub fn from_rational(r: &BigRational, p: u64, precision: u32) -> Result<Self> {
        let zero = Self::zero(p, precision)?;
        if r.is_zero() {
            return Ok(zero);
        }
        let (a, num) = split_prime_power(r.numer(), p);
        let (b, den) = split_prime_power(r.denom(), p);
        let m = modulus(p, precision);
        let inv = rational::mod_inverse(&den, &m).expect("denominator is prime to p");
        Ok(PAdicValue {
            prime: p,
            valuation: Some(a as i64 - b as i64),
            unit: (num * inv).mod_floor(&m),
            precision,
        })
    }

    pub fn from_integer(n: i64, p: u64, precision: u32) -> Result<Self> {
        Self::from_rational(&rational::int(n), p, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `None` stands for `+inf` (exact zero).
    pub fn valuation(&self) -> Option<i64> {
        self.valuation
    }

    /// Unit part in `[1, p^precision)`; zero for exact zero.
    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    /// Exponent of the power of `p` this value is known modulo; `None` when
    /// the value is exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        self.valuation.map(|v| v + self.precision as i64)
    }

    /// Base-`p` digits of the unit part, least significant first, always
    /// `precision` of them.
    pub fn unit_digits(&self) -> Vec<u64> {
        let p = BigInt::from(self.prime);
        let mut rest = self.unit.clone();
        (0..self.precision)
            .map(|_| {
                let (q, r) = rest.div_rem(&p);
                rest = q;
                r.try_into().expect("digit below p")
            })
            .collect()
    }

    /// The rational `p^v * u` standing for this truncated value.
    pub fn to_rational(&self) -> BigRational {
        match self.valuation {
            None => BigRational::zero(),
            Some(v) => prime_power(self.prime, v) * BigRational::from_integer(self.unit.clone()),
        }
    }

    /// `|x|_p = p^(-v)`, or zero.
    pub fn abs(&self) -> BigRational {
        match self.valuation {
            None => BigRational::zero(),
            Some(v) => prime_power(self.prime, -v),
        }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(PAdicError::MismatchedPrime(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = modulus(self.prime, self.precision);
        PAdicValue {
            unit: (-&self.unit).mod_floor(&m),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let (va, vb) = match (self.valuation, other.valuation) {
            (None, _) => return Ok(other.clone()),
            (_, None) => return Ok(self.clone()),
            (Some(a), Some(b)) => (a, b),
        };
        let p = self.prime;
        let v = va.min(vb);
        let abs = (va + self.precision as i64).min(vb + other.precision as i64);
        let rel = (abs - v) as u32;
        let m = modulus(p, rel);
        let lift = |u: &BigInt, shift: i64| u * BigInt::from(p).pow(shift as u32);
        let sum = (lift(&self.unit, va - v) + lift(&other.unit, vb - v)).mod_floor(&m);
        if sum.is_zero() {
            return Err(PAdicError::PrecisionExhausted);
        }
        let (j, unit) = split_prime_power(&sum, p);
        let precision = rel - j as u32;
        Ok(PAdicValue {
            prime: p,
            valuation: Some(v + j as i64),
            unit: unit.mod_floor(&modulus(p, precision)),
            precision,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let precision = self.precision.min(other.precision);
        let (va, vb) = match (self.valuation, other.valuation) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Ok(PAdicValue {
                    prime: self.prime,
                    valuation: None,
                    unit: BigInt::zero(),
                    precision,
                })
            }
        };
        let m = modulus(self.prime, precision);
        Ok(PAdicValue {
            prime: self.prime,
            valuation: Some(va + vb),
            unit: (&self.unit * &other.unit).mod_floor(&m),
            precision,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self.valuation.ok_or(PAdicError::DivisionByZero)?;
        let m = modulus(self.prime, self.precision);
        let unit = rational::mod_inverse(&self.unit, &m).expect("unit part is prime to p");
        Ok(PAdicValue {
            valuation: Some(-v),
            unit,
            ..self.clone()
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Equality at the precision both operands actually carry: the
    /// difference vanishes modulo `p^min(abs_prec(a), abs_prec(b))`.
    pub fn congruent(&self, other: &Self) -> Result<bool> {
        self.same_prime(other)?;
        let diff = self.to_rational() - other.to_rational();
        let Some(vd) = rational::valuation(&diff, self.prime) else {
            return Ok(true);
        };
        Ok(
            match (self.absolute_precision(), other.absolute_precision()) {
                (None, None) => false,
                (Some(a), None) | (None, Some(a)) => vd >= a,
                (Some(a), Some(b)) => vd >= a.min(b),
            },
        )
    }
}

impl fmt::Display for PAdicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            None => write!(f, "0"),
            Some(v) => write!(
                f,
                "{}^{} * {} + O({}^{})",
                self.prime,
                v,
                self.unit,
                self.prime,
                v + self.precision as i64
            ),
        }
    }
}

/// A place of `Q`: the archimedean one or a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Finite(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Place::Finite(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// `|r|_place` as an exact rational.
pub fn abs_at_place(r: &BigRational, place: Place) -> BigRational {
    match place {
        Place::Infinity => r.abs(),
        Place::Finite(p) => match rational::valuation(r, p) {
            None => BigRational::zero(),
            Some(v) => prime_power(p, -v),
        },
    }
}

/// The places where `|r|_place != 1`, together with `inf`, in order.
pub fn support(r: &BigRational) -> Result<Vec<Place>> {
    if r.is_zero() {
        return Err(PAdicError::ZeroInput);
    }
    let mut primes = rational::prime_divisors(r.numer());
    primes.extend(rational::prime_divisors(r.denom()));
    primes.sort_unstable();
    primes.dedup();
    Ok(std::iter::once(Place::Infinity)
        .chain(primes.into_iter().map(Place::Finite))
        .collect())
}

/// Every nontrivial factor of the product formula for `r`.
pub fn product_formula_terms(r: &BigRational) -> Result<Vec<(Place, BigRational)>> {
    Ok(support(r)?
        .into_iter()
        .map(|place| (place, abs_at_place(r, place)))
        .collect())
}

/// `prod_v |r|_v` over all places; exactly one for every nonzero rational.
pub fn product_formula_check(r: &BigRational) -> Result<BigRational> {
    Ok(product_formula_terms(r)?
        .into_iter()
        .fold(BigRational::one(), |acc, (_, a)| acc * a))
}
