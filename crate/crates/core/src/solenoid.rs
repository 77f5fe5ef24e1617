//! The p-adic solenoid `Z[1/p] \ (R x Q_p)`: a circle with a `Z_p` fibre
//! over each point, the suspension flow, and its monodromy.
//!
//! Coordinates are kept as exact rationals: the base in `[0, P)` and the
//! fibre in `P Z_(p)`, where the period `P = p^level` is `1` unless the
//! compact subgroup `p^level Z_p` is used instead of `Z_p`. The truncated
//! p-adic view of the fibre is produced on demand.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::padic::{PAdicError, PAdicValue};
use crate::rational::{self, fmt_rational, prime_power, split_prime_power};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolenoidError {
    #[error(transparent)]
    PAdic(#[from] PAdicError),
    #[error("cylinder depth {depth} exceeds the fibre precision {precision}")]
    DepthExceedsPrecision { depth: u32, precision: u32 },
}

impl SolenoidError {
    pub fn name(&self) -> &'static str {
        match self {
            SolenoidError::PAdic(e) => e.name(),
            SolenoidError::DepthExceedsPrecision { .. } => "DepthExceedsPrecision",
        }
    }
}

pub type Result<T> = std::result::Result<T, SolenoidError>;

/// A point of the solenoid in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SolenoidPoint {
    prime: u64,
    level: u32,
    precision: u32,
    base: BigRational,
    fiber: BigRational,
}

/// The `z in Z[1/p]` with `x + z in Z_p` and `0 <= z < 1`.
fn integral_shift(x: &BigRational, p: u64) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let (e, _) = split_prime_power(x.denom(), p);
    if e == 0 {
        return BigRational::zero();
    }
    // x = a / (p^e b) with p ∤ b; need c ≡ -a b^{-1} (mod p^e).
    let m = BigInt::from(p).pow(e as u32);
    let scaled = x * BigRational::from_integer(m.clone());
    let c = rational::residue(&-scaled, &m).expect("p-free denominator");
    BigRational::new(c, m)
}

impl SolenoidPoint {
    /// Canonical representative of `Z[1/p] + (x_inf, x_p)` for the standard
    /// compact subgroup `Z_p`.
    pub fn canonicalize(
        x_inf: &BigRational,
        x_p: &BigRational,
        p: u64,
        precision: u32,
    ) -> Result<Self> {
        Self::canonicalize_with_level(x_inf, x_p, p, precision, 0)
    }

    /// Same with the compact subgroup `p^level Z_p`; the base circle then has
    /// length `p^level`.
    pub fn canonicalize_with_level(
        x_inf: &BigRational,
        x_p: &BigRational,
        p: u64,
        precision: u32,
        level: u32,
    ) -> Result<Self> {
        // Validates p and precision.
        PAdicValue::zero(p, precision)?;
        let period = prime_power(p, level as i64);
        let z = integral_shift(&(x_p / &period), p) * &period;
        let mut pt = SolenoidPoint {
            prime: p,
            level,
            precision,
            base: x_inf + &z,
            fiber: x_p + &z,
        };
        pt.wrap();
        Ok(pt)
    }

    /// Moves the base into `[0, P)` using the integer translations `P Z`.
    fn wrap(&mut self) {
        let period = self.period();
        let n = (&self.base / &period).floor();
        if !n.is_zero() {
            let shift = n * period;
            self.base -= &shift;
            self.fiber -= &shift;
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Length `p^level` of the base circle.
    pub fn period(&self) -> BigRational {
        prime_power(self.prime, self.level as i64)
    }

    /// Circle coordinate in `[0, P)`; this is the projection to `P Z \ R`.
    pub fn base(&self) -> &BigRational {
        &self.base
    }

    /// Exact fibre coordinate, a rational in `P Z_(p)`.
    pub fn fiber_exact(&self) -> &BigRational {
        &self.fiber
    }

    /// Fibre coordinate in `Z_p` at the working precision.
    pub fn fiber(&self) -> PAdicValue {
        PAdicValue::from_rational(&self.fiber, self.prime, self.precision)
            .expect("prime and precision validated at construction")
    }

    /// First `precision` base-`p` digits of the fibre as an element of
    /// `Z_p`, least significant first.
    pub fn fiber_digits(&self) -> Vec<u64> {
        let p = BigInt::from(self.prime);
        let m = p.pow(self.precision);
        let mut rest = rational::residue(&self.fiber, &m).expect("fibre lies in Z_(p)");
        (0..self.precision)
            .map(|_| {
                let (q, r) = rest.div_rem(&p);
                rest = q;
                r.try_into().expect("digit below p")
            })
            .collect()
    }

    /// The flow `p_t` for rational time `t`.
    pub fn flow(&self, t: &BigRational) -> SolenoidPoint {
        let mut out = self.clone();
        out.base += t;
        out.wrap();
        out
    }

    /// Residue of the fibre, measured in units of the period, modulo
    /// `p^depth`; this names the depth-`depth` cylinder containing it.
    pub fn cylinder(&self, depth: u32) -> Result<BigInt> {
        if depth > self.precision {
            return Err(SolenoidError::DepthExceedsPrecision {
                depth,
                precision: self.precision,
            });
        }
        let m = BigInt::from(self.prime).pow(depth);
        Ok(rational::residue(&(&self.fiber / self.period()), &m).expect("fibre lies in Z_(p)"))
    }

    /// Points at the return times `0, P, 2P, ..., (steps - 1) P`.
    pub fn orbit(&self, steps: u64) -> Vec<(BigRational, SolenoidPoint)> {
        let period = self.period();
        let mut cur = self.clone();
        let mut time = BigRational::zero();
        let mut out = Vec::with_capacity(steps as usize);
        for _ in 0..steps {
            let next = cur.flow(&period);
            out.push((time.clone(), std::mem::replace(&mut cur, next)));
            time += &period;
        }
        out
    }
}

impl std::fmt::Display for SolenoidPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {})",
            fmt_rational(&self.base),
            fmt_rational(&self.fiber)
        )
    }
}

/// Counts of the depth-`depth` cylinders visited by the first `steps`
/// returns of the orbit to the fibre of `pt`.
pub fn cylinder_histogram(
    pt: &SolenoidPoint,
    depth: u32,
    steps: u64,
) -> Result<BTreeMap<BigInt, u64>> {
    let mut hist = BTreeMap::new();
    for (_, q) in pt.orbit(steps) {
        *hist.entry(q.cylinder(depth)?).or_insert(0) += 1;
    }
    Ok(hist)
}

/// True when every residue modulo `p^depth` appears the same number of
/// times.
pub fn is_uniform(hist: &BTreeMap<BigInt, u64>, p: u64, depth: u32) -> bool {
    let cells = BigInt::from(p).pow(depth);
    if BigInt::from(hist.len()) != cells {
        return false;
    }
    let mut counts = hist.values();
    let first = counts.next().copied();
    counts.all(|c| Some(*c) == first) && hist.keys().all(|k| !k.is_negative() && *k < cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn canon(xi: BigRational, xp: BigRational, p: u64) -> SolenoidPoint {
        SolenoidPoint::canonicalize(&xi, &xp, p, 16).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let pt = canon(int(0), int(0), 3);
        assert_eq!((pt.base(), pt.fiber_exact()), (&int(0), &int(0)));
        assert!(pt.fiber().is_zero());

        let pt = canon(ratio(1, 3), ratio(1, 2), 2);
        assert_eq!(pt.base(), &ratio(5, 6));
        assert_eq!(pt.fiber_exact(), &int(1));
        assert!(pt.fiber().valuation().unwrap() >= 0);

        let pt = canon(ratio(7, 4), int(0), 2);
        assert_eq!(pt.base(), &ratio(3, 4));
        assert_eq!(pt.fiber_exact(), &int(-1));
        assert_eq!(pt.fiber_digits(), vec![1; 16]);
    }

    #[test]
    fn canonicalize_handles_mixed_denominators() {
        // 5/12 at p = 2: the shift z = 1/4 gives 5/12 + 1/4 = 2/3 in Z_2.
        let pt = canon(int(0), ratio(5, 12), 2);
        assert_eq!(pt.base(), &ratio(1, 4));
        assert_eq!(pt.fiber_exact(), &ratio(2, 3));
        assert!(SolenoidPoint::canonicalize(&int(0), &int(0), 6, 4).is_err());
        assert!(SolenoidPoint::canonicalize(&int(0), &int(0), 2, 0).is_err());
    }

    #[test]
    fn invariant_under_z_one_over_p() {
        let pt = canon(ratio(2, 7), ratio(3, 10), 5);
        for z in [int(1), int(-4), ratio(3, 5), ratio(-7, 125), ratio(11, 25)] {
            let moved = canon(ratio(2, 7) + &z, ratio(3, 10) + &z, 5);
            assert_eq!(moved, pt);
        }
    }

    #[test]
    fn flow_examples() {
        let pt = canon(ratio(1, 3), ratio(1, 2), 2);
        assert_eq!(pt.flow(&int(0)), pt);

        let o = canon(int(0), int(0), 3);
        let one = o.flow(&int(1));
        assert_eq!(one.base(), &int(0));
        assert_eq!(one.fiber_exact(), &int(-1));

        let s = ratio(5, 7);
        let t = ratio(-13, 4);
        assert_eq!(pt.flow(&s).flow(&t), pt.flow(&(&s + &t)));
        // The projection rotates by t.
        let moved = pt.flow(&t);
        assert_eq!(
            moved.base(),
            &rational::rem_floor(&(pt.base() + &t), &int(1))
        );
    }

    #[test]
    fn histogram_examples() {
        let o = canon(int(0), int(0), 3);
        let h = cylinder_histogram(&o, 1, 3).unwrap();
        assert_eq!(
            h,
            BTreeMap::from([
                (BigInt::from(0), 1),
                (BigInt::from(1), 1),
                (BigInt::from(2), 1)
            ])
        );
        let pt = canon(ratio(1, 3), ratio(1, 2), 2);
        for d in 1..=4u32 {
            let h = cylinder_histogram(&pt, d, 2u64.pow(d)).unwrap();
            assert!(is_uniform(&h, 2, d));
            let h = cylinder_histogram(&pt, d, 3 * 2u64.pow(d)).unwrap();
            assert!(is_uniform(&h, 2, d));
            assert!(h.values().all(|&c| c == 3));
        }
        let h = cylinder_histogram(&pt, 3, 7).unwrap();
        assert!(!is_uniform(&h, 2, 3));
        assert_eq!(
            cylinder_histogram(&pt, 17, 4),
            Err(SolenoidError::DepthExceedsPrecision {
                depth: 17,
                precision: 16
            })
        );
    }

    #[test]
    fn rescaled_circle() {
        // Compact subgroup 3 Z_3: the circle has length 3.
        let pt =
            SolenoidPoint::canonicalize_with_level(&ratio(10, 3), &ratio(1, 3), 3, 8, 1).unwrap();
        assert_eq!(pt.period(), int(3));
        assert!(pt.base() >= &int(0) && pt.base() < &int(3));
        assert!(pt.fiber().valuation().unwrap() >= 1);
        let back = pt.flow(&int(3));
        assert_eq!(back.base(), pt.base());
        assert_eq!(back.fiber_exact(), &(pt.fiber_exact() - int(3)));
        let h = cylinder_histogram(&pt, 2, 9).unwrap();
        assert!(is_uniform(&h, 3, 2));
    }
}
