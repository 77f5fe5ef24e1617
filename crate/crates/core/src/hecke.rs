//! Hecke neighbours, the restricted product of `(p+1)`-regular trees, Hecke
//! spheres `S_N` pushed to `X(1)`, and the coset enumeration of primitive
//! index-`N` sublattices used as an independent check.
//!
//! Child labelling of the tree at a prime `p`: letter `0` is `p z` and letter
//! `k + 1` is `(z + k)/p`, always taken at the reduced representative of the
//! current vertex. A step backtracks when its reduced image is the previous
//! vertex; when several candidates coincide with the previous vertex only the
//! first one is the backtracking edge, the others are genuine children that
//! happen to land on the same class.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::modsurface::{affine_apply, reduce_point, HPoint, IntMatrix2};
use crate::rational::{dedekind_psi, factor_u64, is_prime};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("radius must be a positive integer")]
    ZeroRadius,
    #[error("letter {letter} at position {position} of the word for p = {prime} is not a valid non-backtracking step")]
    InvalidWord {
        prime: u64,
        position: usize,
        letter: u32,
    },
    #[error("prime order {order:?} does not match the primes dividing {n}")]
    BadPermutation { n: u64, order: Vec<u64> },
}

impl HeckeError {
    pub fn name(&self) -> &'static str {
        match self {
            HeckeError::NotPrime(_) => "NotPrime",
            HeckeError::ZeroRadius => "ZeroRadius",
            HeckeError::InvalidWord { .. } => "InvalidWord",
            HeckeError::BadPermutation { .. } => "BadPermutation",
        }
    }
}

pub type Result<T> = std::result::Result<T, HeckeError>;

/// Reduced points with multiplicities, ordered by `(x, y)`.
pub type Multiset = BTreeMap<HPoint, u64>;

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(HeckeError::NotPrime(p))
    }
}

fn add_scaled(dst: &mut Multiset, src: Multiset, factor: u64) {
    for (z, m) in src {
        *dst.entry(z).or_insert(0) += m * factor;
    }
}

fn merge(mut a: Multiset, b: Multiset) -> Multiset {
    if a.len() < b.len() {
        return merge(b, a);
    }
    add_scaled(&mut a, b, 1);
    a
}

/// The image of a sphere `S_N` in `X(1)`, weighted by multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeSphere {
    pub radius: u64,
    pub center: HPoint,
    pub points: Multiset,
}

impl HeckeSphere {
    /// Number of tree vertices on the sphere, i.e. the sum of multiplicities.
    pub fn total(&self) -> u64 {
        self.points.values().sum()
    }

    pub fn distinct(&self) -> usize {
        self.points.len()
    }
}

/// A point of the restricted product of trees: finitely many primes each
/// carrying the word of edge choices from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeAddress {
    words: BTreeMap<u64, Vec<u32>>,
}

impl TreeAddress {
    pub fn root() -> Self {
        Self::default()
    }

    /// Sets the word at `p`. Letters must lie in `0..=p`; whether a word
    /// backtracks depends on the base point and is checked by [`walk`].
    pub fn with(mut self, p: u64, word: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if let Some((position, &letter)) = word.iter().find_position(|&&l| l as u64 > p) {
            return Err(HeckeError::InvalidWord {
                prime: p,
                position,
                letter,
            });
        }
        if word.is_empty() {
            self.words.remove(&p);
        } else {
            self.words.insert(p, word);
        }
        Ok(self)
    }

    pub fn words(&self) -> &BTreeMap<u64, Vec<u32>> {
        &self.words
    }

    /// Distance from the root of the tree at `p`.
    pub fn distance(&self, p: u64) -> usize {
        self.words.get(&p).map_or(0, Vec::len)
    }

    /// The `N` whose sphere contains this address.
    pub fn radius(&self) -> u64 {
        self.words
            .iter()
            .map(|(&p, w)| p.pow(w.len() as u32))
            .product()
    }
}

/// The `p + 1` Hecke neighbours of `z`, unreduced: `p z` then `(z + k)/p`
/// for `k = 0..p`.
pub fn neighbors(z: &HPoint, p: u64) -> Result<Vec<HPoint>> {
    check_prime(p)?;
    Ok(raw_neighbors(z, p))
}

fn raw_neighbors(z: &HPoint, p: u64) -> Vec<HPoint> {
    let one = BigInt::from(1);
    let bp = BigInt::from(p);
    let mut out = Vec::with_capacity(p as usize + 1);
    out.push(affine_apply(&bp, &BigInt::from(0), &one, z));
    for k in 0..p {
        out.push(affine_apply(&one, &BigInt::from(k), &bp, z));
    }
    out
}

fn reduced_neighbors(z: &HPoint, p: u64) -> Vec<HPoint> {
    raw_neighbors(z, p).iter().map(reduce_point).collect()
}

/// Neighbours of `z` in `X(1)` with multiplicities.
pub fn neighbors_reduced(z: &HPoint, p: u64) -> Result<Multiset> {
    check_prime(p)?;
    let mut out = Multiset::new();
    for w in reduced_neighbors(&reduce_point(z), p) {
        *out.entry(w).or_insert(0) += 1;
    }
    Ok(out)
}

fn backtrack_letter(candidates: &[HPoint], prev: &HPoint) -> usize {
    candidates
        .iter()
        .position(|c| c == prev)
        .expect("p * (previous lattice) is always an index-p sublattice of the current one")
}

fn walk_prime(start: HPoint, p: u64, word: &[u32]) -> Result<HPoint> {
    let mut cur = start;
    let mut prev: Option<HPoint> = None;
    for (position, &letter) in word.iter().enumerate() {
        let mut cands = reduced_neighbors(&cur, p);
        if letter as usize >= cands.len()
            || prev
                .as_ref()
                .is_some_and(|pv| backtrack_letter(&cands, pv) == letter as usize)
        {
            return Err(HeckeError::InvalidWord {
                prime: p,
                position,
                letter,
            });
        }
        let next = cands.swap_remove(letter as usize);
        prev = Some(std::mem::replace(&mut cur, next));
    }
    Ok(cur)
}

/// `h^z(addr)`: follow each prime's word from `reduce(z)`, primes ascending.
pub fn walk(z: &HPoint, addr: &TreeAddress) -> Result<HPoint> {
    let order: Vec<u64> = addr.words.keys().copied().collect();
    walk_in_order(z, addr, &order)
}

/// As [`walk`] but visiting the primes in `order`, which must list every
/// prime of the address exactly once.
pub fn walk_in_order(z: &HPoint, addr: &TreeAddress, order: &[u64]) -> Result<HPoint> {
    let mut keys: Vec<u64> = order.to_vec();
    keys.sort_unstable();
    let expected: Vec<u64> = addr.words.keys().copied().collect();
    if keys != expected {
        return Err(HeckeError::BadPermutation {
            n: addr.radius(),
            order: order.to_vec(),
        });
    }
    let mut cur = reduce_point(z);
    for p in order {
        cur = walk_prime(cur, *p, &addr.words[p])?;
    }
    Ok(cur)
}

fn descend(cur: HPoint, prev: Option<&HPoint>, p: u64, remaining: u32, out: &mut Multiset) {
    if remaining == 0 {
        *out.entry(cur).or_insert(0) += 1;
        return;
    }
    let cands = reduced_neighbors(&cur, p);
    let skip = prev.map(|pv| backtrack_letter(&cands, pv));
    for (i, c) in cands.into_iter().enumerate() {
        if Some(i) != skip {
            descend(c, Some(&cur), p, remaining - 1, out);
        }
    }
}

/// Image of the sphere of radius `depth` in the tree at `p`, rooted at the
/// reduced point `start`.
fn prime_sphere(start: &HPoint, p: u64, depth: u32) -> Multiset {
    if depth == 0 {
        return Multiset::from([(start.clone(), 1)]);
    }
    reduced_neighbors(start, p)
        .into_par_iter()
        .map(|child| {
            let mut local = Multiset::new();
            descend(child, Some(start), p, depth - 1, &mut local);
            local
        })
        .reduce(Multiset::new, merge)
}

fn checked_order(n: u64, order: &[u64]) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(HeckeError::ZeroRadius);
    }
    let factors: BTreeMap<u64, u32> = factor_u64(n).into_iter().collect();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted.iter().copied().ne(factors.keys().copied()) {
        return Err(HeckeError::BadPermutation {
            n,
            order: order.to_vec(),
        });
    }
    Ok(order.iter().map(|p| (*p, factors[p])).collect())
}

/// Sphere of radius `N` built on the trees, primes processed in `order`.
pub fn sphere_tree_ordered(z: &HPoint, n: u64, order: &[u64]) -> Result<HeckeSphere> {
    let steps = checked_order(n, order)?;
    let center = reduce_point(z);
    let mut current = Multiset::from([(center.clone(), 1)]);
    for (p, nu) in steps {
        current = current
            .into_par_iter()
            .map(|(w, m)| {
                let mut local = Multiset::new();
                add_scaled(&mut local, prime_sphere(&w, p, nu), m);
                local
            })
            .reduce(Multiset::new, merge);
    }
    Ok(HeckeSphere {
        radius: n,
        center,
        points: current,
    })
}

/// Sphere of radius `N` built on the trees, primes in increasing order.
pub fn sphere_tree(z: &HPoint, n: u64) -> Result<HeckeSphere> {
    let order: Vec<u64> = factor_u64(n).into_iter().map(|(p, _)| p).collect();
    sphere_tree_ordered(z, n, &order)
}

/// Every address on the sphere of radius `N` together with its image,
/// listed one by one. Exponential in the size of `N`; intended for checking
/// [`sphere_tree`] on small radii.
pub fn enumerate_addresses(z: &HPoint, n: u64) -> Result<Vec<(TreeAddress, HPoint)>> {
    if n == 0 {
        return Err(HeckeError::ZeroRadius);
    }
    let mut out = vec![(TreeAddress::root(), reduce_point(z))];
    for (p, nu) in factor_u64(n) {
        let mut next = Vec::new();
        for (addr, w) in out {
            let mut words: Vec<(Vec<u32>, HPoint, Option<HPoint>)> = vec![(vec![], w, None)];
            for _ in 0..nu {
                let mut deeper = Vec::new();
                for (word, cur, prev) in words {
                    let cands = reduced_neighbors(&cur, p);
                    let skip = prev.as_ref().map(|pv| backtrack_letter(&cands, pv));
                    for (i, c) in cands.into_iter().enumerate() {
                        if Some(i) != skip {
                            let mut wd = word.clone();
                            wd.push(i as u32);
                            deeper.push((wd, c, Some(cur.clone())));
                        }
                    }
                }
                words = deeper;
            }
            for (word, cur, _) in words {
                next.push((addr.clone().with(p, word)?, cur));
            }
        }
        out = next;
    }
    Ok(out)
}

/// Upper-triangular representatives `(a b; 0 d)` with `a d = N`,
/// `0 <= b < d`; with `primitive` only those with `gcd(a, b, d) = 1`.
/// Listed by decreasing `a`, then increasing `b`.
pub fn hecke_representatives(n: u64, primitive: bool) -> Vec<IntMatrix2> {
    let mut divisors: Vec<u64> = (1..=n).filter(|a| n.is_multiple_of(*a)).collect();
    divisors.reverse();
    let mut out = Vec::new();
    for a in divisors {
        let d = n / a;
        for b in 0..d {
            if primitive && a.gcd(&b).gcd(&d) != 1 {
                continue;
            }
            out.push(IntMatrix2 {
                a: a.into(),
                b: b.into(),
                c: 0.into(),
                d: d.into(),
            });
        }
    }
    out
}

/// Representatives of the primitive index-`N` sublattices; there are
/// `psi(N)` of them.
pub fn coset_representatives(n: u64) -> Vec<IntMatrix2> {
    hecke_representatives(n, true)
}

/// The points `(a z + b)/d` for each representative, unreduced.
pub fn coset_images(z: &HPoint, n: u64, primitive: bool) -> Result<Vec<HPoint>> {
    if n == 0 {
        return Err(HeckeError::ZeroRadius);
    }
    Ok(hecke_representatives(n, primitive)
        .iter()
        .map(|m| affine_apply(&m.a, &m.b, &m.d, z))
        .collect())
}

/// Hecke correspondence `T_N` applied to `z`, with or without the
/// primitivity condition.
pub fn hecke_image(z: &HPoint, n: u64, primitive: bool) -> Result<HeckeSphere> {
    let images = coset_images(z, n, primitive)?;
    let points = images
        .par_iter()
        .map(|w| Multiset::from([(reduce_point(w), 1)]))
        .reduce(Multiset::new, merge);
    Ok(HeckeSphere {
        radius: n,
        center: reduce_point(z),
        points,
    })
}

/// Sphere of radius `N` computed from the primitive coset representatives.
pub fn sphere_coset(z: &HPoint, n: u64) -> Result<HeckeSphere> {
    hecke_image(z, n, true)
}

/// Whether processing the primes of `N` in `order` reproduces the sphere
/// built in increasing order.
pub fn order_invariance_check(z: &HPoint, n: u64, order: &[u64]) -> Result<bool> {
    let permuted = sphere_tree_ordered(z, n, order)?;
    let canonical = sphere_tree(z, n)?;
    Ok(permuted.points == canonical.points)
}

/// `psi(N)`, the number of vertices on the sphere of radius `N`.
pub fn sphere_cardinality(n: u64) -> u64 {
    dedekind_psi(n)
}
