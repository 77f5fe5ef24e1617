//! The `(p+1)`-regular Bruhat-Tits tree `PGL(2, Q_p) / PGL(2, Z_p)`.
//!
//! A vertex is the homothety class of the lattice spanned by the columns
//! `(p^m, 0)` and `(u, 1)`; `u` lives in `Z[1/p]` and only matters modulo
//! `p^m Z_p`, so the normal form keeps `0 <= u < p^m`.

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::rational::{self, fmt_rational, has_p_power_denominator, prime_power, rem_floor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BtError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("vertices live in trees for different primes ({0} and {1})")]
    MismatchedPrime(u64, u64),
    #[error("shift {shift} is not in Z[1/{prime}]")]
    ShiftNotInRing { prime: u64, shift: String },
}

impl BtError {
    pub fn name(&self) -> &'static str {
        match self {
            BtError::NotPrime(_) => "NotPrime",
            BtError::MismatchedPrime(..) => "MismatchedPrime",
            BtError::ShiftNotInRing { .. } => "ShiftNotInRing",
        }
    }
}

pub type Result<T> = std::result::Result<T, BtError>;

/// Vertex of the tree in normal form `(m, u mod p^m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BTVertex {
    prime: u64,
    scale: i64,
    shift: BigRational,
}

impl BTVertex {
    pub fn new(p: u64, scale: i64, shift: BigRational) -> Result<Self> {
        if !rational::is_prime(p) {
            return Err(BtError::NotPrime(p));
        }
        if !has_p_power_denominator(&shift, p) {
            return Err(BtError::ShiftNotInRing {
                prime: p,
                shift: fmt_rational(&shift),
            });
        }
        Ok(Self::normalized(p, scale, shift))
    }

    fn normalized(p: u64, scale: i64, shift: BigRational) -> Self {
        let shift = rem_floor(&shift, &prime_power(p, scale));
        BTVertex {
            prime: p,
            scale,
            shift,
        }
    }

    /// The class of the standard lattice `Z_p^2`.
    pub fn root(p: u64) -> Result<Self> {
        Self::new(p, 0, BigRational::zero())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn shift(&self) -> &BigRational {
        &self.shift
    }
}

impl fmt::Display for BTVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.scale, fmt_rational(&self.shift))
    }
}

/// A basis `[(p^m, 0), (u, 1)]` with `u` kept unreduced: a point of
/// `PGL(2, Q_p)` rather than of the tree. `h_p` acts on frames by a genuine
/// group action.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    prime: u64,
    scale: i64,
    shift: BigRational,
}

impl Frame {
    /// The normal-form basis of a vertex.
    pub fn of(v: &BTVertex) -> Self {
        Frame {
            prime: v.prime,
            scale: v.scale,
            shift: v.shift.clone(),
        }
    }

    /// Right multiplication by `h_p^n = diag(p^n, 1)`.
    pub fn flow(&self, n: i64) -> Frame {
        Frame {
            scale: self.scale + n,
            ..self.clone()
        }
    }

    pub fn vertex(&self) -> BTVertex {
        BTVertex::normalized(self.prime, self.scale, self.shift.clone())
    }
}

/// The `p + 1` vertices adjacent to `v`: first the class of
/// `Z_p (p^m, 0) + Z_p p (u, 1)`, then `Z_p (p^(m+1), 0) + Z_p (u + k p^m, 1)`
/// for `k = 0..p`.
pub fn bt_neighbors(v: &BTVertex) -> Vec<BTVertex> {
    let p = v.prime;
    let step = prime_power(p, v.scale);
    let mut out = Vec::with_capacity(p as usize + 1);
    out.push(BTVertex::normalized(p, v.scale - 1, v.shift.clone()));
    let mut shift = v.shift.clone();
    for _ in 0..p {
        out.push(BTVertex::normalized(p, v.scale + 1, shift.clone()));
        shift += &step;
    }
    out
}

fn same_prime(v: &BTVertex, w: &BTVertex) -> Result<()> {
    if v.prime != w.prime {
        return Err(BtError::MismatchedPrime(v.prime, w.prime));
    }
    Ok(())
}

/// Graph distance from the elementary divisors of `g_v^{-1} g_w`:
/// `v_p(det) - 2 * min v_p(entry)`.
pub fn bt_distance(v: &BTVertex, w: &BTVertex) -> Result<u64> {
    same_prime(v, w)?;
    let p = v.prime;
    // g_v^{-1} g_w = p^{-m} [[p^{m'}, u' - u], [0, p^m]]
    let det_val = w.scale - v.scale;
    let entries = [
        Some(w.scale - v.scale),
        rational::valuation(&(&w.shift - &v.shift), p).map(|e| e - v.scale),
        Some(0),
    ];
    let min_val = entries.into_iter().flatten().min().expect("nonempty");
    Ok((det_val - 2 * min_val) as u64)
}

/// Normal form of the class of `g_v h_p^n`.
pub fn flow_h_p(v: &BTVertex, n: i64) -> BTVertex {
    Frame::of(v).flow(n).vertex()
}

/// All vertices at distance exactly `n` from `v`, by non-backtracking walks.
pub fn bt_sphere(v: &BTVertex, n: u32) -> Vec<BTVertex> {
    fn descend(cur: BTVertex, prev: &BTVertex, remaining: u32, out: &mut Vec<BTVertex>) {
        if remaining == 0 {
            out.push(cur);
            return;
        }
        for w in bt_neighbors(&cur) {
            if w != *prev {
                descend(w, &cur, remaining - 1, out);
            }
        }
    }
    if n == 0 {
        return vec![v.clone()];
    }
    bt_neighbors(v)
        .into_par_iter()
        .map(|w| {
            let mut out = Vec::new();
            descend(w, v, n - 1, &mut out);
            out
        })
        .reduce(Vec::new, |mut a, b| {
            a.extend(b);
            a
        })
}

/// Breadth-first search from `v` out to `radius`, using only adjacency.
#[derive(Debug, Clone)]
pub struct BfsBall {
    /// `levels[d]` holds the vertices first reached at depth `d`.
    pub levels: Vec<Vec<BTVertex>>,
    /// Parent of every non-root vertex, in the order of discovery.
    pub parent: std::collections::HashMap<BTVertex, BTVertex>,
    /// Edges leading to an already discovered vertex other than the parent.
    pub cycle_edges: usize,
}

impl BfsBall {
    pub fn depth_of(&self, v: &BTVertex) -> Option<usize> {
        self.levels.iter().position(|level| level.contains(v))
    }

    /// Distance read off the BFS spanning tree by climbing to the common
    /// ancestor. Both vertices must lie in the ball.
    pub fn tree_distance(&self, v: &BTVertex, w: &BTVertex) -> Option<u64> {
        let path = |x: &BTVertex| -> Option<Vec<BTVertex>> {
            let mut out = vec![x.clone()];
            let mut cur = x;
            while let Some(p) = self.parent.get(cur) {
                out.push(p.clone());
                cur = p;
            }
            (out.last() == self.levels[0].first()).then_some(out)
        };
        let pv = path(v)?;
        let pw = path(w)?;
        let common = pv
            .iter()
            .rev()
            .zip(pw.iter().rev())
            .take_while(|(a, b)| a == b)
            .count();
        Some((pv.len() + pw.len() - 2 * common) as u64)
    }
}

pub fn bfs_ball(v: &BTVertex, radius: u32) -> BfsBall {
    let mut seen: HashSet<BTVertex> = HashSet::from([v.clone()]);
    let mut parent = std::collections::HashMap::new();
    let mut levels = vec![vec![v.clone()]];
    let mut cycle_edges = 0;
    for _ in 0..radius {
        let frontier = levels.last().expect("root level");
        let mut next = Vec::new();
        for cur in frontier {
            let up = parent.get(cur).cloned();
            for w in bt_neighbors(cur) {
                if Some(&w) == up.as_ref() {
                    continue;
                }
                if seen.insert(w.clone()) {
                    parent.insert(w.clone(), cur.clone());
                    next.push(w);
                } else {
                    cycle_edges += 1;
                }
            }
        }
        levels.push(next);
    }
    BfsBall {
        levels,
        parent,
        cycle_edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn vx(p: u64, m: i64, u: BigRational) -> BTVertex {
        BTVertex::new(p, m, u).unwrap()
    }

    #[test]
    fn normal_form() {
        assert_eq!(vx(2, 2, int(7)), vx(2, 2, int(3)));
        assert_eq!(vx(3, 0, ratio(5, 3)).shift(), &ratio(2, 3));
        assert_eq!(vx(3, -1, ratio(5, 3)).shift(), &int(0));
        assert_eq!(vx(3, -2, ratio(5, 27)).shift(), &ratio(2, 27));
        assert!(BTVertex::new(2, 0, ratio(1, 3)).is_err());
        assert!(BTVertex::new(4, 0, int(0)).is_err());
        assert_eq!(vx(5, 1, int(3)).to_string(), "1,3/1");
    }

    #[test]
    fn neighbor_examples() {
        let root = BTVertex::root(2).unwrap();
        let nb = bt_neighbors(&root);
        assert_eq!(
            nb,
            vec![vx(2, -1, int(0)), vx(2, 1, int(0)), vx(2, 1, int(1))]
        );
        assert_eq!(bt_neighbors(&BTVertex::root(5).unwrap()).len(), 6);
        assert!(bt_neighbors(&vx(2, 1, int(0))).contains(&root));
        for v in [root, vx(3, 2, int(5)), vx(5, -3, ratio(7, 125))] {
            let nb = bt_neighbors(&v);
            let set: HashSet<_> = nb.iter().cloned().collect();
            assert_eq!(set.len(), nb.len());
            assert!(nb.iter().all(|w| bt_neighbors(w).contains(&v)));
        }
    }

    #[test]
    fn distance_examples() {
        let root = BTVertex::root(3).unwrap();
        assert_eq!(bt_distance(&root, &root).unwrap(), 0);
        for n in 0..7 {
            assert_eq!(bt_distance(&root, &flow_h_p(&root, n)).unwrap(), n as u64);
            assert_eq!(bt_distance(&root, &flow_h_p(&root, -n)).unwrap(), n as u64);
        }
        assert_eq!(
            bt_distance(&root, &BTVertex::root(2).unwrap()),
            Err(BtError::MismatchedPrime(3, 2))
        );
        // (1,0) and (1,1) are siblings below the root.
        assert_eq!(
            bt_distance(&vx(3, 1, int(0)), &vx(3, 1, int(1))).unwrap(),
            2
        );
        assert_eq!(
            bt_distance(&vx(3, 1, int(1)), &vx(3, -1, int(0))).unwrap(),
            2
        );
    }

    #[test]
    fn flow_examples() {
        let root = BTVertex::root(2).unwrap();
        assert_eq!(flow_h_p(&root, 1), vx(2, 1, int(0)));
        assert_eq!(flow_h_p(&root, -1), vx(2, -1, int(0)));
        assert_eq!(flow_h_p(&root, 0), root);
        let v = vx(3, 2, int(7));
        let f = Frame::of(&v);
        for a in -4..=4 {
            for b in -4..=4 {
                assert_eq!(f.flow(a).flow(b), f.flow(a + b));
            }
        }
        for a in 0..=4 {
            for b in -4..=4 {
                assert_eq!(flow_h_p(&flow_h_p(&v, a), b), flow_h_p(&v, a + b));
            }
        }
        // Going back first forgets the branch the vertex sat on.
        assert_ne!(flow_h_p(&flow_h_p(&v, -2), 2), v);
    }

    #[test]
    fn sphere_counts_match_bfs() {
        for p in [2u64, 3, 5] {
            let root = BTVertex::root(p).unwrap();
            let ball = bfs_ball(&root, 5);
            assert_eq!(ball.cycle_edges, 0);
            for n in 0..=5u32 {
                let sphere = bt_sphere(&root, n);
                let expect = if n == 0 { 1 } else { (p + 1) * p.pow(n - 1) };
                assert_eq!(sphere.len() as u64, expect);
                let a: HashSet<_> = sphere.into_iter().collect();
                let b: HashSet<_> = ball.levels[n as usize].iter().cloned().collect();
                assert_eq!(a, b);
            }
        }
        assert_eq!(bt_sphere(&BTVertex::root(2).unwrap(), 4).len(), 24);
    }

    #[test]
    fn sphere_size_independent_of_center() {
        let v = vx(3, -2, ratio(4, 9));
        for n in 1..=4 {
            let s = bt_sphere(&v, n);
            assert_eq!(s.len() as u64, 4 * 3u64.pow(n - 1));
            assert!(s.iter().all(|w| bt_distance(&v, w).unwrap() == n as u64));
        }
    }

    #[test]
    fn distance_matches_bfs_tree() {
        let root = BTVertex::root(2).unwrap();
        let ball = bfs_ball(&root, 6);
        let all: Vec<_> = ball.levels.iter().flatten().cloned().collect();
        for (i, v) in all.iter().enumerate().step_by(7) {
            for w in all.iter().skip(i).step_by(11) {
                assert_eq!(
                    bt_distance(v, w).unwrap(),
                    ball.tree_distance(v, w).unwrap()
                );
            }
        }
    }
}
