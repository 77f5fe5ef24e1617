//! Exact rational points of the upper half-plane, integral Möbius maps,
//! reduction into the standard fundamental domain of `PSL(2, Z)` and the
//! normalised hyperbolic measure on `X(1)`.
//!
//! Fundamental domain convention: `-1/2 <= x < 1/2`, `x^2 + y^2 >= 1`, and
//! `x <= 0` on the unit circle. With this convention every orbit has exactly
//! one representative, so equality of classes in `X(1)` is equality of
//! reduced points.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{fmt_rational, int, ratio};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModSurfaceError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("imaginary part {0} is not positive")]
    NotInUpperHalfPlane(String),
    #[error("region is not contained in the fundamental domain: {0}")]
    RegionOutsideDomain(String),
}

impl ModSurfaceError {
    pub fn name(&self) -> &'static str {
        match self {
            ModSurfaceError::SingularMatrix => "SingularMatrix",
            ModSurfaceError::NotInUpperHalfPlane(_) => "NotInUpperHalfPlane",
            ModSurfaceError::RegionOutsideDomain(_) => "RegionOutsideDomain",
        }
    }
}

pub type Result<T> = std::result::Result<T, ModSurfaceError>;

/// A point `x + iy` of the upper half-plane with rational coordinates.
///
/// Stored as the primitive integer triple `(a, b, r)` with `x = a/r`,
/// `y = b/r`, `r > 0`, `b > 0`, `gcd(a, b, r) = 1`, which is unique per
/// point, so the derived `Eq`/`Hash` are equality of points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HPoint {
    a: BigInt,
    b: BigInt,
    r: BigInt,
}

impl HPoint {
    pub fn new(x: BigRational, y: BigRational) -> Result<Self> {
        if !y.is_positive() {
            return Err(ModSurfaceError::NotInUpperHalfPlane(fmt_rational(&y)));
        }
        let r = x.denom().lcm(y.denom());
        let a = x.numer() * (&r / x.denom());
        let b = y.numer() * (&r / y.denom());
        Ok(Self::from_triple(a, b, r))
    }

    /// `i`, the class of the square lattice `Z + Zi`.
    pub fn i() -> Self {
        HPoint {
            a: BigInt::zero(),
            b: BigInt::one(),
            r: BigInt::one(),
        }
    }

    /// Small-integer convenience constructor `xn/xd + i yn/yd`.
    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Result<Self> {
        Self::new(ratio(xn, xd), ratio(yn, yd))
    }

    /// Builds from an unnormalised triple; `r != 0` and `b/r > 0` required.
    pub(crate) fn from_triple(mut a: BigInt, mut b: BigInt, mut r: BigInt) -> Self {
        if r.is_negative() {
            a = -a;
            b = -b;
            r = -r;
        }
        debug_assert!(b.is_positive() && r.is_positive());
        let g = a.gcd(&b).gcd(&r);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            r /= &g;
        }
        HPoint { a, b, r }
    }

    pub(crate) fn triple(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.r)
    }

    pub fn x(&self) -> BigRational {
        BigRational::new(self.a.clone(), self.r.clone())
    }

    pub fn y(&self) -> BigRational {
        BigRational::new(self.b.clone(), self.r.clone())
    }

    /// True when the point satisfies the fundamental-domain inequalities.
    pub fn is_reduced(&self) -> bool {
        let two_a = &self.a * 2u32;
        if two_a < -&self.r || two_a >= self.r {
            return false;
        }
        match (&self.a * &self.a + &self.b * &self.b).cmp(&(&self.r * &self.r)) {
            Ordering::Less => false,
            Ordering::Equal => !self.a.is_positive(),
            Ordering::Greater => true,
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.x().to_f64().unwrap_or(f64::NAN),
            self.y().to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Ord for HPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.a * &other.r)
            .cmp(&(&other.a * &self.r))
            .then_with(|| (&self.b * &other.r).cmp(&(&other.b * &self.r)))
    }
}

impl PartialOrd for HPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", fmt_rational(&self.x()), fmt_rational(&self.y()))
    }
}

/// Integral 2x2 matrix `(a b; c d)` with nonzero determinant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IntMatrix2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let m = IntMatrix2 { a, b, c, d };
        if m.det().is_zero() {
            return Err(ModSurfaceError::SingularMatrix);
        }
        Ok(m)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        IntMatrix2 {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// `S = (0 -1; 1 0)`, `z -> -1/z`.
    pub fn s() -> Self {
        IntMatrix2 {
            a: BigInt::zero(),
            b: -BigInt::one(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    /// `T^n = (1 n; 0 1)`, `z -> z + n`.
    pub fn t_pow(n: BigInt) -> Self {
        IntMatrix2 {
            a: BigInt::one(),
            b: n,
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// Equal as elements of `PGL(2, Q)`: proportional entries.
    pub fn projectively_eq(&self, other: &IntMatrix2) -> bool {
        let u = [&self.a, &self.b, &self.c, &self.d];
        let v = [&other.a, &other.b, &other.c, &other.d];
        (0..4).all(|i| (0..4).all(|j| u[i] * v[j] == u[j] * v[i]))
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// `(az + b)/(cz + d)`, exactly. For negative determinant the map is
/// precomposed with `z -> conj(z)` so the image stays in the upper
/// half-plane.
pub fn moebius_apply(m: &IntMatrix2, z: &HPoint) -> Result<HPoint> {
    let det = m.det();
    if det.is_zero() {
        return Err(ModSurfaceError::SingularMatrix);
    }
    let (a, b, r) = z.triple();
    // Numerators over the common denominator r.
    let num_re = &m.a * a + &m.b * r;
    let num_im = &m.a * b;
    let den_re = &m.c * a + &m.d * r;
    let den_im = &m.c * b;
    let norm = &den_re * &den_re + &den_im * &den_im;
    let re = &num_re * &den_re + &num_im * &den_im;
    let im = det.abs() * b * r;
    Ok(HPoint::from_triple(re, im, norm))
}

/// Scaled upper-triangular action `(a z + b) / d`.
pub(crate) fn affine_apply(scale: &BigInt, shift: &BigInt, den: &BigInt, z: &HPoint) -> HPoint {
    let (a, b, r) = z.triple();
    HPoint::from_triple(scale * a + shift * r, scale * b, den * r)
}

fn reduce_impl(z: &HPoint, mut track: Option<&mut IntMatrix2>) -> HPoint {
    let (mut a, mut b, mut r) = (z.a.clone(), z.b.clone(), z.r.clone());
    loop {
        // x -> x - n with n = floor(x + 1/2)
        let two_r = &r * 2u32;
        let n: BigInt = (&a * 2u32 + &r).div_floor(&two_r);
        if !n.is_zero() {
            a -= &n * &r;
            if let Some(m) = track.as_deref_mut() {
                *m = IntMatrix2::t_pow(-n).mul(m);
            }
        }
        let norm = &a * &a + &b * &b;
        let r2 = &r * &r;
        match norm.cmp(&r2) {
            Ordering::Less => {
                // z -> -1/z = (-x + iy) / |z|^2
                let na = -&a * &r;
                let nb = &b * &r;
                let g = na.gcd(&nb).gcd(&norm);
                a = na / &g;
                b = nb / &g;
                r = norm / &g;
                if let Some(m) = track.as_deref_mut() {
                    *m = IntMatrix2::s().mul(m);
                }
            }
            Ordering::Equal if a.is_positive() => {
                // On the unit circle S is x -> -x.
                a = -a;
                if let Some(m) = track.as_deref_mut() {
                    *m = IntMatrix2::s().mul(m);
                }
                break;
            }
            _ => break,
        }
    }
    HPoint { a, b, r }
}

/// Canonical representative of the `PSL(2, Z)`-orbit of `z`, without the
/// reducing matrix.
pub fn reduce_point(z: &HPoint) -> HPoint {
    reduce_impl(z, None)
}

/// Canonical representative of the orbit and an `SL(2, Z)` matrix `M` with
/// `M z` equal to it.
pub fn reduce(z: &HPoint) -> (HPoint, IntMatrix2) {
    let mut m = IntMatrix2::identity();
    let w = reduce_impl(z, Some(&mut m));
    (w, m)
}

/// Closed test regions in the fundamental domain, used as indicator test
/// functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestFunction {
    /// `y >= c` with `c >= 1`.
    YStrip { c: BigRational },
    /// `x0 <= x <= x1`, `y0 <= y <= y1`.
    Box {
        x0: BigRational,
        x1: BigRational,
        y0: BigRational,
        y1: BigRational,
    },
    /// The whole fundamental domain.
    WholeDomain,
}

impl TestFunction {
    pub fn y_strip(c: BigRational) -> Result<Self> {
        let f = TestFunction::YStrip { c };
        f.validate()?;
        Ok(f)
    }

    pub fn rect(
        x0: BigRational,
        x1: BigRational,
        y0: BigRational,
        y1: BigRational,
    ) -> Result<Self> {
        let f = TestFunction::Box { x0, x1, y0, y1 };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let outside = |why: &str| Err(ModSurfaceError::RegionOutsideDomain(why.to_string()));
        match self {
            TestFunction::YStrip { c } => {
                if *c < int(1) {
                    return outside("strip height below 1");
                }
            }
            TestFunction::Box { x0, x1, y0, y1 } => {
                let half = ratio(1, 2);
                if *x0 < -half.clone() || *x1 > half || x0 >= x1 {
                    return outside("x-range not inside [-1/2, 1/2]");
                }
                if y0 >= y1 {
                    return outside("empty y-range");
                }
                let min_x2 = if x0.is_negative() && x1.is_positive() || x0.is_zero() || x1.is_zero()
                {
                    BigRational::zero()
                } else {
                    (x0 * x0).min(x1 * x1)
                };
                if min_x2 + y0 * y0 < int(1) {
                    return outside("box dips below the unit circle");
                }
            }
            TestFunction::WholeDomain => {}
        }
        Ok(())
    }

    /// Indicator of the closed region, evaluated exactly.
    pub fn contains(&self, z: &HPoint) -> bool {
        match self {
            TestFunction::YStrip { c } => z.y() >= *c,
            TestFunction::Box { x0, x1, y0, y1 } => {
                let (x, y) = (z.x(), z.y());
                *x0 <= x && x <= *x1 && *y0 <= y && y <= *y1
            }
            TestFunction::WholeDomain => true,
        }
    }

    /// Whether `z` lies exactly on an edge of the region. Such points have
    /// measure zero but count as inside, so they are worth reporting.
    pub fn on_boundary(&self, z: &HPoint) -> bool {
        match self {
            TestFunction::YStrip { c } => z.y() == *c,
            TestFunction::Box { x0, x1, y0, y1 } => {
                let (x, y) = (z.x(), z.y());
                self.contains(z) && (x == *x0 || x == *x1 || y == *y0 || y == *y1)
            }
            TestFunction::WholeDomain => false,
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::YStrip { c } => write!(f, "ystrip:{}", fmt_rational(c)),
            TestFunction::Box { x0, x1, y0, y1 } => write!(
                f,
                "box:{},{},{},{}",
                fmt_rational(x0),
                fmt_rational(x1),
                fmt_rational(y0),
                fmt_rational(y1)
            ),
            TestFunction::WholeDomain => write!(f, "whole"),
        }
    }
}

fn q2f(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `mu(region)` for the probability measure `(3/pi) dx dy / y^2` on the
/// fundamental domain. Every supported region has a closed form.
pub fn measure_of(f: &TestFunction) -> Result<f64> {
    f.validate()?;
    Ok(match f {
        TestFunction::YStrip { c } => 3.0 / (PI * q2f(c)),
        TestFunction::Box { x0, x1, y0, y1 } => {
            let width = x1 - x0;
            let inner = y0.recip() - y1.recip();
            3.0 / PI * q2f(&(width * inner))
        }
        TestFunction::WholeDomain => 1.0,
    })
}

/// Target tolerance of [`measure_by_quadrature`].
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// The same measure by adaptive Simpson quadrature in `x` of the inner
/// `dy / y^2` integral. Kept independent of the closed forms in
/// [`measure_of`] so each can check the other.
pub fn measure_by_quadrature(f: &TestFunction) -> Result<f64> {
    f.validate()?;
    let arc = |x: f64| (1.0 - x * x).sqrt();
    // x-range, lower y-boundary as a function of x, optional upper bound.
    type Region = (f64, f64, Box<dyn Fn(f64) -> f64>, Option<f64>);
    let (lo, hi, lower, upper): Region = match f {
        TestFunction::YStrip { c } => {
            let c = q2f(c);
            (-0.5, 0.5, Box::new(move |_| c), None)
        }
        TestFunction::Box { x0, x1, y0, y1 } => {
            let y0 = q2f(y0);
            (
                q2f(x0),
                q2f(x1),
                Box::new(move |x| arc(x).max(y0)),
                Some(q2f(y1)),
            )
        }
        TestFunction::WholeDomain => (-0.5, 0.5, Box::new(arc), None),
    };
    let integrand = |x: f64| 1.0 / lower(x) - upper.map_or(0.0, |u| 1.0 / u);
    Ok(3.0 / PI * adaptive_simpson(&integrand, lo, hi, QUADRATURE_TOLERANCE * PI / 3.0))
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(xn: i64, xd: i64, yn: i64, yd: i64) -> HPoint {
        HPoint::from_ratios(xn, xd, yn, yd).unwrap()
    }

    #[test]
    fn construction_and_accessors() {
        let z = pt(1, 3, 7, 5);
        assert_eq!(z.x(), ratio(1, 3));
        assert_eq!(z.y(), ratio(7, 5));
        assert_eq!(z.to_string(), "1/3,7/5");
        assert!(HPoint::from_ratios(0, 1, 0, 1).is_err());
        assert!(HPoint::from_ratios(0, 1, -1, 2).is_err());
        assert_eq!(pt(2, 4, 3, 6), pt(1, 2, 1, 2));
    }

    #[test]
    fn moebius_examples() {
        let z = pt(1, 3, 7, 5);
        assert_eq!(moebius_apply(&IntMatrix2::identity(), &z).unwrap(), z);
        assert_eq!(
            moebius_apply(&IntMatrix2::s(), &HPoint::i()).unwrap(),
            HPoint::i()
        );
        assert_eq!(
            moebius_apply(&IntMatrix2::s(), &pt(1, 2, 1, 2)).unwrap(),
            pt(-1, 1, 1, 1)
        );
        assert_eq!(
            IntMatrix2::from_i64(1, 2, 2, 4),
            Err(ModSurfaceError::SingularMatrix)
        );
    }

    #[test]
    fn negative_determinant_stays_in_upper_half_plane() {
        // z -> -conj(z)
        let m = IntMatrix2::from_i64(-1, 0, 0, 1).unwrap();
        let w = moebius_apply(&m, &pt(1, 3, 7, 5)).unwrap();
        assert_eq!(w, pt(-1, 3, 7, 5));
    }

    #[test]
    fn reduce_examples() {
        let (w, m) = reduce(&HPoint::i());
        assert_eq!(w, HPoint::i());
        assert_eq!(m, IntMatrix2::identity());

        let (w, _) = reduce(&pt(5, 2, 3, 1));
        assert_eq!(w, pt(-1, 2, 3, 1));

        let z = pt(1, 2, 1, 2);
        let (w, m) = reduce(&z);
        assert_eq!(w, HPoint::i());
        assert_eq!(m.det(), BigInt::one());
        assert_eq!(moebius_apply(&m, &z).unwrap(), w);
    }

    #[test]
    fn region_boundaries() {
        let strip = TestFunction::y_strip(int(2)).unwrap();
        assert!(strip.on_boundary(&HPoint::from_ratios(1, 4, 2, 1).unwrap()));
        assert!(!strip.on_boundary(&HPoint::from_ratios(1, 4, 3, 1).unwrap()));
        let bx = TestFunction::rect(ratio(-1, 2), int(0), int(1), int(2)).unwrap();
        assert!(bx.on_boundary(&HPoint::from_ratios(0, 1, 3, 2).unwrap()));
        assert!(!bx.on_boundary(&HPoint::from_ratios(-1, 4, 3, 2).unwrap()));
        assert!(!bx.on_boundary(&HPoint::from_ratios(0, 1, 3, 1).unwrap()));
        assert!(!TestFunction::WholeDomain.on_boundary(&HPoint::i()));
    }

    #[test]
    fn unit_circle_boundary_convention() {
        // 7/25 + 24/25 i lies on the unit circle with 0 < x < 1/2.
        let (w, m) = reduce(&pt(7, 25, 24, 25));
        assert_eq!(w, pt(-7, 25, 24, 25));
        assert!(w.is_reduced());
        assert_eq!(moebius_apply(&m, &pt(7, 25, 24, 25)).unwrap(), w);
        assert_eq!(reduce_point(&pt(-7, 25, 24, 25)), pt(-7, 25, 24, 25));
        assert_eq!(reduce_point(&pt(3, 5, 4, 5)), pt(-1, 2, 1, 1));
        assert!(!pt(1, 2, 2, 1).is_reduced());
        assert!(pt(-1, 2, 2, 1).is_reduced());
        assert!(!pt(0, 1, 1, 2).is_reduced());
    }

    #[test]
    fn small_word_search_agrees_with_reduction() {
        // Exhaustive search over words in S, T, T^-1 of length <= 6 starting
        // at (1+i)/2; every reduced image found must be i.
        let gens = [
            IntMatrix2::s(),
            IntMatrix2::t_pow(BigInt::one()),
            IntMatrix2::t_pow(-BigInt::one()),
        ];
        let start = pt(1, 2, 1, 2);
        let mut frontier = vec![start];
        let mut found = Vec::new();
        for _ in 0..6 {
            let mut next = Vec::new();
            for z in &frontier {
                for g in &gens {
                    let w = moebius_apply(g, z).unwrap();
                    if w.is_reduced() {
                        found.push(w.clone());
                    }
                    next.push(w);
                }
            }
            frontier = next;
        }
        assert!(!found.is_empty());
        assert!(found.iter().all(|w| *w == HPoint::i()));
        assert_eq!(reduce_point(&pt(1, 2, 1, 2)), HPoint::i());
    }

    #[test]
    fn measure_examples() {
        let strip2 = TestFunction::y_strip(int(2)).unwrap();
        assert!((measure_of(&strip2).unwrap() - 3.0 / (2.0 * PI)).abs() < 1e-15);
        let strip = TestFunction::y_strip(ratio(3, 2)).unwrap();
        assert!((measure_of(&strip).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert_eq!(measure_of(&TestFunction::WholeDomain).unwrap(), 1.0);
        assert!(TestFunction::y_strip(ratio(1, 2)).is_err());
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let cases = [
            TestFunction::WholeDomain,
            TestFunction::y_strip(int(2)).unwrap(),
            TestFunction::y_strip(ratio(3, 2)).unwrap(),
            TestFunction::rect(ratio(-1, 2), ratio(1, 4), int(1), int(3)).unwrap(),
            TestFunction::rect(ratio(1, 10), ratio(2, 5), ratio(5, 4), ratio(9, 4)).unwrap(),
        ];
        for f in &cases {
            let exact = measure_of(f).unwrap();
            let quad = measure_by_quadrature(f).unwrap();
            assert!((exact - quad).abs() < 1e-10, "{f}: {exact} vs {quad}");
        }
    }

    #[test]
    fn box_validation() {
        assert!(TestFunction::rect(ratio(-1, 2), ratio(1, 2), ratio(9, 10), int(2)).is_err());
        // Away from x = 0 a box may start below height 1 and still clear the arc.
        assert!(TestFunction::rect(ratio(2, 5), ratio(1, 2), ratio(23, 25), int(2)).is_ok());
        assert!(TestFunction::rect(ratio(-3, 5), int(0), int(2), int(3)).is_err());
        assert!(TestFunction::rect(int(0), int(0), int(2), int(3)).is_err());
        assert!(TestFunction::rect(int(0), ratio(1, 4), int(3), int(2)).is_err());
    }

    #[test]
    fn measure_is_additive_on_boxes() {
        let whole = TestFunction::rect(ratio(-1, 2), ratio(1, 2), int(1), int(4)).unwrap();
        let left = TestFunction::rect(ratio(-1, 2), ratio(1, 8), int(1), int(4)).unwrap();
        let right = TestFunction::rect(ratio(1, 8), ratio(1, 2), int(1), int(4)).unwrap();
        let sum = measure_of(&left).unwrap() + measure_of(&right).unwrap();
        assert!((measure_of(&whole).unwrap() - sum).abs() < 1e-14);
    }

    #[test]
    fn closed_regions_contain_their_boundary() {
        let f = TestFunction::y_strip(int(2)).unwrap();
        assert!(f.contains(&pt(0, 1, 2, 1)));
        assert!(!f.contains(&pt(0, 1, 19, 10)));
        let b = TestFunction::rect(int(0), ratio(1, 4), int(1), int(2)).unwrap();
        assert!(b.contains(&pt(1, 4, 2, 1)));
        assert!(!b.contains(&pt(1, 3, 2, 1)));
    }
}
