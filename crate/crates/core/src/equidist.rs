//! Averages of indicator test functions over Hecke spheres, compared with
//! their hyperbolic measure.
//!
//! Averages are exact rationals (weighted hits over total multiplicity)
//! before any conversion to floating point.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::hecke::{self, HeckeError, HeckeSphere};
use crate::modsurface::{self, HPoint, ModSurfaceError, TestFunction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquidistError {
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Surface(#[from] ModSurfaceError),
    #[error("the list of radii is empty")]
    EmptyRadiusList,
}

impl EquidistError {
    pub fn name(&self) -> &'static str {
        match self {
            EquidistError::Hecke(e) => e.name(),
            EquidistError::Surface(e) => e.name(),
            EquidistError::EmptyRadiusList => "EmptyRadiusList",
        }
    }
}

pub type Result<T> = std::result::Result<T, EquidistError>;

/// Weighted number of sphere points inside the closed test region.
pub fn weighted_hits(sphere: &HeckeSphere, f: &TestFunction) -> u64 {
    sphere
        .points
        .iter()
        .filter(|(z, _)| f.contains(z))
        .map(|(_, m)| m)
        .sum()
}

/// Weighted number of sphere points lying exactly on the region's edge.
pub fn weighted_boundary_hits(sphere: &HeckeSphere, f: &TestFunction) -> u64 {
    sphere
        .points
        .iter()
        .filter(|(z, _)| f.on_boundary(z))
        .map(|(_, m)| m)
        .sum()
}

/// Multiplicity-weighted average of `f` over the tree sphere of radius `N`.
pub fn empirical_average(z: &HPoint, n: u64, f: &TestFunction) -> Result<BigRational> {
    f.validate()?;
    let sphere = hecke::sphere_tree(z, n)?;
    Ok(BigRational::new(
        weighted_hits(&sphere, f).into(),
        sphere.total().into(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquidistRow {
    pub n: u64,
    /// Sum of multiplicities over the sphere.
    pub size: u64,
    pub hits: u64,
    /// Part of `hits` on the boundary of the closed region.
    pub boundary_hits: u64,
    pub empirical: BigRational,
    pub target: f64,
    pub abs_error: f64,
}

impl EquidistRow {
    pub fn empirical_f64(&self) -> f64 {
        self.empirical.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquidistReport {
    pub center: HPoint,
    pub test: TestFunction,
    pub rows: Vec<EquidistRow>,
}

impl EquidistReport {
    pub fn max_abs_error(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_error).fold(0.0, f64::max)
    }
}

/// One row per radius, each computed from scratch.
pub fn convergence_table(z: &HPoint, radii: &[u64], f: &TestFunction) -> Result<EquidistReport> {
    if radii.is_empty() {
        return Err(EquidistError::EmptyRadiusList);
    }
    let target = modsurface::measure_of(f)?;
    let rows = radii
        .iter()
        .map(|&n| {
            let sphere = hecke::sphere_tree(z, n)?;
            let size = sphere.total();
            let hits = weighted_hits(&sphere, f);
            let boundary_hits = weighted_boundary_hits(&sphere, f);
            let empirical = BigRational::new(hits.into(), size.into());
            let abs_error = (empirical.to_f64().unwrap_or(f64::NAN) - target).abs();
            Ok(EquidistRow {
                n,
                size,
                hits,
                boundary_hits,
                empirical,
                target,
                abs_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquidistReport {
        center: modsurface::reduce_point(z),
        test: f.clone(),
        rows,
    })
}
