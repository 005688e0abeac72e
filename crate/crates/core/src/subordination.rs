//! Half-plane superordinates and the grid decision procedure.
//!
//! Every superordinate in this toolkit is either the Cayley-type map
//! `(1 + (1 - 2c) z) / (1 - z)` or the scaled map `-2 delta z / (1 - z)`.
//! Both are convex univalent maps onto half-planes, so `w` is subordinate
//! to them exactly when `w(0)` is the center value and `w` maps the disk
//! into the half-plane.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::LaurentSeries;

/// Tolerance on the center value `w(0)`.
pub const CENTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `Re w > abscissa`
    GreaterThan,
    /// `Re w < abscissa`
    LessThan,
    /// The target is the constant 0; only `w == 0` is subordinate.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TargetSource {
    Cayley(f64),
    Scaled(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneTarget {
    pub abscissa: f64,
    pub orientation: Orientation,
    pub source: TargetSource,
}

impl HalfPlaneTarget {
    /// Target of `(1 + (1 - 2c) z) / (1 - z)`.
    pub fn from_cayley(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::Domain(format!("abscissa {c}")));
        }
        if c == 1.0 {
            return Err(Error::Degenerate("Cayley map with c = 1 is the constant 1".into()));
        }
        let orientation = if c < 1.0 { Orientation::GreaterThan } else { Orientation::LessThan };
        Ok(Self { abscissa: c, orientation, source: TargetSource::Cayley(c) })
    }

    /// Target of `-2 delta z / (1 - z)`.
    pub fn from_scaled(delta: f64) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::Domain(format!("delta {delta}")));
        }
        let orientation = if delta < 0.0 {
            Orientation::GreaterThan
        } else if delta > 0.0 {
            Orientation::LessThan
        } else {
            Orientation::Degenerate
        };
        Ok(Self { abscissa: delta, orientation, source: TargetSource::Scaled(delta) })
    }

    /// Value of the superordinate at the origin.
    pub fn center(&self) -> f64 {
        match self.source {
            TargetSource::Cayley(_) => 1.0,
            TargetSource::Scaled(_) => 0.0,
        }
    }

    /// Signed distance of `w` from the boundary: positive inside.
    pub fn signed_distance(&self, w: Complex64) -> f64 {
        match self.orientation {
            Orientation::GreaterThan => w.re - self.abscissa,
            Orientation::LessThan => self.abscissa - w.re,
            Orientation::Degenerate => -w.norm(),
        }
    }

    /// The same target with its half-plane enlarged by `eps`.
    pub fn widened(&self, eps: f64) -> Self {
        let (abscissa, orientation) = match self.orientation {
            Orientation::GreaterThan => (self.abscissa - eps, Orientation::GreaterThan),
            Orientation::LessThan => (self.abscissa + eps, Orientation::LessThan),
            Orientation::Degenerate if eps > 0.0 => (-eps, Orientation::GreaterThan),
            Orientation::Degenerate => (0.0, Orientation::Degenerate),
        };
        let source = match self.source {
            TargetSource::Cayley(_) => TargetSource::Cayley(abscissa),
            TargetSource::Scaled(_) => TargetSource::Scaled(abscissa),
        };
        Self { abscissa, orientation, source }
    }
}

/// Polar sampling grid on the disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
    /// Strictness margin for verdicts.
    pub tol: f64,
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self { radii: vec![0.5, 0.9, 0.99, 0.999], angles: 720, tol: 1e-9 }
    }
}

impl SampleGrid {
    pub fn new(radii: Vec<f64>, angles: usize, tol: f64) -> Result<Self> {
        let grid = Self { radii, angles, tol };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::InvalidGrid("no radii".into()));
        }
        if let Some(r) = self.radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidGrid(format!("radius {r} outside (0, 1)")));
        }
        if self.angles < 8 {
            return Err(Error::InvalidGrid(format!("{} angles, need at least 8", self.angles)));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidGrid(format!("tolerance {}", self.tol)));
        }
        Ok(())
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().cloned().fold(0.0, f64::max)
    }

    /// Same radii with `factor` times as many angles.
    pub fn refined(&self, factor: usize) -> Self {
        Self { radii: self.radii.clone(), angles: self.angles * factor, tol: self.tol }
    }

    /// Only the radii not exceeding `r`.
    pub fn clipped(&self, r: f64) -> Self {
        let mut radii: Vec<f64> = self.radii.iter().cloned().filter(|x| *x <= r).collect();
        if radii.is_empty() {
            radii.push(r);
        }
        Self { radii, angles: self.angles, tol: self.tol }
    }

    /// Grid points, outermost circle first.
    pub fn points(&self) -> Vec<Complex64> {
        let mut radii = self.radii.clone();
        radii.sort_by(|a, b| b.total_cmp(a));
        let roots: Vec<Complex64> = (0..self.angles)
            .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / self.angles as f64))
            .collect();
        radii.iter().flat_map(|r| roots.iter().map(move |u| u * *r)).collect()
    }
}

/// Something that can be evaluated on the disk.
pub trait DiskMap {
    fn value_at(&self, z: Complex64) -> Result<Complex64>;

    /// Bound on the error of [`DiskMap::value_at`] for `|z| <= radius`.
    fn truncation_bound(&self, _radius: f64) -> f64 {
        0.0
    }
}

impl DiskMap for LaurentSeries {
    fn value_at(&self, z: Complex64) -> Result<Complex64> {
        self.evaluate(z)
    }

    fn truncation_bound(&self, radius: f64) -> f64 {
        self.tail_bound(radius)
    }
}

impl<F> DiskMap for F
where
    F: Fn(Complex64) -> Complex64,
{
    fn value_at(&self, z: Complex64) -> Result<Complex64> {
        Ok(self(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails,
    /// Boundary-grazing or truncation-limited; neither side is certified.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubordinationCheck {
    pub verdict: Verdict,
    /// Minimum signed distance over the grid.
    pub margin: f64,
    /// Grid point attaining the margin.
    pub witness: Complex64,
}

impl SubordinationCheck {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    /// The result for a subordinand that is not analytic in the disk.
    pub fn not_analytic() -> Self {
        Self { verdict: Verdict::Fails, margin: f64::NEG_INFINITY, witness: Complex64::new(0.0, 0.0) }
    }
}

/// Decides `w ≺ target` on `grid`.
pub fn check_subordination<W: DiskMap + ?Sized>(
    w: &W,
    target: &HalfPlaneTarget,
    grid: &SampleGrid,
) -> Result<SubordinationCheck> {
    grid.validate()?;
    check_at_points(w, target, &grid.points(), grid.tol, grid.max_radius(), false)
}

/// Grid decision over precomputed points. With `stop_on_failure` the scan
/// ends at the first point that already certifies failure; the returned
/// margin is then only an upper bound.
pub(crate) fn check_at_points<W: DiskMap + ?Sized>(
    w: &W,
    target: &HalfPlaneTarget,
    points: &[Complex64],
    tol: f64,
    max_radius: f64,
    stop_on_failure: bool,
) -> Result<SubordinationCheck> {
    let w0 = w.value_at(Complex64::new(0.0, 0.0))?;
    let center = target.center();
    if (w0 - center).norm() > CENTER_TOL {
        return Err(Error::CenterMismatch { got: format!("{w0}"), expected: center });
    }
    let mut margin = f64::INFINITY;
    let mut witness = Complex64::new(0.0, 0.0);
    for &z in points {
        let v = w.value_at(z)?;
        let d = if v.is_finite() { target.signed_distance(v) } else { f64::NEG_INFINITY };
        if d < margin {
            margin = d;
            witness = z;
            if stop_on_failure && margin < -tol {
                break;
            }
        }
    }
    let truncated = w.truncation_bound(max_radius) > tol / 10.0;
    let verdict = if truncated {
        Verdict::Inconclusive
    } else if target.orientation == Orientation::Degenerate {
        if margin >= -tol { Verdict::Holds } else { Verdict::Fails }
    } else if margin > tol {
        Verdict::Holds
    } else if margin < -tol {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    Ok(SubordinationCheck { verdict, margin, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cayley_series(c: f64, order: usize) -> LaurentSeries {
        let num = LaurentSeries::with_order(0, vec![1.0.into(), (1.0 - 2.0 * c).into()], order);
        let den = LaurentSeries::with_order(0, vec![1.0.into(), (-1.0).into()], order);
        num.div(&den).unwrap()
    }

    #[test]
    fn cayley_orientation() {
        let t = HalfPlaneTarget::from_cayley(0.0).unwrap();
        assert_eq!(t.orientation, Orientation::GreaterThan);
        let t = HalfPlaneTarget::from_cayley(2.0).unwrap();
        assert_eq!(t.orientation, Orientation::LessThan);
        assert_eq!(t.abscissa, 2.0);
        assert!(matches!(HalfPlaneTarget::from_cayley(1.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn scaled_orientation() {
        assert_eq!(HalfPlaneTarget::from_scaled(-0.5).unwrap().orientation, Orientation::GreaterThan);
        assert_eq!(HalfPlaneTarget::from_scaled(0.5).unwrap().orientation, Orientation::LessThan);
        assert_eq!(HalfPlaneTarget::from_scaled(0.0).unwrap().orientation, Orientation::Degenerate);
    }

    #[test]
    fn scaled_map_image_matches_orientation() {
        // -2 delta z/(1-z) on |z| = 0.999 stays on the predicted side.
        for delta in [-0.5, 0.5, -2.0] {
            let t = HalfPlaneTarget::from_scaled(delta).unwrap();
            for j in 0..360 {
                let z = Complex64::from_polar(0.999, j as f64 * TAU / 360.0);
                let w = -z * 2.0 * delta / (1.0 - z);
                assert!(t.signed_distance(w) > 0.0, "delta {delta} z {z}");
            }
        }
    }

    #[test]
    fn cayley_map_subordinates_itself() {
        let grid = SampleGrid::new(vec![0.5, 0.9, 0.99], 360, 1e-9).unwrap();
        for c in [-1.0, 0.0, 0.5, 1.5, 3.0] {
            let w = cayley_series(c, 4000);
            let t = HalfPlaneTarget::from_cayley(c).unwrap();
            let res = check_subordination(&w, &t, &grid).unwrap();
            assert!(res.holds(), "c = {c}: {res:?}");
        }
        let w = cayley_series(0.0, 4000);
        let t = HalfPlaneTarget::from_cayley(0.0).unwrap();
        let res = check_subordination(&w, &t, &grid).unwrap();
        assert!((res.margin - 0.01 / 1.99).abs() < 1e-9);
    }

    #[test]
    fn short_truncation_is_inconclusive() {
        let w = cayley_series(0.0, 64);
        let t = HalfPlaneTarget::from_cayley(0.0).unwrap();
        let res = check_subordination(&w, &t, &SampleGrid::default()).unwrap();
        assert_eq!(res.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn linear_map_against_half_planes() {
        let w = LaurentSeries::with_order(0, vec![1.0.into(), 2.0.into()], 16);
        let grid = SampleGrid::default();
        let res = check_subordination(&w, &HalfPlaneTarget::from_cayley(0.0).unwrap(), &grid).unwrap();
        assert!(res.fails());
        assert!((res.witness - Complex64::new(-0.999, 0.0)).norm() < 1e-9);

        let res = check_subordination(&w, &HalfPlaneTarget::from_cayley(-1.0).unwrap(), &grid).unwrap();
        assert!(res.holds());
        assert!((res.margin - 0.002).abs() < 1e-9);
    }

    #[test]
    fn center_mismatch() {
        let w = LaurentSeries::with_order(0, vec![2.0.into(), 1.0.into()], 4);
        let err = check_subordination(&w, &HalfPlaneTarget::from_cayley(0.0).unwrap(), &SampleGrid::default());
        assert!(matches!(err, Err(Error::CenterMismatch { .. })));
    }

    #[test]
    fn less_than_orientation_is_literal() {
        // Re w < c for c > 1, checked on three handcrafted maps.
        let grid = SampleGrid::default();
        let target = HalfPlaneTarget::from_cayley(2.0).unwrap();
        let inside = |z: Complex64| Complex64::new(1.0, 0.0) + z * 0.5;
        assert!(check_subordination(&inside, &target, &grid).unwrap().holds());
        let outside = |z: Complex64| Complex64::new(1.0, 0.0) + z * 1.5;
        assert!(check_subordination(&outside, &target, &grid).unwrap().fails());
        let reflected = |z: Complex64| Complex64::new(1.0, 0.0) - z * 0.99;
        assert!(check_subordination(&reflected, &target, &grid).unwrap().holds());
    }

    #[test]
    fn finer_grid_never_rescues_a_failure() {
        let w = |z: Complex64| Complex64::new(1.0, 0.0) + z * 1.5 + z * z * 0.3;
        let target = HalfPlaneTarget::from_cayley(0.0).unwrap();
        let coarse = SampleGrid::new(vec![0.9, 0.999], 16, 1e-9).unwrap();
        let a = check_subordination(&w, &target, &coarse).unwrap();
        let b = check_subordination(&w, &target, &coarse.refined(8)).unwrap();
        assert!(b.margin <= a.margin);
        assert!(a.fails() && b.fails());
    }

    #[test]
    fn grid_validation() {
        assert!(SampleGrid::new(vec![1.0], 16, 1e-9).is_err());
        assert!(SampleGrid::new(vec![0.5], 4, 1e-9).is_err());
        assert!(SampleGrid::new(vec![], 16, 1e-9).is_err());
    }
}
