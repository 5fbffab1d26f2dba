use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::point_map::{EvalError, PointMap};

use super::ConstructionError;

pub const INNER_SLOPE: f64 = 0.25;
pub const OUTER_SLOPE: f64 = 0.5;

/// Which piece of the cone map a point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeRegion {
    /// Inside the inner cone (and the apex): identity.
    Inner,
    /// Between the two cones: interpolation.
    Transition,
    /// Outside the outer cone: doubling.
    Outer,
}

/// Two nested round cones with apex at the origin around a unit axis. A point
/// `x = h·axis + ρ·u` (`u ⊥ axis` unit, `ρ ≥ 0`) is inside the cone of slope `s` when
/// `h > 0` and `ρ ≤ s·h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeMap {
    axis: Point,
    inner: f64,
    outer: f64,
}

impl ConeMap {
    /// Default slopes `1/4` and `1/2`. The axis is normalized.
    pub fn new(axis: Point) -> Result<Self, ConstructionError> {
        Self::with_slopes(axis, INNER_SLOPE, OUTER_SLOPE)
    }

    pub fn with_slopes(axis: Point, inner: f64, outer: f64) -> Result<Self, ConstructionError> {
        if axis.dim() < 2 {
            return Err(ConstructionError::DimensionTooLow(axis.dim()));
        }
        let axis = axis.normalized().ok_or(ConstructionError::ZeroAxis)?;
        if !(inner > 0.0 && inner < outer && outer.is_finite()) {
            return Err(ConstructionError::BadSlopes { inner, outer });
        }
        Ok(Self { axis, inner, outer })
    }

    pub fn axis(&self) -> &Point {
        &self.axis
    }

    pub fn slopes(&self) -> (f64, f64) {
        (self.inner, self.outer)
    }

    /// Height along the axis and the orthogonal remainder.
    fn split(&self, x: &Point) -> (f64, Point) {
        let h = x.dot(&self.axis);
        (h, x.offset(&self.axis, -h))
    }

    pub fn region(&self, x: &Point) -> ConeRegion {
        let (h, perp) = self.split(x);
        let rho = perp.norm();
        if rho == 0.0 && h == 0.0 || h > 0.0 && rho <= self.inner * h {
            ConeRegion::Inner
        } else if h > 0.0 && rho <= self.outer * h {
            ConeRegion::Transition
        } else {
            ConeRegion::Outer
        }
    }

    pub fn eval(&self, x: &Point) -> Point {
        match self.region(x) {
            ConeRegion::Inner => x.clone(),
            ConeRegion::Outer => x.scaled(2.0),
            ConeRegion::Transition => {
                let (h, perp) = self.split(x);
                let rho = perp.norm();
                // x₁ = h·a + r·h·u and x₂ = h·a + s·h·u sit on the two cones at the
                // same height; g = t·x₁ + 2(1 − t)·x₂.
                let t = (self.outer - rho / h) / (self.outer - self.inner);
                let along = (t + 2.0 * (1.0 - t)) * h;
                let across = (t * self.inner + 2.0 * (1.0 - t) * self.outer) * h / rho;
                self.axis.scaled(along).offset(&perp, across)
            }
        }
    }
}

impl PointMap for ConeMap {
    fn apply(&self, p: &Point) -> Result<Point, EvalError> {
        if p.dim() != self.axis.dim() {
            return Err(EvalError { point: p.clone(), reason: format!("expected dimension {}", self.axis.dim()) });
        }
        Ok(self.eval(p))
    }
}
