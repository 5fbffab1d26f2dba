use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot evaluate map at {point:?}: {reason}")]
pub struct EvalError {
    pub point: Point,
    pub reason: String,
}

/// A map ℝⁿ ⊇ domain → ℝⁿ that can be sampled.
pub trait PointMap: Send + Sync {
    fn apply(&self, p: &Point) -> Result<Point, EvalError>;
}

impl<M: PointMap + ?Sized> PointMap for &M {
    fn apply(&self, p: &Point) -> Result<Point, EvalError> {
        (**self).apply(p)
    }
}

impl<M: PointMap + ?Sized> PointMap for Box<M> {
    fn apply(&self, p: &Point) -> Result<Point, EvalError> {
        (**self).apply(p)
    }
}

/// Adapts a closure.
pub struct FnMap<F>(pub F);

impl<F> PointMap for FnMap<F>
where
    F: Fn(&Point) -> Point + Send + Sync,
{
    fn apply(&self, p: &Point) -> Result<Point, EvalError> {
        Ok((self.0)(p))
    }
}
