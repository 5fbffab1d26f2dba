//! Certification and experiments for piecewise-linear and closed-form
//! quasi-isometries of Euclidean space.

pub mod certify;
pub mod complex;
pub mod constructions;
pub mod distortion;
pub mod geometry;
pub mod pl_map;
pub mod point_map;
pub mod sampling;

pub use certify::{certify, Certificate, ConvexityMode};
pub use complex::{Complex, ValidationReport};
pub use constructions::{AnalyticMap, MapSpec};
pub use distortion::{DistortionReport, MapUnderTest, QiEstimate, SamplePlan};
pub use geometry::{Point, Simplex};
pub use pl_map::SimplicialMap;
pub use point_map::PointMap;
