//! Explicit self-maps of ℝⁿ: the cone map, the disc swap and its rescaled copies on
//! a disc sequence, plus a small catalog of closed-form maps to compose them with.

pub mod cone;
pub mod disc_swap;
pub mod witness;

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::ComplexError;
use crate::geometry::Point;
use crate::pl_map::MapError;
use crate::point_map::{EvalError, PointMap};

pub use cone::{ConeMap, ConeRegion};
pub use disc_swap::{disc_swap_complexes, sphere_vertices, Disc, DiscSequence, DiscSwap, RescaledDiscMap};
pub use witness::{commutator_series, divergent_sequence, verify_disc_witness, witness_discs, DiscWitness, SearchBudget};

pub const SPEC_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("dimension {0} is too low (need at least 2)")]
    DimensionTooLow(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone axis must be nonzero")]
    ZeroAxis,
    #[error("cone slopes must satisfy 0 < inner < outer (got {inner}, {outer})")]
    BadSlopes { inner: f64, outer: f64 },
    #[error("invalid disc sequence: {0}")]
    InvalidDiscSequence(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no divergent sequence within budget ({found} terms found, largest displacement {best_displacement})")]
    NoDivergentSequence { found: usize, best_displacement: f64 },
    #[error(transparent)]
    Evaluation(#[from] EvalError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("unsupported spec format version {0}")]
    UnsupportedVersion(u32),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] serde_json::Error),
}

fn default_inner() -> f64 {
    cone::INNER_SLOPE
}

fn default_outer() -> f64 {
    cone::OUTER_SLOPE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeParams {
    pub axis: Vec<f64>,
    #[serde(default = "default_inner")]
    pub inner_slope: f64,
    #[serde(default = "default_outer")]
    pub outer_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpParams {
    pub center: Vec<f64>,
    pub radius: f64,
    pub height: f64,
}

/// Serialized description of an analytic map: `{"kind": ..., "params": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum MapSpec {
    Identity,
    /// `x ↦ λx`.
    Scale(f64),
    /// `x ↦ x + v`.
    Translate(Vec<f64>),
    Negate,
    Cone(ConeParams),
    /// Disc swap rescaled onto each disc.
    Case1(Vec<Disc>),
    /// Applied left to right.
    Compose(Vec<MapSpec>),
    /// The disc swap itself, identity outside its complex.
    DiscSwap,
    /// `x + height·max(0, 1 − ‖x − center‖/radius)·eₙ`.
    Bump(BumpParams),
    /// `x ↦ x·‖x‖^(p − 1)`.
    RadialPower(f64),
}

/// On-disk analytic map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub format_version: u32,
    pub dim: usize,
    pub map: MapSpec,
}

#[derive(Debug, Clone)]
enum Kind {
    Identity,
    Scale(f64),
    Translate(Point),
    Negate,
    Cone(ConeMap),
    Case1(RescaledDiscMap),
    Compose(Vec<AnalyticMap>),
    DiscSwap(Arc<DiscSwap>),
    Bump { center: Point, radius: f64, height: f64 },
    RadialPower(f64),
}

/// A closed-form self-map of ℝⁿ built from a [`MapSpec`].
#[derive(Debug, Clone)]
pub struct AnalyticMap {
    dim: usize,
    spec: MapSpec,
    kind: Kind,
}

fn point_of(v: &[f64], dim: usize) -> Result<Point, ConstructionError> {
    if v.len() != dim {
        return Err(ConstructionError::DimensionMismatch { expected: dim, found: v.len() });
    }
    Point::new(v.to_vec()).map_err(|e| ConstructionError::InvalidParameter(e.to_string()))
}

fn finite(name: &str, x: f64) -> Result<f64, ConstructionError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ConstructionError::InvalidParameter(format!("{name} = {x}")))
    }
}

impl AnalyticMap {
    pub fn build(spec: MapSpec, dim: usize) -> Result<Self, ConstructionError> {
        if dim == 0 {
            return Err(ConstructionError::DimensionTooLow(0));
        }
        let kind = match &spec {
            MapSpec::Identity => Kind::Identity,
            MapSpec::Scale(l) => Kind::Scale(finite("lambda", *l)?),
            MapSpec::Translate(v) => Kind::Translate(point_of(v, dim)?),
            MapSpec::Negate => Kind::Negate,
            MapSpec::Cone(p) => Kind::Cone(ConeMap::with_slopes(point_of(&p.axis, dim)?, p.inner_slope, p.outer_slope)?),
            MapSpec::Case1(discs) => Kind::Case1(RescaledDiscMap::new(dim, DiscSequence::new(discs.clone())?)?),
            MapSpec::Compose(children) => {
                Kind::Compose(children.iter().map(|c| Self::build(c.clone(), dim)).collect::<Result<_, _>>()?)
            }
            MapSpec::DiscSwap => Kind::DiscSwap(Arc::new(DiscSwap::new(dim)?)),
            MapSpec::Bump(p) => {
                if !(p.radius > 0.0 && p.radius.is_finite()) {
                    return Err(ConstructionError::InvalidParameter(format!("radius = {}", p.radius)));
                }
                Kind::Bump { center: point_of(&p.center, dim)?, radius: p.radius, height: finite("height", p.height)? }
            }
            MapSpec::RadialPower(p) => {
                if !(*p > 0.0 && p.is_finite()) {
                    return Err(ConstructionError::InvalidParameter(format!("power = {p}")));
                }
                Kind::RadialPower(*p)
            }
        };
        Ok(Self { dim, spec, kind })
    }

    pub fn identity(dim: usize) -> Self {
        Self::build(MapSpec::Identity, dim).expect("identity")
    }

    pub fn scale(dim: usize, lambda: f64) -> Result<Self, ConstructionError> {
        Self::build(MapSpec::Scale(lambda), dim)
    }

    pub fn negate(dim: usize) -> Self {
        Self::build(MapSpec::Negate, dim).expect("negate")
    }

    pub fn translate(v: &Point) -> Self {
        Self::build(MapSpec::Translate(v.coords().to_vec()), v.dim()).expect("translate")
    }

    /// Default slopes `1/4`, `1/2`.
    pub fn cone(axis: &Point) -> Result<Self, ConstructionError> {
        Self::build(
            MapSpec::Cone(ConeParams { axis: axis.coords().to_vec(), inner_slope: default_inner(), outer_slope: default_outer() }),
            axis.dim(),
        )
    }

    pub fn case1(dim: usize, discs: &DiscSequence) -> Result<Self, ConstructionError> {
        Self::build(MapSpec::Case1(discs.discs().to_vec()), dim)
    }

    pub fn disc_swap(dim: usize) -> Result<Self, ConstructionError> {
        Self::build(MapSpec::DiscSwap, dim)
    }

    pub fn compose(dim: usize, children: Vec<AnalyticMap>) -> Result<Self, ConstructionError> {
        if let Some(c) = children.iter().find(|c| c.dim != dim) {
            return Err(ConstructionError::DimensionMismatch { expected: dim, found: c.dim });
        }
        let spec = MapSpec::Compose(children.iter().map(|c| c.spec.clone()).collect());
        Ok(Self { dim, spec, kind: Kind::Compose(children) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> &MapSpec {
        &self.spec
    }

    pub fn to_file_data(&self) -> SpecFile {
        SpecFile { format_version: SPEC_FORMAT_VERSION, dim: self.dim, map: self.spec.clone() }
    }

    pub fn from_file_data(file: SpecFile) -> Result<Self, ConstructionError> {
        if file.format_version != SPEC_FORMAT_VERSION {
            return Err(ConstructionError::UnsupportedVersion(file.format_version));
        }
        Self::build(file.map, file.dim)
    }

    pub fn from_json(text: &str) -> Result<Self, ConstructionError> {
        Self::from_file_data(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_data()).expect("spec serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConstructionError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConstructionError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ConstructionError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|source| ConstructionError::Io { path: path.display().to_string(), source })
    }

    /// Evaluates without checking the dimension of `x`.
    fn eval(&self, x: &Point) -> Point {
        match &self.kind {
            Kind::Identity => x.clone(),
            Kind::Scale(l) => x.scaled(*l),
            Kind::Translate(v) => x + v,
            Kind::Negate => x.scaled(-1.0),
            Kind::Cone(c) => c.eval(x),
            Kind::Case1(g) => g.eval(x),
            Kind::Compose(children) => children.iter().fold(x.clone(), |acc, c| c.eval(&acc)),
            Kind::DiscSwap(h) => h.eval(x),
            Kind::Bump { center, radius, height } => {
                let w = (1.0 - x.distance(center) / radius).max(0.0);
                x.offset(&Point::unit(self.dim, self.dim - 1), height * w)
            }
            Kind::RadialPower(p) => {
                let r = x.norm();
                if r == 0.0 {
                    x.clone()
                } else {
                    x.scaled(r.powf(p - 1.0))
                }
            }
        }
    }
}

impl PointMap for AnalyticMap {
    fn apply(&self, p: &Point) -> Result<Point, EvalError> {
        if p.dim() != self.dim {
            return Err(EvalError { point: p.clone(), reason: format!("expected dimension {}", self.dim) });
        }
        Ok(self.eval(p))
    }
}

/// The rescaled-disc map over discs found for `f`, with the points whose images are
/// the disc centers.
pub fn case_one_setup(
    f: &dyn PointMap,
    dim: usize,
    budget: &SearchBudget,
) -> Result<(DiscWitness, AnalyticMap), ConstructionError> {
    let witness = witness_discs(f, dim, budget)?;
    let g = AnalyticMap::case1(dim, &witness.discs)?;
    Ok((witness, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let text = r#"{
            "format_version": 1,
            "dim": 2,
            "map": {"kind": "compose", "params": [
                {"kind": "scale", "params": 2.0},
                {"kind": "translate", "params": [1.0, -1.0]},
                {"kind": "negate"},
                {"kind": "cone", "params": {"axis": [0.0, 1.0]}}
            ]}
        }"#;
        let f = AnalyticMap::from_json(text).unwrap();
        // (1,1) → (2,2) → (3,1) → (−3,−1) → outside the cones: doubled.
        assert_eq!(f.apply(&[1.0, 1.0].into()).unwrap(), Point::from([-6.0, -2.0]));
        let again = AnalyticMap::from_json(&f.to_json()).unwrap();
        assert_eq!(again.spec(), f.spec());
    }

    #[test]
    fn spec_errors() {
        let bad_dim = r#"{"format_version":1,"dim":3,"map":{"kind":"translate","params":[1.0]}}"#;
        assert!(matches!(AnalyticMap::from_json(bad_dim), Err(ConstructionError::DimensionMismatch { .. })));
        let bad_version = r#"{"format_version":7,"dim":2,"map":{"kind":"identity"}}"#;
        assert!(matches!(AnalyticMap::from_json(bad_version), Err(ConstructionError::UnsupportedVersion(7))));
        let unknown = r#"{"format_version":1,"dim":2,"map":{"kind":"warp"}}"#;
        assert!(matches!(AnalyticMap::from_json(unknown), Err(ConstructionError::Parse(_))));
        let overlapping = r#"{"format_version":1,"dim":2,"map":{"kind":"case1","params":[
            {"center":[0,0],"radius":1},{"center":[1,0],"radius":2}]}}"#;
        assert!(matches!(AnalyticMap::from_json(overlapping), Err(ConstructionError::InvalidDiscSequence(_))));
    }

    #[test]
    fn catalog_values() {
        let x: Point = [3.0, 4.0].into();
        assert_eq!(AnalyticMap::identity(2).apply(&x).unwrap(), x);
        assert_eq!(AnalyticMap::negate(2).apply(&x).unwrap(), Point::from([-3.0, -4.0]));
        assert_eq!(AnalyticMap::build(MapSpec::RadialPower(2.0), 2).unwrap().apply(&x).unwrap(), Point::from([15.0, 20.0]));
        let bump = AnalyticMap::build(MapSpec::Bump(BumpParams { center: vec![3.0, 4.0], radius: 2.0, height: 5.0 }), 2).unwrap();
        assert_eq!(bump.apply(&x).unwrap(), Point::from([3.0, 9.0]));
        assert_eq!(bump.apply(&Point::origin(2)).unwrap(), Point::origin(2));
        assert!(AnalyticMap::identity(2).apply(&Point::origin(3)).is_err());
    }

    #[test]
    fn case_one_gap_is_quarter_radius() {
        let f = AnalyticMap::scale(2, 2.0).unwrap();
        let (w, g) = case_one_setup(&f, 2, &SearchBudget::default()).unwrap();
        let gaps = commutator_series(&f, &g, &w.points).unwrap();
        for (gap, d) in gaps.iter().zip(w.discs.discs()) {
            assert!((gap - d.radius / 4.0).abs() < 1e-9);
        }
    }
}
