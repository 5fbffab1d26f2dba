//! Simplicial maps between complexes, evaluated piecewise-linearly.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Complex, ComplexError};
use crate::geometry::Point;
use crate::point_map::{EvalError, PointMap};

pub const MAP_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("vertex_images has {found} entries, source has {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("vertex {vertex} maps to {image}, target has {count} vertices")]
    ImageOutOfRange { vertex: usize, image: usize, count: usize },
    #[error("source and target live in different dimensions ({source_dim} vs {target_dim})")]
    DimensionMismatch { source_dim: usize, target_dim: usize },
    #[error("not simplicial at source simplex {simplex}: {reason}")]
    NotSimplicial { simplex: usize, reason: String },
    #[error("not bijective: {0}")]
    NotBijective(String),
    #[error("target of the first map differs from the source of the second")]
    IncompatibleComplexes,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("unsupported format_version {0}")]
    UnsupportedVersion(u32),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed map file: {0}")]
    Parse(#[from] serde_json::Error),
}

/// On-disk map description. Complex paths are relative to the map file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub format_version: u32,
    pub source: PathBuf,
    pub target: PathBuf,
    pub vertex_images: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapMode {
    /// Images of simplices must be faces of target simplices.
    Simplicial,
    /// Additionally a bijection on vertices and on maximal simplices.
    Homeomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialReport {
    pub simplicial: bool,
    pub homeomorphism_eligible: bool,
}

/// A map determined by vertex images, affine on every simplex.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    vertex_images: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        source: Arc<Complex>,
        target: Arc<Complex>,
        vertex_images: Vec<usize>,
    ) -> Result<Self, MapError> {
        if source.ambient_dim() != target.ambient_dim() {
            return Err(MapError::DimensionMismatch {
                source_dim: source.ambient_dim(),
                target_dim: target.ambient_dim(),
            });
        }
        if vertex_images.len() != source.vertices().len() {
            return Err(MapError::WrongLength {
                expected: source.vertices().len(),
                found: vertex_images.len(),
            });
        }
        let count = target.vertices().len();
        if let Some((vertex, &image)) = vertex_images.iter().enumerate().find(|(_, &i)| i >= count) {
            return Err(MapError::ImageOutOfRange { vertex, image, count });
        }
        Ok(Self { source, target, vertex_images })
    }

    pub fn identity(complex: Arc<Complex>) -> Self {
        let images = (0..complex.vertices().len()).collect();
        Self { source: complex.clone(), target: complex, vertex_images: images }
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn vertex_images(&self) -> &[usize] {
        &self.vertex_images
    }

    fn image_set(&self, simplex: usize) -> Vec<usize> {
        let mut img: Vec<usize> =
            self.source.simplex_indices(simplex).iter().map(|&v| self.vertex_images[v]).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// Checks that every source simplex lands on a face of the target, and in
    /// [`MapMode::Homeomorphism`] that the map is a bijection of vertices and of
    /// maximal simplices.
    pub fn validate_simplicial(&self, mode: MapMode) -> Result<SimplicialReport, MapError> {
        let target_cells: Vec<HashSet<usize>> =
            self.target.maximal_simplices().map(|s| s.iter().copied().collect()).collect();
        let mut collapsed = None;
        for simplex in 0..self.source.simplex_count() {
            let img = self.image_set(simplex);
            if !target_cells.iter().any(|cell| img.iter().all(|v| cell.contains(v))) {
                return Err(MapError::NotSimplicial {
                    simplex,
                    reason: format!("image vertices {img:?} span no target simplex"),
                });
            }
            if img.len() < self.source.simplex_indices(simplex).len() && collapsed.is_none() {
                collapsed = Some(simplex);
            }
        }

        let bijection = self.bijection_issue(collapsed);
        if mode == MapMode::Homeomorphism {
            if let Some(simplex) = collapsed {
                return Err(MapError::NotSimplicial {
                    simplex,
                    reason: "collapses vertices, so it is not injective".into(),
                });
            }
            if let Some(issue) = &bijection {
                return Err(MapError::NotBijective(issue.clone()));
            }
        }
        Ok(SimplicialReport { simplicial: true, homeomorphism_eligible: bijection.is_none() })
    }

    fn bijection_issue(&self, collapsed: Option<usize>) -> Option<String> {
        if let Some(s) = collapsed {
            return Some(format!("source simplex {s} collapses"));
        }
        if self.vertex_images.len() != self.target.vertices().len() {
            return Some("vertex counts differ".into());
        }
        let distinct: HashSet<usize> = self.vertex_images.iter().copied().collect();
        if distinct.len() != self.vertex_images.len() {
            return Some("two vertices share an image".into());
        }
        if self.source.simplex_count() != self.target.simplex_count() {
            return Some("maximal simplex counts differ".into());
        }
        let mut target_cells: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in self.target.maximal_simplices() {
            *target_cells.entry(s.to_vec()).or_default() += 1;
        }
        for simplex in 0..self.source.simplex_count() {
            let img = self.image_set(simplex);
            match target_cells.get_mut(&img) {
                Some(n) if *n > 0 => *n -= 1,
                _ => return Some(format!("image of source simplex {simplex} is not a maximal target simplex")),
            }
        }
        None
    }

    /// `f(p)`, using the carrier chosen by [`Complex::locate`].
    pub fn evaluate(&self, p: &Point) -> Result<Point, MapError> {
        let loc = self.source.locate(p)?;
        Ok(self.map_weights(loc.simplex_id, &loc.coords.weights))
    }

    /// `f(p)` computed from the affine piece on source simplex `simplex`, without
    /// checking membership.
    pub fn evaluate_in(&self, simplex: usize, p: &Point) -> Option<Point> {
        let frame = self.source.frame(simplex)?;
        Some(self.map_weights(simplex, &frame.barycentric(p).weights))
    }

    fn map_weights(&self, simplex: usize, weights: &[f64]) -> Point {
        let images = self
            .source
            .simplex_indices(simplex)
            .iter()
            .map(|&v| &self.target.vertices()[self.vertex_images[v]]);
        Point::combination(images, weights)
    }

    pub fn inverse(&self) -> Result<SimplicialMap, MapError> {
        self.validate_simplicial(MapMode::Homeomorphism)?;
        let mut inv = vec![0; self.vertex_images.len()];
        for (v, &img) in self.vertex_images.iter().enumerate() {
            inv[img] = v;
        }
        Ok(SimplicialMap { source: self.target.clone(), target: self.source.clone(), vertex_images: inv })
    }

    /// The map `x ↦ second(first(x))`.
    pub fn compose(first: &SimplicialMap, second: &SimplicialMap) -> Result<SimplicialMap, MapError> {
        if !Arc::ptr_eq(&first.target, &second.source)
            && !first.target.structurally_identical(&second.source)
        {
            return Err(MapError::IncompatibleComplexes);
        }
        let images = first.vertex_images.iter().map(|&v| second.vertex_images[v]).collect();
        SimplicialMap::new(first.source.clone(), second.target.clone(), images)
    }

    pub fn to_file_data(&self, source: impl Into<PathBuf>, target: impl Into<PathBuf>) -> MapFile {
        MapFile {
            format_version: MAP_FORMAT_VERSION,
            source: source.into(),
            target: target.into(),
            vertex_images: self.vertex_images.clone(),
        }
    }

    /// Loads a map file together with the complexes it references.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, MapError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|source| MapError::Io { path: path.display().to_string(), source })?;
        let file: MapFile = serde_json::from_str(&text)?;
        if file.format_version != MAP_FORMAT_VERSION {
            return Err(MapError::UnsupportedVersion(file.format_version));
        }
        let base = path.parent().unwrap_or(Path::new("."));
        let source = Arc::new(Complex::load(base.join(&file.source))?);
        let target = if file.target == file.source {
            source.clone()
        } else {
            Arc::new(Complex::load(base.join(&file.target))?)
        };
        SimplicialMap::new(source, target, file.vertex_images)
    }
}

impl PointMap for SimplicialMap {
    fn apply(&self, p: &Point) -> Result<Point, EvalError> {
        self.evaluate(p).map_err(|e| EvalError { point: p.clone(), reason: e.to_string() })
    }
}
