//! Finite geometric simplicial complexes embedded in ℝⁿ.
//!
//! A [`Complex`] stores vertex coordinates and its maximal simplices as sorted index
//! tuples; lower faces are implicit. Construction only checks structural soundness
//! (index ranges, coordinate dimensions). Geometric soundness, meaning nondegenerate
//! simplices that meet only in common faces, is reported by [`Complex::validate`].

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{tol, AffineFrame, BarycentricCoords, GeometryError, Point, Simplex};

/// Weight mass a shared point may carry on non-shared vertices before two simplices
/// count as improperly intersecting.
const IMPROPER_WEIGHT_TOL: f64 = 1e-7;

pub const COMPLEX_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("vertex {vertex}: {source}")]
    BadVertex { vertex: usize, source: GeometryError },
    #[error("maximal simplex {simplex} is empty")]
    EmptySimplex { simplex: usize },
    #[error("maximal simplex {simplex} references vertex {index}, but there are {count} vertices")]
    IndexOutOfRange { simplex: usize, index: usize, count: usize },
    #[error("maximal simplex {simplex} repeats vertex {index}")]
    RepeatedIndex { simplex: usize, index: usize },
    #[error("maximal simplex {simplex} has {vertices} vertices, too many for R^{ambient}")]
    SimplexTooLarge { simplex: usize, vertices: usize, ambient: usize },
    #[error("point {0:?} is not in the carrier")]
    NotInCarrier(Point),
    #[error("angle margin needs simplices of dimension >= 2; simplex {simplex} has dimension {dim}")]
    DimensionTooLow { simplex: usize, dim: usize },
    #[error("simplex {simplex} is degenerate")]
    Degenerate { simplex: usize },
    #[error("unsupported format_version {0}")]
    UnsupportedVersion(u32),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed complex file: {0}")]
    Parse(#[from] serde_json::Error),
}

/// On-disk representation, field names fixed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub format_version: u32,
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub maximal_simplices: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
struct Cell {
    indices: Vec<usize>,
    frame: Option<AffineFrame>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Cell {
    fn boxes_overlap(&self, other: &Cell, slack: f64) -> bool {
        self.lower
            .iter()
            .zip(&self.upper)
            .zip(other.lower.iter().zip(&other.upper))
            .all(|((l1, u1), (l2, u2))| l1 <= &(u2 + slack) && l2 <= &(u1 + slack))
    }

    fn box_contains(&self, p: &Point, slack: f64) -> bool {
        p.coords()
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(c, (l, u))| *c >= l - slack && *c <= u + slack)
    }
}

fn box_slack(frame: &AffineFrame) -> f64 {
    10.0 * tol::WEIGHT * frame.diameter()
}

#[derive(Debug, Clone)]
pub struct Complex {
    ambient_dim: usize,
    vertices: Vec<Point>,
    cells: Vec<Cell>,
}

/// Where a point sits: the carrying maximal simplex and its barycentric coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierLocation {
    pub simplex_id: usize,
    pub coords: BarycentricCoords,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DegenerateSimplex { simplex: usize, measure: f64 },
    DuplicateVertices { first: usize, second: usize, distance: f64 },
    DuplicateSimplex { first: usize, second: usize },
    /// The simplices overlap outside their common face; `excess` is the largest
    /// barycentric mass a shared point puts on vertices of `first` not in `second`.
    ImproperIntersection { first: usize, second: usize, excess: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Result of [`Complex::facet_angle_margin`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleMargin {
    /// Smallest `min(α, π − α)` over all dihedral angles α.
    Margin(f64),
    /// Every maximal simplex has dimension ≤ 1, so the angle condition says nothing.
    Vacuous,
}

impl AngleMargin {
    pub fn value(self) -> Option<f64> {
        match self {
            AngleMargin::Margin(t) => Some(t),
            AngleMargin::Vacuous => None,
        }
    }

    /// Minimum of two margins, where a vacuous margin imposes no constraint.
    pub fn min(self, other: AngleMargin) -> AngleMargin {
        match (self, other) {
            (AngleMargin::Margin(a), AngleMargin::Margin(b)) => AngleMargin::Margin(a.min(b)),
            (AngleMargin::Margin(a), AngleMargin::Vacuous)
            | (AngleMargin::Vacuous, AngleMargin::Margin(a)) => AngleMargin::Margin(a),
            (AngleMargin::Vacuous, AngleMargin::Vacuous) => AngleMargin::Vacuous,
        }
    }
}

impl Complex {
    pub fn new(
        ambient_dim: usize,
        vertices: Vec<Point>,
        maximal_simplices: Vec<Vec<usize>>,
    ) -> Result<Self, ComplexError> {
        if ambient_dim == 0 {
            return Err(ComplexError::ZeroDimension);
        }
        for (vertex, v) in vertices.iter().enumerate() {
            if v.dim() != ambient_dim {
                return Err(ComplexError::BadVertex {
                    vertex,
                    source: GeometryError::DimensionMismatch { expected: ambient_dim, found: v.dim() },
                });
            }
        }
        let mut cells = Vec::with_capacity(maximal_simplices.len());
        for (simplex, mut indices) in maximal_simplices.into_iter().enumerate() {
            if indices.is_empty() {
                return Err(ComplexError::EmptySimplex { simplex });
            }
            indices.sort_unstable();
            if let Some(&index) = indices.iter().find(|&&i| i >= vertices.len()) {
                return Err(ComplexError::IndexOutOfRange { simplex, index, count: vertices.len() });
            }
            if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedIndex { simplex, index: w[0] });
            }
            if indices.len() > ambient_dim + 1 {
                return Err(ComplexError::SimplexTooLarge {
                    simplex,
                    vertices: indices.len(),
                    ambient: ambient_dim,
                });
            }
            let pts: Vec<Point> = indices.iter().map(|&i| vertices[i].clone()).collect();
            let mut lower = vec![f64::INFINITY; ambient_dim];
            let mut upper = vec![f64::NEG_INFINITY; ambient_dim];
            for p in &pts {
                for (d, c) in p.coords().iter().enumerate() {
                    lower[d] = lower[d].min(*c);
                    upper[d] = upper[d].max(*c);
                }
            }
            let frame = Simplex::new(pts).ok().and_then(|s| AffineFrame::new(s).ok());
            cells.push(Cell { indices, frame, lower, upper });
        }
        Ok(Self { ambient_dim, vertices, cells })
    }

    pub fn from_file_data(file: ComplexFile) -> Result<Self, ComplexError> {
        if file.format_version != COMPLEX_FORMAT_VERSION {
            return Err(ComplexError::UnsupportedVersion(file.format_version));
        }
        let vertices = file
            .vertices
            .into_iter()
            .enumerate()
            .map(|(vertex, c)| Point::new(c).map_err(|source| ComplexError::BadVertex { vertex, source }))
            .collect::<Result<Vec<_>, _>>()?;
        Complex::new(file.ambient_dim, vertices, file.maximal_simplices)
    }

    pub fn to_file_data(&self) -> ComplexFile {
        ComplexFile {
            format_version: COMPLEX_FORMAT_VERSION,
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.iter().map(|v| v.coords().to_vec()).collect(),
            maximal_simplices: self.cells.iter().map(|c| c.indices.clone()).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        Complex::from_file_data(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_data()).expect("complex serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ComplexError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|source| ComplexError::Io { path: path.display().to_string(), source })?;
        Complex::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ComplexError> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n")
            .map_err(|source| ComplexError::Io { path: path.display().to_string(), source })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplex_count(&self) -> usize {
        self.cells.len()
    }

    /// Sorted vertex indices of maximal simplex `id`.
    pub fn simplex_indices(&self, id: usize) -> &[usize] {
        &self.cells[id].indices
    }

    pub fn maximal_simplices(&self) -> impl Iterator<Item = &[usize]> {
        self.cells.iter().map(|c| c.indices.as_slice())
    }

    pub fn simplex(&self, id: usize) -> Simplex {
        Simplex::new(self.cells[id].indices.iter().map(|&i| self.vertices[i].clone()).collect())
            .expect("indices validated at construction")
    }

    /// Frame of maximal simplex `id`, `None` when it is degenerate.
    pub fn frame(&self, id: usize) -> Option<&AffineFrame> {
        self.cells[id].frame.as_ref()
    }

    /// Largest dimension among maximal simplices.
    pub fn top_dim(&self) -> usize {
        self.cells.iter().map(|c| c.indices.len() - 1).max().unwrap_or(0)
    }

    /// Does maximal simplex `id` contain `p` at tolerance?
    pub fn simplex_contains(&self, id: usize, p: &Point) -> bool {
        let cell = &self.cells[id];
        match &cell.frame {
            Some(frame) => {
                cell.box_contains(p, box_slack(frame))
                    && frame.contains(p)
            }
            None => false,
        }
    }

    /// Lists every geometric defect: degenerate simplices, duplicate vertices and
    /// pairs of simplices that meet outside a common face.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        for (simplex, cell) in self.cells.iter().enumerate() {
            if cell.frame.is_none() {
                let measure = crate::geometry::degeneracy_measure(&self.simplex(simplex));
                violations.push(Violation::DegenerateSimplex { simplex, measure });
            }
        }

        for (first, a) in self.vertices.iter().enumerate() {
            for (offset, b) in self.vertices[first + 1..].iter().enumerate() {
                let distance = a.distance(b);
                if distance <= tol::DUPLICATE_VERTEX {
                    violations.push(Violation::DuplicateVertices {
                        first,
                        second: first + 1 + offset,
                        distance,
                    });
                }
            }
        }

        for first in 0..self.cells.len() {
            for second in first + 1..self.cells.len() {
                let (a, b) = (&self.cells[first], &self.cells[second]);
                if a.indices == b.indices {
                    violations.push(Violation::DuplicateSimplex { first, second });
                    continue;
                }
                if a.frame.is_none() || b.frame.is_none() {
                    continue;
                }
                let scale = a.frame.as_ref().unwrap().diameter().max(b.frame.as_ref().unwrap().diameter());
                if !a.boxes_overlap(b, tol::RESIDUAL_REL * scale) {
                    continue;
                }
                if let Some(excess) = self.improper_excess(first, second) {
                    violations.push(Violation::ImproperIntersection { first, second, excess });
                }
            }
        }

        ValidationReport { valid: violations.is_empty(), violations }
    }

    /// Maximizes, over points common to both simplices, the barycentric weight carried
    /// by vertices of either simplex that the other one lacks. The intersection is a
    /// common face iff that maximum is zero.
    fn improper_excess(&self, first: usize, second: usize) -> Option<f64> {
        let a = &self.cells[first].indices;
        let b = &self.cells[second].indices;
        let excess = self.lp_excess(a, b).max(self.lp_excess(b, a));
        (excess > IMPROPER_WEIGHT_TOL).then_some(excess)
    }

    fn lp_excess(&self, a: &[usize], b: &[usize]) -> f64 {
        // Normalize coordinates around the pair for conditioning.
        let all: Vec<&Point> = a.iter().chain(b).map(|&i| &self.vertices[i]).collect();
        let center = Point::centroid(all.iter().copied());
        let scale = all.iter().map(|p| p.distance(&center)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let local = |i: usize| -> Vec<f64> {
            self.vertices[i].coords().iter().zip(center.coords()).map(|(x, c)| (x - c) / scale).collect()
        };

        let mut problem = Problem::new(OptimizationDirection::Maximize);
        let wa: Vec<_> = a
            .iter()
            .map(|i| problem.add_var(if b.contains(i) { 0.0 } else { 1.0 }, (0.0, 1.0)))
            .collect();
        let wb: Vec<_> = b.iter().map(|_| problem.add_var(0.0, (0.0, 1.0))).collect();
        problem.add_constraint(wa.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
        problem.add_constraint(wb.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
        let ca: Vec<Vec<f64>> = a.iter().map(|&i| local(i)).collect();
        let cb: Vec<Vec<f64>> = b.iter().map(|&i| local(i)).collect();
        for d in 0..self.ambient_dim {
            let mut row: Vec<_> = wa.iter().zip(&ca).map(|(&v, c)| (v, c[d])).collect();
            row.extend(wb.iter().zip(&cb).map(|(&v, c)| (v, -c[d])));
            problem.add_constraint(row, ComparisonOp::Eq, 0.0);
        }
        match problem.solve() {
            // No limits are set, so the solver never stops without an assignment.
            Ok(outcome) => outcome.solution().map_or(0.0, |s| s.objective()),
            // Infeasible: the simplices are disjoint.
            Err(_) => 0.0,
        }
    }

    /// Lowest-indexed maximal simplex containing `p`.
    pub fn locate(&self, p: &Point) -> Result<CarrierLocation, ComplexError> {
        if p.dim() != self.ambient_dim {
            return Err(ComplexError::NotInCarrier(p.clone()));
        }
        for (simplex_id, cell) in self.cells.iter().enumerate() {
            let Some(frame) = &cell.frame else { continue };
            if !cell.box_contains(p, box_slack(frame)) {
                continue;
            }
            let coords = frame.barycentric(p);
            if coords.is_inside(frame.diameter()) {
                return Ok(CarrierLocation { simplex_id, coords });
            }
        }
        Err(ComplexError::NotInCarrier(p.clone()))
    }

    /// Smallest `min(α, π − α)` over all dihedral angles α of all maximal simplices.
    pub fn facet_angle_margin(&self) -> Result<AngleMargin, ComplexError> {
        let mut margin = f64::INFINITY;
        let mut low: Option<(usize, usize)> = None;
        let mut any_high = false;
        for (id, cell) in self.cells.iter().enumerate() {
            let dim = cell.indices.len() - 1;
            if dim < 2 {
                low.get_or_insert((id, dim));
                continue;
            }
            any_high = true;
            let frame = cell.frame.as_ref().ok_or(ComplexError::Degenerate { simplex: id })?;
            for i in 0..=dim {
                for j in i + 1..=dim {
                    let angle = crate::geometry::dihedral_angle(frame.simplex(), i, j)
                        .map_err(|_| ComplexError::Degenerate { simplex: id })?;
                    margin = margin.min(angle.min(PI - angle));
                }
            }
        }
        match (any_high, low) {
            (true, Some((simplex, dim))) => Err(ComplexError::DimensionTooLow { simplex, dim }),
            (true, None) => Ok(AngleMargin::Margin(margin)),
            (false, _) => Ok(AngleMargin::Vacuous),
        }
    }

    /// Same vertices (within `1e-12`) and the same set of maximal simplices.
    pub fn structurally_identical(&self, other: &Complex) -> bool {
        if self.ambient_dim != other.ambient_dim
            || self.vertices.len() != other.vertices.len()
            || self.cells.len() != other.cells.len()
        {
            return false;
        }
        if self.vertices.iter().zip(&other.vertices).any(|(a, b)| a.distance(b) > 1e-12) {
            return false;
        }
        let mut mine: Vec<&Vec<usize>> = self.cells.iter().map(|c| &c.indices).collect();
        let mut theirs: Vec<&Vec<usize>> = other.cells.iter().map(|c| &c.indices).collect();
        mine.sort();
        theirs.sort();
        mine == theirs
    }

    /// Image of the complex under a vertex-wise map, keeping the combinatorics.
    pub fn map_vertices(&self, f: impl Fn(&Point) -> Point) -> Complex {
        Complex::new(
            self.ambient_dim,
            self.vertices.iter().map(f).collect(),
            self.cells.iter().map(|c| c.indices.clone()).collect(),
        )
        .expect("same combinatorics")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn square() -> Complex {
        Complex::new(
            2,
            vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [0.0, 1.0].into(), [1.0, 1.0].into()],
            vec![vec![0, 1, 2], vec![1, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn square_is_valid() {
        let report = square().validate();
        assert!(report.valid, "{:?}", report.violations);
    }

    #[test]
    fn overlapping_triangles_are_improper() {
        let c = Complex::new(
            2,
            vec![
                [0.0, 0.0].into(),
                [2.0, 0.0].into(),
                [0.0, 2.0].into(),
                [0.5, 0.5].into(),
                [3.0, 0.5].into(),
                [0.5, 3.0].into(),
            ],
            vec![vec![0, 1, 2], vec![3, 4, 5]],
        )
        .unwrap();
        let report = c.validate();
        assert!(!report.valid);
        assert!(matches!(
            report.violations[0],
            Violation::ImproperIntersection { first: 0, second: 1, .. }
        ));
    }

    #[test]
    fn t_junction_is_improper() {
        // Vertex 3 sits in the middle of edge (1,2) of the first triangle.
        let c = Complex::new(
            2,
            vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [0.0, 1.0].into(), [0.5, 0.5].into(), [1.0, 1.0].into()],
            vec![vec![0, 1, 2], vec![1, 3, 4]],
        )
        .unwrap();
        assert!(!c.validate().valid);
    }

    #[test]
    fn touching_at_vertex_without_sharing_index_is_improper() {
        let c = Complex::new(
            2,
            vec![
                [0.0, 0.0].into(),
                [1.0, 0.0].into(),
                [0.0, 1.0].into(),
                [1.0, 0.0].into(),
                [2.0, 0.0].into(),
                [2.0, 1.0].into(),
            ],
            vec![vec![0, 1, 2], vec![3, 4, 5]],
        )
        .unwrap();
        let report = c.validate();
        assert!(report.violations.iter().any(|v| matches!(v, Violation::DuplicateVertices { first: 1, second: 3, .. })));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::ImproperIntersection { .. })));
    }

    #[test]
    fn degenerate_and_duplicate_simplices_reported() {
        let c = Complex::new(
            2,
            vec![[0.0, 0.0].into(), [1.0, 1.0].into(), [2.0, 2.0].into(), [0.0, 1.0].into()],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![3, 1, 0]],
        )
        .unwrap();
        let report = c.validate();
        assert!(report.violations.contains(&Violation::DuplicateSimplex { first: 1, second: 2 }));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DegenerateSimplex { simplex: 0, .. })));
    }

    #[test]
    fn disjoint_simplices_are_fine() {
        let c = Complex::new(
            2,
            vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [0.0, 1.0].into(), [5.0, 5.0].into(), [6.0, 5.0].into()],
            vec![vec![0, 1, 2], vec![3, 4]],
        )
        .unwrap();
        assert!(c.validate().valid);
    }

    #[test]
    fn structural_errors() {
        let v: Vec<Point> = vec![[0.0, 0.0].into(), [1.0, 0.0].into()];
        assert!(matches!(
            Complex::new(2, v.clone(), vec![vec![0, 2]]),
            Err(ComplexError::IndexOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            Complex::new(2, v.clone(), vec![vec![1, 1]]),
            Err(ComplexError::RepeatedIndex { index: 1, .. })
        ));
        assert!(matches!(Complex::new(2, v.clone(), vec![vec![]]), Err(ComplexError::EmptySimplex { .. })));
        assert!(matches!(Complex::new(3, v, vec![vec![0]]), Err(ComplexError::BadVertex { .. })));
    }

    #[test]
    fn locate_examples() {
        let c = square();
        // Vertex 1 is shared; lowest simplex wins.
        assert_eq!(c.locate(&[1.0, 0.0].into()).unwrap().simplex_id, 0);
        assert_eq!(c.locate(&[0.9, 0.9].into()).unwrap().simplex_id, 1);
        assert!(matches!(c.locate(&[1.5, 0.5].into()), Err(ComplexError::NotInCarrier(_))));
    }

    #[test]
    fn locate_tie_break_prefers_lowest_index() {
        // Fan of six triangles around vertex 0; vertex 3 lies in simplices 1 and 2.
        let mut verts: Vec<Point> = vec![[0.0, 0.0].into()];
        for k in 0..6 {
            let a = k as f64 * std::f64::consts::PI / 3.0;
            verts.push([a.cos(), a.sin()].into());
        }
        let simplices: Vec<Vec<usize>> = (0..6).map(|k| vec![0, 1 + k, 1 + (k + 1) % 6]).collect();
        let c = Complex::new(2, verts.clone(), simplices).unwrap();
        assert!(c.validate().valid);
        assert_eq!(c.locate(&verts[3]).unwrap().simplex_id, 1);
        assert_eq!(c.locate(&verts[1]).unwrap().simplex_id, 0);
        assert_eq!(c.locate(&verts[0]).unwrap().simplex_id, 0);
    }

    #[test]
    fn angle_margin_examples() {
        let h = 3f64.sqrt() / 2.0;
        let eq = Complex::new(2, vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [0.5, h].into()], vec![vec![0, 1, 2]])
            .unwrap();
        let m = eq.facet_angle_margin().unwrap().value().unwrap();
        assert!((m - FRAC_PI_3).abs() < 1e-14);

        let m = square().facet_angle_margin().unwrap().value().unwrap();
        assert!((m - FRAC_PI_4).abs() < 1e-14);

        let path = Complex::new(2, vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [1.0, 1.0].into()], vec![vec![0, 1], vec![1, 2]])
            .unwrap();
        assert_eq!(path.facet_angle_margin().unwrap(), AngleMargin::Vacuous);

        let mixed = Complex::new(
            2,
            vec![[0.0, 0.0].into(), [1.0, 0.0].into(), [0.0, 1.0].into(), [3.0, 3.0].into()],
            vec![vec![0, 1, 2], vec![2, 3]],
        )
        .unwrap();
        assert!(matches!(mixed.facet_angle_margin(), Err(ComplexError::DimensionTooLow { simplex: 1, dim: 1 })));
    }

    #[test]
    fn file_round_trip_and_version_check() {
        let c = square();
        let back = Complex::from_json(&c.to_json()).unwrap();
        assert!(c.structurally_identical(&back));
        let text = r#"{"format_version": 2, "ambient_dim": 1, "vertices": [[0.0]], "maximal_simplices": [[0]]}"#;
        assert!(matches!(Complex::from_json(text), Err(ComplexError::UnsupportedVersion(2))));
        let text = r#"{"format_version": 1, "ambient_dim": 1, "vertices": [[0.0]], "maximal_simplices": [[0]], "extra": 1}"#;
        assert!(matches!(Complex::from_json(text), Err(ComplexError::Parse(_))));
    }
}
