//! Affine geometry of embedded simplices.
//!
//! Points are plain coordinate vectors in ℝⁿ. A [`Simplex`] is an ordered list of
//! `k + 1` points with `k ≤ n`; most operations additionally need the vertices to be
//! affinely independent, which is checked through [`degeneracy_measure`] against
//! [`tol::DEGENERACY`]. Heavy lifting (least-squares barycentric coordinates, segment
//! clipping) goes through a precomputed [`AffineFrame`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// A simplex is accepted iff its degeneracy measure is at least this value.
    pub const DEGENERACY: f64 = 1e-10;
    /// Slack on barycentric weights for membership (dimensionless).
    pub const WEIGHT: f64 = 1e-9;
    /// Allowed deviation of the barycentric weight sum from 1.
    pub const WEIGHT_SUM: f64 = 1e-9;
    /// Distance to the affine hull, relative to the simplex diameter.
    pub const RESIDUAL_REL: f64 = 1e-9;
    /// Vertices closer than this are duplicates.
    pub const DUPLICATE_VERTEX: f64 = 1e-9;
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a simplex needs at least one vertex")]
    EmptySimplex,
    #[error("{vertices} vertices cannot span a simplex in R^{ambient}")]
    TooManyVertices { vertices: usize, ambient: usize },
    #[error("degenerate simplex (degeneracy measure {measure:e})")]
    DegenerateSimplex { measure: f64 },
    #[error("dihedral angles need a simplex of dimension >= 2, got {dim}")]
    DimensionTooLow { dim: usize },
    #[error("invalid vertex pair ({i}, {j}) for a simplex with {count} vertices")]
    InvalidVertexPair { i: usize, j: usize, count: usize },
    #[error("barycentric weights sum to {sum}, expected 1")]
    WeightSumViolation { sum: f64 },
}

/// A point of ℝⁿ with finite coordinates.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(GeometryError::NonFinite { index, value });
        }
        Ok(Self { coords })
    }

    /// Builds a point from coordinates produced by arithmetic on finite points.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Self { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    /// The `axis`-th standard basis vector of ℝ^`dim`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut coords = vec![0.0; dim];
        coords[axis] = 1.0;
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &Point) -> f64 {
        dot(&self.coords, &other.coords)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Point {
        Point::from_raw(self.coords.iter().map(|c| c * factor).collect())
    }

    /// `self + factor * direction`.
    pub fn offset(&self, direction: &Point, factor: f64) -> Point {
        Point::from_raw(
            self.coords
                .iter()
                .zip(&direction.coords)
                .map(|(a, d)| a + factor * d)
                .collect(),
        )
    }

    /// Returns the unit vector in this direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(1.0 / n))
    }

    /// Affine combination `Σ wᵢ pᵢ`; weights are not checked.
    pub fn combination<'a>(
        points: impl IntoIterator<Item = &'a Point>,
        weights: &[f64],
    ) -> Point {
        let mut out: Option<Vec<f64>> = None;
        for (p, &w) in points.into_iter().zip(weights) {
            let acc = out.get_or_insert_with(|| vec![0.0; p.dim()]);
            for (a, c) in acc.iter_mut().zip(&p.coords) {
                *a += w * c;
            }
        }
        Point::from_raw(out.unwrap_or_default())
    }

    pub fn centroid<'a>(points: impl IntoIterator<Item = &'a Point>) -> Point {
        let pts: Vec<&Point> = points.into_iter().collect();
        let w = vec![1.0 / pts.len() as f64; pts.len()];
        Point::combination(pts, &w)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.coords)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = GeometryError;

    fn try_from(coords: Vec<f64>) -> Result<Self, Self::Error> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

/// Panics on non-finite input; intended for literals.
impl<const N: usize> From<[f64; N]> for Point {
    fn from(coords: [f64; N]) -> Self {
        Point::new(coords.to_vec()).expect("point literal must be finite")
    }
}

impl Add for &Point {
    type Output = Point;

    fn add(self, rhs: &Point) -> Point {
        Point::from_raw(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Point {
    type Output = Point;

    fn sub(self, rhs: &Point) -> Point {
        Point::from_raw(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Point {
    type Output = Point;

    fn mul(self, rhs: f64) -> Point {
        self.scaled(rhs)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// An ordered list of `k + 1` points in ℝⁿ with `k ≤ n`.
///
/// Affine independence is not enforced here; see [`degeneracy_measure`].
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let first = vertices.first().ok_or(GeometryError::EmptySimplex)?;
        let ambient = first.dim();
        if let Some(bad) = vertices.iter().find(|v| v.dim() != ambient) {
            return Err(GeometryError::DimensionMismatch { expected: ambient, found: bad.dim() });
        }
        if vertices.len() > ambient + 1 {
            return Err(GeometryError::TooManyVertices { vertices: vertices.len(), ambient });
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Simplex dimension `k`.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn centroid(&self) -> Point {
        Point::centroid(&self.vertices)
    }

    /// Longest edge length; 0 for a single vertex.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.distance(b));
            }
        }
        d
    }

    fn edge_matrix(&self) -> DMatrix<f64> {
        let v0 = &self.vertices[0];
        DMatrix::from_fn(self.ambient_dim(), self.dim(), |r, c| {
            self.vertices[c + 1].coords[r] - v0.coords[r]
        })
    }
}

/// k-volume of `s` divided by (longest edge)^k. Zero iff the vertices are affinely
/// dependent; a single vertex scores 1.
pub fn degeneracy_measure(s: &Simplex) -> f64 {
    let k = s.dim();
    if k == 0 {
        return 1.0;
    }
    let longest = s.diameter();
    if longest == 0.0 {
        return 0.0;
    }
    // Scale first so the Gram determinant stays well inside f64 range.
    let e = s.edge_matrix() / longest;
    let gram_det = (e.transpose() * &e).determinant().max(0.0);
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    gram_det.sqrt() / factorial
}

fn require_nondegenerate(s: &Simplex) -> Result<(), GeometryError> {
    let measure = degeneracy_measure(s);
    if measure < tol::DEGENERACY {
        return Err(GeometryError::DegenerateSimplex { measure });
    }
    Ok(())
}

/// Barycentric weights of the orthogonal projection of a point onto a simplex's
/// affine hull, with the distance to that hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarycentricCoords {
    pub weights: Vec<f64>,
    pub residual: f64,
}

impl BarycentricCoords {
    /// Membership test for a simplex of the given diameter.
    pub fn is_inside(&self, diameter: f64) -> bool {
        self.weights.iter().all(|&w| w >= -tol::WEIGHT)
            && self.residual <= tol::RESIDUAL_REL * diameter
    }
}

/// Precomputed least-squares machinery for one nondegenerate simplex.
#[derive(Debug, Clone)]
pub struct AffineFrame {
    simplex: Simplex,
    /// `k × n` row-major pseudo-inverse of the edge matrix.
    pinv: Vec<f64>,
    diameter: f64,
}

impl AffineFrame {
    pub fn new(simplex: Simplex) -> Result<Self, GeometryError> {
        require_nondegenerate(&simplex)?;
        let k = simplex.dim();
        let n = simplex.ambient_dim();
        let diameter = simplex.diameter();
        let mut pinv = Vec::new();
        if k > 0 {
            let qr = simplex.edge_matrix().qr();
            let q = qr.q();
            let r = qr.r();
            let p = r
                .solve_upper_triangular(&q.transpose())
                .ok_or(GeometryError::DegenerateSimplex { measure: 0.0 })?;
            pinv = (0..k).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| p[(i, j)]).collect();
        }
        Ok(Self { simplex, pinv, diameter })
    }

    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Barycentric weights and the residual vector `p − proj(p)`.
    fn decompose(&self, p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let verts = self.simplex.vertices();
        let v0 = verts[0].coords();
        let n = v0.len();
        let k = verts.len() - 1;
        let rel: Vec<f64> = p.iter().zip(v0).map(|(a, b)| a - b).collect();
        let mut weights = vec![0.0; k + 1];
        let mut tail_sum = 0.0;
        for i in 0..k {
            let w = dot(&self.pinv[i * n..(i + 1) * n], &rel);
            weights[i + 1] = w;
            tail_sum += w;
        }
        weights[0] = 1.0 - tail_sum;
        let mut residual = rel;
        for i in 0..k {
            let w = weights[i + 1];
            for ((r, a), b) in residual.iter_mut().zip(verts[i + 1].coords()).zip(v0) {
                *r -= w * (a - b);
            }
        }
        (weights, residual)
    }

    pub fn barycentric(&self, p: &Point) -> BarycentricCoords {
        let (weights, residual) = self.decompose(p.coords());
        BarycentricCoords { weights, residual: norm(&residual) }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.barycentric(p).is_inside(self.diameter)
    }

    /// Sub-interval of `[0, 1]` of the segment `a + t (b − a)` lying in the simplex.
    pub fn clip_segment(&self, a: &Point, b: &Point) -> Option<(f64, f64)> {
        let (wa, ra) = self.decompose(a.coords());
        let (wb, rb) = self.decompose(b.coords());
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);

        // Weight constraints are affine in t: wa + t (wb − wa) ≥ −tol.
        for (x, y) in wa.iter().zip(&wb) {
            let slope = y - x;
            let offset = x + tol::WEIGHT;
            if slope == 0.0 {
                if offset < 0.0 {
                    return None;
                }
            } else if slope > 0.0 {
                lo = lo.max(-offset / slope);
            } else {
                hi = hi.min(-offset / slope);
            }
        }

        // Residual constraint: |ra + t (rb − ra)|² ≤ tol², a convex quadratic in t.
        let limit = tol::RESIDUAL_REL * self.diameter;
        let d: Vec<f64> = rb.iter().zip(&ra).map(|(y, x)| y - x).collect();
        let qa = dot(&d, &d);
        let qb = 2.0 * dot(&ra, &d);
        let qc = dot(&ra, &ra) - limit * limit;
        if qa <= f64::EPSILON * (qc.abs() + limit * limit) {
            if qc > 0.0 {
                return None;
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                return None;
            }
            let root = disc.sqrt();
            lo = lo.max((-qb - root) / (2.0 * qa));
            hi = hi.min((-qb + root) / (2.0 * qa));
        }

        (lo <= hi).then_some((lo, hi))
    }
}

/// Barycentric coordinates of the projection of `p` onto the affine hull of `s`.
pub fn barycentric_coordinates(p: &Point, s: &Simplex) -> Result<BarycentricCoords, GeometryError> {
    check_dim(p, s)?;
    Ok(AffineFrame::new(s.clone())?.barycentric(p))
}

/// `Σ wᵢ vᵢ` over the vertices of `s`.
pub fn point_from_barycentric(b: &BarycentricCoords, s: &Simplex) -> Result<Point, GeometryError> {
    if b.weights.len() != s.vertices().len() {
        return Err(GeometryError::DimensionMismatch {
            expected: s.vertices().len(),
            found: b.weights.len(),
        });
    }
    let sum: f64 = b.weights.iter().sum();
    if (sum - 1.0).abs() > tol::WEIGHT_SUM || !sum.is_finite() {
        return Err(GeometryError::WeightSumViolation { sum });
    }
    Ok(Point::combination(s.vertices(), &b.weights))
}

/// Dihedral angle between the facets opposite vertices `i` and `j`, measured along
/// their shared ridge inside the simplex's affine hull.
///
/// For a triangle this is the interior angle at the third vertex.
pub fn dihedral_angle(s: &Simplex, i: usize, j: usize) -> Result<f64, GeometryError> {
    let count = s.vertices().len();
    if s.dim() < 2 {
        return Err(GeometryError::DimensionTooLow { dim: s.dim() });
    }
    if i == j || i >= count || j >= count {
        return Err(GeometryError::InvalidVertexPair { i, j, count });
    }
    require_nondegenerate(s)?;

    let verts = s.vertices();
    let ridge: Vec<&Point> = (0..count).filter(|&m| m != i && m != j).map(|m| &verts[m]).collect();
    let base = ridge[0];
    let center = Point::centroid(ridge.iter().copied());

    // Orthonormal basis of the ridge's direction space (modified Gram-Schmidt).
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in &ridge[1..] {
        let mut e: Vec<f64> = (*v - base).into_coords();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&e, q);
                e.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let len = norm(&e);
        e.iter_mut().for_each(|x| *x /= len);
        basis.push(e);
    }

    let inward = |apex: &Point| -> Vec<f64> {
        let mut u: Vec<f64> = (apex - &center).into_coords();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&u, q);
                u.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let len = norm(&u);
        u.iter_mut().for_each(|x| *x /= len);
        u
    };
    // Facet opposite i contains v_j and vice versa.
    let into_fi = inward(&verts[j]);
    let into_fj = inward(&verts[i]);
    Ok(dot(&into_fi, &into_fj).clamp(-1.0, 1.0).acos())
}

/// Parameter sub-interval of `[0, 1]` for which `a + t (b − a)` lies in `s`.
pub fn clip_segment(s: &Simplex, a: &Point, b: &Point) -> Result<Option<(f64, f64)>, GeometryError> {
    check_dim(a, s)?;
    check_dim(b, s)?;
    Ok(AffineFrame::new(s.clone())?.clip_segment(a, b))
}

fn check_dim(p: &Point, s: &Simplex) -> Result<(), GeometryError> {
    if p.dim() != s.ambient_dim() {
        return Err(GeometryError::DimensionMismatch { expected: s.ambient_dim(), found: p.dim() });
    }
    Ok(())
}
