//! Bi-Lipschitz certificates for simplicial homeomorphisms.
//!
//! A simplicial homeomorphism `f: |K| → |K′|` is certified from two measured
//! quantities:
//!
//! * the vertex ratio bound `M`: every edge of every source simplex is stretched by a
//!   factor strictly between `1/M` and `M`;
//! * the angle margin `θ`: every dihedral angle of every simplex of `K` and `K′` lies
//!   in `[θ, π − θ]`.
//!
//! From these, with `N₁ = 1 + cot(θ/2) + cos²(θ/2)/sin(θ/2)` and `N = N₁²`, the
//! restriction of `f` to any `d`-simplex satisfies
//!
//! ```text
//! 1/k ≤ |f(x) − f(y)| / |x − y| ≤ k,    k = M · N^(d−1) · √6^(d−2)    (d ≥ 2)
//! ```
//!
//! and `k = M` for `d = 1`. When the source carrier is convex, chaining along the
//! straight segment between two points extends the same `k` to all of `|K|`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{AngleMargin, Complex, ComplexError, ValidationReport};
use crate::geometry::Point;
use crate::pl_map::{MapError, MapMode, SimplicialMap};
use crate::sampling::{dirichlet_point, log_uniform, substream};

/// Relative inflation applied to the observed vertex ratio so the certified bound is
/// strict.
pub const STRICTNESS_INFLATION: f64 = 1e-6;

/// Segment midpoints sampled when checking carrier convexity.
pub const CONVEXITY_SAMPLES: usize = 1000;

/// Additive slack in the triangle side check.
pub const TRIANGLE_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("angle margin {0} outside (0, pi/2]")]
    ThetaOutOfRange(f64),
    #[error("vertex ratio bound {0} must be at least 1")]
    RatioOutOfRange(f64),
    #[error("simplex dimension must be at least 1")]
    ZeroDimension,
    #[error("source simplex {simplex} has a degenerate edge ({i}, {j})")]
    DegenerateEdge { simplex: usize, i: usize, j: usize },
    #[error("{which} complex is invalid: {report:?}")]
    InvalidComplex { which: &'static str, report: ValidationReport },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexityMode {
    /// Sample segment midpoints to decide.
    Auto,
    /// Trust the caller.
    Assume,
    /// Never report a global constant.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRatio {
    /// Largest `max(r, 1/r)` over all edge stretch factors `r`.
    pub observed: f64,
    /// `observed · (1 + STRICTNESS_INFLATION)`.
    pub certified: f64,
    /// Source simplex and local vertex pair attaining `observed`.
    pub witness: (usize, usize, usize),
}

/// Largest edge distortion of `m` over all maximal source simplices.
pub fn vertex_ratio_bound(m: &SimplicialMap) -> Result<VertexRatio, CertifyError> {
    let src = m.source();
    let dst = m.target();
    let mut observed: f64 = 1.0;
    let mut witness = (0, 0, 0);
    for simplex in 0..src.simplex_count() {
        let idx = src.simplex_indices(simplex);
        for i in 0..idx.len() {
            for j in i + 1..idx.len() {
                let d_src = src.vertices()[idx[i]].distance(&src.vertices()[idx[j]]);
                let d_dst = dst.vertices()[m.vertex_images()[idx[i]]]
                    .distance(&dst.vertices()[m.vertex_images()[idx[j]]]);
                if d_src == 0.0 || d_dst == 0.0 {
                    return Err(CertifyError::DegenerateEdge { simplex, i, j });
                }
                let r = d_dst / d_src;
                let stretch = r.max(1.0 / r);
                if stretch > observed {
                    observed = stretch;
                    witness = (simplex, i, j);
                }
            }
        }
    }
    Ok(VertexRatio { observed, certified: observed * (1.0 + STRICTNESS_INFLATION), witness })
}

/// `N₁(θ) = 1 + cot(θ/2) + cos²(θ/2)/sin(θ/2)`: whenever a triangle's angle at `C`
/// lies in `[θ, π − θ]`, the two sides meeting at `C` sum to at most `N₁` times the
/// opposite side.
pub fn triangle_constant(theta: f64) -> Result<f64, CertifyError> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return Err(CertifyError::ThetaOutOfRange(theta));
    }
    let half = theta / 2.0;
    let (s, c) = half.sin_cos();
    Ok(1.0 + c / s + c * c / s)
}

/// Per-simplex bi-Lipschitz constant `M · N^(d−1) · √6^(d−2)` with `N = N₁(θ)²`;
/// `M` alone when `d = 1` (θ is then ignored).
pub fn simplex_bound(m: f64, theta: f64, dim: usize) -> Result<f64, CertifyError> {
    if !(m.is_finite() && m >= 1.0) {
        return Err(CertifyError::RatioOutOfRange(m));
    }
    match dim {
        0 => Err(CertifyError::ZeroDimension),
        1 => Ok(m),
        d => {
            let n = triangle_constant(theta)?.powi(2);
            Ok(m * n.powi(d as i32 - 1) * 6f64.sqrt().powi(d as i32 - 2))
        }
    }
}

/// Emitted certificate. Field names on disk are fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "n")]
    pub ambient_dim: usize,
    /// Dimension used in the exponent: the top dimension of the source complex.
    pub simplex_dim: usize,
    #[serde(rename = "M_obs")]
    pub vertex_ratio_observed: f64,
    #[serde(rename = "M")]
    pub vertex_ratio: f64,
    /// `None` when every simplex has dimension ≤ 1.
    pub theta: Option<f64>,
    #[serde(rename = "N1")]
    pub triangle_constant: Option<f64>,
    #[serde(rename = "N")]
    pub angle_factor: Option<f64>,
    pub k_simplex: f64,
    pub k_global: Option<f64>,
    pub convex_carrier: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityCheck {
    pub convex: bool,
    pub samples: usize,
    /// Endpoints whose midpoint left the carrier.
    pub counterexample: Option<(Point, Point)>,
}

/// Samples points in two distinct maximal simplices and checks their midpoints stay
/// in the carrier. A single simplex is convex without sampling.
pub fn check_convexity(c: &Complex, samples: usize, seed: u64) -> ConvexityCheck {
    let count = c.simplex_count();
    if count <= 1 {
        return ConvexityCheck { convex: true, samples: 0, counterexample: None };
    }
    let simplices: Vec<_> = (0..count).map(|i| c.simplex(i)).collect();
    let failure = (0..samples as u64).into_par_iter().find_first(|&i| {
        let (a, b) = midpoint_pair(&simplices, seed, i);
        let mid = a.offset(&(&b - &a), 0.5);
        c.locate(&mid).is_err()
    });
    ConvexityCheck {
        convex: failure.is_none(),
        samples,
        counterexample: failure.map(|i| midpoint_pair(&simplices, seed, i)),
    }
}

fn midpoint_pair(simplices: &[crate::geometry::Simplex], seed: u64, index: u64) -> (Point, Point) {
    use rand::Rng;
    let mut rng = substream(seed, index);
    let n = simplices.len();
    let first = rng.random_range(0..n);
    let second = (first + rng.random_range(1..n)) % n;
    (dirichlet_point(&simplices[first], &mut rng), dirichlet_point(&simplices[second], &mut rng))
}

/// Certifies `m` as a bi-Lipschitz homeomorphism.
pub fn certify(m: &SimplicialMap, convexity: ConvexityMode, seed: u64) -> Result<Certificate, CertifyError> {
    for (which, c) in [("source", m.source()), ("target", m.target())] {
        let report = c.validate();
        if !report.valid {
            return Err(CertifyError::InvalidComplex { which, report });
        }
    }
    m.validate_simplicial(MapMode::Homeomorphism)?;

    let ratio = vertex_ratio_bound(m)?;
    let margin = m.source().facet_angle_margin()?.min(m.target().facet_angle_margin()?);
    let simplex_dim = m.source().top_dim().max(1);

    let (theta, n1, n, k_simplex) = match margin {
        AngleMargin::Margin(theta) if simplex_dim >= 2 => {
            let n1 = triangle_constant(theta)?;
            (Some(theta), Some(n1), Some(n1 * n1), simplex_bound(ratio.certified, theta, simplex_dim)?)
        }
        _ => (None, None, None, simplex_bound(ratio.certified, FRAC_PI_2, 1)?),
    };

    let convex_carrier = match convexity {
        ConvexityMode::Auto => check_convexity(m.source(), CONVEXITY_SAMPLES, seed).convex,
        ConvexityMode::Assume => true,
        ConvexityMode::None => false,
    };

    Ok(Certificate {
        ambient_dim: m.source().ambient_dim(),
        simplex_dim,
        vertex_ratio_observed: ratio.observed,
        vertex_ratio: ratio.certified,
        theta,
        triangle_constant: n1,
        angle_factor: n,
        k_simplex,
        k_global: convex_carrier.then_some(k_simplex),
        convex_carrier,
    })
}

/// One sampled triangle `ABC` with the angle at `C` pinned inside `[θ, π − θ]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleSample {
    pub trial: u64,
    pub angle_c: f64,
    /// `|BC|`, `|CA|`, `|AB|`.
    pub sides: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleCheckReport {
    pub theta: f64,
    pub constant: f64,
    pub trials: u64,
    pub seed: u64,
    pub violations: u64,
    /// Largest `(a + b)/c` seen.
    pub worst_ratio: f64,
    pub worst: Option<TriangleSample>,
}

impl TriangleCheckReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn sample_triangle(theta: f64, seed: u64, trial: u64) -> TriangleSample {
    use rand::Rng;
    use std::f64::consts::PI;
    let mut rng = substream(seed, trial);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let gamma: f64 = rng.random_range(theta..=PI - theta);
    let len_ca = log_uniform(1e-2, 1e2, &mut rng);
    let len_cb = log_uniform(1e-2, 1e2, &mut rng);
    let a_pt = [len_ca * phi.cos(), len_ca * phi.sin()];
    let b_pt = [len_cb * (phi + gamma).cos(), len_cb * (phi + gamma).sin()];
    let a = (b_pt[0].powi(2) + b_pt[1].powi(2)).sqrt();
    let b = (a_pt[0].powi(2) + a_pt[1].powi(2)).sqrt();
    let c = ((a_pt[0] - b_pt[0]).powi(2) + (a_pt[1] - b_pt[1]).powi(2)).sqrt();
    TriangleSample { trial, angle_c: gamma, sides: [a, b, c] }
}

/// Randomized check of `a + b ≤ N₁(θ)·c` over triangles with the angle at `C`
/// uniform in `[θ, π − θ]`, side lengths at `C` log-uniform in `[1e-2, 1e2]`.
pub fn triangle_inequality_check(theta: f64, trials: u64, seed: u64) -> Result<TriangleCheckReport, CertifyError> {
    let constant = triangle_constant(theta)?;
    let (violations, worst) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = sample_triangle(theta, seed, t);
            let [a, b, c] = s.sides;
            let bad = u64::from(a + b > constant * c + TRIANGLE_SLACK);
            (bad, Some(s))
        })
        .reduce(
            || (0, None),
            |(v1, w1), (v2, w2)| (v1 + v2, worse(w1, w2)),
        );
    let worst_ratio = worst.as_ref().map_or(0.0, |s: &TriangleSample| (s.sides[0] + s.sides[1]) / s.sides[2]);
    Ok(TriangleCheckReport { theta, constant, trials, seed, violations, worst_ratio, worst })
}

fn worse(a: Option<TriangleSample>, b: Option<TriangleSample>) -> Option<TriangleSample> {
    let ratio = |s: &TriangleSample| (s.sides[0] + s.sides[1]) / s.sides[2];
    match (a, b) {
        (Some(x), Some(y)) => {
            // Ties go to the lower trial index so the result is schedule independent.
            if ratio(&y) > ratio(&x) || (ratio(&y) == ratio(&x) && y.trial < x.trial) {
                Some(y)
            } else {
                Some(x)
            }
        }
        (x, None) => x,
        (None, y) => y,
    }
}
