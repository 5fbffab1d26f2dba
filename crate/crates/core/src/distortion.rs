//! Randomized distortion measurements: ratio extremes, single-parameter
//! quasi-isometry constants, and sup-distance between two maps on growing balls.
//!
//! Sampling only refutes bounds; it never proves them.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::Complex;
use crate::geometry::{Point, Simplex};
use crate::pl_map::SimplicialMap;
use crate::point_map::{EvalError, PointMap};
use crate::sampling::{dirichlet_point, log_uniform, substream, unit_ball_point};

/// Pairs closer than this are resampled.
pub const MIN_PAIR_DISTANCE: f64 = 1e-12;

/// Default additive slack in [`bound_check`].
pub const BOUND_SLACK: f64 = 1e-9;

/// Redraws allowed for one pair before giving up.
const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Error)]
pub enum DistortionError {
    #[error("pair_count must be at least 1")]
    NoPairs,
    #[error("stratification fraction {0} outside [0, 1]")]
    BadFraction(f64),
    #[error("ball radius {0} must be positive and finite")]
    BadRadius(f64),
    #[error("sampling region is empty")]
    EmptyRegion,
    #[error("could not draw two distinct points for pair {0}")]
    DegenerateRegion(u64),
    #[error("center has dimension {center}, expected {expected}")]
    DimensionMismatch { center: usize, expected: usize },
    #[error("evaluation failed at sample {sample}: {source}")]
    Evaluation { sample: u64, source: EvalError },
    #[error(
        "no finite constant: required M {required} at radius {radius} (cap {cap}, growth exponent {growth_exponent:?})"
    )]
    NoFiniteConstant { required: f64, radius: f64, cap: f64, growth_exponent: Option<f64> },
    #[error("radii must be positive and strictly increasing")]
    BadRadii,
}

#[derive(Clone)]
pub enum Region {
    /// `center + radius·B`, `B` the closed unit ball.
    Ball { center: Point, radius: f64 },
    /// Carrier of a complex.
    Carrier(Arc<Complex>),
}

impl std::fmt::Debug for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::Ball { center, radius } => f.debug_struct("Ball").field("center", center).field("radius", radius).finish(),
            Region::Carrier(c) => f.debug_struct("Carrier").field("simplices", &c.simplex_count()).finish(),
        }
    }
}

/// A map together with where to sample it.
#[derive(Clone)]
pub struct MapUnderTest {
    map: Arc<dyn PointMap>,
    region: Region,
}

impl MapUnderTest {
    /// Samples the carrier of the source complex.
    pub fn simplicial(m: SimplicialMap) -> Self {
        let region = Region::Carrier(m.source().clone());
        Self { map: Arc::new(m), region }
    }

    pub fn on_ball(map: impl PointMap + 'static, center: Point, radius: f64) -> Result<Self, DistortionError> {
        Self::on_ball_shared(Arc::new(map), center, radius)
    }

    pub fn on_ball_shared(map: Arc<dyn PointMap>, center: Point, radius: f64) -> Result<Self, DistortionError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(DistortionError::BadRadius(radius));
        }
        Ok(Self { map, region: Region::Ball { center, radius } })
    }

    pub fn map(&self) -> &dyn PointMap {
        &*self.map
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    fn eval(&self, sample: u64, p: &Point) -> Result<Point, DistortionError> {
        self.map.apply(p).map_err(|source| DistortionError::Evaluation { sample, source })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePlan {
    pub seed: u64,
    pub pair_count: u64,
    /// Carrier regions: share of pairs drawn inside a single simplex (the rest pick
    /// two simplices). Ball regions: share of local pairs, whose second point sits a
    /// log-uniform small offset from the first.
    pub stratification: f64,
}

impl SamplePlan {
    pub fn new(seed: u64, pair_count: u64, stratification: f64) -> Result<Self, DistortionError> {
        let plan = Self { seed, pair_count, stratification };
        plan.check()?;
        Ok(plan)
    }

    fn check(&self) -> Result<(), DistortionError> {
        if self.pair_count == 0 {
            return Err(DistortionError::NoPairs);
        }
        if !(0.0..=1.0).contains(&self.stratification) {
            return Err(DistortionError::BadFraction(self.stratification));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub sample: u64,
    pub x: Point,
    pub y: Point,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub seed: u64,
    pub pair_count: u64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub argmin: Witness,
    pub argmax: Witness,
}

/// Draws pair `index` of the plan in the unit-scaled region. For balls the pair lives
/// in the unit ball and the caller maps it through `center + radius·(·)`.
fn draw_pair(region: &Region, simplices: &[Simplex], plan: &SamplePlan, index: u64) -> Result<(Point, Point), DistortionError> {
    let mut rng = substream(plan.seed, index);
    for _ in 0..MAX_REDRAWS {
        let (x, y) = match region {
            Region::Carrier(_) => {
                let n = simplices.len();
                let first = rng.random_range(0..n);
                let within = rng.random::<f64>() < plan.stratification || n == 1;
                let second = if within { first } else { (first + rng.random_range(1..n)) % n };
                (dirichlet_point(&simplices[first], &mut rng), dirichlet_point(&simplices[second], &mut rng))
            }
            Region::Ball { center, radius } => {
                let dim = center.dim();
                let local = rng.random::<f64>() < plan.stratification;
                let x = unit_ball_point(dim, 0.0, &mut rng);
                let y = if local {
                    let step = log_uniform(1e-6, 1e-1, &mut rng);
                    let y = x.offset(&unit_ball_point(dim, 1.0, &mut rng), step);
                    if y.norm() > 1.0 {
                        continue;
                    }
                    y
                } else {
                    unit_ball_point(dim, 0.0, &mut rng)
                };
                (center.offset(&x, *radius), center.offset(&y, *radius))
            }
        };
        if x.distance(&y) >= MIN_PAIR_DISTANCE {
            return Ok((x, y));
        }
    }
    Err(DistortionError::DegenerateRegion(index))
}

fn carrier_simplices(region: &Region) -> Result<Vec<Simplex>, DistortionError> {
    match region {
        Region::Carrier(c) if c.simplex_count() == 0 => Err(DistortionError::EmptyRegion),
        Region::Carrier(c) => Ok((0..c.simplex_count()).map(|i| c.simplex(i)).collect()),
        Region::Ball { .. } => Ok(Vec::new()),
    }
}

/// One evaluated pair: sample index, source distance, image distance.
struct Evaluated {
    sample: u64,
    d_src: f64,
    d_img: f64,
}

fn evaluate_pairs(m: &MapUnderTest, region: &Region, plan: &SamplePlan) -> Result<Vec<Evaluated>, DistortionError> {
    plan.check()?;
    if let Region::Ball { radius, .. } = region {
        if !(*radius > 0.0 && radius.is_finite()) {
            return Err(DistortionError::BadRadius(*radius));
        }
    }
    let simplices = carrier_simplices(region)?;
    (0..plan.pair_count)
        .into_par_iter()
        .map(|i| {
            let (x, y) = draw_pair(region, &simplices, plan, i)?;
            let fx = m.eval(i, &x)?;
            let fy = m.eval(i, &y)?;
            Ok(Evaluated { sample: i, d_src: x.distance(&y), d_img: fx.distance(&fy) })
        })
        .collect()
}

/// Extremes of `d(f(x), f(y))/d(x, y)` over sampled pairs. Ties resolve to the lowest
/// sample index.
pub fn sample_distortion(m: &MapUnderTest, plan: &SamplePlan) -> Result<DistortionReport, DistortionError> {
    let pairs = evaluate_pairs(m, &m.region, plan)?;
    let mut lo = &pairs[0];
    let mut hi = &pairs[0];
    for e in &pairs[1..] {
        if e.d_img / e.d_src < lo.d_img / lo.d_src {
            lo = e;
        }
        if e.d_img / e.d_src > hi.d_img / hi.d_src {
            hi = e;
        }
    }
    let simplices = carrier_simplices(&m.region)?;
    let witness = |e: &Evaluated| -> Result<Witness, DistortionError> {
        let (x, y) = draw_pair(&m.region, &simplices, plan, e.sample)?;
        Ok(Witness { sample: e.sample, x, y, ratio: e.d_img / e.d_src })
    };
    let argmin = witness(lo)?;
    let argmax = witness(hi)?;
    Ok(DistortionReport {
        seed: plan.seed,
        pair_count: plan.pair_count,
        min_ratio: argmin.ratio,
        max_ratio: argmax.ratio,
        argmin,
        argmax,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub k: f64,
    pub slack: f64,
    pub pass: bool,
    /// `min(min_ratio − 1/k, k − max_ratio)`; negative when the bound is exceeded.
    pub margin: f64,
}

/// Pass iff `[min_ratio, max_ratio] ⊆ [1/k − slack, k + slack]`.
pub fn bound_check(report: &DistortionReport, k: f64, slack: f64) -> BoundVerdict {
    let inv = 1.0 / k;
    let pass = report.min_ratio >= inv - slack && report.max_ratio <= k + slack;
    let margin = (report.min_ratio - inv).min(k - report.max_ratio);
    BoundVerdict { k, slack, pass, margin }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QiConfig {
    pub grid_ratio: f64,
    pub cap: f64,
    /// Ball regions only: declare no finite constant when the required `M` grows
    /// at least like `radius^growth_limit` across the schedule `R/8 … R`.
    pub growth_limit: f64,
    /// The growth test runs only when `R/8` is at least this large, so the additive
    /// term of the definition no longer dominates.
    pub growth_min_radius: f64,
}

impl Default for QiConfig {
    fn default() -> Self {
        Self { grid_ratio: 1.01, cap: 1e6, growth_limit: 0.5, growth_min_radius: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSample {
    pub radius: f64,
    pub required: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QiEstimate {
    /// Smallest grid value `grid_ratio^j`, `j ≥ 1`, satisfying every sampled pair.
    #[serde(rename = "M_hat")]
    pub m_hat: f64,
    /// Largest per-pair requirement before rounding up to the grid.
    pub required: f64,
    pub grid_ratio: f64,
    pub seed: u64,
    pub pair_count: u64,
    /// Requirement at each radius of the schedule (ball regions).
    pub schedule: Vec<ScaleSample>,
    pub growth_exponent: Option<f64>,
}

/// Smallest `M` with `d₁/M − M ≤ d₂ ≤ M·d₁ + M`.
pub fn pair_requirement(d_src: f64, d_img: f64) -> f64 {
    let upper = d_img / (d_src + 1.0);
    let lower = (-d_img + (d_img * d_img + 4.0 * d_src).sqrt()) / 2.0;
    upper.max(lower)
}

fn grid_ceiling(required: f64, ratio: f64) -> f64 {
    let mut j = (required.max(1.0).ln() / ratio.ln()).ceil().max(1.0) as i32;
    while ratio.powi(j) < required {
        j += 1;
    }
    while j > 1 && ratio.powi(j - 1) >= required {
        j -= 1;
    }
    ratio.powi(j)
}

fn max_requirement(m: &MapUnderTest, region: &Region, plan: &SamplePlan) -> Result<f64, DistortionError> {
    Ok(evaluate_pairs(m, region, plan)?
        .iter()
        .map(|e| pair_requirement(e.d_src, e.d_img))
        .fold(0.0, f64::max))
}

/// Estimates the single-parameter quasi-isometry constant from sampled pairs.
pub fn qi_constants(m: &MapUnderTest, plan: &SamplePlan, config: &QiConfig) -> Result<QiEstimate, DistortionError> {
    let mut schedule = Vec::new();
    let mut growth_exponent = None;
    let required = match &m.region {
        Region::Carrier(_) => max_requirement(m, &m.region, plan)?,
        Region::Ball { center, radius } => {
            for r in [radius / 8.0, radius / 4.0, radius / 2.0, *radius] {
                let region = Region::Ball { center: center.clone(), radius: r };
                schedule.push(ScaleSample { radius: r, required: max_requirement(m, &region, plan)? });
            }
            if radius / 8.0 >= config.growth_min_radius {
                let first = schedule[0].required.max(1.0);
                let last = schedule[3].required.max(1.0);
                growth_exponent = Some((last / first).ln() / 8f64.ln());
            }
            schedule[3].required
        }
    };
    let radius = match &m.region {
        Region::Ball { radius, .. } => *radius,
        Region::Carrier(_) => f64::NAN,
    };
    let growing = growth_exponent.is_some_and(|g| g >= config.growth_limit);
    let m_hat = grid_ceiling(required, config.grid_ratio);
    if growing || m_hat > config.cap {
        return Err(DistortionError::NoFiniteConstant { required, radius, cap: config.cap, growth_exponent });
    }
    Ok(QiEstimate {
        m_hat,
        required,
        grid_ratio: config.grid_ratio,
        seed: plan.seed,
        pair_count: plan.pair_count,
        schedule,
        growth_exponent,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub radius: f64,
    /// Running maximum of `d(f(x), g(x))` over samples at this and smaller radii.
    pub sup: f64,
    pub argmax: Point,
}

/// Per-radius estimates of `sup d(f(x), g(x))` over `center + R·B`. Half the samples
/// at each radius lie in the shell `0.9R ≤ ‖x − center‖ ≤ R`.
pub fn equivalence_gap(
    f: &dyn PointMap,
    g: &dyn PointMap,
    center: &Point,
    radii: &[f64],
    samples_per_radius: u64,
    seed: u64,
) -> Result<Vec<GapEstimate>, DistortionError> {
    if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DistortionError::BadRadii);
    }
    let dim = center.dim();
    let mut out: Vec<GapEstimate> = Vec::with_capacity(radii.len());
    let mut best = (0.0, center.clone());
    let base = f
        .apply(center)
        .and_then(|a| g.apply(center).map(|b| a.distance(&b)))
        .map_err(|source| DistortionError::Evaluation { sample: u64::MAX, source })?;
    best.0 = base;
    for (ri, &radius) in radii.iter().enumerate() {
        let offset = ri as u64 * samples_per_radius;
        let samples: Vec<(f64, Point)> = (0..samples_per_radius)
            .into_par_iter()
            .map(|i| {
                let sample = offset + i;
                let mut rng = substream(seed, sample);
                let shell = if i % 2 == 0 { 0.9 } else { 0.0 };
                let x = center.offset(&unit_ball_point(dim, shell, &mut rng), radius);
                let fx = f.apply(&x).map_err(|source| DistortionError::Evaluation { sample, source })?;
                let gx = g.apply(&x).map_err(|source| DistortionError::Evaluation { sample, source })?;
                Ok((fx.distance(&gx), x))
            })
            .collect::<Result<_, DistortionError>>()?;
        for (d, x) in samples {
            if d > best.0 {
                best = (d, x);
            }
        }
        out.push(GapEstimate { radius, sup: best.0, argmax: best.1.clone() });
    }
    Ok(out)
}
