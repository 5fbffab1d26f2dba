//! Searches for points of large displacement, and the commutator experiment built
//! on them.

use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::point_map::{EvalError, PointMap};
use crate::sampling::{substream, unit_vector};

use super::disc_swap::{Disc, DiscSequence};
use super::ConstructionError;

/// Limits for the radial candidate search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Sequence length to reach.
    pub target: usize,
    /// Shell radii `growth^k` for `k = 0 .. shells`.
    pub shells: usize,
    pub growth: f64,
    /// Seeded random directions tried on each shell, after `±eᵢ`.
    pub random_directions: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self { target: 20, shells: 160, growth: 1.5, random_directions: 8, seed: 0 }
    }
}

impl SearchBudget {
    fn candidates(&self, dim: usize) -> impl Iterator<Item = Point> + '_ {
        let mut rng = substream(self.seed, 0);
        let mut dirs: Vec<Point> = (0..dim)
            .flat_map(|i| [Point::unit(dim, i), Point::unit(dim, i).scaled(-1.0)])
            .collect();
        dirs.extend((0..self.random_directions).map(|_| unit_vector(dim, &mut rng)));
        (0..self.shells).flat_map(move |k| {
            let r = self.growth.powi(k as i32);
            dirs.iter().map(move |d| d.scaled(r)).collect::<Vec<_>>()
        })
    }
}

fn eval(f: &dyn PointMap, p: &Point) -> Result<Point, ConstructionError> {
    f.apply(p).map_err(ConstructionError::Evaluation)
}

/// Points `d′ₘ` together with discs centered at `f(d′ₘ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscWitness {
    pub points: Vec<Point>,
    pub discs: DiscSequence,
}

/// Greedy selection of points `d′ₘ` (`m = 1, 2, …`) and discs `D̄ₘ` centered at
/// `f(d′ₘ)` with radius `rₘ = min{m, ½‖f(d′ₘ) − d′ₘ‖}`. A candidate is accepted only
/// when `½‖f(d) − d‖ ≥ m`, so `rₘ = m` exactly; its disc must miss every earlier
/// disc and every chosen point, and the point itself must miss every disc.
pub fn witness_discs(f: &dyn PointMap, dim: usize, budget: &SearchBudget) -> Result<DiscWitness, ConstructionError> {
    if dim < 2 {
        return Err(ConstructionError::DimensionTooLow(dim));
    }
    let mut points: Vec<Point> = Vec::new();
    let mut discs: Vec<Disc> = Vec::new();
    let mut best_displacement: f64 = 0.0;
    for d in budget.candidates(dim) {
        if points.len() == budget.target {
            break;
        }
        let fd = eval(f, &d)?;
        let displacement = fd.distance(&d);
        best_displacement = best_displacement.max(displacement);
        let m = (points.len() + 1) as f64;
        if displacement / 2.0 < m {
            continue;
        }
        let disc = Disc { center: fd, radius: m.min(displacement / 2.0) };
        let clear = discs.iter().all(|e| !e.contains(&d) && e.center.distance(&disc.center) > e.radius + disc.radius)
            && points.iter().chain([&d]).all(|p| !disc.contains(p));
        if clear {
            points.push(d);
            discs.push(disc);
        }
    }
    if points.len() < budget.target {
        return Err(ConstructionError::NoDivergentSequence { found: points.len(), best_displacement });
    }
    let witness = DiscWitness { points, discs: DiscSequence::new(discs)? };
    verify_disc_witness(f, &witness)?;
    Ok(witness)
}

/// Checks a disc witness from scratch: strictly increasing radii, pairwise disjoint
/// closed discs, no chosen point inside any disc, and each disc centered at the image
/// of its point.
pub fn verify_disc_witness(f: &dyn PointMap, w: &DiscWitness) -> Result<(), ConstructionError> {
    let fail = |msg: String| Err(ConstructionError::InvalidDiscSequence(msg));
    let discs = w.discs.discs();
    if discs.len() != w.points.len() {
        return fail("point and disc counts differ".into());
    }
    for (i, d) in discs.iter().enumerate() {
        if i > 0 && d.radius <= discs[i - 1].radius {
            return fail(format!("radius {i} does not increase"));
        }
        for e in &discs[..i] {
            if d.center.distance(&e.center) <= d.radius + e.radius {
                return fail(format!("disc {i} meets an earlier disc"));
            }
        }
        if let Some(j) = w.points.iter().position(|p| d.contains(p)) {
            return fail(format!("disc {i} contains point {j}"));
        }
        if eval(f, &w.points[i])?.distance(&d.center) > 0.0 {
            return fail(format!("disc {i} is not centered at the image of its point"));
        }
    }
    Ok(())
}

/// Greedy search for `a₁, a₂, …` with `‖aₘ‖`, `‖f(aₘ)‖` and `‖f(aₘ) − aₘ‖` strictly
/// increasing, `‖aₘ₊₁‖ > ‖f(aₘ)‖`, and `‖f(aₘ) − aₘ‖ ≥ m`.
pub fn divergent_sequence(f: &dyn PointMap, dim: usize, budget: &SearchBudget) -> Result<Vec<Point>, ConstructionError> {
    let mut seq: Vec<(Point, Point, f64)> = Vec::new();
    let mut best_displacement: f64 = 0.0;
    for a in budget.candidates(dim) {
        if seq.len() == budget.target {
            break;
        }
        let fa = eval(f, &a)?;
        let disp = fa.distance(&a);
        best_displacement = best_displacement.max(disp);
        let m = (seq.len() + 1) as f64;
        let ok = disp >= m
            && seq.last().is_none_or(|(pa, pfa, pd)| {
                a.norm() > pa.norm() && fa.norm() > pfa.norm() && disp > *pd && a.norm() > pfa.norm()
            });
        if ok {
            seq.push((a, fa, disp));
        }
    }
    if seq.len() < budget.target {
        return Err(ConstructionError::NoDivergentSequence { found: seq.len(), best_displacement });
    }
    Ok(seq.into_iter().map(|(a, _, _)| a).collect())
}

/// `‖f(g(x)) − g(f(x))‖` at each point.
pub fn commutator_series(f: &dyn PointMap, g: &dyn PointMap, points: &[Point]) -> Result<Vec<f64>, EvalError> {
    points
        .iter()
        .map(|x| Ok(f.apply(&g.apply(x)?)?.distance(&g.apply(&f.apply(x)?)?)))
        .collect()
}
