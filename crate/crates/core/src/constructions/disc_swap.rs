use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::geometry::Point;
use crate::pl_map::SimplicialMap;
use crate::point_map::{EvalError, PointMap};

use super::ConstructionError;

/// Height of the displaced center `O′ = (0, …, 0, 1/4)`.
pub const SHIFT: f64 = 0.25;

/// Points `x₀, …, xₙ` on the unit sphere whose hull contains the origin:
/// `x₀ = eₙ`, `xᵢ ∝ (−1, …, −1, 1, 0, …, 0, −1)` with the `1` in slot `i` for
/// `1 ≤ i ≤ n − 1`, and `xₙ ∝ (−1, …, −1)`.
pub fn sphere_vertices(n: usize) -> Result<Vec<Point>, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::DimensionTooLow(n));
    }
    let mut out = vec![Point::unit(n, n - 1)];
    for i in 1..n {
        let mut c = vec![0.0; n];
        c[..i - 1].fill(-1.0);
        c[i - 1] = 1.0;
        c[n - 1] = -1.0;
        out.push(Point::from_raw(c).normalized().expect("nonzero"));
    }
    out.push(Point::from_raw(vec![-1.0; n]).normalized().expect("nonzero"));
    Ok(out)
}

/// The two coned complexes: simplex `i` of `K` replaces `xᵢ` by the origin, simplex
/// `i` of `K′` replaces it by `O′`. Vertex `n + 1` is the cone point.
pub fn disc_swap_complexes(n: usize) -> Result<(Complex, Complex), ConstructionError> {
    let xs = sphere_vertices(n)?;
    let simplices: Vec<Vec<usize>> = (0..=n)
        .map(|i| (0..=n).map(|j| if j == i { n + 1 } else { j }).collect())
        .collect();
    let mut with_origin = xs.clone();
    with_origin.push(Point::origin(n));
    let mut with_shift = xs;
    with_shift.push(Point::unit(n, n - 1).scaled(SHIFT));
    Ok((Complex::new(n, with_origin, simplices.clone())?, Complex::new(n, with_shift, simplices)?))
}

/// Homeomorphism of the closed unit disc moving the origin to `O′`: the simplicial
/// map `K → K′` fixing every `xᵢ` on `|K|`, the identity elsewhere.
#[derive(Debug, Clone)]
pub struct DiscSwap {
    inner: SimplicialMap,
}

impl DiscSwap {
    pub fn new(n: usize) -> Result<Self, ConstructionError> {
        let (k, k2) = disc_swap_complexes(n)?;
        let inner = SimplicialMap::new(Arc::new(k), Arc::new(k2), (0..=n + 1).collect())?;
        Ok(Self { inner })
    }

    pub fn dim(&self) -> usize {
        self.inner.source().ambient_dim()
    }

    /// The simplicial part `K → K′`.
    pub fn simplicial(&self) -> &SimplicialMap {
        &self.inner
    }

    pub fn eval(&self, x: &Point) -> Point {
        match self.inner.source().locate(x) {
            Ok(loc) => self.inner.evaluate_in(loc.simplex_id, x).unwrap_or_else(|| x.clone()),
            Err(_) => x.clone(),
        }
    }
}

impl PointMap for DiscSwap {
    fn apply(&self, p: &Point) -> Result<Point, EvalError> {
        if p.dim() != self.dim() {
            return Err(EvalError { point: p.clone(), reason: format!("expected dimension {}", self.dim()) });
        }
        Ok(self.eval(p))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Point,
    pub radius: f64,
}

impl Disc {
    pub fn contains(&self, p: &Point) -> bool {
        p.distance(&self.center) <= self.radius
    }
}

/// Closed discs with strictly increasing radii, pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscSequence {
    discs: Vec<Disc>,
}

impl DiscSequence {
    pub fn new(discs: Vec<Disc>) -> Result<Self, ConstructionError> {
        let bad = |msg: String| Err(ConstructionError::InvalidDiscSequence(msg));
        let Some(first) = discs.first() else {
            return Ok(Self { discs });
        };
        let n = first.center.dim();
        if n < 2 {
            return Err(ConstructionError::DimensionTooLow(n));
        }
        for (i, d) in discs.iter().enumerate() {
            if d.center.dim() != n {
                return bad(format!("disc {i} has dimension {}, expected {n}", d.center.dim()));
            }
            if !(d.radius > 0.0 && d.radius.is_finite()) {
                return bad(format!("disc {i} has radius {}", d.radius));
            }
            if i > 0 && d.radius <= discs[i - 1].radius {
                return bad(format!("radius of disc {i} does not increase"));
            }
            for (j, e) in discs[..i].iter().enumerate() {
                if d.center.distance(&e.center) <= d.radius + e.radius {
                    return bad(format!("discs {j} and {i} intersect"));
                }
            }
        }
        Ok(Self { discs })
    }

    pub fn discs(&self) -> &[Disc] {
        &self.discs
    }

    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    /// The disc containing `p`, if any (at most one).
    pub fn find(&self, p: &Point) -> Option<&Disc> {
        self.discs.iter().find(|d| d.contains(p))
    }
}

impl<'de> Deserialize<'de> for DiscSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let discs = Vec::<Disc>::deserialize(d)?;
        DiscSequence::new(discs).map_err(serde::de::Error::custom)
    }
}

/// `c + r·h((x − c)/r)` on each disc of the sequence, the identity elsewhere.
#[derive(Debug, Clone)]
pub struct RescaledDiscMap {
    discs: DiscSequence,
    swap: Arc<DiscSwap>,
}

impl RescaledDiscMap {
    pub fn new(n: usize, discs: DiscSequence) -> Result<Self, ConstructionError> {
        if let Some(d) = discs.discs().first() {
            if d.center.dim() != n {
                return Err(ConstructionError::DimensionMismatch { expected: n, found: d.center.dim() });
            }
        }
        Ok(Self { discs, swap: Arc::new(DiscSwap::new(n)?) })
    }

    pub fn discs(&self) -> &DiscSequence {
        &self.discs
    }

    pub fn eval(&self, x: &Point) -> Point {
        match self.discs.find(x) {
            Some(d) => {
                let local = (x - &d.center).scaled(1.0 / d.radius);
                d.center.offset(&self.swap.eval(&local), d.radius)
            }
            None => x.clone(),
        }
    }
}

impl PointMap for RescaledDiscMap {
    fn apply(&self, p: &Point) -> Result<Point, EvalError> {
        self.swap.apply(p)?;
        Ok(self.eval(p))
    }
}
