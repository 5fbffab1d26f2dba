//! Seeded sampling primitives. Every random draw in the crate comes from a
//! [`substream`] keyed by `(seed, index)`, so results do not depend on how work is
//! scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::{Point, Simplex};

pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point of a simplex via Dirichlet(1, …, 1) barycentric weights.
pub fn dirichlet_point<R: Rng + ?Sized>(s: &Simplex, rng: &mut R) -> Point {
    let mut w: Vec<f64> = (0..s.vertices().len())
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    Point::combination(s.vertices(), &w)
}

/// Uniform unit vector in ℝ^`dim`.
pub fn unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Point {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        if let Some(u) = Point::from_raw(v).normalized() {
            return u;
        }
    }
}

/// Uniform point of the unit ball, with the radius drawn from `[r_min, 1]` when
/// `r_min > 0` (uniform with respect to volume inside that shell).
pub fn unit_ball_point<R: Rng + ?Sized>(dim: usize, r_min: f64, rng: &mut R) -> Point {
    let u = unit_vector(dim, rng);
    let lo = r_min.powi(dim as i32);
    let t: f64 = lo + (1.0 - lo) * rng.random::<f64>();
    u.scaled(t.powf(1.0 / dim as f64))
}

/// Log-uniform draw from `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp()
}
