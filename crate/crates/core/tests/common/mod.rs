//! Independent oracles and fixtures shared by the integration tests. Nothing here
//! calls into the geometry kernel; the point is to check it from outside.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use plqi_core::{Complex, Point};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn pt(v: Vec<f64>) -> Point {
    Point::new(v).unwrap()
}

pub fn gaussian_point(n: usize, rng: &mut ChaCha8Rng) -> Point {
    pt((0..n).map(|_| rng.sample(StandardNormal)).collect())
}

/// Columns `v₁ − v₀, …, v_d − v₀`.
fn edge_matrix(verts: &[Point]) -> DMatrix<f64> {
    let n = verts[0].dim();
    DMatrix::from_fn(n, verts.len() - 1, |r, c| verts[c + 1].coords()[r] - verts[0].coords()[r])
}

/// |det| of the edge matrix divided by (longest edge)ⁿ, full-dimensional simplices.
pub fn volume_quality(verts: &[Point]) -> f64 {
    let longest = verts
        .iter()
        .flat_map(|a| verts.iter().map(move |b| a.distance(b)))
        .fold(0.0, f64::max);
    edge_matrix(verts).determinant().abs() / longest.powi(verts[0].dim() as i32)
}

/// Random full-dimensional simplex with Gaussian vertices, rejecting slivers.
pub fn random_simplex(n: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    loop {
        let v: Vec<Point> = (0..=n).map(|_| gaussian_point(n, rng)).collect();
        if volume_quality(&v) > 1e-3 {
            return v;
        }
    }
}

/// Orientation test: `p` lies in the full-dimensional simplex iff replacing any vertex
/// by `p` never flips the sign of the edge determinant.
pub fn brute_force_contains(verts: &[Point], p: &Point) -> bool {
    let base = edge_matrix(verts).determinant();
    let scale = base.abs();
    (0..verts.len()).all(|i| {
        let mut v = verts.to_vec();
        v[i] = p.clone();
        let d = edge_matrix(&v).determinant();
        d * base.signum() >= -1e-12 * scale
    })
}

pub fn brute_force_in_carrier(c: &Complex, p: &Point) -> bool {
    c.maximal_simplices().any(|idx| {
        let verts: Vec<Point> = idx.iter().map(|&i| c.vertices()[i].clone()).collect();
        brute_force_contains(&verts, p)
    })
}

/// Linear part `A` of the affine map sending `src[i]` to `dst[i]`.
pub fn linear_part(src: &[Point], dst: &[Point]) -> DMatrix<f64> {
    let e = edge_matrix(src);
    let f = edge_matrix(dst);
    &f * e.try_inverse().expect("nondegenerate source")
}

/// Smallest and largest singular values of `A`: the exact extremes of
/// `|A(x − y)|/|x − y|`.
pub fn singular_extremes(a: &DMatrix<f64>) -> (f64, f64) {
    let s = a.clone().svd(false, false).singular_values;
    (s.min(), s.max())
}

/// Smallest `min(φ, π − φ)` over dihedral angles `φ` of a full-dimensional simplex,
/// from gradients of the barycentric coordinate functions (inward facet normals).
pub fn dihedral_margin(verts: &[Point]) -> f64 {
    let n = verts[0].dim();
    let inv = edge_matrix(verts).try_inverse().expect("nondegenerate");
    // Row k of inv is the gradient of λ_{k+1}; λ₀'s gradient is minus their sum.
    let mut grads: Vec<DVector<f64>> = vec![-inv.row_sum().transpose()];
    grads.extend((0..n).map(|k| inv.row(k).transpose()));
    let mut best = f64::INFINITY;
    for i in 0..grads.len() {
        for j in i + 1..grads.len() {
            let cos = -grads[i].dot(&grads[j]) / (grads[i].norm() * grads[j].norm());
            let phi = cos.clamp(-1.0, 1.0).acos();
            best = best.min(phi.min(std::f64::consts::PI - phi));
        }
    }
    best
}

fn jitter(rng: &mut ChaCha8Rng, amount: f64) -> f64 {
    rng.random_range(-amount..=amount)
}

/// Triangulated `nx × ny` grid of unit squares, vertices jittered by at most `amount`.
pub fn grid_complex_2d(nx: usize, ny: usize, amount: f64, rng: &mut ChaCha8Rng) -> Complex {
    let id = |i: usize, j: usize| i * (ny + 1) + j;
    let mut verts = Vec::new();
    for i in 0..=nx {
        for j in 0..=ny {
            verts.push(pt(vec![i as f64 + jitter(rng, amount), j as f64 + jitter(rng, amount)]));
        }
    }
    let mut tris = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            tris.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Complex::new(2, verts, tris).unwrap()
}

/// Kuhn triangulation of an `m × m × m` grid of unit cubes (six tetrahedra per cube).
pub fn grid_complex_3d(m: usize, amount: f64, rng: &mut ChaCha8Rng) -> Complex {
    let id = |c: [usize; 3]| (c[0] * (m + 1) + c[1]) * (m + 1) + c[2];
    let mut verts = Vec::new();
    for i in 0..=m {
        for j in 0..=m {
            for k in 0..=m {
                verts.push(pt(vec![
                    i as f64 + jitter(rng, amount),
                    j as f64 + jitter(rng, amount),
                    k as f64 + jitter(rng, amount),
                ]));
            }
        }
    }
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tets = Vec::new();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for p in &perms {
                    let mut c = [i, j, k];
                    let mut t = vec![id(c)];
                    for &axis in p {
                        c[axis] += 1;
                        t.push(id(c));
                    }
                    tets.push(t);
                }
            }
        }
    }
    Complex::new(3, verts, tets).unwrap()
}

/// Like [`grid_complex_2d`] but only interior vertices move, so the carrier stays the
/// convex rectangle `[0, nx] × [0, ny]`.
pub fn convex_grid_2d(nx: usize, ny: usize, amount: f64, rng: &mut ChaCha8Rng) -> Complex {
    let c = grid_complex_2d(nx, ny, 0.0, rng);
    let verts = c
        .vertices()
        .iter()
        .map(|p| {
            let (x, y) = (p.coords()[0], p.coords()[1]);
            if x == 0.0 || y == 0.0 || x == nx as f64 || y == ny as f64 {
                p.clone()
            } else {
                pt(vec![x + jitter(rng, amount), y + jitter(rng, amount)])
            }
        })
        .collect();
    Complex::new(2, verts, c.maximal_simplices().map(|t| t.to_vec()).collect()).unwrap()
}

/// Random orthogonal matrix (QR of a Gaussian matrix).
pub fn random_rotation(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    g.qr().q()
}

pub fn apply_matrix(a: &DMatrix<f64>, p: &Point) -> Point {
    let v = a * DVector::from_column_slice(p.coords());
    pt(v.iter().copied().collect())
}
