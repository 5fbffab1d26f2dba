mod common;

use std::sync::Arc;

use common::*;
use plqi_core::certify::{certify, simplex_bound, ConvexityMode};
use plqi_core::complex::AngleMargin;
use plqi_core::constructions::{AnalyticMap, BumpParams, ConeMap, Disc, DiscSequence, MapSpec};
use plqi_core::distortion::{bound_check, equivalence_gap, sample_distortion, MapUnderTest, SamplePlan, BOUND_SLACK};
use plqi_core::geometry::{barycentric_coordinates, clip_segment, dihedral_angle, point_from_barycentric, Simplex};
use plqi_core::{Complex, Point, PointMap, SimplicialMap};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dirichlet(k: usize, r: &mut ChaCha8Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| -(1.0 - r.random::<f64>()).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn grid_map(seed: u64, convex: bool) -> SimplicialMap {
    let mut r = rng(seed);
    let k = if convex { convex_grid_2d(3, 3, 0.25, &mut r) } else { grid_complex_2d(3, 3, 0.25, &mut r) };
    let rot = random_rotation(2, &mut r);
    let s = r.random_range(0.5..3.0);
    let verts: Vec<Point> = k
        .vertices()
        .iter()
        .map(|p| apply_matrix(&rot, &p.offset(&gaussian_point(2, &mut r), 0.1)).scaled(s))
        .collect();
    let k2 = Complex::new(2, verts, k.maximal_simplices().map(|t| t.to_vec()).collect()).unwrap();
    SimplicialMap::new(Arc::new(k), Arc::new(k2), (0..16).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn barycentric_round_trip(seed in any::<u64>(), n in 1usize..5, extra in 0usize..2) {
        let mut r = rng(seed);
        let ambient = n + extra;
        let verts: Vec<Point> = (0..=n).map(|_| gaussian_point(ambient, &mut r)).collect();
        let Ok(s) = Simplex::new(verts) else { return Ok(()) };
        let w = dirichlet(n + 1, &mut r);
        let p = Point::combination(s.vertices(), &w);
        let Ok(b) = barycentric_coordinates(&p, &s) else { return Ok(()) };
        let q = point_from_barycentric(&b, &s).unwrap();
        prop_assert!(q.distance(&p) <= 1e-9 * (1.0 + p.norm()));
        prop_assert!((b.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dihedral_angles_are_rigid_and_symmetric(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let verts = random_simplex(n, &mut r);
        let rot = random_rotation(n, &mut r);
        let shift = gaussian_point(n, &mut r).scaled(10.0);
        let moved: Vec<Point> = verts.iter().map(|p| &apply_matrix(&rot, p) + &shift).collect();
        let s = Simplex::new(verts).unwrap();
        let t = Simplex::new(moved).unwrap();
        for i in 0..=n {
            for j in 0..=n {
                if i == j { continue; }
                let a = dihedral_angle(&s, i, j).unwrap();
                prop_assert!((a - dihedral_angle(&s, j, i).unwrap()).abs() < 1e-12);
                prop_assert!((a - dihedral_angle(&t, i, j).unwrap()).abs() < 1e-9);
                prop_assert!((0.0..=std::f64::consts::PI).contains(&a));
            }
        }
    }

    #[test]
    fn clip_segment_matches_sampled_membership(seed in any::<u64>(), n in 2usize..4) {
        let mut r = rng(seed);
        let verts = random_simplex(n, &mut r);
        let a = gaussian_point(n, &mut r).scaled(1.5);
        let b = gaussian_point(n, &mut r).scaled(1.5);
        let s = Simplex::new(verts.clone()).unwrap();
        let clip = clip_segment(&s, &a, &b).unwrap();
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            let p = a.offset(&(&b - &a), t);
            let inside = brute_force_contains(&verts, &p);
            match clip {
                Some((lo, hi)) if t > lo + 1e-6 && t < hi - 1e-6 => prop_assert!(inside, "t = {t} in ({lo}, {hi})"),
                Some((lo, hi)) if t < lo - 1e-6 || t > hi + 1e-6 => prop_assert!(!inside, "t = {t} outside [{lo}, {hi}]"),
                None => prop_assert!(!inside, "t = {t} but no clip"),
                _ => {}
            }
        }
    }

    #[test]
    fn simplex_bound_is_monotone(m in 1.0f64..50.0, dm in 0.0f64..10.0, theta in 0.05f64..1.5, dt in 0.0f64..0.07, n in 1usize..6) {
        let base = simplex_bound(m, theta, n).unwrap();
        prop_assert!(simplex_bound(m + dm, theta, n).unwrap() >= base);
        prop_assert!(simplex_bound(m, theta, n + 1).unwrap() >= base);
        prop_assert!(simplex_bound(m, theta + dt, n).unwrap() <= base * (1.0 + 1e-15));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn locate_matches_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = grid_complex_2d(3, 3, 0.2, &mut r);
        for _ in 0..300 {
            let p = pt(vec![r.random_range(-0.5..3.5), r.random_range(-0.5..3.5)]);
            prop_assert_eq!(c.locate(&p).is_ok(), brute_force_in_carrier(&c, &p), "at {:?}", p);
        }
    }

    #[test]
    fn angle_margin_survives_rigid_motion_and_scaling(seed in any::<u64>(), lambda in 0.01f64..100.0) {
        let mut r = rng(seed);
        let c = grid_complex_3d(1, 0.1, &mut r);
        let rot = random_rotation(3, &mut r);
        let shift = gaussian_point(3, &mut r);
        let d = c.map_vertices(|p| (&apply_matrix(&rot, p) + &shift).scaled(lambda));
        let (AngleMargin::Margin(a), AngleMargin::Margin(b)) =
            (c.facet_angle_margin().unwrap(), d.facet_angle_margin().unwrap()) else { panic!("vacuous") };
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn shared_faces_evaluate_consistently(seed in any::<u64>()) {
        let m = grid_map(seed, false);
        let src = m.source();
        let mut r = rng(seed ^ 1);
        for s in 0..src.simplex_count() {
            for t in s + 1..src.simplex_count() {
                let shared: Vec<usize> = src.simplex_indices(s).iter().copied().filter(|v| src.simplex_indices(t).contains(v)).collect();
                if shared.is_empty() { continue; }
                let pts: Vec<Point> = shared.iter().map(|&v| src.vertices()[v].clone()).collect();
                let p = Point::combination(&pts, &dirichlet(pts.len(), &mut r));
                let a = m.evaluate_in(s, &p).unwrap();
                let b = m.evaluate_in(t, &p).unwrap();
                prop_assert!(a.distance(&b) < 1e-9);
            }
        }
    }

    #[test]
    fn evaluation_is_affine_on_each_simplex(seed in any::<u64>(), alpha in 0.0f64..=1.0) {
        let m = grid_map(seed, false);
        let mut r = rng(seed ^ 2);
        for s in 0..m.source().simplex_count() {
            let simplex = m.source().simplex(s);
            let p = Point::combination(simplex.vertices(), &dirichlet(3, &mut r));
            let q = Point::combination(simplex.vertices(), &dirichlet(3, &mut r));
            let mix = p.offset(&(&q - &p), 1.0 - alpha);
            let lhs = m.evaluate(&mix).unwrap();
            let fp = m.evaluate(&p).unwrap();
            let rhs = fp.offset(&(&m.evaluate(&q).unwrap() - &fp), 1.0 - alpha);
            prop_assert!(lhs.distance(&rhs) < 1e-9);
        }
    }

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>()) {
        let m = grid_map(seed, false);
        let inv = m.inverse().unwrap();
        let mut r = rng(seed ^ 3);
        for _ in 0..100 {
            let s = m.source().simplex(r.random_range(0..m.source().simplex_count()));
            let x = Point::combination(s.vertices(), &dirichlet(3, &mut r));
            prop_assert!(inv.evaluate(&m.evaluate(&x).unwrap()).unwrap().distance(&x) < 1e-9);
            let t = m.target().simplex(r.random_range(0..m.target().simplex_count()));
            let y = Point::combination(t.vertices(), &dirichlet(3, &mut r));
            prop_assert!(m.evaluate(&inv.evaluate(&y).unwrap()).unwrap().distance(&y) < 1e-9);
        }
    }

    #[test]
    fn certificate_is_scale_invariant(seed in any::<u64>(), lambda in 0.001f64..1000.0) {
        let m = grid_map(seed, true);
        let scaled = SimplicialMap::new(
            Arc::new(m.source().map_vertices(|p| p.scaled(lambda))),
            Arc::new(m.target().map_vertices(|p| p.scaled(lambda))),
            m.vertex_images().to_vec(),
        ).unwrap();
        let a = certify(&m, ConvexityMode::Assume, 0).unwrap();
        let b = certify(&scaled, ConvexityMode::Assume, 0).unwrap();
        prop_assert!((a.vertex_ratio_observed - b.vertex_ratio_observed).abs() < 1e-9);
        prop_assert!((a.theta.unwrap() - b.theta.unwrap()).abs() < 1e-9);
        prop_assert!((a.k_simplex - b.k_simplex).abs() <= 1e-9 * a.k_simplex);
    }

    #[test]
    fn certified_bounds_contain_sampled_ratios(seed in any::<u64>()) {
        let m = grid_map(seed, true);
        let cert = certify(&m, ConvexityMode::Auto, seed).unwrap();
        prop_assert!(cert.convex_carrier);
        let k = cert.k_global.unwrap();
        let under_test = MapUnderTest::simplicial(m);
        for fraction in [1.0, 0.0] {
            let report = sample_distortion(&under_test, &SamplePlan::new(seed, 2000, fraction).unwrap()).unwrap();
            prop_assert!(bound_check(&report, k, BOUND_SLACK).pass);
        }
    }

    #[test]
    fn reports_do_not_depend_on_thread_count(seed in any::<u64>()) {
        let under_test = MapUnderTest::simplicial(grid_map(seed, false));
        let plan = SamplePlan::new(seed, 3000, 0.5).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
                .install(|| sample_distortion(&under_test, &plan).unwrap())
        };
        let one = run(1);
        prop_assert_eq!(&one, &run(4));
        for w in [&one.argmin, &one.argmax] {
            let f = under_test.map();
            let ratio = f.apply(&w.x).unwrap().distance(&f.apply(&w.y).unwrap()) / w.x.distance(&w.y);
            prop_assert!((ratio - w.ratio).abs() <= 1e-12);
        }
    }

    #[test]
    fn cone_map_is_homogeneous_and_continuous(seed in any::<u64>(), lambda in 1e-3f64..1e3) {
        let mut r = rng(seed);
        let axis = gaussian_point(3, &mut r);
        let g = ConeMap::new(axis.clone()).unwrap();
        let axis = g.axis().clone();
        for _ in 0..50 {
            let x = gaussian_point(3, &mut r);
            let lhs = g.apply(&x.scaled(lambda)).unwrap();
            let rhs = g.apply(&x).unwrap().scaled(lambda);
            prop_assert!(lhs.distance(&rhs) <= 1e-12 * rhs.norm().max(f64::MIN_POSITIVE));
        }
        let h = r.random_range(0.01..100.0);
        let w = gaussian_point(3, &mut r);
        let u = &w - &axis.scaled(w.dot(&axis));
        let u = u.scaled(1.0 / u.norm());
        for slope in [0.25, 0.5] {
            let on = axis.scaled(h).offset(&u, slope * h);
            let delta = 1e-6;
            let jump = g.apply(&on.offset(&u, -delta / 2.0)).unwrap().distance(&g.apply(&on.offset(&u, delta / 2.0)).unwrap());
            prop_assert!(jump <= 10.0 * delta);
        }
    }

    #[test]
    fn rescaled_disc_map_is_identity_off_discs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let discs: Vec<Disc> = (0..4)
            .map(|m| Disc { center: pt(vec![30.0 * m as f64, r.random_range(-5.0..5.0)]), radius: 1.0 + 2.0 * m as f64 + r.random::<f64>() })
            .collect();
        let seq = DiscSequence::new(discs).unwrap();
        let g = AnalyticMap::case1(2, &seq).unwrap();
        for _ in 0..200 {
            let x = pt(vec![r.random_range(-20.0..120.0), r.random_range(-20.0..20.0)]);
            if seq.find(&x).is_none() {
                prop_assert_eq!(g.apply(&x).unwrap(), x);
            }
        }
        for d in seq.discs() {
            let dir = gaussian_point(2, &mut r);
            let rim = d.center.offset(&dir, d.radius / dir.norm());
            prop_assert!(g.apply(&rim).unwrap().distance(&rim) < 1e-9 * d.radius);
            let inside = d.center.offset(&dir, d.radius * (1.0 - 1e-9) / dir.norm());
            prop_assert!(g.apply(&inside).unwrap().distance(&rim) < 1e-6 * d.radius);
        }
    }

    #[test]
    fn complex_files_round_trip(seed in any::<u64>()) {
        let c = grid_complex_3d(1, 0.1, &mut rng(seed));
        let back = Complex::from_json(&c.to_json()).unwrap();
        prop_assert!(c.structurally_identical(&back));
    }
}

#[test]
fn gap_is_bounded_for_bumps_and_linear_for_doubling() {
    let id = AnalyticMap::identity(2);
    let bump = AnalyticMap::build(MapSpec::Bump(BumpParams { center: vec![0.0, 0.0], radius: 50.0, height: 5.0 }), 2).unwrap();
    let radii = [1.0, 10.0, 100.0, 1000.0, 10000.0];
    let bounded = equivalence_gap(&id, &bump, &Point::origin(2), &radii, 500, 4).unwrap();
    assert!(bounded.iter().all(|g| g.sup <= 5.0 + 1e-12));
    assert!(bounded.last().unwrap().sup > 4.5);
    let double = AnalyticMap::scale(2, 2.0).unwrap();
    let linear = equivalence_gap(&id, &double, &Point::origin(2), &radii, 500, 4).unwrap();
    for g in &linear {
        assert!(g.sup >= 0.98 * g.radius && g.sup <= g.radius);
    }
}

#[test]
fn disc_swap_complexes_validate_up_to_four_dimensions() {
    for n in 2..=4 {
        let (k, k2) = plqi_core::constructions::disc_swap_complexes(n).unwrap();
        assert!(k.validate().valid && k2.validate().valid);
    }
}
