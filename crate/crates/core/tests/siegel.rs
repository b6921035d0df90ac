use proptest::prelude::*;
use qhsiegel::sample::Sampler;
use qhsiegel::siegel::*;
use qhsiegel::{Error, GroupElement, Quaternion};

fn quat(bound: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-bound..bound).prop_map(Quaternion::from_array)
}

#[test]
fn cayley_round_trips_and_preserves_interior() {
    let mut rng = Sampler::new(21);
    for _ in 0..10_000 {
        let b = rng.interior_ball_point(0.999);
        let p = cayley_to_siegel(&b).unwrap();
        assert!(p.height() > 0.0);
        let back = cayley_to_ball(&p).unwrap();
        assert!((back.h1 - b.h1).norm() <= 1e-11 && (back.h2 - b.h2).norm() <= 1e-11);
    }
}

#[test]
fn cayley_maps_sphere_to_boundary() {
    let mut rng = Sampler::new(22);
    for _ in 0..1000 {
        let b = rng.ball_sphere_point();
        let p = cayley_to_siegel(&b).unwrap();
        assert!(p.height().abs() <= 1e-10 * (1.0 + p.q2.norm()), "{}", p.height());
    }
}

#[test]
fn action_is_a_height_preserving_group_action() {
    let mut rng = Sampler::new(23);
    for _ in 0..10_000 {
        let (g, h) = (rng.group_element(3.0), rng.group_element(3.0));
        let p = rng.interior_point(3.0);
        let moved = act(&g, &p);
        assert!((moved.height() - p.height()).abs() <= 1e-12 * 1e2);
        assert!(act(&(g * h), &p).max_abs_diff(&act(&g, &act(&h, &p))) <= 1e-11 * 1e2);
        assert!(act(&g.inverse(), &moved).max_abs_diff(&p) <= 1e-11 * 1e2);
    }
    let p = rng.interior_point(1.0);
    assert_eq!(act(&GroupElement::IDENTITY, &p), p);
}

#[test]
fn action_on_origin_is_boundary_identification() {
    let mut rng = Sampler::new(24);
    for _ in 0..1000 {
        let g = rng.group_element(5.0);
        assert!(act(&g, &SiegelPoint::ORIGIN).max_abs_diff(&boundary_point(g.w, g.t)) <= 1e-13);
    }
}

#[test]
fn rotations_preserve_height() {
    let mut rng = Sampler::new(25);
    for _ in 0..1000 {
        let r = rng.householder();
        let p = rng.interior_point(3.0);
        let q = rotate(&r, &p).unwrap();
        assert!((q.height() - p.height()).abs() <= 1e-12 * (1.0 + p.q2.norm()));
        assert!((q.q1.norm() - p.q1.norm()).abs() <= 1e-12 * (1.0 + p.q1.norm()));
        let u = rng.unit_quaternion();
        let q = rotate(&u.to_matrix(), &p).unwrap();
        assert!((q.height() - p.height()).abs() <= 1e-12 * (1.0 + p.q2.norm()));
    }
    let bad = Quaternion::new(2.0, 0.0, 0.0, 0.0).to_matrix();
    assert!(matches!(rotate(&bad, &SiegelPoint::E), Err(Error::NotOrthogonal { .. })));
}

#[test]
fn boundary_measure_is_translation_invariant() {
    let f = |p: &SiegelPoint| {
        let (w, t) = (p.q1, p.q2.im());
        (-w.norm_sqr() - t.iter().map(|s| s * s).sum::<f64>()).exp()
    };
    let base = boundary_integral(&f, 10);
    let pi = std::f64::consts::PI;
    assert!((base - pi.powf(3.5)).abs() <= 1e-10 * base);
    let g = GroupElement::new(Quaternion::new(0.2, -0.1, 0.15, 0.05), [0.3, -0.2, 0.1]);
    let moved = boundary_integral(&|p| f(&act(&g, p)), 10);
    assert!((moved - base).abs() <= 1e-5 * base, "{moved} vs {base}");
}

#[test]
fn boundary_measure_dilates_by_homogeneous_dimension() {
    let f = |p: &SiegelPoint| {
        let (w, t) = (p.q1, p.q2.im());
        (-w.norm_sqr() - t.iter().map(|s| s * s).sum::<f64>()).exp()
    };
    let base = boundary_integral(&f, 10);
    for delta in [0.9, 1.1] {
        let scaled = boundary_integral(&|p| f(&p.dilate(delta).unwrap()), 10);
        let ratio = scaled / base * delta.powi(10);
        assert!((ratio - 1.0).abs() <= 1e-4, "δ = {delta}: {ratio}");
    }
}

proptest! {
    #[test]
    fn boundary_coordinates_round_trip(w in quat(10.0), t in prop::array::uniform3(-10.0..10.0f64)) {
        let p = boundary_point(w, t);
        let (w2, t2) = boundary_coords(&p).unwrap();
        prop_assert!((w2 - w).norm() <= 1e-13);
        prop_assert!(t2.iter().zip(&t).all(|(a, b)| (a - b).abs() <= 1e-13));
    }

    #[test]
    fn off_boundary_points_are_rejected(q1 in quat(3.0), lift in 1e-3..10.0f64) {
        let p = SiegelPoint::new(q1, Quaternion::real(q1.norm_sqr() + lift));
        let rejected = matches!(boundary_coords(&p), Err(Error::OffBoundary { .. }));
        prop_assert!(rejected);
    }

    #[test]
    fn dilation_scales_height(q1 in quat(3.0), q2 in quat(3.0), delta in 0.1..5.0f64) {
        let p = SiegelPoint::new(q1, q2);
        let d = p.dilate(delta).unwrap();
        prop_assert!((d.height() - delta * delta * p.height()).abs() <= 1e-12 * delta * delta * (1.0 + q2.norm() + q1.norm_sqr()));
    }

    #[test]
    fn json_round_trip(q1 in quat(5.0), q2 in quat(5.0)) {
        let p = SiegelPoint::new(q1, q2);
        let s = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<SiegelPoint>(&s).unwrap(), p);
    }
}
