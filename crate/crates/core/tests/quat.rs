use proptest::prelude::*;
use qhsiegel::sample::Sampler;
use qhsiegel::{QuatMatrix, Quaternion};

fn quat(bound: f64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-bound..bound).prop_map(Quaternion::from_array)
}

/// `M(q)` written out entry by entry from the product rule, not via `to_matrix`.
fn left_mul_matrix(q: Quaternion) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (j, e) in Quaternion::BASIS.iter().enumerate() {
        let col = (q * *e).to_array();
        for i in 0..4 {
            m[i][j] = col[i];
        }
    }
    m
}

#[test]
fn units_square_to_minus_one_and_anticommute() {
    let [i1, i2, i3] = Quaternion::UNITS;
    for u in Quaternion::UNITS {
        assert_eq!(u * u, -Quaternion::ONE);
    }
    assert_eq!(i1 * i2, i3);
    assert_eq!(i2 * i1, -i3);
    assert_eq!(i2 * i3, i1);
    assert_eq!(i3 * i1, i2);
    assert_eq!(i1 * i2 * i3, -Quaternion::ONE);
}

#[test]
fn modulus_and_matrix_on_random_pairs() {
    let mut rng = Sampler::new(1);
    for _ in 0..10_000 {
        let (q, h) = (rng.quaternion(10.0), rng.quaternion(10.0));
        let scale = q.norm() * h.norm();
        assert!(((q * h).norm() - scale).abs() <= 1e-12 * scale);
        let lhs = (q * h).to_matrix();
        let rhs = q.to_matrix() * h.to_matrix();
        assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale.max(1.0));
        let det = q.to_matrix().det();
        assert!((det - q.norm_sqr().powi(2)).abs() <= 1e-12 * det.abs().max(f64::MIN_POSITIVE));
        assert!(q.to_matrix().transpose().max_abs_diff(&q.conj().to_matrix()) == 0.0);
    }
}

#[test]
fn matrix_agrees_with_product_rule() {
    let mut rng = Sampler::new(2);
    for _ in 0..100 {
        let q = rng.quaternion(3.0);
        let m = left_mul_matrix(q);
        let ours = q.to_matrix();
        for (i, e) in Quaternion::BASIS.iter().enumerate() {
            let col = ours.apply(*e).to_array();
            for r in 0..4 {
                assert!((col[r] - m[r][i]).abs() < 1e-14);
            }
        }
    }
    assert_eq!(Quaternion::ONE.to_matrix(), QuatMatrix::IDENTITY);
}

#[test]
fn integer_powers_match_repeated_products() {
    let mut rng = Sampler::new(3);
    for _ in 0..1000 {
        let q = rng.quaternion(2.0);
        if q.norm() < 0.1 {
            continue;
        }
        for n in -6i32..=6 {
            let mut want = Quaternion::ONE;
            let base = if n < 0 { q.inverse().unwrap() } else { q };
            for _ in 0..n.abs() {
                want *= base;
            }
            let got = q.real_power(n as f64).unwrap();
            assert!((got - want).norm() <= 1e-11 * want.norm(), "n = {n}");
        }
    }
}

proptest! {
    #[test]
    fn associative_and_bilinear(q in quat(10.0), h in quat(10.0), k in quat(10.0), s in -5.0..5.0f64) {
        let scale = (q.norm() * h.norm() * k.norm()).max(1.0);
        prop_assert!(((q * h) * k - q * (h * k)).norm() <= 1e-12 * scale);
        prop_assert!((q * (h + k) - (q * h + q * k)).norm() <= 1e-12 * scale);
        prop_assert!(((q * s) * h - (q * h) * s).norm() <= 1e-12 * scale * s.abs().max(1.0));
    }

    #[test]
    fn conjugation_reverses_products(q in quat(10.0), h in quat(10.0)) {
        let lhs = (q * h).conj();
        let rhs = h.conj() * q.conj();
        prop_assert!((lhs - rhs).norm() <= 1e-13 * (q.norm() * h.norm()).max(1.0));
    }

    #[test]
    fn scalar_product_is_symmetric(q in quat(10.0), h in quat(10.0)) {
        prop_assert_eq!(q.scalar_product(h), h.scalar_product(q));
        prop_assert!((q.scalar_product(q) - q.norm_sqr()).abs() <= 1e-12 * q.norm_sqr().max(1.0));
        prop_assert!((q.scalar_product(h) - (q * h.conj()).re()).abs() <= 1e-12 * (q.norm() * h.norm()).max(1.0));
    }

    #[test]
    fn inverse_is_two_sided(q in quat(10.0)) {
        prop_assume!(q.norm() > 1e-3);
        let inv = q.inverse().unwrap();
        prop_assert!((q * inv - Quaternion::ONE).norm() < 1e-12);
        prop_assert!((inv * q - Quaternion::ONE).norm() < 1e-12);
    }

    #[test]
    fn exp_imag_is_unit(v in prop::array::uniform3(-20.0..20.0f64)) {
        prop_assert!((Quaternion::exp_imag(v).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fractional_powers_compose(q in quat(5.0), p in -3.0..3.0f64) {
        prop_assume!(q.norm() > 1e-2 && q.imag_norm() > 1e-6);
        let a = q.real_power(p).unwrap();
        prop_assert!((a.norm() - q.norm().powf(p)).abs() <= 1e-12 * a.norm());
        // Powers stay in the plane of 1 and Im q, so they commute with q.
        prop_assert!((a * q - q * a).norm() <= 1e-12 * a.norm() * q.norm());
    }
}
