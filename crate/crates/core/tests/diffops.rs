#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use qhsiegel::diffops::*;
use qhsiegel::sample::Sampler;
use qhsiegel::{QuadratureSpec, Quaternion, SiegelPoint};

fn real(f: impl Fn(&Point) -> f64) -> impl Fn(&Point) -> Quaternion {
    move |p| Quaternion::real(f(p))
}

// Bracket table: entry (a, b) is [X_a, X_b] = sign·4∂t_k, k as the second tuple field.
const TABLE: [[(f64, usize); 4]; 4] = [
    [(0.0, 0), (4.0, 1), (4.0, 2), (4.0, 3)],
    [(-4.0, 1), (0.0, 0), (-4.0, 3), (4.0, 2)],
    [(-4.0, 2), (4.0, 3), (0.0, 0), (-4.0, 1)],
    [(-4.0, 3), (-4.0, 2), (4.0, 1), (0.0, 0)],
];

#[test]
fn commutator_table_is_exact() {
    for a in 0..4 {
        for b in 0..4 {
            let got = make_x(a).unwrap().commutator(&make_x(b).unwrap()).unwrap();
            let (c, k) = TABLE[a][b];
            let expected = if c == 0.0 {
                AffineVectorField::zero()
            } else {
                AffineVectorField::partial(3 + k, c)
            };
            assert_eq!(got, expected, "[X{a}, X{b}]");
        }
    }
}

#[test]
fn symbolic_bracket_matches_nested_differences() {
    // A cubic test function: nested central differences of a cubic carry
    // only O(h²) error.
    let f = real(|p| p[0] * p[4] + p[1] * p[1] * p[5] - p[2] * p[3] * p[6] + p[0] * p[1] * p[2]);
    let p = [0.3, -0.8, 1.1, 0.4, 0.2, -0.5, 0.7];
    let h = 1e-3;
    for a in 0..4 {
        for b in 0..4 {
            let (xa, xb) = (make_x(a).unwrap(), make_x(b).unwrap());
            let ab = |q: &Point| apply(&xb, &f, q, h).unwrap();
            let ba = |q: &Point| apply(&xa, &f, q, h).unwrap();
            let numeric = apply(&xa, &ab, &p, h).unwrap() - apply(&xb, &ba, &p, h).unwrap();
            let symbolic = apply(&xa.commutator(&xb).unwrap(), &f, &p, h).unwrap();
            assert!((numeric - symbolic).norm() < 1e-5, "[X{a}, X{b}]: {numeric} vs {symbolic}");
        }
    }
}

#[test]
fn h_bracket_is_minus_two() {
    assert_eq!(h_bracket_constant().unwrap(), Some(-2.0));
    // Opposite order flips the sign.
    let rev = h().commutator(&h_bar()).unwrap();
    assert_eq!(rev.coeffs[4].constant, Quaternion::I1 * 2.0);
}

#[test]
fn h_bar_of_conjugate_variable() {
    // H̄ acts on t-independent functions as ½(∂₀ + Σ i_l ∂_l); on w̄ this is ½(1 + 3) = 2.
    let f = |p: &Point| Quaternion::new(p[0], p[1], p[2], p[3]).conj();
    let p = [0.2, 1.0, -0.4, 0.9, 3.0, -1.0, 0.5];
    let v = apply(&h_bar(), &f, &p, 1e-4).unwrap();
    assert!((v - Quaternion::real(2.0)).norm() < 1e-9);
    let w = |p: &Point| Quaternion::new(p[0], p[1], p[2], p[3]);
    let v = apply(&h_bar(), &w, &p, 1e-4).unwrap();
    assert!((v - Quaternion::real(-1.0)).norm() < 1e-9);
}

#[test]
fn box_b_on_polynomials_and_gaussian() {
    let mut s = Sampler::new(11);
    let quad = |p: &Point| {
        Quaternion::new(p[0] * p[5], p[1] * p[1] - p[4], p[2] * p[3] + p[6] * p[6], p[0] * p[4])
    };
    let gauss = |p: &Point| Quaternion::real((-p.iter().map(|v| v * v).sum::<f64>()).exp());
    for _ in 0..20 {
        let g = s.group_element(1.5);
        let p = g.coords();
        assert!(box_b_identity_residual(&quad, &p, 1e-3).unwrap() <= 1e-6);
        // ‖e^{−|p|²}‖_{C²} is bounded by 2 on R⁷.
        assert!(box_b_identity_residual(&gauss, &p, default_step(&p)).unwrap() <= 1e-5 * 2.0);
    }
}

#[test]
fn delta_forms_agree() {
    let mut s = Sampler::new(12);
    let f = |p: &Point| {
        let x2: f64 = p[..4].iter().map(|v| v * v).sum();
        Quaternion::new(
            (x2 + p[4]).sin(),
            (p[5] * p[1]).cos(),
            (-x2 - p[6] * p[6]).exp(),
            p[0] * p[4] * p[6],
        )
    };
    let h = 1e-3;
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let p = s.group_element(1.0).coords();
        let lambda = s.vec3(1.0);
        let a = delta_lambda_apply(&f, &p, lambda, h, DeltaForm::SumOfSquares).unwrap();
        let b = delta_lambda_apply(&f, &p, lambda, h, DeltaForm::Coordinates).unwrap();
        let a2 = delta_lambda_apply(&f, &p, lambda, h / 2.0, DeltaForm::SumOfSquares).unwrap();
        let b2 = delta_lambda_apply(&f, &p, lambda, h / 2.0, DeltaForm::Coordinates).unwrap();
        // Truncation error of either form, estimated by halving, plus the rounding floor
        // ε·|f|/h² of a second difference summed over ~50 evaluations.
        let rounding = 50.0 * f64::EPSILON / (h * h);
        let stencil = (4.0 / 3.0) * (a - a2).norm().max((b - b2).norm()) + rounding;
        worst = worst.max((a - b).norm() / stencil);
    }
    assert!(worst <= 2.0, "forms disagree by {worst} stencil errors");
}

#[test]
fn gradient_check() {
    let f = |p: &Point| Quaternion::new(p[0] * p[4].sin(), p[1] * p[2], p[6].exp(), p[3] - p[5] * p[5]);
    let grad = |p: &Point| {
        let mut g = [Quaternion::ZERO; 7];
        g[0] = Quaternion::real(p[4].sin());
        g[1] = Quaternion::new(0.0, p[2], 0.0, 0.0);
        g[2] = Quaternion::new(0.0, p[1], 0.0, 0.0);
        g[3] = Quaternion::new(0.0, 0.0, 0.0, 1.0);
        g[4] = Quaternion::real(p[0] * p[4].cos());
        g[5] = Quaternion::new(0.0, 0.0, 0.0, -2.0 * p[5]);
        g[6] = Quaternion::new(0.0, 0.0, p[6].exp(), 0.0);
        g
    };
    let mut s = Sampler::new(13);
    for _ in 0..50 {
        let p = s.group_element(1.0).coords();
        for v in [h_bar(), h()] {
            let exact = apply_with_gradient(&v, &grad(&p), &p);
            let fd = apply(&v, &f, &p, default_step(&p)).unwrap();
            assert!((exact - fd).norm() <= 1e-6 * (1.0 + exact.norm()));
        }
    }
}

#[test]
fn tangency_on_random_boundary_points() {
    let mut s = Sampler::new(14);
    let worst = (0..1000)
        .map(|_| crf_tangency_residual(&s.boundary_point(3.0)).unwrap())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-7, "{worst}");
}

#[test]
fn height_derivatives_match_closed_form() {
    let p = SiegelPoint::new(Quaternion::I1, Quaternion::new(1.0, 0.0, 1.0, 0.0));
    let r = |s: &SiegelPoint| Quaternion::real(s.height());
    let d1 = siegel_dbar(&r, &p, 0, 1e-4).unwrap();
    let d2 = siegel_dbar(&r, &p, 1, 1e-4).unwrap();
    assert!((d1 + p.q1).norm() < 1e-9);
    assert!((d2 - Quaternion::real(0.5)).norm() < 1e-9);
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    // Leibniz over all 24 permutations.
    let mut total = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if !distinct {
                        continue;
                    }
                    let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                    let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                    total += sign * m[0][a] * m[1][b] * m[2][c] * m[3][d];
                }
            }
        }
    }
    total
}

#[test]
fn dq_is_the_volume_form() {
    let mut s = Sampler::new(15);
    for _ in 0..1000 {
        let h: [Quaternion; 4] = std::array::from_fn(|_| s.quaternion(2.0));
        let lhs = h[0].scalar_product(dq_eval(h[1], h[2], h[3]));
        let rhs = det4(h.map(|q| q.to_array()));
        assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
    }
}

#[test]
fn cauchy_fueter_examples() {
    let spec = QuadratureSpec::default().with_sphere_order(32);
    let one = cauchy_fueter_sphere(&|_| Quaternion::ONE, Quaternion::I1, 1.0, &spec).unwrap();
    assert!((one.value - Quaternion::ONE).norm() < 1e-6);
    let id = cauchy_fueter_sphere(&|q| q, Quaternion::I1, 1.0, &spec).unwrap();
    assert!((id.value - Quaternion::I1).norm() < 1e-5);
}

#[test]
fn cauchy_fueter_off_center() {
    // ζ₁ = x₁ − x₀ i₁ is left-regular; the point of evaluation sits inside the sphere.
    let zeta = |q: Quaternion| Quaternion::new(q.im_k(1), -q.re(), 0.0, 0.0);
    let spec = QuadratureSpec::default().with_sphere_order(32).with_rel_tol(1e-8);
    let q0 = Quaternion::new(0.1, 0.2, -0.1, 0.05);
    let v = off_center(&zeta, Quaternion::ZERO, q0, &spec);
    assert!((v - zeta(q0)).norm() < 1e-6, "{v} vs {}", zeta(q0));
    assert!(fueter_dbar(&zeta, q0, 1e-4).unwrap().norm() < 1e-10);
}

/// `(1/2π²) ∮_{|q−c|=1} K(q − q₀) Dq f(q)` with the nodes of the unit sphere.
fn off_center(
    f: &dyn Fn(Quaternion) -> Quaternion,
    center: Quaternion,
    q0: Quaternion,
    spec: &QuadratureSpec,
) -> Quaternion {
    sphere3_nodes(spec.sphere_order)
        .iter()
        .map(|node| {
            let q = center + node.n;
            let d = q - q0;
            d.conj() * (1.0 / d.norm_sqr().powi(2)) * node.dq * f(q)
        })
        .sum::<Quaternion>()
        * (1.0 / (2.0 * std::f64::consts::PI.powi(2)))
}

proptest! {
    #[test]
    fn dq_is_alternating(v in proptest::array::uniform12(-3.0f64..3.0)) {
        let a = Quaternion::new(v[0], v[1], v[2], 0.5);
        let b = Quaternion::new(v[3], v[4], v[5], v[6]);
        let c = Quaternion::new(v[7], v[8], v[9], v[10] + v[11]);
        let base = dq_eval(a, b, c);
        for (x, y, z, sign) in [(a, c, b, -1.0), (b, a, c, -1.0), (c, b, a, -1.0), (b, c, a, 1.0), (c, a, b, 1.0)] {
            let permuted = dq_eval(x, y, z);
            prop_assert!((permuted - base * sign).norm() <= 1e-12 * (1.0 + base.norm()));
        }
    }

    #[test]
    fn commutators_of_real_fields_are_antisymmetric(a in 0usize..4, b in 0usize..4) {
        let (x, y) = (make_x(a).unwrap(), make_x(b).unwrap());
        let ab = x.commutator(&y).unwrap();
        let ba = y.commutator(&x).unwrap();
        prop_assert!((ab + ba).is_zero());
        prop_assert!(ab.is_constant());
    }
}
