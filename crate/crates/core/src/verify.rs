//! Named verification suites. Each check recomputes a constant or identity
//! from scratch and scores it against a pinned tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;

use crate::diffops::{self, Point};
use crate::error::{Error, Result};
use crate::greens;
use crate::group::{self, GroupElement};
use crate::quad::{gamma, Estimate, QuadratureSpec};
use crate::quat::{QuatMatrix, Quaternion};
use crate::report::{Check, CheckReport};
use crate::sample::Sampler;
use crate::siegel::{self, SiegelPoint};
use crate::szego::{self, SzegoConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Group,
    Siegel,
    Diffops,
    Szego,
    Greens,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["algebra", "group", "siegel", "diffops", "szego", "greens", "all"];

    const SINGLE: [Suite; 6] = [
        Suite::Algebra,
        Suite::Group,
        Suite::Siegel,
        Suite::Diffops,
        Suite::Szego,
        Suite::Greens,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Group => "group",
            Suite::Siegel => "siegel",
            Suite::Diffops => "diffops",
            Suite::Szego => "szego",
            Suite::Greens => "greens",
            Suite::All => "all",
        }
    }

    fn entries(self) -> &'static [Entry] {
        match self {
            Suite::Algebra => ALGEBRA,
            Suite::Group => GROUP,
            Suite::Siegel => SIEGEL,
            Suite::Diffops => DIFFOPS,
            Suite::Szego => SZEGO,
            Suite::Greens => GREENS,
            Suite::All => &[],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::SINGLE
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", "))))
    }
}

type CheckFn = fn(&QuadratureSpec) -> Result<Vec<Check>>;

struct Entry {
    name: &'static str,
    run: CheckFn,
}

const fn entry(name: &'static str, run: CheckFn) -> Entry {
    Entry { name, run }
}

fn run_entries(entries: &[Entry], spec: &QuadratureSpec) -> Vec<Check> {
    entries
        .par_iter()
        .map(|e| (e.run)(spec).unwrap_or_else(|err| vec![Check::failed(e.name, &err)]))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Runs a suite. Checks execute concurrently; the report lists them in declaration order.
pub fn run_suite(suite: Suite, spec: &QuadratureSpec) -> Result<CheckReport> {
    spec.validate()?;
    let checks = if suite == Suite::All {
        Suite::SINGLE
            .iter()
            .flat_map(|s| {
                run_entries(s.entries(), spec).into_iter().map(move |mut c| {
                    c.name = format!("{}/{}", s.name(), c.name);
                    c
                })
            })
            .collect()
    } else {
        run_entries(suite.entries(), spec)
    };
    Ok(CheckReport {
        suite: suite.name().to_owned(),
        spec: *spec,
        checks,
    })
}

fn worst<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    // NaN must propagate to the verdict rather than vanish in a max.
    it.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn qrel(a: Quaternion, b: Quaternion) -> f64 {
    (a - b).norm() / b.norm()
}

// ---------------------------------------------------------------- algebra

const ALGEBRA: &[Entry] = &[
    entry("unit_products", unit_products),
    entry("mul_example", mul_example),
    entry("modulus_multiplicative", modulus_multiplicative),
    entry("matrix_homomorphism", matrix_homomorphism),
    entry("det_modulus", det_modulus),
    entry("real_power_integer", real_power_integer),
    entry("conj_anti_automorphism", conj_anti_automorphism),
    entry("exp_imag", exp_imag),
    entry("matrix_transpose", matrix_transpose),
    entry("matrix_inverse", matrix_inverse),
];

fn unit_products(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let [i1, i2, i3] = Quaternion::UNITS;
    let one = Quaternion::ONE;
    let expected = [[-one, i3, -i2], [-i3, -one, i1], [i2, -i1, -one]];
    let computed: Vec<Vec<Quaternion>> =
        Quaternion::UNITS.iter().map(|a| Quaternion::UNITS.iter().map(|b| *a * *b).collect()).collect();
    Ok(vec![Check::exact("unit_products", json!(computed), json!(expected))])
}

fn mul_example(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let v = (Quaternion::ONE + Quaternion::I1) * (Quaternion::ONE + Quaternion::I2);
    Ok(vec![Check::exact("mul_example", json!(v), json!([1.0, 1.0, 1.0, 1.0]))])
}

fn modulus_multiplicative(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(101);
    let w = worst((0..10_000).map(|_| {
        let (q, h) = (rng.quaternion(10.0), rng.quaternion(10.0));
        let s = q.norm() * h.norm();
        ((q * h).norm() - s).abs() / s
    }));
    Ok(vec![Check::property("modulus_multiplicative", w, 1e-12)])
}

fn matrix_homomorphism(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(102);
    let w = worst((0..10_000).map(|_| {
        let (q, h) = (rng.quaternion(10.0), rng.quaternion(10.0));
        (q * h).to_matrix().max_abs_diff(&(q.to_matrix() * h.to_matrix())) / (q.norm() * h.norm())
    }));
    Ok(vec![Check::property("matrix_homomorphism", w, 1e-12)])
}

fn det_modulus(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(103);
    let w = worst((0..10_000).map(|_| {
        let q = rng.quaternion(10.0);
        let want = q.norm_sqr().powi(2);
        (q.to_matrix().det() - want).abs() / want
    }));
    let example = Quaternion::new(1.0, 1.0, 1.0, 1.0).to_matrix().det();
    Ok(vec![
        Check::property("det_modulus", w, 1e-12),
        Check::rel("det_example", example, 16.0, 1e-12),
    ])
}

fn real_power_integer(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(104);
    let mut w = 0.0_f64;
    for _ in 0..1000 {
        let q = rng.quaternion(2.0);
        if q.norm() < 0.1 {
            continue;
        }
        let inv = q.inverse()?;
        for n in -6i32..=6 {
            let base = if n < 0 { inv } else { q };
            let want = (0..n.abs()).fold(Quaternion::ONE, |acc, _| acc * base);
            w = worst([w, qrel(q.real_power(n as f64)?, want)]);
        }
    }
    Ok(vec![Check::property("real_power_integer", w, 1e-11)])
}

fn conj_anti_automorphism(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(105);
    let w = worst((0..10_000).map(|_| {
        let (q, h) = (rng.quaternion(10.0), rng.quaternion(10.0));
        ((q * h).conj() - h.conj() * q.conj()).norm() / (q.norm() * h.norm())
    }));
    Ok(vec![Check::property("conj_anti_automorphism", w, 1e-13)])
}

fn exp_imag(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let a = (Quaternion::exp_imag([PI, 0.0, 0.0]) + Quaternion::ONE).norm();
    let b = (Quaternion::exp_imag([PI / 2.0, 0.0, 0.0]) - Quaternion::I1).norm();
    Ok(vec![Check::property("exp_imag", a.max(b), 1e-15)])
}

fn matrix_transpose(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(106);
    let (mut conj, mut neg) = (0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let q = rng.quaternion(10.0);
        let t = q.to_matrix().transpose();
        conj = conj.max(t.max_abs_diff(&q.conj().to_matrix()));
        neg = neg.max(t.max_abs_diff(&q.to_matrix().scale(-1.0)));
    }
    Ok(vec![Check::erratum(
        "matrix_transpose",
        json!({ "max |Mᵀ − M(q̄)|": conj, "max |Mᵀ + M|": neg }),
        json!("Mᵀ = −M"),
        json!("Mᵀ = M(q̄)"),
        conj == 0.0 && neg > 0.0,
    )])
}

fn matrix_inverse(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(107);
    let (mut verified, mut printed) = (0.0_f64, 0.0_f64);
    for _ in 0..1000 {
        let q = rng.quaternion(10.0);
        let m = q.to_matrix();
        let a = m * q.conj().to_matrix().scale(1.0 / q.norm_sqr());
        let b = m * m.scale(-1.0 / m.det().sqrt());
        verified = verified.max(a.max_abs_diff(&QuatMatrix::IDENTITY));
        printed = printed.max(b.max_abs_diff(&QuatMatrix::IDENTITY));
    }
    Ok(vec![Check::erratum(
        "matrix_inverse",
        json!({ "max |M·M(q̄)/|q|² − I|": verified, "max |M·(−M/√det) − I|": printed }),
        json!("M⁻¹ = −M/√det M"),
        json!("M⁻¹ = M(q̄)/|q|²"),
        verified < 1e-12 && printed > 1e-3,
    )])
}

// ---------------------------------------------------------------- group

const GROUP: &[Entry] = &[
    entry("associativity", associativity),
    entry("inverse", inverse),
    entry("central_shift_example", central_shift_example),
    entry("center_commutes", center_commutes),
    entry("dilation_automorphism", dilation_automorphism),
    entry("norm_homogeneous", norm_homogeneous),
    entry("polar_constant", polar_constant),
    entry("haar_dilation", haar_dilation),
    entry("integrability_threshold", integrability_threshold),
];

fn associativity(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(201);
    let w = worst((0..10_000).map(|_| {
        let (g, h, k) = (rng.group_element(10.0), rng.group_element(10.0), rng.group_element(10.0));
        ((g * h) * k).max_abs_diff(&(g * (h * k)))
    }));
    Ok(vec![Check::property("associativity", w, 1e-11)])
}

fn inverse(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(202);
    let w = worst((0..10_000).map(|_| {
        let g = rng.group_element(10.0);
        (g * g.inverse()).max_abs_diff(&GroupElement::IDENTITY).max((g.inverse() * g).max_abs_diff(&GroupElement::IDENTITY))
    }));
    Ok(vec![Check::property("inverse", w, 1e-13)])
}

fn central_shift_example(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let g = GroupElement::new(Quaternion::I1, [0.0; 3]) * GroupElement::new(Quaternion::I2, [0.0; 3]);
    Ok(vec![Check::exact(
        "central_shift_example",
        json!(g),
        json!({ "w": [0.0, 1.0, 1.0, 0.0], "t": [0.0, 0.0, -2.0] }),
    )])
}

fn center_commutes(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(203);
    let w = worst((0..1000).map(|_| {
        let g = rng.group_element(10.0);
        let z = GroupElement::new(Quaternion::ZERO, rng.vec3(10.0));
        (g * z).max_abs_diff(&(z * g))
    }));
    Ok(vec![Check::property("center_commutes", w, 0.0)])
}

fn dilation_automorphism(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(204);
    let mut w = 0.0_f64;
    for _ in 0..1000 {
        let (g, h) = (rng.group_element(5.0), rng.group_element(5.0));
        let lhs = (g * h).dilate(3.0)?;
        let rhs = g.dilate(3.0)? * h.dilate(3.0)?;
        w = worst([w, lhs.max_abs_diff(&rhs)]);
    }
    Ok(vec![Check::property("dilation_automorphism", w, 1e-11)])
}

fn norm_homogeneous(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(205);
    let mut w = 0.0_f64;
    for _ in 0..1000 {
        let g = rng.group_element(10.0);
        let n = g.homogeneous_norm();
        w = worst([w, (g.dilate(5.0)?.homogeneous_norm() - 5.0 * n).abs() / (5.0 * n)]);
    }
    Ok(vec![Check::property("norm_homogeneous", w, 1e-13)])
}

fn polar_constant(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let a = group::polar_constant(&|r| (1.0 + r.powi(4)).powi(-4), spec)?;
    let b = group::polar_constant(&|r| (-r * r).exp(), spec)?;
    Ok(vec![
        Check::rel("polar_constant", b, 2.0 * PI.powi(3) / 3.0, 1e-6),
        Check::rel("polar_constant_profile_independent", a, b, 1e-6),
    ])
}

fn haar_dilation(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let profile = |rho: f64, s: f64| (-(rho * rho) - s * s).exp() * (1.0 + rho * rho * s);
    let base = group::haar_integral_radial(&profile, spec)?;
    let mut w = 0.0_f64;
    for delta in [0.5, 2.0, 3.0] {
        let scaled = group::haar_integral_radial(&|rho, s| profile(delta * rho, delta * delta * s), spec)?;
        w = worst([w, (scaled * delta.powi(group::HOMOGENEOUS_DIMENSION) / base - 1.0).abs()]);
    }
    Ok(vec![Check::property("haar_dilation", w, 1e-5)])
}

fn integrability_threshold(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let shells = |p: f64| -> Result<Vec<f64>> {
        [1e-1, 1e-2, 1e-3].iter().map(|&e| group::norm_power_shell_integral(p, e, spec)).collect()
    };
    let p8 = shells(8.0)?;
    let p10 = shells(10.0)?;
    // p = 8 converges (increments shrink like ε²); p = 10 grows by a fixed amount per decade.
    let ratio8 = ((p8[2] - p8[1]) / (p8[1] - p8[0])).abs();
    let ratio10 = (p10[2] - p10[1]) / (p10[1] - p10[0]);
    Ok(vec![
        Check::property("shell_p8_converges", ratio8, 0.02),
        Check::abs("shell_p10_log_divergence", ratio10, 1.0, 1e-3),
    ])
}

// ---------------------------------------------------------------- siegel

const SIEGEL: &[Entry] = &[
    entry("cayley_roundtrip", cayley_roundtrip),
    entry("cayley_sphere_to_boundary", cayley_sphere_to_boundary),
    entry("action", action),
    entry("rotation_height", rotation_height),
    entry("boundary_roundtrip", boundary_roundtrip),
    entry("boundary_measure", boundary_measure),
];

fn cayley_roundtrip(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(301);
    let (mut w, mut min_height) = (0.0_f64, f64::INFINITY);
    for _ in 0..10_000 {
        let b = rng.interior_ball_point(0.999);
        let p = siegel::cayley_to_siegel(&b)?;
        min_height = min_height.min(p.height());
        let back = siegel::cayley_to_ball(&p)?;
        w = worst([w, (back.h1 - b.h1).norm().max((back.h2 - b.h2).norm())]);
    }
    Ok(vec![
        Check::property("cayley_roundtrip", w, 1e-11),
        Check::exact("cayley_interior", json!(min_height > 0.0), json!(true)),
    ])
}

fn cayley_sphere_to_boundary(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(302);
    let mut w = 0.0_f64;
    for _ in 0..1000 {
        let p = siegel::cayley_to_siegel(&rng.ball_sphere_point())?;
        w = worst([w, p.height().abs() / (1.0 + p.q2.norm())]);
    }
    Ok(vec![Check::property("cayley_sphere_to_boundary", w, 1e-10)])
}

fn action(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(303);
    let (mut height, mut compose, mut inv) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..10_000 {
        let (g, h) = (rng.group_element(1.0), rng.group_element(1.0));
        let p = rng.interior_point(1.0);
        let moved = siegel::act(&g, &p);
        height = worst([height, (moved.height() - p.height()).abs()]);
        compose = worst([compose, siegel::act(&(g * h), &p).max_abs_diff(&siegel::act(&g, &siegel::act(&h, &p)))]);
        inv = worst([inv, siegel::act(&g.inverse(), &moved).max_abs_diff(&p)]);
    }
    Ok(vec![
        Check::property("action_height", height, 1e-12),
        Check::property("action_composition", compose, 1e-11),
        Check::property("action_inverse", inv, 1e-11),
    ])
}

fn rotation_height(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(304);
    let mut w = 0.0_f64;
    for _ in 0..1000 {
        let p = rng.interior_point(3.0);
        let r = rng.householder();
        let u = rng.unit_quaternion().to_matrix();
        for m in [r, u] {
            let q = siegel::rotate(&m, &p)?;
            w = worst([w, (q.height() - p.height()).abs() / (1.0 + p.q2.norm())]);
        }
    }
    Ok(vec![Check::property("rotation_height", w, 1e-12)])
}

fn boundary_roundtrip(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(305);
    let mut w = 0.0_f64;
    for _ in 0..10_000 {
        let (x, t) = (rng.quaternion(10.0), rng.vec3(10.0));
        let (x2, t2) = siegel::boundary_coords(&siegel::boundary_point(x, t))?;
        let dt = (0..3).map(|k| (t2[k] - t[k]).abs()).fold(0.0, f64::max);
        w = worst([w, (x2 - x).norm().max(dt)]);
    }
    Ok(vec![Check::property("boundary_roundtrip", w, 1e-13)])
}

fn gaussian_profile(p: &SiegelPoint) -> f64 {
    let t = p.q2.im();
    (-p.q1.norm_sqr() - t.iter().map(|s| s * s).sum::<f64>()).exp()
}

fn boundary_measure(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let order = 10;
    let base = siegel::boundary_integral(&gaussian_profile, order);
    let mut dil = 0.0_f64;
    for delta in [0.9, 1.1] {
        let scaled = siegel::boundary_integral(&|p| p.dilate(delta).map_or(f64::NAN, |q| gaussian_profile(&q)), order);
        dil = worst([dil, (scaled / base * delta.powi(10) - 1.0).abs()]);
    }
    let g = GroupElement::new(Quaternion::new(0.2, -0.1, 0.15, 0.05), [0.3, -0.2, 0.1]);
    let moved = siegel::boundary_integral(&|p| gaussian_profile(&siegel::act(&g, p)), order);
    Ok(vec![
        Check::rel("boundary_measure_gaussian", base, PI.powf(3.5), 1e-10),
        Check::property("boundary_measure_dilation", dil, 1e-4),
        Check::rel("boundary_measure_translation", moved, base, 1e-5),
    ])
}

// ---------------------------------------------------------------- diffops

const DIFFOPS: &[Entry] = &[
    entry("bracket_table", bracket_table),
    entry("h_bracket", h_bracket),
    entry("h_bar_conjugate", h_bar_conjugate),
    entry("tangency", tangency),
    entry("box_b_identity", box_b_identity),
    entry("delta_forms_agree", delta_forms_agree),
    entry("dq_volume_form", dq_volume_form),
    entry("cauchy_fueter", cauchy_fueter),
];

fn bracket_table(_: &QuadratureSpec) -> Result<Vec<Check>> {
    // Entry (a, b): [X_a, X_b] = c·∂t_k.
    const TABLE: [[(f64, usize); 4]; 4] = [
        [(0.0, 0), (4.0, 1), (4.0, 2), (4.0, 3)],
        [(-4.0, 1), (0.0, 0), (-4.0, 3), (4.0, 2)],
        [(-4.0, 2), (4.0, 3), (0.0, 0), (-4.0, 1)],
        [(-4.0, 3), (-4.0, 2), (4.0, 1), (0.0, 0)],
    ];
    let mut computed = Vec::new();
    let mut expected = Vec::new();
    for (a, row) in TABLE.iter().enumerate() {
        for (b, &(c, k)) in row.iter().enumerate() {
            computed.push(diffops::make_x(a)?.commutator(&diffops::make_x(b)?)?.to_string());
            let want = if c == 0.0 {
                diffops::AffineVectorField::zero()
            } else {
                diffops::AffineVectorField::partial(3 + k, c)
            };
            expected.push(want.to_string());
        }
    }
    Ok(vec![Check::exact("bracket_table", json!(computed), json!(expected))])
}

fn h_bracket(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let c = diffops::h_bracket_constant()?;
    Ok(vec![
        Check::exact("h_bracket_single_sign", json!(c.is_some()), json!(true)),
        Check::erratum(
            "h_bracket_sign",
            json!(c),
            json!("[H̄, H] = +2 Σ i_k ∂t_k"),
            json!("[H̄, H] = −2 Σ i_k ∂t_k"),
            c == Some(-2.0),
        ),
    ])
}

fn h_bar_conjugate(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let f = |p: &Point| Quaternion::new(p[0], -p[1], -p[2], -p[3]);
    let p = [0.2, 1.0, -0.4, 0.9, 3.0, -1.0, 0.5];
    let v = diffops::apply(&diffops::h_bar(), &f, &p, 1e-4)?;
    Ok(vec![Check::erratum(
        "h_bar_of_conjugate",
        json!(v),
        json!(1.0),
        json!(2.0),
        (v - Quaternion::real(2.0)).norm() < 1e-8,
    )
    .with_notes("½(∂₀ + Σ i_l ∂_l) w̄ = ½(1 + 3)")])
}

fn tangency(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(401);
    let mut w = 0.0_f64;
    for _ in 0..1000 {
        w = worst([w, diffops::crf_tangency_residual(&rng.boundary_point(3.0))?]);
    }
    Ok(vec![Check::property("tangency", w, 1e-7)])
}

fn box_b_identity(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let f = |p: &Point| Quaternion::new(p[0] * p[5], p[1] * p[1] - p[4], p[2] * p[3] + p[6] * p[6], p[0] * p[4]);
    let mut rng = Sampler::new(402);
    let mut w = 0.0_f64;
    for _ in 0..20 {
        let p = rng.group_element(1.5).coords();
        w = worst([w, diffops::box_b_identity_residual(&f, &p, 1e-3)?]);
    }
    Ok(vec![Check::property("box_b_identity", w, 1e-6)])
}

fn delta_forms_agree(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let f = |p: &Point| {
        let x2: f64 = p[..4].iter().map(|v| v * v).sum();
        Quaternion::new((x2 + p[4]).sin(), (p[5] * p[1]).cos(), (-x2 - p[6] * p[6]).exp(), p[0] * p[4] * p[6])
    };
    let h = 1e-3;
    let mut rng = Sampler::new(403);
    let mut w = 0.0_f64;
    for _ in 0..200 {
        let p = rng.group_element(1.0).coords();
        let lambda = rng.vec3(1.0);
        let eval = |form, h| diffops::delta_lambda_apply(&f, &p, lambda, h, form);
        let (a, b) = (eval(diffops::DeltaForm::SumOfSquares, h)?, eval(diffops::DeltaForm::Coordinates, h)?);
        let a2 = eval(diffops::DeltaForm::SumOfSquares, h / 2.0)?;
        let b2 = eval(diffops::DeltaForm::Coordinates, h / 2.0)?;
        let stencil = (4.0 / 3.0) * (a - a2).norm().max((b - b2).norm()) + 50.0 * f64::EPSILON / (h * h);
        w = worst([w, (a - b).norm() / stencil]);
    }
    Ok(vec![Check::property("delta_forms_agree", w, 2.0)
        .with_notes("difference in units of the estimated stencil error")])
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    QuatMatrix { m }.det()
}

fn dq_volume_form(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(404);
    let w = worst((0..1000).map(|_| {
        let h: [Quaternion; 4] = std::array::from_fn(|_| rng.quaternion(2.0));
        let lhs = h[0].scalar_product(diffops::dq_eval(h[1], h[2], h[3]));
        let rhs = det4(h.map(|q| q.to_array()));
        (lhs - rhs).abs() / (1.0 + rhs.abs())
    }));
    Ok(vec![Check::property("dq_volume_form", w, 1e-12)])
}

fn cauchy_fueter(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let one = diffops::cauchy_fueter_sphere(&|_| Quaternion::ONE, Quaternion::I1, 1.0, spec)?;
    let id = diffops::cauchy_fueter_sphere(&|q| q, Quaternion::I1, 1.0, spec)?;
    let zeta = |q: Quaternion| Quaternion::new(q.im_k(1), -q.re(), 0.0, 0.0);
    let q0 = Quaternion::new(0.1, 0.2, -0.1, 0.05);
    let reg = diffops::cauchy_fueter_sphere(&zeta, q0, 1.0, spec)?;
    Ok(vec![
        Check::property("cauchy_fueter_one", (one.value - Quaternion::ONE).norm(), 1e-5),
        Check::property("cauchy_fueter_identity", (id.value - Quaternion::I1).norm(), 1e-5),
        Check::property("cauchy_fueter_regular", (reg.value - zeta(q0)).norm(), 1e-6),
    ])
}

// ---------------------------------------------------------------- szego

const SZEGO: &[Entry] = &[
    entry("k_constant", k_constant),
    entry("gamma_delta", gamma_delta),
    entry("kernel_constant", kernel_constant),
    entry("reproducing", reproducing),
    entry("kernel_symmetries", kernel_symmetries),
    entry("k_eps_limit", k_eps_limit),
];

fn k_constant(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let v = szego::verify_k(spec)?;
    let weighted_expected = PI.powi(4) / 384.0;
    Ok(vec![
        Check::rel("k_constant", v.k, szego::K, 1e-7),
        Check::rel("radial_integral", v.inner.value, PI / 3072.0, 1e-7),
        Check::erratum(
            "radial_integral_value",
            json!({ "bare": v.inner.value, "with_sphere_areas": v.weighted }),
            json!({ "bare": weighted_expected }),
            json!({ "bare": PI / 3072.0, "with_sphere_areas": weighted_expected }),
            (v.weighted / weighted_expected - 1.0).abs() < 1e-7,
        ),
    ])
}

fn gamma_delta(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let (g, d) = szego::gamma_delta(spec)?;
    let g_closed = gamma(1.5) * gamma(3.5) / (2.0 * gamma(5.0));
    let d_closed = gamma(5.0) / (2.0 * gamma(7.0));
    Ok(vec![
        Check::rel("gamma_integral", g.value, 5.0 * PI / 256.0, 1e-9),
        Check::rel("delta_integral", d.value, 1.0 / 60.0, 1e-9),
        Check::rel("gamma_closed_form", g_closed, 5.0 * PI / 256.0, 1e-12),
        Check::rel("delta_closed_form", d_closed, 1.0 / 60.0, 1e-12),
    ])
}

fn kernel_constant(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let consts = SzegoConstants::default();
    let g = GroupElement::new(Quaternion::new(0.3, -0.2, 0.5, 0.1), [0.4, -0.7, 0.2]);
    let eps = 0.25;
    let base = Quaternion::real(g.w.norm_sqr() + eps) + Quaternion::imag(g.t);
    let lifted = siegel::boundary_point(g.w, g.t).lift(eps);
    let s = szego::szego_kernel(&lifted, &SiegelPoint::ORIGIN, &consts)?;
    let implied = (s * base.real_power(5.0)?).re();
    let k_eps = szego::k_eps(&g, eps, &consts)?;
    Ok(vec![
        Check::property("k_eps_is_szego_kernel", qrel(k_eps, s), 1e-12),
        Check::erratum(
            "kernel_constant",
            json!(implied),
            json!(szego::PRINTED_C),
            json!(12.0 / PI.powi(4)),
            (implied * PI.powi(4) / 12.0 - 1.0).abs() < 1e-12,
        ),
    ])
}

fn reproducing(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let consts = SzegoConstants::default();
    let r = szego::verify_reproducing(&consts, spec)?;
    let doubled = SzegoConstants {
        k: 2.0 * consts.k,
        ..consts
    };
    let r2 = szego::verify_reproducing(&doubled, spec)?;
    Ok(vec![
        Check::abs("reproducing", r.value, 1.0 / 32.0, 1e-6),
        Check::property("reproducing_imaginary", r.imaginary, 1e-12),
        Check::rel("reproducing_linear_in_k", r2.value, 2.0 * r.value, 1e-9),
    ])
}

fn kernel_symmetries(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let consts = SzegoConstants::default();
    let mut rng = Sampler::new(501);
    let (mut herm, mut dil, mut inv) = (0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..10_000 {
        let (q, w) = (rng.interior_point(2.0), rng.interior_point(2.0));
        let s = szego::szego_kernel(&q, &w, &consts)?;
        herm = worst([herm, qrel(szego::szego_kernel(&w, &q, &consts)?, s.conj())]);
        let d = szego::szego_kernel(&q.dilate(1.7)?, &w.dilate(1.7)?, &consts)?;
        dil = worst([dil, qrel(d * 1.7f64.powi(10), s)]);
        let g = rng.group_element(1.0);
        let moved = szego::szego_kernel(&siegel::act(&g, &q), &siegel::act(&g, &w), &consts)?;
        inv = worst([inv, qrel(moved, s)]);
    }
    Ok(vec![
        Check::property("szego_hermitian", herm, 1e-12),
        Check::property("szego_dilation", dil, 1e-12),
        Check::property("szego_translation", inv, 1e-10),
    ])
}

fn k_eps_limit(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let consts = SzegoConstants::default();
    let g = GroupElement::new(Quaternion::new(0.6, 0.1, -0.3, 0.2), [0.5, 0.2, -0.4]);
    let values: Vec<Quaternion> = (0..30)
        .map(|n| szego::k_eps(&g, 2f64.powi(-n), &consts))
        .collect::<Result<_>>()?;
    let limit = szego::k_eps(&g, 0.0, &consts)?;
    let steps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    // Once ε ≪ |w|², a geometric Cauchy sequence: each step halves.
    let ratio = worst(steps.windows(2).skip(6).map(|s| s[1] / s[0]));
    Ok(vec![
        Check::property("k_eps_cauchy_ratio", ratio, 0.6),
        Check::property("k_eps_limit", qrel(values[29], limit), 1e-7),
    ])
}

// ---------------------------------------------------------------- greens

const GREENS: &[Entry] = &[
    entry("hermite_residual", hermite_residual),
    entry("k_lambda_normalization", k_lambda_normalization),
    entry("k0_consistency", k0_consistency),
    entry("homogeneity", homogeneity),
    entry("k_lambda_symmetries", k_lambda_symmetries),
    entry("heisenberg_grid", heisenberg_grid),
    entry("heisenberg_pole", heisenberg_pole),
    entry("k0_sign", k0_sign),
    entry("fourier_consistency", fourier_consistency),
    entry("isotropy", isotropy),
    entry("delta_lambda_residual", delta_lambda_residual),
];

/// Probe points for the Hermite residual: `(x, τ, λ)`.
pub const HERMITE_PROBES: [([f64; 4], [f64; 3], [f64; 3]); 3] = [
    ([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, 0.0, 0.0]),
    ([0.5, 0.4, -0.3, 0.2], [0.3, -0.6, 0.2], [0.0, 0.7, -0.4]),
    ([0.8, -0.2, 0.9, 0.1], [0.1, 0.1, 0.1], [1.0, 0.0, 1.0]),
];

fn hermite_residual(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let (mut w, mut ratio_dev) = (0.0_f64, 0.0_f64);
    for (x, tau, lambda) in HERMITE_PROBES {
        let fine = greens::hermite_residual(&x, tau, lambda, spec, greens::PDE_STEP)?;
        let coarse = greens::hermite_residual(&x, tau, lambda, spec, 2.0 * greens::PDE_STEP)?;
        w = worst([w, fine.normalized]);
        ratio_dev = worst([ratio_dev, (coarse.normalized / fine.normalized / 4.0).ln().abs()]);
    }
    Ok(vec![
        Check::property("hermite_residual", w, 1e-4),
        Check::property("hermite_second_order", ratio_dev, 0.4).with_notes("|ln(r(2h)/r(h)/4)|"),
    ])
}

fn k_lambda_normalization(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let v = greens::k_lambda(&[1.0, 0.0, 0.0, 0.0], [0.0; 3], [0.0; 3], spec)?.value;
    Ok(vec![Check::rel("k_lambda_normalization", v.re(), 1.0 / (4.0 * PI.powi(4)), 1e-7)])
}

fn k0_consistency(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Sampler::new(601);
    let mut w = 0.0_f64;
    for _ in 0..20 {
        let (rx, rt) = (rng.uniform(0.5, 2.0), rng.uniform(0.0, 4.0));
        let x = rng.sphere::<4>().map(|v| v * rx);
        let t = rng.sphere::<3>().map(|v| v * rt);
        let a = greens::k0_sphere(&x, t, spec)?.value;
        let b = greens::k_lambda(&x, t, [0.0; 3], spec)?.value;
        w = worst([w, (b.re() - a).abs() / a]);
    }
    Ok(vec![Check::property("k0_vs_k_lambda", w, 1e-6)])
}

fn homogeneity(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let x = [0.7, -0.3, 0.4, 0.2];
    let t = [0.3, -0.5, 0.4];
    let exponent = |lambda| -> Result<f64> {
        let a = greens::k_lambda(&x, t, lambda, spec)?.value.norm();
        let b = greens::k_lambda(&x.map(|v| 2.0 * v), t.map(|v| 4.0 * v), lambda, spec)?.value.norm();
        Ok(b.log2() - a.log2())
    };
    Ok(vec![
        Check::abs("homogeneity_l0", exponent([0.0; 3])?, -8.0, 1e-5),
        Check::abs("homogeneity_l07", exponent([0.4, 0.3, -0.42])?, -8.0, 1e-4),
    ])
}

fn k_lambda_symmetries(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let x = [0.9, 0.2, -0.4, 0.3];
    let t = [0.6, -0.2, 0.5];
    let zero = greens::k_lambda(&x, t, [0.0; 3], spec)?.value;
    let lambda = [0.3, 0.8, -0.5];
    let plus = greens::k_lambda(&x, t, lambda, spec)?.value;
    let minus = greens::k_lambda(&x, t.map(|s| -s), lambda, spec)?.value;
    Ok(vec![
        Check::property("k_lambda_real_at_l0", zero.imag_norm() / zero.re().abs(), 1e-9),
        Check::property("k_lambda_conjugation", qrel(minus, plus.conj()), 1e-9),
    ])
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

fn heisenberg_grid(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut w = 0.0_f64;
    for r in linspace(0.5, 2.0, 5) {
        let x = [0.6 * r, 0.0, -0.8 * r, 0.0];
        for t in linspace(-2.0, 2.0, 5) {
            for lambda in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                let closed = greens::heis_k_closed(&x, t, lambda)?;
                let quad = greens::heis_k_quadrature(&x, t, lambda, spec)?.value;
                w = worst([w, qrel(quad, closed)]);
            }
        }
    }
    let mut k0 = 0.0_f64;
    for r in linspace(0.5, 2.0, 5) {
        for t in linspace(-2.0, 2.0, 5) {
            let v = greens::heis_k_quadrature(&[r, 0.0, 0.0, 0.0], t, 0.0, spec)?.value;
            let want = 1.0 / (4.0 * PI.powi(3) * (r.powi(4) + t * t));
            k0 = worst([k0, qrel(v, Quaternion::real(want))]);
        }
    }
    Ok(vec![
        Check::property("heisenberg_grid", w, 1e-7),
        Check::property("heisenberg_k0", k0, 1e-7),
    ])
}

fn heisenberg_pole(_: &QuadratureSpec) -> Result<Vec<Check>> {
    let x = [1.0, 0.0, 0.0, 0.0];
    let residue = |lambda: f64| -> Result<Quaternion> { Ok(greens::heis_k_closed(&x, 0.4, lambda)? * ((2.0 - lambda) / 2.0)) };
    let a = residue(2.0 - 1e-6)?;
    let b = residue(2.0 - 1e-7)?;
    let growth = greens::heis_k_closed(&x, 0.4, 2.0 - 1e-7)?.norm() / greens::heis_k_closed(&x, 0.4, 2.0 - 1e-6)?.norm();
    let lattice = greens::heis_k_closed(&x, 0.4, 2.0).is_err() && greens::heis_k_closed(&x, 0.4, -4.0).is_err();
    Ok(vec![
        Check::property("heisenberg_pole_residue", qrel(b, a), 1e-5),
        Check::rel("heisenberg_pole_growth", growth, 10.0, 1e-5),
        Check::exact("heisenberg_pole_lattice", json!(lattice), json!(true)),
    ])
}

fn k0_sign(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let v = greens::k0_sphere(&[1.0, 0.0, 0.0, 0.0], [0.0; 3], spec)?.value;
    Ok(vec![Check::erratum(
        "k0_sign",
        json!(v),
        json!("−2/((2π)⁵|x|²) ∫_{S²}[…]⁻³ dσ, v from 0"),
        json!("+2/((2π)⁵|x|²) ∫_{S²}[…]⁻³ dσ, v from 1"),
        v > 0.0,
    )])
}

fn fourier_consistency(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let x = [1.5, 0.0, 0.0, 0.0];
    let spec = spec.with_sphere_order(spec.sphere_order.min(16));
    let deviations: Vec<f64> = [4.0, 8.0, 16.0]
        .iter()
        .map(|&r| greens::fourier_consistency(&x, [0.0; 3], [0.0; 3], r, &spec).map(|c| c.deviation))
        .collect::<Result<_>>()?;
    let monotone = deviations.windows(2).all(|w| w[1] < w[0]);
    Ok(vec![Check::informational("fourier_truncation", json!({ "R": [4.0, 8.0, 16.0], "deviation": deviations }))
        .with_notes(if monotone { "monotone in R" } else { "not monotone in R" })])
}

/// `K₀` against `(|x|⁴ + |t|²)⁻²/(4π⁴)`: equal for `t` along a coordinate
/// axis, not for generic `t`, because `Σ i_k t_k n_k` is not rotation-covariant in `t`.
fn isotropy(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let x = [0.8, 0.0, 0.0, 0.0];
    let ratio = |t: [f64; 3]| -> Result<f64> { Ok(greens::k_lambda(&x, t, [0.0; 3], spec)?.value.re() / greens::k0_isotropic(&x, t)) };
    let axis = ratio([0.0, 0.707, 0.0])?;
    let generic = ratio([0.3, -0.5, 0.4])?;
    Ok(vec![Check::informational("k0_vs_isotropic", json!({ "t_on_axis": axis, "t_generic": generic }))
        .with_notes("ratio K₀/isotropic at |t| ≈ 0.707")])
}

/// Probe points `(x, t, λ)` for the Δ_λ residual.
pub const DELTA_PROBES: [([f64; 4], [f64; 3], [f64; 3]); 2] = [
    ([1.0, 0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0; 3]),
    ([1.0, 0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.5, 0.3, 0.0]),
];

fn isotropic(q: &Point) -> Result<Estimate<Quaternion>> {
    let v = greens::k0_isotropic(&[q[0], q[1], q[2], q[3]], [q[4], q[5], q[6]]);
    Ok(Estimate {
        value: Quaternion::real(v),
        error: 0.0,
        evaluations: 1,
        subdivisions: 0,
        converged: true,
        failed_level: None,
    })
}

fn delta_lambda_residual(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let h = greens::PDE_STEP;
    let mut checks = Vec::new();
    for (i, (x, t, lambda)) in DELTA_PROBES.into_iter().enumerate() {
        let fine = greens::delta_lambda_residual_on_k(&x, t, lambda, spec, h)?;
        let coarse = greens::delta_lambda_residual_on_k(&x, t, lambda, spec, 2.0 * h)?;
        let shrink = coarse.normalized / fine.normalized;
        checks.push(
            Check::property(&format!("delta_lambda_residual_{i}"), fine.normalized, 1e-2).with_notes(format!(
                "r(2h)/r(h) = {shrink:.3}, quadrature noise {:.1e}",
                fine.noise
            )),
        );
    }
    let (x, t, _) = DELTA_PROBES[0];
    let p = [x[0], x[1], x[2], x[3], t[0], t[1], t[2]];
    let a = greens::delta_lambda_residual_on_k(&x, t, [0.0; 3], spec, h)?;
    let b = greens::delta_lambda_residual_on_k(&x.map(|v| 2.0 * v), t.map(|v| 4.0 * v), [0.0; 3], spec, h)?;
    checks.push(Check::abs(
        "delta_lambda_residual_dilation",
        b.value.norm() / a.value.norm() * 2f64.powi(10),
        1.0,
        0.3,
    ));
    let iso = greens::delta_lambda_residual_of(&isotropic, &p, [0.0; 3], h)?;
    let iso2 = greens::delta_lambda_residual_of(&isotropic, &p, [0.0; 3], 2.0 * h)?;
    checks.push(
        Check::informational("isotropic_kernel_residual", json!({ "h": iso.normalized, "2h": iso2.normalized }))
            .with_notes("same stencil on (|x|⁴ + |t|²)⁻²/(4π⁴)"),
    );
    Ok(checks)
}
