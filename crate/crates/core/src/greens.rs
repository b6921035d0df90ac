//! Fundamental solutions of `Δ_λ` on `Q` and of its partial Fourier
//! transform, plus the one-dimensional-centre (Heisenberg) case.
//!
//! The group kernel is evaluated from the polar-reduced representation
//!
//! ```text
//! K_λ(x, t) = 6/(2π)⁵ ∫_{S²} ∫₀^∞ e^{−(λ·n)u} sinh⁻²u [|x|² coth u − Σ i_k t_k n_k]⁻⁴ du dσ(n)
//! ```
//!
//! which is absolutely convergent for `x ≠ 0` and `|λ| < 2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffops::{delta_lambda_apply, DeltaForm, Point};
use crate::error::{Error, Result};
use crate::quad::{
    gamma, integrate_1d, sphere2_nodes, Estimate, Interval, KahanSum, QuadError, QuadratureSpec,
};
use crate::quat::Quaternion;

/// Finite-difference step used for the PDE residuals. Kernel values carry
/// quadrature error, which a second difference divides by `h²`.
pub const PDE_STEP: f64 = 2e-3;

/// Inner tolerance for kernel values that feed a second difference.
pub const PDE_REL_TOL: f64 = 1e-12;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn check_lambda(lambda: [f64; 3]) -> Result<()> {
    let l = norm(&lambda);
    if !(l < 2.0) {
        return Err(Error::Domain(format!("|λ| = {l} must be below 2")));
    }
    Ok(())
}

fn check_x(x: &[f64; 4]) -> Result<f64> {
    let r = norm(x);
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain("x=0 outside reduced-representation domain".into()));
    }
    Ok(r)
}

/// `(e^{−2u}, 1 − e^{−2u})` without cancellation for small `u`.
fn exp_pair(u: f64) -> (f64, f64) {
    ((-2.0 * u).exp(), -(-2.0 * u).exp_m1())
}

/// `∫₀^∞ g(u) du` with the exponential map stretched to the decay rate `rate`.
fn half_line<V, F>(g: F, rate: f64, spec: &QuadratureSpec) -> Result<Estimate<V>, QuadError>
where
    V: crate::quad::QuadValue,
    F: Fn(f64) -> V,
{
    let scale = 1.0 / rate;
    integrate_1d(|v: f64| g(v * scale) * scale, Interval::UpperHalf(0.0), spec)
}

/// `K̃_λ(x, τ) = |τ|/(4π²) ∫₀^∞ e^{−(λ·τ)u/|τ|} e^{−|τ||x|² coth u} sinh⁻²u du`.
pub fn k_tilde_lambda(x: &[f64; 4], tau: [f64; 3], lambda: [f64; 3], spec: &QuadratureSpec) -> Result<Estimate<f64>> {
    check_lambda(lambda)?;
    let x2 = check_x(x)?.powi(2);
    let mag = norm(&tau);
    if !(mag > 0.0) {
        return Err(Error::Domain("τ = 0".into()));
    }
    let drift = dot3(lambda, tau) / mag;
    let a = mag * x2;
    let integrand = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let (e, d) = exp_pair(u);
        // e^{−a coth u}/sinh²u = 4E/D² · e^{−a(1+E)/D}, E = e^{−2u}, D = 1 − E.
        let decay = (-a * (1.0 + e) / d).exp();
        if decay == 0.0 {
            return 0.0;
        }
        4.0 * e / (d * d) * decay * (-drift * u).exp()
    };
    let est = half_line(integrand, 2.0 + drift, spec)?.require("K̃_λ")?;
    let c = mag / (4.0 * PI * PI);
    Ok(Estimate {
        value: c * est.value,
        error: c * est.error,
        ..est
    })
}

/// Residual of the Hermite operator `Σ∂²x_l − 4|x|²|τ|² − 4λ·τ` applied to
/// [`k_tilde_lambda`] in `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermiteResidual {
    pub residual: f64,
    pub kernel: f64,
    /// `residual / (|K̃| (1 + 4|x|²|τ|²))`.
    pub normalized: f64,
}

pub fn hermite_residual(
    x: &[f64; 4],
    tau: [f64; 3],
    lambda: [f64; 3],
    spec: &QuadratureSpec,
    h: f64,
) -> Result<HermiteResidual> {
    let r = check_x(x)?;
    if r < 0.3 {
        return Err(Error::Domain(format!("|x| = {r} is inside the excluded ball |x| < 0.3")));
    }
    if !(h > 0.0) || h >= 0.5 * r {
        return Err(Error::StepUnderflow(h));
    }
    let spec = spec.with_rel_tol(spec.rel_tol.min(PDE_REL_TOL));
    let k = |y: &[f64; 4]| k_tilde_lambda(y, tau, lambda, &spec).map(|e| e.value);
    let center = k(x)?;
    let mut lap = 0.0;
    for l in 0..4 {
        let mut plus = *x;
        let mut minus = *x;
        plus[l] += h;
        minus[l] -= h;
        lap += (k(&plus)? - 2.0 * center + k(&minus)?) / (h * h);
    }
    let t2 = dot3(tau, tau);
    let residual = (lap - 4.0 * r * r * t2 * center - 4.0 * dot3(lambda, tau) * center).abs();
    Ok(HermiteResidual {
        residual,
        kernel: center,
        normalized: residual / (center.abs() * (1.0 + 4.0 * r * r * t2)),
    })
}

/// `Σ i_k t_k n_k`.
fn twisted(t: [f64; 3], n: [f64; 3]) -> Quaternion {
    Quaternion::imag([t[0] * n[0], t[1] * n[1], t[2] * n[2]])
}

/// Sums `f(n)·w` over the S² rule of `order`, in node order.
fn sphere_sum(
    order: usize,
    f: &(dyn Fn([f64; 3]) -> Result<Estimate<Quaternion>> + Sync),
) -> Result<(Quaternion, f64, usize)> {
    let nodes = sphere2_nodes(order);
    let parts: Vec<Result<(Quaternion, f64, usize)>> = nodes
        .par_iter()
        .map(|node| f(node.n).map(|e| (e.value * node.weight, e.error * node.weight, e.evaluations)))
        .collect();
    let mut value = KahanSum::default();
    let mut error = KahanSum::default();
    let mut evaluations = 0;
    for p in parts {
        let (v, e, n) = p?;
        value.add(v);
        error.add(e);
        evaluations += n;
    }
    Ok((value.total(), error.total(), evaluations))
}

/// S² integral at `spec.sphere_order`, with the half-order difference added
/// to the accumulated inner error.
fn sphere_estimate(
    spec: &QuadratureSpec,
    f: &(dyn Fn([f64; 3]) -> Result<Estimate<Quaternion>> + Sync),
) -> Result<Estimate<Quaternion>> {
    let order = spec.sphere_order.max(2);
    let (fine, inner, n1) = sphere_sum(order, f)?;
    let (coarse, _, n2) = sphere_sum((order / 2).max(1), f)?;
    let error = (fine - coarse).norm() + inner;
    Ok(Estimate {
        value: fine,
        error,
        evaluations: n1 + n2,
        subdivisions: 0,
        converged: error <= spec.tolerance(fine.norm()),
        failed_level: None,
    })
}

/// `K_λ(x, t)` from the polar-reduced representation.
pub fn k_lambda(x: &[f64; 4], t: [f64; 3], lambda: [f64; 3], spec: &QuadratureSpec) -> Result<Estimate<Quaternion>> {
    check_lambda(lambda)?;
    let x2 = check_x(x)?.powi(2);
    spec.validate()?;
    let inner = |n: [f64; 3]| -> Result<Estimate<Quaternion>> {
        let it = twisted(t, n);
        let ln = dot3(lambda, n);
        // e^{−(λ·n)u} sinh²u / [|x|² cosh u − i·(t∘n) sinh u]⁴, scaled by e^{−4u}
        // top and bottom: e^{−(2+λ·n)u} S² / (|x|²C − i·(t∘n) S)⁴.
        let g = |u: f64| -> Quaternion {
            let (e, d) = exp_pair(u);
            let (c, s) = (0.5 * (1.0 + e), 0.5 * d);
            let base = Quaternion::real(x2 * c) - it * s;
            match base.powi(-4) {
                Ok(p) => p * ((-(2.0 + ln) * u).exp() * s * s),
                Err(_) => Quaternion::new(f64::NAN, 0.0, 0.0, 0.0),
            }
        };
        Ok(half_line(g, 2.0 + ln, spec)?.require("K_λ (u-integral)")?)
    };
    let est = sphere_estimate(spec, &inner)?;
    let c = 6.0 / (2.0 * PI).powi(5);
    Ok(Estimate {
        value: est.value * c,
        error: est.error * c,
        ..est
    })
}

/// `K₀(x, t) = 2/((2π)⁵|x|²) ∫_{S²} Re [|x|² − Σ i_k t_k n_k]⁻³ dσ(n)`.
pub fn k0_sphere(x: &[f64; 4], t: [f64; 3], spec: &QuadratureSpec) -> Result<Estimate<f64>> {
    let x2 = check_x(x)?.powi(2);
    spec.validate()?;
    let f = |n: [f64; 3]| -> Result<Estimate<Quaternion>> {
        let v = (Quaternion::real(x2) - twisted(t, n)).powi(-3)?;
        Ok(Estimate {
            value: Quaternion::real(v.re()),
            error: 0.0,
            evaluations: 1,
            subdivisions: 0,
            converged: true,
            failed_level: None,
        })
    };
    let est = sphere_estimate(spec, &f)?;
    let c = 2.0 / ((2.0 * PI).powi(5) * x2);
    Ok(Estimate {
        value: est.value.re() * c,
        error: est.error * c,
        evaluations: est.evaluations,
        subdivisions: 0,
        converged: est.converged,
        failed_level: None,
    })
}

/// `(1/4π⁴)(|x|⁴ + |t|²)⁻²`, the λ = 0 kernel with the central variable
/// entering through `t·n` instead of `Σ i_k t_k n_k`.
pub fn k0_isotropic(x: &[f64; 4], t: [f64; 3]) -> f64 {
    let x2 = dot3([x[0], x[1], x[2]], [x[0], x[1], x[2]]) + x[3] * x[3];
    (x2 * x2 + dot3(t, t)).powi(-2) / (4.0 * PI.powi(4))
}

fn complex_to_quat(z: Complex64) -> Quaternion {
    Quaternion::new(z.re, z.im, 0.0, 0.0)
}

/// `(r, φ)` with `r = (|x|⁴ + t²)^{1/4}`, `cos φ = |x|²/r²`, `sin φ = t/r²`.
fn heis_polar(x: &[f64; 4], t: f64) -> Result<(f64, f64)> {
    let x2 = norm(x).powi(2);
    if x2 == 0.0 && t == 0.0 {
        return Err(Error::Pole("(x, t) = 0"));
    }
    let r2 = x2.hypot(t);
    Ok((r2.sqrt(), t.atan2(x2)))
}

/// `(1/4π³) Γ((2+λ)/2) Γ((2−λ)/2) r⁻⁴ e^{iλφ}` in the plane of `1` and `i₁`.
pub fn heis_k_closed(x: &[f64; 4], t: f64, lambda: f64) -> Result<Quaternion> {
    let on_lattice = lambda.abs() >= 2.0 && lambda.fract() == 0.0 && (lambda as i64) % 2 == 0;
    if on_lattice {
        return Err(Error::Pole("λ ∈ {±(2 + 2k)}"));
    }
    let (r, phi) = heis_polar(x, t)?;
    let g = gamma((2.0 + lambda) / 2.0) * gamma((2.0 - lambda) / 2.0);
    let z = Complex64::from_polar(g / (4.0 * PI.powi(3) * r.powi(4)), lambda * phi);
    Ok(complex_to_quat(z))
}

/// `(1/8π³) ∫_R e^{−λu} [r² cosh(u + iφ)]⁻² du`.
pub fn heis_k_quadrature(x: &[f64; 4], t: f64, lambda: f64, spec: &QuadratureSpec) -> Result<Estimate<Quaternion>> {
    if !(lambda.abs() < 2.0) {
        return Err(Error::Domain(format!("|λ| = {} must be below 2", lambda.abs())));
    }
    let (r, phi) = heis_polar(x, t)?;
    let rot = Complex64::from_polar(1.0, phi);
    // e^{−λu}/cosh²(u+iφ) with the growth of cosh factored out:
    // u ≥ 0: 4e^{−(2+λ)u}/(e^{iφ} + e^{−2u−iφ})², u < 0 mirrored.
    let g = |u: f64| -> Complex64 {
        let a = u.abs();
        let e = (-2.0 * a).exp();
        let (lead, rate) = if u >= 0.0 { (rot, 2.0 + lambda) } else { (rot.conj(), 2.0 - lambda) };
        let denom = lead + lead.conj() * e;
        4.0 * (-rate * a).exp() / (denom * denom)
    };
    let rate = 2.0 - lambda.abs();
    let scale = 1.0 / rate;
    let est = integrate_1d(|v: f64| g(v * scale) * scale, Interval::Whole, spec)?
        .require("Heisenberg kernel")?;
    let c = 1.0 / (8.0 * PI.powi(3) * r.powi(4));
    Ok(Estimate {
        value: complex_to_quat(est.value * c),
        error: est.error * c,
        evaluations: est.evaluations,
        subdivisions: est.subdivisions,
        converged: est.converged,
        failed_level: est.failed_level,
    })
}

/// Result of inverting the partial Fourier transform over a truncated τ-ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierConsistency {
    pub radius: f64,
    pub transform: Quaternion,
    pub reduced: Quaternion,
    /// `|transform − reduced| / |reduced|`.
    pub deviation: f64,
    /// Largest relative imaginary part of the angular integral over the sampled radii.
    pub angular_imaginary: f64,
}

/// `(2π)⁻³ ∫_{|τ|<R} e^{Σ i_k t_k τ_k} K̃_λ(x, τ) dτ` compared with [`k_lambda`].
pub fn fourier_consistency(
    x: &[f64; 4],
    t: [f64; 3],
    lambda: [f64; 3],
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<FourierConsistency> {
    let r = check_x(x)?;
    if r < 1.0 {
        return Err(Error::Domain(format!("|x| = {r} is below 1")));
    }
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("truncation radius must be positive, got {radius}")));
    }
    let nodes = sphere2_nodes(spec.sphere_order.max(2));
    let angular = |rho: f64| -> Result<Quaternion> {
        let parts: Vec<Result<Quaternion>> = nodes
            .par_iter()
            .map(|node| {
                let tau = node.n.map(|v| v * rho);
                let kt = k_tilde_lambda(x, tau, lambda, spec)?.value;
                let phase = Quaternion::exp_imag([t[0] * tau[0], t[1] * tau[1], t[2] * tau[2]]);
                Ok(phase * (kt * node.weight))
            })
            .collect();
        let mut acc = KahanSum::default();
        for p in parts {
            acc.add(p?);
        }
        Ok(acc.total())
    };
    let mut failure = None;
    let mut imaginary = 0.0_f64;
    let est = integrate_1d(
        |rho: f64| -> Quaternion {
            if rho <= 0.0 {
                return Quaternion::ZERO;
            }
            match angular(rho) {
                Ok(v) => {
                    imaginary = imaginary.max(v.imag_norm() / v.norm().max(f64::MIN_POSITIVE));
                    v * (rho * rho)
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    Quaternion::ZERO
                }
            }
        },
        Interval::Finite(0.0, radius),
        &spec.with_rel_tol(spec.rel_tol.max(1e-7)),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let transform = est.require("Fourier inversion")?.value * (1.0 / (2.0 * PI).powi(3));
    let reduced = k_lambda(x, t, lambda, spec)?.value;
    Ok(FourierConsistency {
        radius,
        transform,
        reduced,
        deviation: (transform - reduced).norm() / reduced.norm(),
        angular_imaginary: imaginary,
    })
}

/// `Δ_λ K_λ` at a point away from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeResidual {
    /// `Δ_λ K_λ (p)` by the sum-of-squares stencil.
    pub value: Quaternion,
    pub kernel: Quaternion,
    /// `|Δ_λ K_λ| ‖p‖² / |K_λ|`.
    pub normalized: f64,
    /// Bound on the stencil's quadrature contribution, `~ error / h²`, in the same normalisation.
    pub noise: f64,
}

/// Applies `Δ_λ` to an arbitrary kernel and normalises by `|K| / ‖p‖²`.
pub fn delta_lambda_residual_of(
    kernel: &(dyn Fn(&Point) -> Result<Estimate<Quaternion>> + Sync),
    p: &Point,
    lambda: [f64; 3],
    h: f64,
) -> Result<PdeResidual> {
    let homog = (norm(&p[..4]).powi(2) + norm(&p[4..])).sqrt();
    if homog < 0.5 {
        return Err(Error::Domain(format!("homogeneous norm {homog} is below 0.5")));
    }
    let x = [p[0], p[1], p[2], p[3]];
    if norm(&x) <= 0.3 {
        return Err(Error::Domain("|x| must exceed 0.3".into()));
    }
    let center = kernel(p)?;
    let failure = std::sync::OnceLock::new();
    let f = |q: &Point| {
        kernel(q).map(|e| e.value).unwrap_or_else(|e| {
            let _ = failure.set(e);
            Quaternion::new(f64::NAN, 0.0, 0.0, 0.0)
        })
    };
    let value = delta_lambda_apply(&f, p, lambda, h, DeltaForm::SumOfSquares);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let value = value?;
    let scale = homog * homog / center.value.norm();
    // Each of the ~20 stencil values carries the centre's quadrature error.
    let noise = 20.0 * center.error / (h * h) * scale;
    Ok(PdeResidual {
        value,
        kernel: center.value,
        normalized: value.norm() * scale,
        noise,
    })
}

/// `|Δ_λ K_λ|` at `(x, t)`, normalised by `|K_λ| / ‖(x, t)‖²`.
pub fn delta_lambda_residual_on_k(
    x: &[f64; 4],
    t: [f64; 3],
    lambda: [f64; 3],
    spec: &QuadratureSpec,
    h: f64,
) -> Result<PdeResidual> {
    check_lambda(lambda)?;
    let spec = spec.with_rel_tol(spec.rel_tol.min(PDE_REL_TOL));
    let kernel = |q: &Point| k_lambda(&[q[0], q[1], q[2], q[3]], [q[4], q[5], q[6]], lambda, &spec);
    let p = [x[0], x[1], x[2], x[3], t[0], t[1], t[2]];
    delta_lambda_residual_of(&kernel, &p, lambda, h)
}
