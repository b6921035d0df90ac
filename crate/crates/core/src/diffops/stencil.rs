//! Central-difference application of the fields to scalar and quaternion
//! valued functions on `R⁷`.

use super::field::{AffineVectorField, Coefficient, VectorField};
use super::{h, h_bar, make_x};
use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::siegel::SiegelPoint;

/// Boundary coordinates `(x₀, x₁, x₂, x₃, t₁, t₂, t₃)`.
pub type Point = [f64; 7];

const UNITS: [Quaternion; 3] = [Quaternion::I1, Quaternion::I2, Quaternion::I3];

/// `h = 1e-4·(1 + ‖p‖)`.
pub fn default_step(p: &[f64]) -> f64 {
    1e-4 * (1.0 + p.iter().map(|v| v * v).sum::<f64>().sqrt())
}

fn check_step(p: &[f64], h: f64) -> Result<()> {
    let scale = p.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    if !(h > 64.0 * f64::EPSILON * scale) || !h.is_finite() {
        return Err(Error::StepUnderflow(h));
    }
    Ok(())
}

fn finite(q: Quaternion, what: &'static str) -> Result<Quaternion> {
    if q.is_finite() {
        Ok(q)
    } else {
        Err(Error::NonFinite(what))
    }
}

fn shifted(p: &Point, dir: &Point, s: f64) -> Point {
    std::array::from_fn(|j| p[j] + s * dir[j])
}

fn unit(j: usize) -> Point {
    let mut e = [0.0; 7];
    e[j] = 1.0;
    e
}

/// First derivative of `f` along `dir`.
fn directional(f: &dyn Fn(&Point) -> Quaternion, p: &Point, dir: &Point, h: f64) -> Quaternion {
    (f(&shifted(p, dir, h)) - f(&shifted(p, dir, -h))) * (0.5 / h)
}

/// Second derivative of `f` along `dir`.
fn second(f: &dyn Fn(&Point) -> Quaternion, p: &Point, dir: &Point, h: f64) -> Quaternion {
    (f(&shifted(p, dir, h)) - f(p) * 2.0 + f(&shifted(p, dir, -h))) * (1.0 / (h * h))
}

/// Mixed derivative `D_a D_b f`.
fn mixed(f: &dyn Fn(&Point) -> Quaternion, p: &Point, a: &Point, b: &Point, h: f64) -> Quaternion {
    let at = |sa: f64, sb: f64| f(&std::array::from_fn(|j| p[j] + h * (sa * a[j] + sb * b[j])));
    (at(1.0, 1.0) - at(1.0, -1.0) - at(-1.0, 1.0) + at(-1.0, -1.0)) * (0.25 / (h * h))
}

/// Central-difference gradient.
pub fn gradient(f: &dyn Fn(&Point) -> Quaternion, p: &Point, h: f64) -> Result<[Quaternion; 7]> {
    check_step(p, h)?;
    let g: [Quaternion; 7] = std::array::from_fn(|j| directional(f, p, &unit(j), h));
    for q in &g {
        finite(*q, "gradient")?;
    }
    Ok(g)
}

/// `V f (p) = Σ_j v_j(p) ∂_j f(p)`, coefficients multiplying from the left.
pub fn apply<S: Coefficient>(
    v: &VectorField<S>,
    f: &dyn Fn(&Point) -> Quaternion,
    p: &Point,
    h: f64,
) -> Result<Quaternion> {
    check_step(p, h)?;
    let c = v.at(p);
    let mut acc = Quaternion::ZERO;
    for (j, &cj) in c.iter().enumerate() {
        if cj != S::zero() {
            acc += cj.into() * directional(f, p, &unit(j), h);
        }
    }
    finite(acc, "vector field application")
}

/// `V f (p)` from an analytic gradient.
pub fn apply_with_gradient<S: Coefficient>(
    v: &VectorField<S>,
    grad: &[Quaternion; 7],
    p: &Point,
) -> Quaternion {
    v.at(p).iter().zip(grad).map(|(&c, &g)| c.into() * g).sum()
}

/// `V² f (p)` for a real field: the second difference along `V(p)` plus the
/// first-order drift `Σ_j (V v_j)(p) ∂_j f`. The drift is zero for the `X_l`,
/// whose integral curves are straight lines.
pub fn apply_squared(
    v: &AffineVectorField,
    f: &dyn Fn(&Point) -> Quaternion,
    p: &Point,
    h: f64,
) -> Result<Quaternion> {
    check_step(p, h)?;
    let d = v.at(p);
    let len = d.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut acc = Quaternion::ZERO;
    if len > 0.0 {
        let s = h / len;
        acc += second(f, p, &d, s);
    }
    for j in 0..7 {
        let drift: f64 = (0..4).map(|i| d[i] * v.coeffs[j].linear[i]).sum();
        if drift != 0.0 {
            acc += directional(f, p, &unit(j), h) * drift;
        }
    }
    finite(acc, "squared vector field")
}

/// Which of the two equal expressions of `Δ_λ` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaForm {
    /// `Σ X_l² + 4 Σ i_k λ_k ∂t_k`.
    SumOfSquares,
    /// `Σ ∂²x_l + 4|x|² Σ ∂²t_k + 4 Σ_k (x i_k)·∇ₓ ∂t_k + 4 Σ i_k λ_k ∂t_k`.
    Coordinates,
}

/// `Δ_λ f (p)` by second-order central stencils.
pub fn delta_lambda_apply(
    f: &dyn Fn(&Point) -> Quaternion,
    p: &Point,
    lambda: [f64; 3],
    h: f64,
    form: DeltaForm,
) -> Result<Quaternion> {
    check_step(p, h)?;
    let mut acc = Quaternion::ZERO;
    match form {
        DeltaForm::SumOfSquares => {
            for l in 0..4 {
                acc += apply_squared(&make_x(l)?, f, p, h)?;
            }
        }
        DeltaForm::Coordinates => {
            let x = Quaternion::new(p[0], p[1], p[2], p[3]);
            for l in 0..4 {
                acc += second(f, p, &unit(l), h);
            }
            let x2 = x.norm_sqr();
            for k in 0..3 {
                acc += second(f, p, &unit(4 + k), h) * (4.0 * x2);
                let u = (x * UNITS[k]).to_array();
                let a = [u[0], u[1], u[2], u[3], 0.0, 0.0, 0.0];
                acc += mixed(f, p, &a, &unit(4 + k), h) * 4.0;
            }
        }
    }
    for k in 0..3 {
        if lambda[k] != 0.0 {
            acc += UNITS[k] * directional(f, p, &unit(4 + k), h) * (4.0 * lambda[k]);
        }
    }
    finite(acc, "Δ_λ")
}

/// `|−H H̄ f + ¼(Σ X_l² f + 8 Σ i_k ∂t_k f)|` at `p`.
pub fn box_b_identity_residual(
    f: &dyn Fn(&Point) -> Quaternion,
    p: &Point,
    h: f64,
) -> Result<f64> {
    check_step(p, h)?;
    let (hb, hh) = (h_bar(), self::h());
    let inner = |q: &Point| apply(&hb, f, q, h).unwrap_or(Quaternion::new(f64::NAN, 0.0, 0.0, 0.0));
    let lhs = -apply(&hh, &inner, p, h)?;
    let mut sum = Quaternion::ZERO;
    for l in 0..4 {
        sum += apply_squared(&make_x(l)?, f, p, h)?;
    }
    for k in 0..3 {
        sum += UNITS[k] * directional(f, p, &unit(4 + k), h) * 8.0;
    }
    let rhs = sum * -0.25;
    Ok(finite(lhs - rhs, "□_b identity")?.norm())
}

/// `½(∂₀ + Σ i_m ∂_m) f` at `q`, derivatives on the right of the units.
pub fn fueter_dbar(f: &dyn Fn(Quaternion) -> Quaternion, q: Quaternion, h: f64) -> Result<Quaternion> {
    check_step(&q.to_array(), h)?;
    let d = |m: usize| {
        let mut e = [0.0; 4];
        e[m] = h;
        let e = Quaternion::from_array(e);
        (f(q + e) - f(q - e)) * (0.5 / h)
    };
    let out = (d(0) + Quaternion::I1 * d(1) + Quaternion::I2 * d(2) + Quaternion::I3 * d(3)) * 0.5;
    finite(out, "Cauchy–Riemann–Fueter operator")
}

/// `∂̄` in the variable `q₁` (`slot = 0`) or `q₂` (`slot = 1`) of a function on `H²`.
pub fn siegel_dbar(
    f: &dyn Fn(&SiegelPoint) -> Quaternion,
    p: &SiegelPoint,
    slot: usize,
    h: f64,
) -> Result<Quaternion> {
    let g = |q: Quaternion| {
        let mut s = *p;
        if slot == 0 {
            s.q1 = q;
        } else {
            s.q2 = q;
        }
        f(&s)
    };
    let at = if slot == 0 { p.q1 } else { p.q2 };
    fueter_dbar(&g, at, h)
}

/// `|∂̄_{q₁} r + 2 q₁ ∂̄_{q₂} r|` for the height function `r` at a boundary point.
pub fn crf_tangency_residual(p: &SiegelPoint) -> Result<f64> {
    if !p.is_boundary() {
        return Err(Error::OffBoundary { height: p.height() });
    }
    let r = |s: &SiegelPoint| Quaternion::real(s.height());
    let step = default_step(&[p.q1.to_array(), p.q2.to_array()].concat());
    let d1 = siegel_dbar(&r, p, 0, step)?;
    let d2 = siegel_dbar(&r, p, 1, step)?;
    Ok((d1 + p.q1 * d2 * 2.0).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(f: impl Fn(&Point) -> f64) -> impl Fn(&Point) -> Quaternion {
        move |p| Quaternion::real(f(p))
    }

    #[test]
    fn x0_on_t1() {
        let mut p = [0.0; 7];
        p[1] = 3.0;
        let f = real(|p| p[4]);
        let v = apply(&make_x(0).unwrap(), &f, &p, 1e-4).unwrap();
        assert!((v - Quaternion::real(-6.0)).norm() < 1e-9);
    }

    #[test]
    fn partial_x0_of_square() {
        let mut p = [0.0; 7];
        p[0] = 2.0;
        let f = real(|p| p[0] * p[0]);
        let v = apply(&AffineVectorField::partial(0, 1.0), &f, &p, 1e-4).unwrap();
        assert!((v.re() - 4.0).abs() < 1e-8);
    }

    #[test]
    fn step_underflow() {
        let f = real(|p| p[0]);
        let v = make_x(0).unwrap();
        assert_eq!(apply(&v, &f, &[0.0; 7], 0.0), Err(Error::StepUnderflow(0.0)));
        assert!(apply(&v, &f, &[1e6; 7], 1e-12).is_err());
    }

    #[test]
    fn delta_examples() {
        let p = [0.4, -0.3, 1.1, 0.2, 0.5, -0.7, 0.9];
        for form in [DeltaForm::SumOfSquares, DeltaForm::Coordinates] {
            let f = real(|p| p[0] * p[0]);
            let v = delta_lambda_apply(&f, &p, [0.0; 3], 1e-3, form).unwrap();
            assert!((v - Quaternion::real(2.0)).norm() < 1e-6, "{form:?}");

            let f = real(|p| p[4]);
            let lambda = [0.7, -0.2, 1.3];
            let v = delta_lambda_apply(&f, &p, lambda, 1e-3, form).unwrap();
            assert!((v - Quaternion::I1 * (4.0 * lambda[0])).norm() < 1e-8, "{form:?}");

            let f = real(|p| p[..4].iter().map(|x| x * x).sum());
            let v = delta_lambda_apply(&f, &p, [0.0; 3], 1e-3, form).unwrap();
            assert!((v - Quaternion::real(8.0)).norm() < 1e-6, "{form:?}");
        }
    }

    #[test]
    fn box_b_on_constant() {
        let f = |_: &Point| Quaternion::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(box_b_identity_residual(&f, &[0.5; 7], 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn tangency_examples() {
        assert!(crf_tangency_residual(&SiegelPoint::ORIGIN).unwrap() < 1e-12);
        let p = SiegelPoint::new(Quaternion::I1, Quaternion::new(1.0, 0.0, 1.0, 0.0));
        assert!(crf_tangency_residual(&p).unwrap() < 1e-8);
        assert!(crf_tangency_residual(&SiegelPoint::E).is_err());
    }
}
