//! The Cauchy–Szegő kernel `S(q, ω) = k r(q, ω)⁻⁵` of the Siegel half-space
//! and its convolution kernel `K_ε` on `Q`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, AREA_S2, AREA_S3};
use crate::quad::{integrate_1d, integrate_nested, Estimate, Interval, QuadratureSpec, Transform};
use crate::quat::Quaternion;
use crate::siegel::{boundary_point, SiegelPoint};

/// `k = 3/(8π⁴)`.
pub const K: f64 = 3.0 / (8.0 * PI * PI * PI * PI);

/// The convolution-kernel constant as printed alongside `K_ε`, half of `2⁵k`.
pub const PRINTED_C: f64 = 6.0 / (PI * PI * PI * PI);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SzegoConstants {
    pub k: f64,
    /// Constant in `K_ε(h) = c (|w|² + ε + i·t)⁻⁵`.
    pub c_kernel: f64,
}

impl Default for SzegoConstants {
    /// `k = 3/(8π⁴)` and `c = 2⁵k = 12/π⁴`, so that `K_ε(h) = S(h(0) + εe, 0)`.
    fn default() -> Self {
        Self {
            k: K,
            c_kernel: 32.0 * K,
        }
    }
}

/// `r(q, ω) = (q₂ + ω̄₂)/2 − ω̄₁ q₁`.
pub fn r_pair(q: &SiegelPoint, omega: &SiegelPoint) -> Quaternion {
    (q.q2 + omega.q2.conj()) * 0.5 - omega.q1.conj() * q.q1
}

/// `S(q, ω) = k r(q, ω)⁻⁵`.
pub fn szego_kernel(q: &SiegelPoint, omega: &SiegelPoint, consts: &SzegoConstants) -> Result<Quaternion> {
    let r = r_pair(q, omega);
    if r.norm() == 0.0 {
        return Err(Error::Pole("r(q, ω) = 0"));
    }
    Ok(r.real_power(-5.0)? * consts.k)
}

/// `K_ε([w, t]) = c (|w|² + ε + i·t)⁻⁵`.
pub fn k_eps(g: &GroupElement, eps: f64, consts: &SzegoConstants) -> Result<Quaternion> {
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!("ε must be non-negative, got {eps}")));
    }
    let base = Quaternion::real(g.w.norm_sqr() + eps) + Quaternion::imag(g.t);
    if base.norm() == 0.0 {
        return Err(Error::Pole("K_ε at the identity with ε = 0"));
    }
    Ok(base.real_power(-5.0)? * consts.c_kernel)
}

/// Pieces of the radial computation of `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KVerification {
    /// `1 / (4⁵ α β I)`.
    pub k: f64,
    /// `I = ∫₀^∞∫₀^∞ s² ρ³ (s² + (ρ² + 1)²)⁻⁵ ds dρ`.
    pub inner: Estimate<f64>,
    /// `α β I = ∫_H ∫_{R³} (|t|² + (|w|² + 1)²)⁻⁵ dt dw`.
    pub weighted: f64,
}

/// The radial integrands here decay only algebraically, which the `exp_map`
/// substitution turns into an endpoint singularity; the double-exponential
/// rule handles such tails directly.
fn algebraic_tails(spec: &QuadratureSpec) -> QuadratureSpec {
    spec.with_transform(Transform::TanhSinh)
}

fn density(rho: f64, s: f64) -> f64 {
    let a = rho * rho + 1.0;
    rho.powi(3) * s * s * (s * s + a * a).powi(-5)
}

/// `k⁻¹ = 4⁵ ∫_H ∫_{R³} (|t|² + (|w|² + 1)²)⁻⁵ dt dw`, reduced to the
/// `(|w|, |t|)` quadrant.
pub fn verify_k(spec: &QuadratureSpec) -> Result<KVerification> {
    let spec = &algebraic_tails(spec);
    let inner = integrate_nested(
        &[Interval::UpperHalf(0.0), Interval::UpperHalf(0.0)],
        &|p| density(p[0], p[1]),
        spec,
    )?
    .require("k integral")?;
    let weighted = AREA_S2 * AREA_S3 * inner.value;
    Ok(KVerification {
        k: 1.0 / (1024.0 * weighted),
        inner,
        weighted,
    })
}

/// `γ = ∫₀^∞ r²(r² + 1)⁻⁵ dr` and `δ = ∫₀^∞ ρ³(ρ² + 1)⁻⁷ dρ`.
pub fn gamma_delta(spec: &QuadratureSpec) -> Result<(Estimate<f64>, Estimate<f64>)> {
    let spec = &algebraic_tails(spec);
    let gamma = integrate_1d(|r: f64| r * r * (r * r + 1.0).powi(-5), Interval::UpperHalf(0.0), spec)?
        .require("γ")?;
    let delta = integrate_1d(|p: f64| p.powi(3) * (p * p + 1.0).powi(-7), Interval::UpperHalf(0.0), spec)?
        .require("δ")?;
    Ok((gamma, delta))
}

/// Directions of `t` used to sample the reproducing integrand.
const T_DIRECTIONS: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// `∫_{∂U} S(e, q) F(q) dβ(q)` for `F(q) = (q₂ + 1)⁻⁵`, which reproduces
/// `F(e) = 2⁻⁵`.
///
/// The integrand depends on `w` only through `|w|` and on `t` only through
/// `|t|` and the plane spanned by `1` and `t/|t|`; the quaternion product is
/// evaluated with `t` along each axis in turn and the results averaged.
/// Returns the real part; the imaginary part is reported separately in
/// [`Reproducing::imaginary`].
pub fn verify_reproducing(consts: &SzegoConstants, spec: &QuadratureSpec) -> Result<Reproducing> {
    let spec = &algebraic_tails(spec);
    let f = |q: &SiegelPoint| (q.q2 + Quaternion::ONE).real_power(-5.0);
    let mut value = 0.0;
    let mut error = 0.0_f64;
    let mut imaginary = 0.0_f64;
    let mut min_integrand = f64::INFINITY;
    for dir in T_DIRECTIONS {
        let point = |rho: f64, s: f64| boundary_point(Quaternion::real(rho), dir.map(|d| d * s));
        let eval = |rho: f64, s: f64| -> Quaternion {
            let q = point(rho, s);
            match (szego_kernel(&SiegelPoint::E, &q, consts), f(&q)) {
                (Ok(k), Ok(fq)) => k * fq,
                _ => Quaternion::new(f64::NAN, 0.0, 0.0, 0.0),
            }
        };
        let est = integrate_nested(
            &[Interval::UpperHalf(0.0), Interval::UpperHalf(0.0)],
            &|p| {
                let (rho, s) = (p[0], p[1]);
                rho.powi(3) * s * s * eval(rho, s).re()
            },
            spec,
        )?
        .require("reproducing integral")?;
        value += AREA_S2 * AREA_S3 * est.value / T_DIRECTIONS.len() as f64;
        error = error.max(AREA_S2 * AREA_S3 * est.error);
        for rho in [0.0, 0.3, 1.0, 2.5] {
            for s in [0.0, 0.5, 2.0, 7.0] {
                let v = eval(rho, s);
                imaginary = imaginary.max(v.imag_norm() / v.norm().max(f64::MIN_POSITIVE));
                min_integrand = min_integrand.min(v.re());
            }
        }
    }
    Ok(Reproducing {
        value,
        error,
        imaginary,
        min_integrand,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reproducing {
    pub value: f64,
    pub error: f64,
    /// Largest relative imaginary part of the integrand on a sample grid.
    pub imaginary: f64,
    /// Smallest real part of the integrand on the same grid.
    pub min_integrand: f64,
}
