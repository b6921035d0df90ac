//! The quaternionic H-type group `Q = H × R³`.
//!
//! The product is
//!
//! ```text
//! [w, t] · [ω, s] = [w + ω, t + s − 2 Im(ω̄ w)]
//! ```
//!
//! with neutral element `[0, 0]` and inverse `[−w, −t]`. Dilations act by
//! `(w, t) ↦ (δw, δ²t)` and Haar measure is Lebesgue measure `dw dt` on `R⁷`,
//! which scales by `δ^10` under a dilation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_1d, integrate_nested, Interval, QuadratureSpec, Transform};
use crate::quat::Quaternion;

/// Homogeneous dimension `4 + 2·3` of `Q`.
pub const HOMOGENEOUS_DIMENSION: i32 = 10;

/// Surface area of the unit sphere `S² ⊂ R³`.
pub const AREA_S2: f64 = 4.0 * PI;

/// Surface area of the unit sphere `S³ ⊂ H`.
pub const AREA_S3: f64 = 2.0 * PI * PI;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GroupElement {
    pub w: Quaternion,
    pub t: [f64; 3],
}

impl GroupElement {
    pub const IDENTITY: Self = Self {
        w: Quaternion::ZERO,
        t: [0.0; 3],
    };

    pub const fn new(w: Quaternion, t: [f64; 3]) -> Self {
        Self { w, t }
    }

    /// Group product `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        let shift = (other.w.conj() * self.w).im();
        Self {
            w: self.w + other.w,
            t: [
                self.t[0] + other.t[0] - 2.0 * shift[0],
                self.t[1] + other.t[1] - 2.0 * shift[1],
                self.t[2] + other.t[2] - 2.0 * shift[2],
            ],
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            w: -self.w,
            t: [-self.t[0], -self.t[1], -self.t[2]],
        }
    }

    /// `(w, t) ↦ (δw, δ²t)`.
    pub fn dilate(&self, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::NonPositiveDilation(delta));
        }
        let d2 = delta * delta;
        Ok(Self {
            w: self.w * delta,
            t: [self.t[0] * d2, self.t[1] * d2, self.t[2] * d2],
        })
    }

    /// `‖[w, t]‖ = (|w|² + |t|)^{1/2}`, homogeneous of degree one under dilation.
    pub fn homogeneous_norm(&self) -> f64 {
        (self.w.norm_sqr() + norm3(self.t)).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let dw = (self.w - other.w).max_abs();
        self.t
            .iter()
            .zip(&other.t)
            .map(|(a, b)| (a - b).abs())
            .fold(dw, f64::max)
    }

    /// The seven real coordinates `(x₀, x₁, x₂, x₃, t₁, t₂, t₃)`.
    pub fn coords(&self) -> [f64; 7] {
        let w = self.w.to_array();
        [w[0], w[1], w[2], w[3], self.t[0], self.t[1], self.t[2]]
    }

    pub fn from_coords(p: [f64; 7]) -> Self {
        Self {
            w: Quaternion::new(p[0], p[1], p[2], p[3]),
            t: [p[4], p[5], p[6]],
        }
    }
}

impl std::ops::Mul for GroupElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        GroupElement::mul(&self, &rhs)
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Radial profiles may decay only algebraically; the double-exponential rule
/// copes with those tails as well as with exponential ones.
fn radial_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    spec.with_transform(Transform::TanhSinh)
}

/// `∫_Q F(|w|, |t|) dw dt` for a profile depending only on `|w|` and `|t|`,
/// reduced to `|S³| |S²| ∫∫ ρ³ s² F(ρ, s) ds dρ`.
pub fn haar_integral_radial(
    profile: &dyn Fn(f64, f64) -> f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let spec = &radial_spec(spec);
    let est = integrate_nested(
        &[Interval::UpperHalf(0.0), Interval::UpperHalf(0.0)],
        &|p| {
            let (rho, s) = (p[0], p[1]);
            rho.powi(3) * s * s * profile(rho, s)
        },
        spec,
    )?
    .require("Haar integral")?;
    Ok(AREA_S3 * AREA_S2 * est.value)
}

/// The constant `c` in `∫_Q f(‖h‖) dh = c ∫₀^∞ f(r) r⁹ dr`.
///
/// Both sides are computed by quadrature for the given radial profile, so the
/// ratio is independent of `f` only up to quadrature error.
pub fn polar_constant(f: &dyn Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<f64> {
    let volume = haar_integral_radial(&|rho, s| f((rho * rho + s).sqrt()), spec)?;
    let spec = &radial_spec(spec);
    let radial = integrate_1d(|r: f64| f(r) * r.powi(9), Interval::UpperHalf(0.0), spec)?
        .require("radial moment")?;
    if !(radial.value > 0.0) {
        return Err(Error::Domain("radial profile has no positive ninth moment".into()));
    }
    Ok(volume / radial.value)
}

/// `∫_{ε ≤ ‖h‖ ≤ 1} ‖h‖^{−p} dh`, computed in the `(|w|, |t|)` half-plane.
pub fn norm_power_shell_integral(p: f64, inner: f64, spec: &QuadratureSpec) -> Result<f64> {
    let inner2 = inner * inner;
    let mut failure = None;
    let outer = integrate_1d(
        |rho: f64| {
            let lo = (inner2 - rho * rho).max(0.0);
            let hi = 1.0 - rho * rho;
            if hi <= lo {
                return 0.0;
            }
            let est = integrate_1d(
                |s: f64| s * s * (rho * rho + s).powf(-0.5 * p),
                Interval::Finite(lo, hi),
                spec,
            )
            .and_then(|e| e.require("shell integral (inner)"));
            match est {
                Ok(e) => rho.powi(3) * e.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        Interval::Finite(0.0, 1.0),
        spec,
    )?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(AREA_S3 * AREA_S2 * outer.require("shell integral")?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(t: f64, a: f64, b: f64, c: f64) -> Quaternion {
        Quaternion::new(t, a, b, c)
    }

    #[test]
    fn identity_is_neutral() {
        let g = GroupElement::new(q(0.3, -1.0, 2.0, 0.5), [1.0, -2.0, 0.25]);
        assert_eq!(g * GroupElement::IDENTITY, g);
        assert_eq!(GroupElement::IDENTITY * g, g);
        assert_eq!(g * g.inverse(), GroupElement::IDENTITY);
    }

    #[test]
    fn central_shift_of_imaginary_units() {
        let g = GroupElement::new(Quaternion::I1, [0.0; 3]);
        let h = GroupElement::new(Quaternion::I2, [0.0; 3]);
        let gh = g * h;
        assert_eq!(gh.w, Quaternion::I1 + Quaternion::I2);
        assert_eq!(gh.t, [0.0, 0.0, -2.0]);
    }

    #[test]
    fn center_commutes() {
        let z = GroupElement::new(Quaternion::ZERO, [0.7, -1.5, 3.0]);
        let g = GroupElement::new(q(1.0, 2.0, -0.5, 0.1), [0.2, 0.0, -4.0]);
        assert_eq!(z * g, g * z);
    }

    #[test]
    fn dilation_examples() {
        let g = GroupElement::new(Quaternion::I1, [1.0, 0.0, 0.0]);
        assert_eq!(g.dilate(1.0).unwrap(), g);
        let d = g.dilate(2.0).unwrap();
        assert_eq!(d, GroupElement::new(Quaternion::I1 * 2.0, [4.0, 0.0, 0.0]));
        assert_eq!(g.dilate(0.0), Err(Error::NonPositiveDilation(0.0)));
        assert!(g.dilate(-1.0).is_err());
    }

    #[test]
    fn homogeneous_norm_examples() {
        let a = GroupElement::new(Quaternion::ZERO, [4.0, 0.0, 0.0]);
        assert_eq!(a.homogeneous_norm(), 2.0);
        let b = GroupElement::new(q(1.0, 1.0, 0.0, 0.0), [0.0; 3]);
        assert!((b.homogeneous_norm() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(GroupElement::IDENTITY.homogeneous_norm(), 0.0);
    }

    #[test]
    fn json_shape() {
        let g = GroupElement::new(q(1.0, 0.0, 0.0, 2.0), [0.5, 0.0, -1.0]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"w":[1.0,0.0,0.0,2.0],"t":[0.5,0.0,-1.0]}"#);
    }
}
