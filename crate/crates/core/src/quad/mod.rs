//! Deterministic numerical integration.
//!
//! Every integral in the crate goes through this module so that a single
//! [`QuadratureSpec`] controls accuracy and the evaluation order (and hence the
//! floating-point result) is fixed for a given spec and integrand. Nothing here
//! spawns threads; callers that fan out over nodes must reduce in node order.

mod adaptive;
mod gamma;
mod rules;
mod sphere;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quat::Quaternion;

pub use adaptive::{integrate_1d, integrate_nested};
pub use gamma::{gamma, ln_gamma};
pub use rules::{gauss_hermite, gauss_legendre};
pub use sphere::{integrate_sphere2, sphere2_nodes, SphereNode};

/// How an interval is mapped before a rule is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// Finite intervals only.
    None,
    /// `x = a − ln(1 − s)` on `s ∈ (0, 1)` followed by adaptive Gauss–Kronrod.
    #[default]
    ExpMap,
    /// Double-exponential rules: tanh-sinh, exp-sinh or sinh-sinh by interval kind.
    TanhSinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Gauss–Legendre nodes per angular dimension for sphere rules.
    pub sphere_order: usize,
    pub transform: Transform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-15,
            max_subdivisions: 2000,
            sphere_order: 32,
            transform: Transform::ExpMap,
        }
    }
}

impl QuadratureSpec {
    /// Default for iterated integrals, one notch looser than the 1-D default.
    pub fn nested() -> Self {
        Self {
            rel_tol: 1e-7,
            ..Self::default()
        }
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        Self { abs_tol, ..self }
    }

    pub fn with_sphere_order(self, sphere_order: usize) -> Self {
        Self {
            sphere_order,
            ..self
        }
    }

    pub fn with_transform(self, transform: Transform) -> Self {
        Self { transform, ..self }
    }

    pub fn with_max_subdivisions(self, max_subdivisions: usize) -> Self {
        Self {
            max_subdivisions,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        let ok = self.rel_tol >= 0.0
            && self.abs_tol >= 0.0
            && (self.rel_tol > 0.0 || self.abs_tol > 0.0)
            && self.rel_tol.is_finite()
            && self.abs_tol.is_finite()
            && self.max_subdivisions > 0
            && self.sphere_order >= 2;
        if ok {
            Ok(())
        } else {
            Err(QuadError::InvalidSpec(format!("{self:?}")))
        }
    }

    /// The tolerance a result of magnitude `scale` must meet.
    pub fn tolerance(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Finite(f64, f64),
    /// `[a, ∞)`.
    UpperHalf(f64),
    /// `(-∞, b]`.
    LowerHalf(f64),
    Whole,
}

impl Interval {
    pub fn is_finite(&self) -> bool {
        matches!(self, Interval::Finite(..))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid quadrature spec {0}")]
    InvalidSpec(String),
    #[error("infinite interval {0:?} needs a transform")]
    NeedsTransform(Interval),
    #[error("integrand is not finite at x = {0}")]
    NonFinite(f64),
    #[error("{context}: budget exhausted at level {level} (estimate {value:e}, error {error:e} after {subdivisions} subdivisions)")]
    Budget {
        context: String,
        level: usize,
        value: f64,
        error: f64,
        subdivisions: usize,
    },
}

/// A quadrature result with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
    pub converged: bool,
    /// Nesting level (0 = outermost) that first ran out of budget.
    pub failed_level: Option<usize>,
}

impl<V: QuadValue> Estimate<V> {
    /// Turns a non-converged estimate into a [`QuadError::Budget`].
    pub fn require(self, context: &str) -> Result<Self, QuadError> {
        if self.converged {
            Ok(self)
        } else {
            Err(QuadError::Budget {
                context: context.to_string(),
                level: self.failed_level.unwrap_or(0),
                value: self.value.norm(),
                error: self.error,
                subdivisions: self.subdivisions,
            })
        }
    }

    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> Estimate<W> {
        Estimate {
            value: f(self.value),
            error: self.error,
            evaluations: self.evaluations,
            subdivisions: self.subdivisions,
            converged: self.converged,
            failed_level: self.failed_level,
        }
    }
}

/// Values a rule can integrate: a real vector space with a norm.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool {
        self.norm().is_finite()
    }
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Quaternion {
    fn zero() -> Self {
        Quaternion::ZERO
    }
    fn norm(&self) -> f64 {
        Quaternion::norm(*self)
    }
    fn is_finite(&self) -> bool {
        Quaternion::is_finite(*self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
}

/// Compensated (Kahan) running sum over any [`QuadValue`].
#[derive(Debug, Clone, Copy)]
pub struct KahanSum<V> {
    sum: V,
    compensation: V,
}

impl<V: QuadValue> Default for KahanSum<V> {
    fn default() -> Self {
        Self {
            sum: V::zero(),
            compensation: V::zero(),
        }
    }
}

impl<V: QuadValue> KahanSum<V> {
    pub fn add(&mut self, x: V) {
        let y = x - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn total(&self) -> V {
        self.sum
    }
}

impl<V: QuadValue> FromIterator<V> for KahanSum<V> {
    fn from_iter<I: IntoIterator<Item = V>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}
