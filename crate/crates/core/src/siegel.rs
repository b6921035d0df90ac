//! The Siegel upper half-space `U = {(q₁, q₂) ∈ H² : Re q₂ > |q₁|²}`, its
//! Cayley transform from the unit ball, and the action of `Q` on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::quad::{gauss_hermite, KahanSum};
use crate::quat::{QuatMatrix, Quaternion};

/// Relative tolerance on `|height|` for a point to count as a boundary point.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;
const POLE_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SiegelPoint {
    pub q1: Quaternion,
    pub q2: Quaternion,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BallPoint {
    pub h1: Quaternion,
    pub h2: Quaternion,
}

impl BallPoint {
    pub const fn new(h1: Quaternion, h2: Quaternion) -> Self {
        Self { h1, h2 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.h1.norm_sqr() + self.h2.norm_sqr()
    }
}

impl SiegelPoint {
    /// The point `e = (0, 1)`.
    pub const E: Self = Self {
        q1: Quaternion::ZERO,
        q2: Quaternion::ONE,
    };
    pub const ORIGIN: Self = Self {
        q1: Quaternion::ZERO,
        q2: Quaternion::ZERO,
    };

    pub const fn new(q1: Quaternion, q2: Quaternion) -> Self {
        Self { q1, q2 }
    }

    /// `r(q) = Re q₂ − |q₁|²`: positive inside, zero on the boundary.
    pub fn height(&self) -> f64 {
        self.q2.re() - self.q1.norm_sqr()
    }

    pub fn is_interior(&self) -> bool {
        self.height() > 0.0
    }

    pub fn is_boundary(&self) -> bool {
        self.height().abs() <= BOUNDARY_TOLERANCE * (1.0 + self.q2.norm())
    }

    /// `(q₁, q₂) ↦ (δ q₁, δ² q₂)`.
    pub fn dilate(&self, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::NonPositiveDilation(delta));
        }
        Ok(Self::new(self.q1 * delta, self.q2 * (delta * delta)))
    }

    /// `(q₁, q₂) ↦ (q₁, q₂ + ε)`, the vertical translate.
    pub fn lift(&self, eps: f64) -> Self {
        Self::new(self.q1, self.q2 + Quaternion::real(eps))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.q1 - other.q1).max_abs().max((self.q2 - other.q2).max_abs())
    }
}

/// Ball → Siegel: `q₁ = h₁(1 + h₂)⁻¹`, `q₂ = (1 − h₂)(1 + h₂)⁻¹`.
pub fn cayley_to_siegel(b: &BallPoint) -> Result<SiegelPoint> {
    let denom = Quaternion::ONE + b.h2;
    let modulus = denom.norm();
    if modulus <= POLE_TOLERANCE {
        return Err(Error::CayleyPole {
            which: "h₂",
            modulus,
        });
    }
    let inv = denom.inverse()?;
    Ok(SiegelPoint::new(
        b.h1 * inv,
        (Quaternion::ONE - b.h2) * inv,
    ))
}

/// Siegel → ball: `h₂ = (1 + q₂)⁻¹(1 − q₂)`, `h₁ = q₁(1 + h₂)`.
pub fn cayley_to_ball(p: &SiegelPoint) -> Result<BallPoint> {
    let denom = Quaternion::ONE + p.q2;
    let modulus = denom.norm();
    if modulus <= POLE_TOLERANCE {
        return Err(Error::CayleyPole {
            which: "q₂",
            modulus,
        });
    }
    let h2 = denom.inverse()? * (Quaternion::ONE - p.q2);
    Ok(BallPoint::new(p.q1 * (Quaternion::ONE + h2), h2))
}

/// The affine map attached to `[w, t]`:
/// `(q₁, q₂) ↦ (q₁ + w, q₂ + |w|² + 2 w̄ q₁ + i·t)`.
pub fn act(g: &GroupElement, p: &SiegelPoint) -> SiegelPoint {
    let shift = Quaternion::real(g.w.norm_sqr()) + g.w.conj() * p.q1 * 2.0 + Quaternion::imag(g.t);
    SiegelPoint::new(p.q1 + g.w, p.q2 + shift)
}

/// The boundary point `(w, |w|² + i·t)` identified with `[w, t]`.
pub fn boundary_point(w: Quaternion, t: [f64; 3]) -> SiegelPoint {
    SiegelPoint::new(w, Quaternion::real(w.norm_sqr()) + Quaternion::imag(t))
}

/// Group coordinates `(q₁, Im q₂)` of a boundary point.
pub fn boundary_coords(p: &SiegelPoint) -> Result<(Quaternion, [f64; 3])> {
    if !p.is_boundary() {
        return Err(Error::OffBoundary { height: p.height() });
    }
    Ok((p.q1, p.q2.im()))
}

/// `(q₁, q₂) ↦ (R q₁, q₂)` for an orthogonal `R` acting on `H ≅ R⁴`.
pub fn rotate(r: &QuatMatrix, p: &SiegelPoint) -> Result<SiegelPoint> {
    let deviation = r.orthogonality_defect();
    if deviation > ORTHOGONALITY_TOLERANCE {
        return Err(Error::NotOrthogonal { deviation });
    }
    Ok(SiegelPoint::new(r.apply(p.q1), p.q2))
}

/// `∫_{∂U} F dβ` with `dβ = dw dt` under [`boundary_coords`], by a product
/// Gauss–Hermite rule with `order` nodes per coordinate.
///
/// Exact for `F = e^{-|w|²-|t|²}·(polynomial)` of low degree and accurate for
/// smooth integrands with comparable Gaussian decay. Cost is `order⁷`
/// evaluations; the four horizontal coordinates are spread across threads
/// and summed back in node order.
pub fn boundary_integral(f: &(dyn Fn(&SiegelPoint) -> f64 + Sync), order: usize) -> f64 {
    use rayon::prelude::*;

    let (x, w) = gauss_hermite(order);
    // Integrate g(y) = e^{-y²} · (e^{y²} g(y)) coordinate-wise.
    let weights: Vec<f64> = x.iter().zip(&w).map(|(x, w)| w * (x * x).exp()).collect();
    let n = x.len();
    let horizontal: Vec<[usize; 4]> = (0..n.pow(4))
        .map(|k| [k % n, (k / n) % n, (k / n / n) % n, k / n / n / n])
        .collect();
    let partial: Vec<f64> = horizontal
        .par_iter()
        .map(|idx| {
            let wq = Quaternion::new(x[idx[0]], x[idx[1]], x[idx[2]], x[idx[3]]);
            let ww: f64 = idx.iter().map(|&i| weights[i]).product();
            let mut acc = KahanSum::default();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let p = boundary_point(wq, [x[i], x[j], x[k]]);
                        acc.add(weights[i] * weights[j] * weights[k] * f(&p));
                    }
                }
            }
            ww * acc.total()
        })
        .collect();
    partial.into_iter().collect::<KahanSum<f64>>().total()
}
