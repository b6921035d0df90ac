//! Left-invariant vector fields on `Q`, their brackets, and finite-difference
//! application of the operators built from them.
//!
//! The horizontal fields are
//!
//! ```text
//! X₀ = ∂x₀ − 2x₁∂t₁ − 2x₂∂t₂ − 2x₃∂t₃
//! X₁ = ∂x₁ + 2x₀∂t₁ − 2x₃∂t₂ + 2x₂∂t₃
//! X₂ = ∂x₂ + 2x₃∂t₁ + 2x₀∂t₂ − 2x₁∂t₃
//! X₃ = ∂x₃ − 2x₂∂t₁ + 2x₁∂t₂ + 2x₀∂t₃
//! ```
//!
//! and `H̄ = ½(X₀ + i₁X₁ + i₂X₂ + i₃X₃)`, `H = ½(X₀ − i₁X₁ − i₂X₂ − i₃X₃)`.

mod field;
mod fueter;
mod stencil;

pub use field::{
    Affine, AffineVectorField, Coefficient, QuatVectorField, VectorField, COORDINATE_NAMES,
};
pub use fueter::{cauchy_fueter_sphere, dq_eval, sphere3_nodes, Sphere3Node};
pub use stencil::{
    apply, apply_squared, apply_with_gradient, box_b_identity_residual, crf_tangency_residual,
    default_step, delta_lambda_apply, fueter_dbar, gradient, siegel_dbar, DeltaForm, Point,
};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// `t`-coefficients of `X_l`: row `l`, column `k` holds the coefficient of
/// `∂t_{k+1}` as `(sign, m)` meaning `2·sign·x_m`.
const T_COEFFS: [[(f64, usize); 3]; 4] = [
    [(-1.0, 1), (-1.0, 2), (-1.0, 3)],
    [(1.0, 0), (-1.0, 3), (1.0, 2)],
    [(1.0, 3), (1.0, 0), (-1.0, 1)],
    [(-1.0, 2), (1.0, 1), (1.0, 0)],
];

/// The horizontal field `X_l`, `l ∈ 0..=3`.
pub fn make_x(l: usize) -> Result<AffineVectorField> {
    if l > 3 {
        return Err(Error::FieldIndex(l));
    }
    let mut v = AffineVectorField::partial(l, 1.0);
    for (k, &(sign, m)) in T_COEFFS[l].iter().enumerate() {
        v.coeffs[4 + k].linear[m] = 2.0 * sign;
    }
    Ok(v)
}

fn all_x() -> [AffineVectorField; 4] {
    [0, 1, 2, 3].map(|l| make_x(l).expect("index in range"))
}

/// `H̄ = ½(X₀ + Σ i_l X_l)`.
pub fn h_bar() -> QuatVectorField {
    let x = all_x();
    QuatVectorField::weighted(&[
        (Quaternion::real(0.5), x[0]),
        (Quaternion::I1 * 0.5, x[1]),
        (Quaternion::I2 * 0.5, x[2]),
        (Quaternion::I3 * 0.5, x[3]),
    ])
}

/// `H = ½(X₀ − Σ i_l X_l)`.
pub fn h() -> QuatVectorField {
    let x = all_x();
    QuatVectorField::weighted(&[
        (Quaternion::real(0.5), x[0]),
        (Quaternion::I1 * -0.5, x[1]),
        (Quaternion::I2 * -0.5, x[2]),
        (Quaternion::I3 * -0.5, x[3]),
    ])
}

/// The constant `c` with `[H̄, H] = c Σ i_k ∂t_k`, or `None` if the bracket is
/// not of that shape.
pub fn h_bracket_constant() -> Result<Option<f64>> {
    let bracket = h_bar().commutator(&h())?;
    if !bracket.is_constant() {
        return Ok(None);
    }
    let c = bracket.coeffs[4].constant.im_k(1);
    let expected = [Quaternion::I1, Quaternion::I2, Quaternion::I3]
        .iter()
        .enumerate()
        .fold(QuatVectorField::zero(), |acc, (k, &u)| {
            acc + QuatVectorField::partial(4 + k, u * c)
        });
    Ok((bracket == expected).then_some(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x0_at_ones() {
        let x0 = make_x(0).unwrap();
        let c = x0.at(&[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(c, [1.0, 0.0, 0.0, 0.0, -2.0, -2.0, -2.0]);
    }

    #[test]
    fn x1_t3_coefficient() {
        let x1 = make_x(1).unwrap();
        let c = x1.at(&[0.0, 0.0, 5.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(c[6], 10.0);
    }

    #[test]
    fn fields_at_origin_are_partials() {
        for l in 0..4 {
            let c = make_x(l).unwrap().at(&[0.0; 7]);
            let mut e = [0.0; 7];
            e[l] = 1.0;
            assert_eq!(c, e);
        }
        assert_eq!(make_x(4), Err(Error::FieldIndex(4)));
    }

    #[test]
    fn self_bracket_vanishes() {
        for l in 0..4 {
            let x = make_x(l).unwrap();
            assert!(x.commutator(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn h_bar_central_part_is_w_times_unit() {
        let p = [0.3, -1.2, 0.7, 2.0, 0.0, 0.0, 0.0];
        let w = Quaternion::new(p[0], p[1], p[2], p[3]);
        let c = h_bar().at(&p);
        for (k, u) in [Quaternion::I1, Quaternion::I2, Quaternion::I3].iter().enumerate() {
            assert!((c[4 + k] - w * *u).max_abs() < 1e-15);
        }
        let c = h().at(&p);
        for (k, u) in [Quaternion::I1, Quaternion::I2, Quaternion::I3].iter().enumerate() {
            assert!((c[4 + k] + *u * w.conj()).max_abs() < 1e-15);
        }
    }

    #[test]
    fn quaternion_weights_can_leave_second_order_terms() {
        // [i₁∂x₀, i₂∂x₀] = (i₁i₂ − i₂i₁)∂²x₀ ≠ 0.
        let a = QuatVectorField::partial(0, Quaternion::I1);
        let b = QuatVectorField::partial(0, Quaternion::I2);
        assert!(a.commutator(&b).is_err());
    }
}
