//! The quaternionic volume form `Dq` and the Cauchy–Fueter integral over a
//! 3-sphere.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::Result;
use crate::group::AREA_S3;
use crate::quad::{gauss_legendre, Estimate, KahanSum, QuadError, QuadratureSpec};
use crate::quat::Quaternion;

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn pick(h: Quaternion, idx: [usize; 3]) -> [f64; 3] {
    let v = h.to_array();
    idx.map(|i| v[i])
}

/// `Dq = dx₁∧dx₂∧dx₃ − i₁ dx₀∧dx₂∧dx₃ − i₂ dx₀∧dx₃∧dx₁ − i₃ dx₀∧dx₁∧dx₂`
/// evaluated on three tangent vectors.
pub fn dq_eval(h2: Quaternion, h3: Quaternion, h4: Quaternion) -> Quaternion {
    let form = |idx| det3(pick(h2, idx), pick(h3, idx), pick(h4, idx));
    Quaternion::new(
        form([1, 2, 3]),
        -form([0, 2, 3]),
        -form([0, 3, 1]),
        -form([0, 1, 2]),
    )
}

/// A node of the product rule on the unit 3-sphere: the point `n` and the
/// weighted, outward-oriented value of `Dq` on the coordinate tangent frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere3Node {
    pub n: Quaternion,
    pub dq: Quaternion,
}

/// Hyperspherical product rule: Gauss–Legendre with `order` nodes in each
/// polar angle, trapezoid with `2·order` nodes in the azimuth.
pub fn sphere3_nodes(order: usize) -> Vec<Sphere3Node> {
    let order = order.max(1);
    let (u, wu) = gauss_legendre(order);
    // Map [-1, 1] to [0, π].
    let polar: Vec<(f64, f64)> = u.iter().zip(&wu).map(|(u, w)| (0.5 * PI * (u + 1.0), 0.5 * PI * w)).collect();
    let n_phi = 2 * order;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(order * order * n_phi);
    for &(chi, wc) in &polar {
        let (sc, cc) = chi.sin_cos();
        for &(theta, wt) in &polar {
            let (st, ct) = theta.sin_cos();
            for j in 0..n_phi {
                let phi = (j as f64 + 0.5) * dphi;
                let (sp, cp) = phi.sin_cos();
                let n = Quaternion::new(cc, sc * ct, sc * st * cp, sc * st * sp);
                let d_chi = Quaternion::new(-sc, cc * ct, cc * st * cp, cc * st * sp);
                let d_theta = Quaternion::new(0.0, -sc * st, sc * ct * cp, sc * ct * sp);
                let d_phi = Quaternion::new(0.0, 0.0, -sc * st * sp, sc * st * cp);
                let dq = dq_eval(d_chi, d_theta, d_phi);
                // ⟨n, Dq(·)⟩ is the oriented volume; flip to the outward orientation.
                let sign = if n.scalar_product(dq) < 0.0 { -1.0 } else { 1.0 };
                nodes.push(Sphere3Node {
                    n,
                    dq: dq * (sign * wc * wt * dphi),
                });
            }
        }
    }
    nodes
}

fn sphere_sum(
    f: &(dyn Fn(Quaternion) -> Quaternion + Sync),
    q0: Quaternion,
    radius: f64,
    order: usize,
) -> Quaternion {
    let nodes = sphere3_nodes(order);
    let r3 = radius.powi(3);
    let parts: Vec<Quaternion> = nodes
        .par_chunks(2 * order.max(1))
        .map(|chunk| {
            chunk
                .iter()
                .map(|node| {
                    let d = node.n * radius;
                    let kernel = d.conj() * (1.0 / d.norm_sqr().powi(2));
                    kernel * (node.dq * r3) * f(q0 + d)
                })
                .collect::<KahanSum<Quaternion>>()
                .total()
        })
        .collect();
    parts.into_iter().collect::<KahanSum<Quaternion>>().total() * (1.0 / AREA_S3)
}

/// `(1/2π²) ∮_{|q−q₀|=R} (q−q₀)⁻¹|q−q₀|⁻² Dq f(q)`.
///
/// The error estimate compares `spec.sphere_order` with half that order.
pub fn cauchy_fueter_sphere(
    f: &(dyn Fn(Quaternion) -> Quaternion + Sync),
    q0: Quaternion,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<Quaternion>> {
    spec.validate()?;
    if !(radius > 0.0) {
        return Err(crate::Error::Domain(format!("sphere radius must be positive, got {radius}")));
    }
    let order = spec.sphere_order;
    let fine = sphere_sum(f, q0, radius, order);
    let coarse = sphere_sum(f, q0, radius, (order / 2).max(1));
    let error = (fine - coarse).norm();
    if !fine.is_finite() {
        return Err(QuadError::NonFinite(radius).into());
    }
    let est = Estimate {
        value: fine,
        error,
        evaluations: 2 * order.pow(3) + 2 * (order / 2).max(1).pow(3),
        subdivisions: 0,
        converged: error <= spec.tolerance(fine.norm()),
        failed_level: None,
    };
    Ok(est.require("Cauchy–Fueter sphere integral")?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_frame() {
        let v = dq_eval(Quaternion::I1, Quaternion::I2, Quaternion::I3);
        assert_eq!(v, Quaternion::ONE);
        let h = Quaternion::new(0.3, 1.0, -2.0, 0.5);
        let k = Quaternion::new(1.0, 0.0, 4.0, -1.0);
        assert_eq!(dq_eval(h, h, k), Quaternion::ZERO);
        assert_eq!(dq_eval(h, k, h), Quaternion::ZERO);
    }

    #[test]
    fn surface_measure() {
        let total: f64 = sphere3_nodes(12).iter().map(|n| n.dq.norm()).sum();
        assert!((total - AREA_S3).abs() < 1e-12);
        // Dq on the sphere points along the outward normal.
        for node in sphere3_nodes(4) {
            let along = node.n * node.dq.norm();
            assert!((node.dq - along).norm() < 1e-12);
        }
    }

    #[test]
    fn constants_are_reproduced() {
        let spec = QuadratureSpec::default().with_sphere_order(16);
        let c = Quaternion::new(1.0, -2.0, 0.5, 3.0);
        let v = cauchy_fueter_sphere(&|_| c, Quaternion::I2, 1.0, &spec).unwrap();
        assert!((v.value - c).norm() < 1e-12);
    }
}
