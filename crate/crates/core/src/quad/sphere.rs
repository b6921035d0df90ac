use std::f64::consts::PI;

use super::rules::gauss_legendre;
use super::{Estimate, KahanSum, QuadValue, QuadratureSpec};

/// A point on the unit sphere `S²` with its tensor-rule weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereNode {
    pub n: [f64; 3],
    pub weight: f64,
}

/// Product rule on `S²`: Gauss–Legendre in `z = cos θ` with `order` nodes and
/// the trapezoid rule in the azimuth with `2·order` nodes. Weights sum to `4π`.
pub fn sphere2_nodes(order: usize) -> Vec<SphereNode> {
    let (z, wz) = gauss_legendre(order);
    let n_phi = 2 * order;
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(order * n_phi);
    for (&z, &wz) in z.iter().zip(&wz) {
        let s = (1.0 - z * z).max(0.0).sqrt();
        for j in 0..n_phi {
            // Offset by half a step so no node sits on the seam phi = 0.
            let phi = (j as f64 + 0.5) * dphi;
            let (sp, cp) = phi.sin_cos();
            nodes.push(SphereNode {
                n: [s * cp, s * sp, z],
                weight: wz * dphi,
            });
        }
    }
    nodes
}

/// Surface integral over `S²` against `dσ`.
///
/// The error estimate is the difference from the same rule at half the order.
pub fn integrate_sphere2<V, F>(f: F, spec: &QuadratureSpec) -> Estimate<V>
where
    V: QuadValue,
    F: Fn([f64; 3]) -> V,
{
    let order = spec.sphere_order.max(2);
    let apply = |order: usize| -> V {
        sphere2_nodes(order)
            .iter()
            .map(|node| f(node.n) * node.weight)
            .collect::<KahanSum<V>>()
            .total()
    };
    let fine = apply(order);
    let coarse = apply((order / 2).max(1));
    let evaluations = 2 * order * order + 2 * (order / 2).max(1).pow(2);
    Estimate {
        value: fine,
        error: (fine - coarse).norm(),
        evaluations,
        subdivisions: 0,
        converged: true,
        failed_level: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_area() {
        let total: f64 = sphere2_nodes(8).iter().map(|n| n.weight).sum();
        assert!((total - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn low_moments() {
        let spec = QuadratureSpec::default().with_sphere_order(16);
        let one = integrate_sphere2(|_| 1.0, &spec);
        assert!((one.value - 4.0 * PI).abs() < 1e-12);
        let odd = integrate_sphere2(|n| n[0], &spec);
        assert!(odd.value.abs() < 1e-13);
        for k in 0..3 {
            let sq = integrate_sphere2(|n| n[k] * n[k], &spec);
            assert!((sq.value - 4.0 * PI / 3.0).abs() < 1e-12, "axis {k}");
        }
    }
}
