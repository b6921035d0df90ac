//! Seeded random inputs for the verification suites.
//!
//! A fixed seed gives the same points on every platform, which keeps reports
//! byte-identical between runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::GroupElement;
use crate::quat::{QuatMatrix, Quaternion};
use crate::siegel::{boundary_point, BallPoint, SiegelPoint};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn vec3(&mut self, bound: f64) -> [f64; 3] {
        [0, 1, 2].map(|_| self.uniform(-bound, bound))
    }

    /// Components uniform in `[-bound, bound)`.
    pub fn quaternion(&mut self, bound: f64) -> Quaternion {
        Quaternion::from_array([0, 1, 2, 3].map(|_| self.uniform(-bound, bound)))
    }

    pub fn group_element(&mut self, bound: f64) -> GroupElement {
        GroupElement::new(self.quaternion(bound), self.vec3(bound))
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u: f64 = 1.0 - self.rng.random::<f64>();
        let v: f64 = self.rng.random::<f64>();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }

    /// Uniform on the unit sphere of `R^N`.
    pub fn sphere<const N: usize>(&mut self) -> [f64; N] {
        loop {
            let v = [(); N].map(|_| self.normal());
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-12 {
                return v.map(|x| x / n);
            }
        }
    }

    pub fn unit_quaternion(&mut self) -> Quaternion {
        Quaternion::from_array(self.sphere::<4>())
    }

    /// A point of the open unit ball of `H²` with `|h| ≤ max_radius < 1`.
    pub fn interior_ball_point(&mut self, max_radius: f64) -> BallPoint {
        let dir = self.sphere::<8>();
        let r = max_radius * self.uniform(0.0, 1.0).powf(1.0 / 8.0);
        BallPoint::new(
            Quaternion::new(dir[0], dir[1], dir[2], dir[3]) * r,
            Quaternion::new(dir[4], dir[5], dir[6], dir[7]) * r,
        )
    }

    /// A point of the unit sphere `|h₁|² + |h₂|² = 1`, kept away from the pole `h₂ = −1`.
    pub fn ball_sphere_point(&mut self) -> BallPoint {
        loop {
            let dir = self.sphere::<8>();
            let b = BallPoint::new(
                Quaternion::new(dir[0], dir[1], dir[2], dir[3]),
                Quaternion::new(dir[4], dir[5], dir[6], dir[7]),
            );
            if (Quaternion::ONE + b.h2).norm() > 1e-2 {
                return b;
            }
        }
    }

    pub fn boundary_point(&mut self, bound: f64) -> SiegelPoint {
        boundary_point(self.quaternion(bound), self.vec3(bound))
    }

    /// A point at height in `(0, bound]` above a random boundary point.
    pub fn interior_point(&mut self, bound: f64) -> SiegelPoint {
        let h = self.uniform(0.05, bound);
        self.boundary_point(bound).lift(h)
    }

    /// A random Householder reflection `I − 2vvᵀ`.
    pub fn householder(&mut self) -> QuatMatrix {
        let v = self.sphere::<4>();
        let mut m = QuatMatrix::IDENTITY.m;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e -= 2.0 * v[i] * v[j];
            }
        }
        QuatMatrix { m }
    }
}
