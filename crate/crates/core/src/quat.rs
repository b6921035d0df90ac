//! Real quaternions `t + a i₁ + b i₂ + c i₃` and their 4×4 real matrix form.
//!
//! Components are always stored and serialized in `(real, i₁, i₂, i₃)` order.
//! Every other module addresses quaternion components through this order, and
//! JSON output writes a quaternion as the array `[t, a, b, c]`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I1: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const I2: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const I3: Self = Self::new(0.0, 0.0, 0.0, 1.0);
    /// `[1, i₁, i₂, i₃]`, the standard real basis.
    pub const BASIS: [Self; 4] = [Self::ONE, Self::I1, Self::I2, Self::I3];
    /// The imaginary units alone, so that `UNITS[k-1] = i_k`.
    pub const UNITS: [Self; 3] = [Self::I1, Self::I2, Self::I3];

    pub const fn new(t: f64, a: f64, b: f64, c: f64) -> Self {
        Self { t, a, b, c }
    }

    pub const fn real(t: f64) -> Self {
        Self::new(t, 0.0, 0.0, 0.0)
    }

    /// The pure imaginary quaternion `v₁i₁ + v₂i₂ + v₃i₃`.
    pub const fn imag(v: [f64; 3]) -> Self {
        Self::new(0.0, v[0], v[1], v[2])
    }

    pub const fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.t, self.a, self.b, self.c]
    }

    /// `Re q`.
    pub const fn re(self) -> f64 {
        self.t
    }

    /// `(Im₁ q, Im₂ q, Im₃ q)`.
    pub const fn im(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// `Im_k q` for `k ∈ {1, 2, 3}`.
    pub fn im_k(self, k: usize) -> f64 {
        match k {
            1 => self.a,
            2 => self.b,
            3 => self.c,
            _ => panic!("imaginary index {k} out of range 1..=3"),
        }
    }

    pub fn conj(self) -> Self {
        Self::new(self.t, -self.a, -self.b, -self.c)
    }

    pub fn norm_sqr(self) -> f64 {
        self.t * self.t + self.a * self.a + self.b * self.b + self.c * self.c
    }

    pub fn norm(self) -> f64 {
        // hypot-style scaling keeps |q| finite for components near f64::MAX.
        let m = self.max_abs();
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        let s = self * (1.0 / m);
        m * s.norm_sqr().sqrt()
    }

    pub fn imag_norm(self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c).sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.t.abs().max(self.a.abs()).max(self.b.abs()).max(self.c.abs())
    }

    pub fn is_finite(self) -> bool {
        self.t.is_finite() && self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() / n2)
    }

    /// `(q̄, |q|, q⁻¹)`.
    pub fn conj_norm_inv(self) -> Result<(Self, f64, Self)> {
        Ok((self.conj(), self.norm(), self.inverse()?))
    }

    /// `⟨q, h⟩ = Re(q h̄) = ts + ax + by + cz`.
    pub fn scalar_product(self, h: Self) -> f64 {
        self.t * h.t + self.a * h.a + self.b * h.b + self.c * h.c
    }

    /// Left-multiplication matrix: `to_matrix(q) · vec(h) = vec(q h)`.
    pub fn to_matrix(self) -> QuatMatrix {
        let Self { t, a, b, c } = self;
        QuatMatrix {
            m: [
                [t, -a, -b, -c],
                [a, t, -c, b],
                [b, c, t, -a],
                [c, -b, a, t],
            ],
        }
    }

    /// `exp(v₁i₁ + v₂i₂ + v₃i₃) = cos|v| + (v/|v|) sin|v|`.
    pub fn exp_imag(v: [f64; 3]) -> Self {
        let theta = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if theta == 0.0 {
            return Self::ONE;
        }
        // sin θ / θ is evaluated directly; θ = 0 is excluded above.
        let s = theta.sin() / theta;
        Self::new(theta.cos(), v[0] * s, v[1] * s, v[2] * s)
    }

    /// Principal real power `q^p`.
    ///
    /// Every quaternion lies in the commutative plane spanned by `1` and the
    /// unit `Im q / |Im q|`; the power is taken there as a complex power with
    /// argument in `(-π, π]`. A negative real base only admits integer
    /// exponents because the plane is not determined.
    pub fn real_power(self, p: f64) -> Result<Self> {
        let rho = self.norm();
        if rho == 0.0 {
            return Err(Error::ZeroBase { exponent: p });
        }
        let v = self.imag_norm();
        if v == 0.0 {
            if self.t > 0.0 {
                return Ok(Self::real(self.t.powf(p)));
            }
            if p.fract() != 0.0 {
                return Err(Error::BranchCut {
                    base: self.t,
                    exponent: p,
                });
            }
            return Ok(Self::real(self.t.powi(p as i32)));
        }
        let theta = v.atan2(self.t);
        let mag = rho.powf(p);
        let (s, c) = (p * theta).sin_cos();
        let k = mag * s / v;
        Ok(Self::new(mag * c, self.a * k, self.b * k, self.c * k))
    }

    /// Integer power by repeated squaring (negative exponents go through the inverse).
    pub fn powi(self, n: i32) -> Result<Self> {
        let mut base = if n < 0 { self.inverse()? } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        Ok(acc)
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(v: [f64; 4]) -> Self {
        Self::from_array(v)
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(t: f64) -> Self {
        Self::real(t)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i₁ {:+}i₂ {:+}i₃", self.t, self.a, self.b, self.c)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, h: Self) -> Self {
        Self::new(self.t + h.t, self.a + h.a, self.b + h.b, self.c + h.c)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, h: Self) -> Self {
        Self::new(self.t - h.t, self.a - h.a, self.b - h.b, self.c - h.c)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.t, -self.a, -self.b, -self.c)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, h: Self) {
        *self = *self + h;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, h: Self) {
        *self = *self - h;
    }
}

/// Grassmann product `(ts − u·v) + (t v + s u + u × v)`.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, h: Self) -> Self {
        let (t, a, b, c) = (self.t, self.a, self.b, self.c);
        let (s, x, y, z) = (h.t, h.a, h.b, h.c);
        Self::new(
            t * s - a * x - b * y - c * z,
            t * x + s * a + b * z - c * y,
            t * y + s * b + c * x - a * z,
            t * z + s * c + a * y - b * x,
        )
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, h: Self) {
        *self = *self * h;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.t * s, self.a * s, self.b * s, self.c * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.t / s, self.a / s, self.b / s, self.c / s)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

/// A real 4×4 matrix, used for the left-multiplication representation of `H`
/// and for rotations of the horizontal variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuatMatrix {
    pub m: [[f64; 4]; 4],
}

impl QuatMatrix {
    pub const IDENTITY: Self = Self {
        m: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    };

    pub fn transpose(&self) -> Self {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in self.m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out[j][i] = v;
            }
        }
        Self { m: out }
    }

    pub fn apply(&self, q: Quaternion) -> Quaternion {
        let v = q.to_array();
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(&self.m) {
            *o = row.iter().zip(&v).map(|(r, x)| r * x).sum();
        }
        Quaternion::from_array(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.m;
        out.iter_mut().flatten().for_each(|v| *v *= s);
        Self { m: out }
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let mut a = self.m;
        let mut det = 1.0;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..4 {
                let f = a[row][col] / a[col][col];
                for k in col..4 {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
        det
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `max |RᵀR − I|`, zero for an orthogonal matrix.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.transpose() * *self).max_abs_diff(&Self::IDENTITY)
    }
}

impl Mul for QuatMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        Self { m: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(p: Quaternion, q: Quaternion, tol: f64) -> bool {
        (p - q).max_abs() <= tol
    }

    #[test]
    fn multiplication_table() {
        use Quaternion as Q;
        let minus_one = Q::real(-1.0);
        let table = [
            [minus_one, Q::I3, -Q::I2],
            [-Q::I3, minus_one, Q::I1],
            [Q::I2, -Q::I1, minus_one],
        ];
        for (row, expected_row) in table.iter().enumerate() {
            for (col, expected) in expected_row.iter().enumerate() {
                assert_eq!(Q::UNITS[row] * Q::UNITS[col], *expected);
            }
        }
        assert_eq!(Q::I1 * Q::I2 * Q::I3, minus_one);
    }

    #[test]
    fn mul_examples() {
        let q = Quaternion::new(0.3, -1.2, 2.5, 4.0);
        assert_eq!(q * Quaternion::ONE, q);
        let lhs = (Quaternion::ONE + Quaternion::I1) * (Quaternion::ONE + Quaternion::I2);
        assert_eq!(lhs, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn conj_norm_inv_examples() {
        let (c, n, inv) = Quaternion::new(1.0, 1.0, 0.0, 0.0).conj_norm_inv().unwrap();
        assert_eq!(c, Quaternion::new(1.0, -1.0, 0.0, 0.0));
        assert!((n - 2f64.sqrt()).abs() < 1e-15);
        assert!(close(inv, Quaternion::new(0.5, -0.5, 0.0, 0.0), 1e-15));

        let (c, n, inv) = Quaternion::I2.conj_norm_inv().unwrap();
        assert_eq!((c, n, inv), (-Quaternion::I2, 1.0, -Quaternion::I2));

        let (c, n, inv) = Quaternion::real(2.0).conj_norm_inv().unwrap();
        assert_eq!((c, n, inv), (Quaternion::real(2.0), 2.0, Quaternion::real(0.5)));

        assert_eq!(Quaternion::ZERO.inverse(), Err(Error::ZeroDivisor));
    }

    #[test]
    fn scalar_product_examples() {
        assert_eq!(Quaternion::I1.scalar_product(Quaternion::I1), 1.0);
        let p = Quaternion::ONE + Quaternion::I1;
        let q = Quaternion::ONE + Quaternion::I2;
        assert_eq!(p.scalar_product(q), 1.0);
        assert_eq!(p.scalar_product(q), (p * q.conj()).re());
    }

    #[test]
    fn matrix_examples() {
        assert_eq!(Quaternion::ONE.to_matrix(), QuatMatrix::IDENTITY);
        let i1 = QuatMatrix {
            m: [
                [0.0, -1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, -1.0],
                [0.0, 0.0, 1.0, 0.0],
            ],
        };
        let i2 = QuatMatrix {
            m: [
                [0.0, 0.0, -1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, -1.0, 0.0, 0.0],
            ],
        };
        let i3 = QuatMatrix {
            m: [
                [0.0, 0.0, 0.0, -1.0],
                [0.0, 0.0, -1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
            ],
        };
        assert_eq!(Quaternion::I1.to_matrix(), i1);
        assert_eq!(Quaternion::I2.to_matrix(), i2);
        assert_eq!(Quaternion::I3.to_matrix(), i3);
        let det = Quaternion::new(1.0, 1.0, 1.0, 1.0).to_matrix().det();
        assert!((det - 16.0).abs() < 1e-12);
    }

    #[test]
    fn transpose_is_conjugate_not_negative() {
        let q = Quaternion::new(0.7, -0.2, 1.3, 0.4);
        let m = q.to_matrix();
        assert_eq!(m.transpose(), q.conj().to_matrix());
        assert_ne!(m.transpose(), m.scale(-1.0));
        let inv = q.inverse().unwrap().to_matrix();
        let via_conj = q.conj().to_matrix().scale(1.0 / q.norm_sqr());
        assert!(inv.max_abs_diff(&via_conj) < 1e-15);
    }

    #[test]
    fn exp_imag_examples() {
        assert!(close(Quaternion::exp_imag([PI, 0.0, 0.0]), Quaternion::real(-1.0), 1e-15));
        assert_eq!(Quaternion::exp_imag([0.0; 3]), Quaternion::ONE);
        assert!(close(Quaternion::exp_imag([FRAC_PI_2, 0.0, 0.0]), Quaternion::I1, 1e-15));
        let e = Quaternion::exp_imag([0.3, -2.0, 1.1]);
        assert!((e.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn real_power_examples() {
        let p = Quaternion::I1.real_power(-2.0).unwrap();
        assert!(close(p, Quaternion::real(-1.0), 1e-15));
        let p = Quaternion::real(2.0).real_power(-5.0).unwrap();
        assert!(close(p, Quaternion::real(1.0 / 32.0), 1e-17));
        let p = (Quaternion::ONE + Quaternion::I3).real_power(2.0).unwrap();
        assert!(close(p, Quaternion::I3 * 2.0, 1e-15));
    }

    #[test]
    fn real_power_errors() {
        assert!(matches!(
            Quaternion::ZERO.real_power(-1.0),
            Err(Error::ZeroBase { .. })
        ));
        assert!(matches!(
            Quaternion::real(-2.0).real_power(0.5),
            Err(Error::BranchCut { .. })
        ));
        let p = Quaternion::real(-2.0).real_power(-3.0).unwrap();
        assert_eq!(p, Quaternion::real(-0.125));
    }

    #[test]
    fn half_power_squares_back() {
        let q = Quaternion::new(-0.4, 1.0, -2.0, 0.5);
        let r = q.real_power(0.5).unwrap();
        assert!(close(r * r, q, 1e-14));
        assert!(r.re() > 0.0);
    }

    #[test]
    fn json_is_component_array() {
        let q = Quaternion::new(1.0, 2.0, -3.0, 0.5);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,2.0,-3.0,0.5]");
        assert_eq!(serde_json::from_str::<Quaternion>(&s).unwrap(), q);
    }
}
