use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Coordinate labels in the order `(x₀, x₁, x₂, x₃, t₁, t₂, t₃)`.
pub const COORDINATE_NAMES: [&str; 7] = ["x0", "x1", "x2", "x3", "t1", "t2", "t3"];

/// Scalars a vector field may carry as coefficients: reals, or quaternions
/// acting by left multiplication.
pub trait Coefficient:
    Copy
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Into<Quaternion>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Coefficient for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Coefficient for Quaternion {
    fn zero() -> Self {
        Quaternion::ZERO
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// `c + Σ x_m l_m`, affine in the horizontal variables only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine<S> {
    pub constant: S,
    pub linear: [S; 4],
}

impl<S: Coefficient> Affine<S> {
    pub fn zero() -> Self {
        Self::constant(S::zero())
    }

    pub fn constant(c: S) -> Self {
        Self {
            constant: c,
            linear: [S::zero(); 4],
        }
    }

    pub fn eval(&self, x: &[f64]) -> S {
        (0..4).fold(self.constant, |acc, m| acc + self.linear[m] * x[m])
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(|&l| l == S::zero())
    }

    fn is_zero(&self) -> bool {
        self.constant == S::zero() && self.is_constant()
    }

    /// `k · self`, with `k` on the left.
    fn left_scale(&self, k: S) -> Self {
        Self {
            constant: k * self.constant,
            linear: self.linear.map(|l| k * l),
        }
    }

    /// `self · k`, with `k` on the right.
    fn right_scale(&self, k: S) -> Self {
        Self {
            constant: self.constant * k,
            linear: self.linear.map(|l| l * k),
        }
    }

    fn magnitude(&self) -> f64 {
        self.linear
            .iter()
            .fold(self.constant.magnitude(), |m, l| m.max(l.magnitude()))
    }
}

impl<S: Coefficient> Add for Affine<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            constant: self.constant + o.constant,
            linear: [0, 1, 2, 3].map(|m| self.linear[m] + o.linear[m]),
        }
    }
}

impl<S: Coefficient> Sub for Affine<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            constant: self.constant - o.constant,
            linear: [0, 1, 2, 3].map(|m| self.linear[m] - o.linear[m]),
        }
    }
}

/// A first-order operator `Σ_j v_j(x) ∂_j` on `R⁷` whose coefficients are
/// affine in `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorField<S> {
    pub coeffs: [Affine<S>; 7],
}

/// Real-coefficient fields such as the `X_l`.
pub type AffineVectorField = VectorField<f64>;

/// Quaternion-coefficient fields such as `H` and `H̄`.
pub type QuatVectorField = VectorField<Quaternion>;

impl<S: Coefficient> VectorField<S> {
    pub fn zero() -> Self {
        Self {
            coeffs: [Affine::zero(); 7],
        }
    }

    /// `c ∂_j`.
    pub fn partial(j: usize, c: S) -> Self {
        let mut v = Self::zero();
        v.coeffs[j] = Affine::constant(c);
        v
    }

    /// Coefficients at a point (only the `x` part of `p` matters).
    pub fn at(&self, p: &[f64; 7]) -> [S; 7] {
        self.coeffs.map(|a| a.eval(&p[..4]))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Affine::is_constant)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Affine::is_zero)
    }

    /// `k · self`.
    pub fn scale(&self, k: S) -> Self {
        Self {
            coeffs: self.coeffs.map(|a| a.left_scale(k)),
        }
    }

    /// The Lie bracket `[self, other] = self∘other − other∘self`.
    ///
    /// For quaternion coefficients the second-order part need not cancel;
    /// that case is reported as an error rather than truncated.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let (w, z) = (&self.coeffs, &other.coeffs);
        // Principal symbol: Σ_{ij} (w_i z_j − z_j w_i) ∂_i∂_j, symmetrised in (i, j).
        let scale = self.magnitude() * other.magnitude();
        for i in 0..7 {
            for j in i..7 {
                let mut sym = product(&w[i], &z[j]).sub(&product(&z[j], &w[i]));
                if i != j {
                    sym = sym.add(&product(&w[j], &z[i])).sub(&product(&z[i], &w[j]));
                }
                if sym.magnitude() > 1e-12 * (1.0 + scale) {
                    return Err(Error::Domain(format!(
                        "commutator has a second-order part in ∂{}∂{}",
                        COORDINATE_NAMES[i], COORDINATE_NAMES[j]
                    )));
                }
            }
        }
        let mut out = Self::zero();
        for (j, slot) in out.coeffs.iter_mut().enumerate() {
            // Σ_i w_i (∂_i z_j) − z_i (∂_i w_j); only x-derivatives are non-zero.
            for i in 0..4 {
                *slot = *slot + w[i].right_scale(z[j].linear[i]) - z[i].right_scale(w[j].linear[i]);
            }
        }
        Ok(out)
    }

    fn magnitude(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, a| m.max(a.magnitude()))
    }
}

impl AffineVectorField {
    pub fn to_quaternion(&self) -> QuatVectorField {
        VectorField {
            coeffs: self.coeffs.map(|a| Affine {
                constant: a.constant.into(),
                linear: a.linear.map(Quaternion::from),
            }),
        }
    }
}

impl QuatVectorField {
    /// `Σ_a A_a V_a` with the quaternion weights on the left.
    pub fn weighted(terms: &[(Quaternion, AffineVectorField)]) -> Self {
        terms.iter().fold(Self::zero(), |acc, (a, v)| acc + v.to_quaternion().scale(*a))
    }
}

impl<S: Coefficient> Add for VectorField<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            coeffs: std::array::from_fn(|j| self.coeffs[j] + o.coeffs[j]),
        }
    }
}

impl<S: Coefficient> Sub for VectorField<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            coeffs: std::array::from_fn(|j| self.coeffs[j] - o.coeffs[j]),
        }
    }
}

impl<S: Coefficient + fmt::Display> fmt::Display for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}", a.constant)?;
            for m in 0..4 {
                if a.linear[m] != S::zero() {
                    write!(f, " + {}·x{m}", a.linear[m])?;
                }
            }
            write!(f, ")∂{}", COORDINATE_NAMES[j])?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A quadratic polynomial in `x` with coefficients in `S`.
struct Quadratic<S> {
    constant: S,
    linear: [S; 4],
    quadratic: [[S; 4]; 4],
}

fn product<S: Coefficient>(a: &Affine<S>, b: &Affine<S>) -> Quadratic<S> {
    Quadratic {
        constant: a.constant * b.constant,
        linear: [0, 1, 2, 3].map(|m| a.constant * b.linear[m] + a.linear[m] * b.constant),
        quadratic: [0, 1, 2, 3].map(|m| [0, 1, 2, 3].map(|n| a.linear[m] * b.linear[n])),
    }
}

impl<S: Coefficient> Quadratic<S> {
    fn zip(&self, o: &Self, op: impl Fn(S, S) -> S) -> Self {
        Self {
            constant: op(self.constant, o.constant),
            linear: [0, 1, 2, 3].map(|m| op(self.linear[m], o.linear[m])),
            quadratic: [0, 1, 2, 3]
                .map(|m| [0, 1, 2, 3].map(|n| op(self.quadratic[m][n], o.quadratic[m][n]))),
        }
    }

    fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    /// Largest coefficient of the polynomial, with `x_m x_n` and `x_n x_m` merged.
    fn magnitude(&self) -> f64 {
        let mut m = self.constant.magnitude();
        for a in 0..4 {
            m = m.max(self.linear[a].magnitude());
            for b in a..4 {
                let c = if a == b {
                    self.quadratic[a][a]
                } else {
                    self.quadratic[a][b] + self.quadratic[b][a]
                };
                m = m.max(c.magnitude());
            }
        }
        m
    }
}
