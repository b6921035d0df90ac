use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};

use super::rules::{GK21_GAUSS_WEIGHTS, GK21_KRONROD_WEIGHTS, GK21_NODES};
use super::{Estimate, Interval, KahanSum, QuadError, QuadValue, QuadratureSpec, Transform};

const MAX_DE_LEVEL: usize = 12;
const DE_T_MAX: f64 = 4.0;

/// Integrates `f` over `interval`.
///
/// Budget exhaustion is not an error here: the best estimate comes back with
/// `converged == false` (use [`Estimate::require`] to make it one). Structural
/// problems such as a non-finite integrand value are errors.
pub fn integrate_1d<V, F>(
    mut f: F,
    interval: Interval,
    spec: &QuadratureSpec,
) -> Result<Estimate<V>, QuadError>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    spec.validate()?;
    match (interval, spec.transform) {
        (Interval::Finite(a, b), Transform::None | Transform::ExpMap) => gk_adaptive(&mut f, a, b, spec),
        (Interval::Finite(a, b), Transform::TanhSinh) => tanh_sinh(&mut f, a, b, spec),
        (_, Transform::None) => Err(QuadError::NeedsTransform(interval)),
        (Interval::UpperHalf(a), Transform::ExpMap) => gk_adaptive(
            &mut |s: f64| {
                let (x, jac) = exp_map(s);
                f(a + x) * jac
            },
            0.0,
            1.0,
            spec,
        ),
        (Interval::LowerHalf(b), Transform::ExpMap) => gk_adaptive(
            &mut |s: f64| {
                let (x, jac) = exp_map(s);
                f(b - x) * jac
            },
            0.0,
            1.0,
            spec,
        ),
        (Interval::Whole, Transform::ExpMap) => gk_adaptive(
            &mut |s: f64| {
                let (x, jac) = exp_map(s);
                (f(x) + f(-x)) * jac
            },
            0.0,
            1.0,
            spec,
        ),
        (Interval::UpperHalf(a), Transform::TanhSinh) => {
            de_rule(&mut f, spec, |t| exp_sinh_node(t, a, 1.0))
        }
        (Interval::LowerHalf(b), Transform::TanhSinh) => {
            de_rule(&mut f, spec, |t| exp_sinh_node(t, b, -1.0))
        }
        (Interval::Whole, Transform::TanhSinh) => de_rule(&mut f, spec, sinh_sinh_node),
    }
}

/// `s ↦ −ln(1 − s)` and its Jacobian `1/(1 − s)`.
fn exp_map(s: f64) -> (f64, f64) {
    (-(-s).ln_1p(), 1.0 / (1.0 - s))
}

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

fn gk21<V: QuadValue>(
    f: &mut dyn FnMut(f64) -> V,
    a: f64,
    b: f64,
) -> Result<Segment<V>, QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<V, QuadError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite(x))
        }
    };
    let f_center = eval(center)?;
    let mut kronrod = f_center * GK21_KRONROD_WEIGHTS[10];
    let mut gauss = V::zero();
    let mut res_abs = f_center.norm() * GK21_KRONROD_WEIGHTS[10];
    let mut samples = [(V::zero(), V::zero()); 10];
    for (j, sample) in samples.iter_mut().enumerate() {
        let dx = half * GK21_NODES[j];
        let lo = eval(center - dx)?;
        let hi = eval(center + dx)?;
        let pair = lo + hi;
        kronrod = kronrod + pair * GK21_KRONROD_WEIGHTS[j];
        if j % 2 == 1 {
            gauss = gauss + pair * GK21_GAUSS_WEIGHTS[j / 2];
        }
        res_abs += (lo.norm() + hi.norm()) * GK21_KRONROD_WEIGHTS[j];
        *sample = (lo, hi);
    }
    let mean = kronrod * 0.5;
    let mut res_asc = (f_center - mean).norm() * GK21_KRONROD_WEIGHTS[10];
    for (j, (lo, hi)) in samples.iter().enumerate() {
        res_asc += ((*lo - mean).norm() + (*hi - mean).norm()) * GK21_KRONROD_WEIGHTS[j];
    }
    let scale = half.abs();
    res_abs *= scale;
    res_asc *= scale;
    let mut error = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error,
    })
}

fn gk_adaptive<V: QuadValue>(
    f: &mut dyn FnMut(f64) -> V,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<V>, QuadError> {
    let mut segments = vec![gk21(f, a, b)?];
    let mut evaluations = 21;
    let total = |segs: &[Segment<V>]| -> (V, f64) {
        let value: KahanSum<V> = segs.iter().map(|s| s.value).collect();
        let error: KahanSum<f64> = segs.iter().map(|s| s.error).collect();
        (value.total(), error.total())
    };
    loop {
        let (value, error) = total(&segments);
        if error <= spec.tolerance(value.norm()) {
            return Ok(finish(value, error, evaluations, segments.len(), true));
        }
        if segments.len() >= spec.max_subdivisions {
            return Ok(finish(value, error, evaluations, segments.len(), false));
        }
        // First maximum wins, so ties resolve by creation order.
        let worst = segments
            .iter()
            .enumerate()
            .fold(0, |best, (i, s)| if s.error > segments[best].error { i } else { best });
        let seg = &segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if !(seg.a < mid && mid < seg.b) {
            return Ok(finish(value, error, evaluations, segments.len(), false));
        }
        let (lo, hi) = (seg.a, seg.b);
        let left = gk21(f, lo, mid)?;
        let right = gk21(f, mid, hi)?;
        evaluations += 42;
        segments[worst] = left;
        segments.push(right);
    }
}

fn finish<V>(value: V, error: f64, evaluations: usize, subdivisions: usize, converged: bool) -> Estimate<V> {
    Estimate {
        value,
        error,
        evaluations,
        subdivisions,
        converged,
        failed_level: (!converged).then_some(0),
    }
}

/// A double-exponential node: abscissa and weight (including `dx/dt`), or
/// `None` when the node collapses onto an endpoint or its weight underflows.
type DeNode = Option<(f64, f64)>;

fn tanh_sinh<V: QuadValue>(
    f: &mut dyn FnMut(f64) -> V,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<V>, QuadError> {
    let half = 0.5 * (b - a);
    de_rule(f, spec, |t| {
        let y = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * y.abs()).exp();
        // Distance to the nearer endpoint in units of `half`: 1 − tanh|y|.
        let d = 2.0 * e / (1.0 + e);
        let w = half * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        let x = if t >= 0.0 { b - half * d } else { a + half * d };
        let inside = if a < b { x > a && x < b } else { x < a && x > b };
        (inside && w != 0.0).then_some((x, w))
    })
}

fn exp_sinh_node(t: f64, origin: f64, direction: f64) -> DeNode {
    let e = (FRAC_PI_2 * t.sinh()).exp();
    let w = FRAC_PI_2 * t.cosh() * e;
    (e > 0.0 && w.is_finite() && w > 0.0).then_some((origin + direction * e, w))
}

fn sinh_sinh_node(t: f64) -> DeNode {
    let y = FRAC_PI_2 * t.sinh();
    let w = FRAC_PI_2 * t.cosh() * y.cosh();
    w.is_finite().then_some((y.sinh(), w))
}

fn de_rule<V: QuadValue>(
    f: &mut dyn FnMut(f64) -> V,
    spec: &QuadratureSpec,
    node: impl Fn(f64) -> DeNode,
) -> Result<Estimate<V>, QuadError> {
    let mut sum = KahanSum::<V>::default();
    let mut evaluations = 0;
    let mut add = |t: f64, sum: &mut KahanSum<V>, evaluations: &mut usize| -> Result<(), QuadError> {
        if let Some((x, w)) = node(t) {
            let v = f(x);
            *evaluations += 1;
            if !v.is_finite() {
                return Err(QuadError::NonFinite(x));
            }
            sum.add(v * w);
        }
        Ok(())
    };
    let coarse = DE_T_MAX as i64;
    for k in -coarse..=coarse {
        add(k as f64, &mut sum, &mut evaluations)?;
    }
    let mut previous = sum.total();
    let mut step = 1.0;
    for level in 1..=MAX_DE_LEVEL {
        step *= 0.5;
        let count = (DE_T_MAX / step) as i64;
        let mut k = -count + if count % 2 == 0 { 1 } else { 0 };
        while k <= count {
            add(k as f64 * step, &mut sum, &mut evaluations)?;
            k += 2;
        }
        let current = sum.total() * step;
        let error = (current - previous).norm();
        if level >= 3 && error <= spec.tolerance(current.norm()) {
            return Ok(Estimate {
                value: current,
                error,
                evaluations,
                subdivisions: level,
                converged: true,
                failed_level: None,
            });
        }
        previous = current;
        if level == MAX_DE_LEVEL {
            return Ok(Estimate {
                value: current,
                error,
                evaluations,
                subdivisions: level,
                converged: false,
                failed_level: Some(0),
            });
        }
    }
    unreachable!("loop returns on the last level")
}

/// Value plus the accumulated error of the inner integrals that produced it.
#[derive(Debug, Clone, Copy)]
struct Tracked {
    value: f64,
    inner_error: f64,
}

impl Add for Tracked {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            inner_error: self.inner_error + o.inner_error,
        }
    }
}

impl Sub for Tracked {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            value: self.value - o.value,
            inner_error: self.inner_error - o.inner_error,
        }
    }
}

impl Mul<f64> for Tracked {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self {
            value: self.value * s,
            inner_error: self.inner_error * s,
        }
    }
}

impl QuadValue for Tracked {
    fn zero() -> Self {
        Self {
            value: 0.0,
            inner_error: 0.0,
        }
    }
    fn norm(&self) -> f64 {
        self.value.abs()
    }
    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.inner_error.is_finite()
    }
}

/// Iterated integral over a product of up to four intervals; `dims[0]` is the outermost.
///
/// The reported error is the outer error plus the integral of the inner
/// errors. If any level runs out of budget the result is flagged
/// non-converged and `failed_level` names the outermost such level.
pub fn integrate_nested(
    dims: &[Interval],
    f: &dyn Fn(&[f64]) -> f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>, QuadError> {
    assert!(
        (1..=4).contains(&dims.len()),
        "nested integration supports 1 to 4 levels, got {}",
        dims.len()
    );
    spec.validate()?;
    nested_level(0, dims, [0.0; 4], f, spec)
}

fn nested_level(
    level: usize,
    dims: &[Interval],
    point: [f64; 4],
    f: &dyn Fn(&[f64]) -> f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<f64>, QuadError> {
    let depth = dims.len();
    if level + 1 == depth {
        let est = integrate_1d(
            |x| {
                let mut p = point;
                p[level] = x;
                f(&p[..depth])
            },
            dims[level],
            spec,
        )?;
        return Ok(Estimate {
            failed_level: est.failed_level.map(|_| level),
            ..est
        });
    }
    let inner_failure: Cell<Option<QuadError>> = Cell::new(None);
    let failed_inner: Cell<Option<usize>> = Cell::new(None);
    let inner_evals = Cell::new(0usize);
    let est = integrate_1d(
        |x| {
            let mut p = point;
            p[level] = x;
            match nested_level(level + 1, dims, p, f, spec) {
                Ok(inner) => {
                    inner_evals.set(inner_evals.get() + inner.evaluations);
                    if let Some(l) = inner.failed_level {
                        let prev = failed_inner.get();
                        failed_inner.set(Some(prev.map_or(l, |p| p.min(l))));
                    }
                    Tracked {
                        value: inner.value,
                        inner_error: inner.error,
                    }
                }
                Err(e) => {
                    let prev = inner_failure.take();
                    inner_failure.set(Some(prev.unwrap_or(e)));
                    Tracked::zero()
                }
            }
        },
        dims[level],
        spec,
    )?;
    if let Some(e) = inner_failure.take() {
        return Err(e);
    }
    let failed_level = if est.converged { failed_inner.get() } else { Some(level) };
    Ok(Estimate {
        value: est.value.value,
        error: est.error + est.value.inner_error.abs(),
        evaluations: inner_evals.get(),
        subdivisions: est.subdivisions,
        converged: failed_level.is_none(),
        failed_level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default().with_rel_tol(1e-12)
    }

    #[test]
    fn finite_polynomial_is_exact() {
        let est = integrate_1d(|x: f64| 3.0 * x * x, Interval::Finite(0.0, 2.0), &spec()).unwrap();
        assert!((est.value - 8.0).abs() < 1e-13);
        assert!(est.converged);
    }

    #[test]
    fn reversed_interval_changes_sign() {
        let est = integrate_1d(|x: f64| x.cos(), Interval::Finite(1.0, 0.0), &spec()).unwrap();
        assert!((est.value + 1f64.sin()).abs() < 1e-13);
    }

    #[test]
    fn infinite_interval_without_transform_is_rejected() {
        let s = spec().with_transform(Transform::None);
        let err = integrate_1d(|x: f64| (-x).exp(), Interval::UpperHalf(0.0), &s).unwrap_err();
        assert!(matches!(err, QuadError::NeedsTransform(_)));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate_1d(|_x: f64| f64::NAN, Interval::Finite(0.0, 1.0), &spec()).unwrap_err();
        assert!(matches!(err, QuadError::NonFinite(_)));
    }

    #[test]
    fn budget_exhaustion_returns_best_estimate() {
        let s = spec().with_max_subdivisions(2);
        let est = integrate_1d(|x: f64| (x - 0.3).abs().sqrt(), Interval::Finite(-1.0, 1.0), &s).unwrap();
        assert!(!est.converged);
        assert_eq!(est.failed_level, Some(0));
        assert!(est.require("probe").is_err());
    }

    #[test]
    fn exp_sinh_and_sinh_sinh() {
        let s = spec().with_transform(Transform::TanhSinh);
        let half = integrate_1d(|x: f64| (-x).exp(), Interval::UpperHalf(1.0), &s).unwrap();
        assert!((half.value - (-1f64).exp()).abs() < 1e-12, "{half:?}");
        let lower = integrate_1d(|x: f64| x.exp(), Interval::LowerHalf(0.0), &s).unwrap();
        assert!((lower.value - 1.0).abs() < 1e-12);
        let whole = integrate_1d(|x: f64| (-x * x).exp(), Interval::Whole, &s).unwrap();
        assert!((whole.value - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        let s = spec().with_transform(Transform::TanhSinh);
        let est = integrate_1d(|x: f64| x.sqrt().recip(), Interval::Finite(0.0, 1.0), &s).unwrap();
        assert!((est.value - 2.0).abs() < 1e-11, "{est:?}");
    }

    #[test]
    fn gaussian_product_over_plane() {
        let s = QuadratureSpec::nested();
        let est = integrate_nested(
            &[Interval::Whole, Interval::Whole],
            &|p| (-p[0] * p[0] - p[1] * p[1]).exp(),
            &s,
        )
        .unwrap();
        assert!((est.value - PI).abs() < 1e-6 * PI);
        assert!(est.converged);
    }

    #[test]
    fn nested_failure_is_tagged_with_level() {
        let s = QuadratureSpec::default().with_max_subdivisions(1).with_rel_tol(1e-14);
        let est = integrate_nested(
            &[Interval::Finite(0.0, 1.0), Interval::Finite(0.0, 1.0)],
            &|p| (p[1] - 0.3).abs().sqrt() * p[0],
            &s,
        )
        .unwrap();
        assert!(!est.converged);
        assert_eq!(est.failed_level, Some(0));
    }
}
