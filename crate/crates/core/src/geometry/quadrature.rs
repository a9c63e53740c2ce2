//! Quadrature rules: Gauss–Legendre panels, tanh-sinh for endpoint
//! singularities, and a patched log-polar rule for plane integrals with
//! isolated integrable singularities.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{blocked_sum_real, count, lit, to_f64, Real};

/// A quadrature value together with an error estimate from two resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureValue<T> {
    pub value: T,
    pub error: T,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let j = j as f64;
                p1 = ((2.0 * j - 1.0) * x * p2 - (j - 1.0) * p3) / j;
            }
            pp = n as f64 * (x * p1 - p2) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on<T: Real>(n: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    let (x, w) = gauss_legendre(n);
    let half = (b - a) / lit(2.0);
    let mid = (a + b) / lit(2.0);
    (
        x.iter().map(|&x| mid + half * lit(x)).collect(),
        w.iter().map(|&w| half * lit(w)).collect(),
    )
}

/// Tanh-sinh rule on `[a, b]` at level step `h`. The integrand receives the
/// abscissa together with its distances to `a` and to `b`, computed without
/// cancellation.
fn tanh_sinh_level<F>(f: &F, a: f64, b: f64, h: f64) -> f64
where
    F: Fn(f64, f64, f64) -> f64,
{
    let half = 0.5 * (b - a);
    let pi2 = std::f64::consts::FRAC_PI_2;
    let kmax = (4.0 / h).ceil() as i64;
    let mut terms = Vec::with_capacity(2 * kmax as usize + 1);
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = pi2 * t.sinh();
        let cu = u.cosh();
        let w = half * pi2 * t.cosh() / (cu * cu);
        // 1 - tanh(u) and 1 + tanh(u) without cancellation.
        let e = (-2.0 * u.abs()).exp();
        let small = 2.0 * e / (1.0 + e);
        let (da, db) = if u >= 0.0 {
            (half * (2.0 - small), half * small)
        } else {
            (half * small, half * (2.0 - small))
        };
        if da <= 0.0 || db <= 0.0 || w == 0.0 {
            continue;
        }
        let x = if u >= 0.0 { b - db } else { a + da };
        let v = f(x, da, db);
        if v.is_finite() {
            terms.push(w * v);
        }
    }
    h * blocked_sum_real(&terms)
}

/// Tanh-sinh integral with an error estimate from halving the step.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64) -> QuadratureValue<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let coarse = tanh_sinh_level(&f, a, b, 1.0 / 32.0);
    let fine = tanh_sinh_level(&f, a, b, 1.0 / 64.0);
    QuadratureValue { value: fine, error: (fine - coarse).abs() }
}

/// Complete elliptic integral of the first kind in terms of the complementary
/// modulus `k' = sqrt(1 - m)`, via the arithmetic-geometric mean.
pub fn elliptic_k_from_complement(kp: f64) -> f64 {
    let (mut a, mut b) = (1.0f64, kp);
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        a = an;
        b = bn;
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
    }
    std::f64::consts::FRAC_PI_2 / a
}

/// Resolution of the patched log-polar plane rule. The value is computed at
/// the given resolution and at half of it; their difference is the error
/// estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneQuadrature {
    /// Step in `t = log |zeta - p|`.
    pub log_step: f64,
    /// Angular nodes per ring.
    pub angular: usize,
    /// Decades resolved below the smallest point separation.
    pub inner_decades: f64,
    /// Decades resolved beyond the largest point modulus.
    pub outer_decades: f64,
    /// Relative tolerance on the two-resolution difference.
    pub rel_tol: f64,
}

impl Default for PlaneQuadrature {
    fn default() -> Self {
        PlaneQuadrature {
            log_step: 0.035,
            angular: 176,
            inner_decades: 9.0,
            outer_decades: 9.0,
            rel_tol: 1e-6,
        }
    }
}

/// Integrand of [`plane_integral`]: a real function on the plane, singular
/// at finitely many points with `f ~ B |zeta - p|^(-alpha_p)` nearby and
/// `f ~ A |zeta|^(-beta)` at infinity, with `alpha_p < 2 < beta`.
pub struct SingularIntegrand<'a, T> {
    pub points: &'a [Complex<T>],
    pub near_exponents: &'a [T],
    pub far_exponent: T,
}

const PARTITION_POWER: i32 = 8;

fn plane_level<T: Real, F>(spec: &SingularIntegrand<'_, T>, f: &F, cfg: &PlaneQuadrature, h: f64, n_theta: usize) -> T
where
    F: Fn(Complex<T>) -> T + Sync,
{
    let pts = spec.points;
    let mut sep = f64::INFINITY;
    let mut big = 1.0f64;
    for (i, p) in pts.iter().enumerate() {
        big = big.max(to_f64(p.norm()));
        for q in &pts[i + 1..] {
            sep = sep.min(to_f64((*p - *q).norm()));
        }
    }
    if !sep.is_finite() {
        sep = 1.0;
    }
    let ln10 = std::f64::consts::LN_10;
    let t_lo = sep.ln() - cfg.inner_decades * ln10;
    let t_hi = big.ln() + cfg.outer_decades * ln10;
    let rings = ((t_hi - t_lo) / h).ceil() as usize;
    let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
    let two_pi: T = lit(2.0 * std::f64::consts::PI);

    let weight = |zeta: Complex<T>, patch: usize| -> T {
        let dp = (zeta - pts[patch]).norm();
        let mut denom = T::one();
        for (k, q) in pts.iter().enumerate() {
            if k == patch {
                continue;
            }
            let dq = (zeta - *q).norm();
            if dq == T::zero() {
                return T::zero();
            }
            denom += (dp / dq).powi(PARTITION_POWER);
        }
        T::one() / denom
    };

    let mut patch_totals = Vec::with_capacity(pts.len());
    for (ip, &p) in pts.iter().enumerate() {
        let ring_sums: Vec<T> = (0..=rings)
            .into_par_iter()
            .map(|j| {
                let t = t_lo + j as f64 * h;
                let rho: T = lit(t.exp());
                let mut acc = Vec::with_capacity(n_theta);
                for l in 0..n_theta {
                    let th = (l as f64 + 0.5) * dtheta;
                    let zeta = p + Complex::new(lit::<T>(th.cos()), lit::<T>(th.sin())) * rho;
                    let w = weight(zeta, ip);
                    if w == T::zero() {
                        continue;
                    }
                    let v = f(zeta);
                    if v.is_finite() {
                        acc.push(w * v);
                    }
                }
                let trap: T = if j == 0 || j == rings { lit(0.5) } else { T::one() };
                trap * rho * rho * blocked_sum_real(&acc) * lit(dtheta * h)
            })
            .collect();
        let mut total = blocked_sum_real(&ring_sums);

        // Inner and outer analytic tails from the model exponents.
        let alpha = spec.near_exponents[ip];
        let beta = spec.far_exponent;
        let rho0: T = lit(t_lo.exp());
        let rho1: T = lit((t_lo + rings as f64 * h).exp());
        let ring_mean = |rho: T, power: T| -> T {
            let vals: Vec<T> = (0..n_theta)
                .map(|l| {
                    let th = (l as f64 + 0.5) * dtheta;
                    let zeta = p + Complex::new(lit::<T>(th.cos()), lit::<T>(th.sin())) * rho;
                    let v = weight(zeta, ip) * f(zeta);
                    if v.is_finite() { v } else { T::zero() }
                })
                .collect();
            blocked_sum_real(&vals) / count::<T>(n_theta) * rho.powf(power)
        };
        let two = lit::<T>(2.0);
        let b_near = ring_mean(rho0, alpha);
        total += two_pi * b_near * rho0.powf(two - alpha) / (two - alpha);
        let a_far = ring_mean(rho1, beta);
        total += two_pi * a_far * rho1.powf(two - beta) / (beta - two);
        patch_totals.push(total);
    }
    blocked_sum_real(&patch_totals)
}

/// Integral over the plane of a nonnegative integrand with isolated
/// integrable singularities, using log-polar patches glued by a partition of
/// unity. The estimate compares two resolutions.
pub fn plane_integral<T: Real, F>(spec: &SingularIntegrand<'_, T>, f: F, cfg: &PlaneQuadrature) -> Result<QuadratureValue<T>>
where
    F: Fn(Complex<T>) -> T + Sync,
{
    if spec.points.is_empty() || spec.points.len() != spec.near_exponents.len() {
        return Err(Error::Precondition("one near-field exponent per singular point".into()));
    }
    let two = lit::<T>(2.0);
    if spec.far_exponent <= two || spec.near_exponents.iter().any(|&a| a >= two) {
        return Err(Error::Precondition("integrand exponents are not integrable".into()));
    }
    for (i, p) in spec.points.iter().enumerate() {
        for q in &spec.points[i + 1..] {
            if (*p - *q).norm() == T::zero() {
                return Err(Error::Degenerate("singular points coincide".into()));
            }
        }
    }
    let coarse = plane_level(spec, &f, cfg, 2.0 * cfg.log_step, cfg.angular.div_ceil(2).max(8));
    let fine = plane_level(spec, &f, cfg, cfg.log_step, cfg.angular);
    let error = (fine - coarse).abs();
    if !(error <= lit::<T>(cfg.rel_tol) * fine.abs()) {
        return Err(Error::Accuracy { partial: to_f64(fine), error: to_f64(error) });
    }
    Ok(QuadratureValue { value: fine, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_handles_log_endpoint() {
        // integral of -ln x over (0, 1) is 1
        let q = tanh_sinh(|_, da, _| -da.ln(), 0.0, 1.0);
        assert!((q.value - 1.0).abs() < 1e-13, "{q:?}");
    }

    #[test]
    fn elliptic_k_at_zero_parameter() {
        assert!((elliptic_k_from_complement(1.0) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        // K(1/2) = 1.854074677301372
        assert!((elliptic_k_from_complement(0.5f64.sqrt()) - 1.854074677301372).abs() < 1e-14);
    }

    #[test]
    fn plane_rule_on_a_gaussian_like_kernel() {
        // integral of 1 / (|z|^(1/2) (1 + |z|^2)^2) over the plane = 2 pi * B(3/4, 5/4) / 2
        let pts = [Complex::new(0.0, 0.0)];
        let spec = SingularIntegrand { points: &pts, near_exponents: &[0.5], far_exponent: 4.5 };
        let q = plane_integral(&spec, |z: Complex<f64>| 1.0 / (z.norm().sqrt() * (1.0 + z.norm_sqr()).powi(2)), &PlaneQuadrature::default()).unwrap();
        // pi * Gamma(3/4) Gamma(5/4) / Gamma(2)
        let exact = std::f64::consts::PI * 1.2254167024651776 * 0.906_402_477_055_477;
        assert!((q.value - exact).abs() < 1e-8, "{} vs {exact}", q.value);
    }
}
