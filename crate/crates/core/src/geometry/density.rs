//! Hyperbolic densities of curvature -1 on the disk, the punctured disk and
//! the thrice-punctured sphere.

use num_complex::Complex;

use super::quadrature::{plane_integral, PlaneQuadrature, QuadratureValue, SingularIntegrand};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Density value with an absolute error estimate (zero for closed forms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue<T> {
    pub density: T,
    pub error: T,
}

impl<T: Real> DensityValue<T> {
    fn exact(density: T) -> Self {
        DensityValue { density, error: T::zero() }
    }
}

/// `2 / (1 - |z|^2)` on the unit disk.
pub fn disk_density<T: Real>(z: Complex<T>) -> Result<DensityValue<T>> {
    let r2 = z.norm_sqr();
    if r2 >= T::one() {
        return Err(Error::Domain(format!("|z| = {} is outside the unit disk", r2.sqrt())));
    }
    Ok(DensityValue::exact(lit::<T>(2.0) / (T::one() - r2)))
}

/// Density of the punctured disk `0 < |z| < r`:
/// `1 / (|z| (log r + log(1/|z|)))`.
pub fn punctured_disk_density<T: Real>(z: Complex<T>, r: T) -> Result<DensityValue<T>> {
    if r <= T::one() {
        return Err(Error::Domain(format!("punctured disk radius {r} must exceed 1")));
    }
    let a = z.norm();
    if a == T::zero() || a >= r {
        return Err(Error::Domain(format!("|z| = {a} is outside the punctured disk of radius {r}")));
    }
    Ok(DensityValue::exact(T::one() / (a * (r.ln() - a.ln()))))
}

/// Hyperbolic distance on the unit disk, `log((1+d)/(1-d))` with
/// `d = |z-w| / |1 - conj(z) w|`.
pub fn disk_distance<T: Real>(z: Complex<T>, w: Complex<T>) -> Result<T> {
    if z.norm() >= T::one() || w.norm() >= T::one() {
        return Err(Error::Domain("points must lie in the unit disk".into()));
    }
    let d = (z - w).norm() / (Complex::new(T::one(), T::zero()) - z.conj() * w).norm();
    Ok(((T::one() + d) / (T::one() - d)).ln())
}

/// `∬ dA / |(ζ-p1)(ζ-p2)(ζ-p3)|` over the plane for distinct points.
pub fn three_point_integral<T: Real>(points: [Complex<T>; 3], cfg: &PlaneQuadrature) -> Result<QuadratureValue<T>> {
    let one = T::one();
    let spec = SingularIntegrand { points: &points, near_exponents: &[one, one, one], far_exponent: lit(3.0) };
    let [a, b, c] = points;
    plane_integral(&spec, move |zeta| one / ((zeta - a).norm() * (zeta - b).norm() * (zeta - c).norm()), cfg)
}

/// Density of the sphere minus `{0, 1, inf}` from Agard's integral formula
/// `rho(z) = ((1/2π) ∬ |z(z-1) / (ζ(ζ-1)(ζ-z))| dA)^(-1)`.
pub fn agard_density<T: Real>(z: Complex<T>, cfg: &PlaneQuadrature) -> Result<DensityValue<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    if z == zero || z == one {
        return Err(Error::Domain("z must avoid the punctures 0 and 1".into()));
    }
    let integral = three_point_integral([zero, one, z], cfg)?;
    let two_pi = lit::<T>(2.0) * T::PI();
    let scale = z.norm() * (z - one).norm();
    let density = two_pi / (scale * integral.value);
    Ok(DensityValue { density, error: density * integral.error / integral.value })
}

/// `(1/π) ∬ dA / |(ζ+1) ζ (ζ-1)|`, which equals `1 / rho(-1)`.
pub fn hypothesis_integral<T: Real>(cfg: &PlaneQuadrature) -> Result<QuadratureValue<T>> {
    let one = T::one();
    let pts = [Complex::new(-one, T::zero()), Complex::new(T::zero(), T::zero()), Complex::new(one, T::zero())];
    let q = three_point_integral(pts, cfg)?;
    Ok(QuadratureValue { value: q.value / T::PI(), error: q.error / T::PI() })
}

/// Threshold for `log r` in the lower bound of the thrice-punctured-sphere
/// density by a punctured-disk density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiZhongBound<T> {
    pub hypothesis: QuadratureValue<T>,
    /// `max(hypothesis, 4 + log 4)`; `log r` must exceed this.
    pub threshold: T,
}

impl<T: Real> LiZhongBound<T> {
    pub fn new(cfg: &PlaneQuadrature) -> Result<Self> {
        let hypothesis = hypothesis_integral::<T>(cfg)?;
        let four = lit::<T>(4.0);
        let threshold = (hypothesis.value + hypothesis.error).max(four + four.ln());
        Ok(LiZhongBound { hypothesis, threshold })
    }

    /// `rho(z) - 1 / (|z| (log r + log(1/|z|)))` for `0 < |z| < 1`, with the
    /// quadrature error of `rho` attached.
    pub fn margin(&self, z: Complex<T>, log_r: T, cfg: &PlaneQuadrature) -> Result<DensityValue<T>> {
        if log_r <= self.threshold {
            return Err(Error::Precondition(format!("log r = {log_r} does not exceed {}", self.threshold)));
        }
        let a = z.norm();
        if a == T::zero() || a >= T::one() {
            return Err(Error::Domain(format!("|z| = {a} is outside 0 < |z| < 1")));
        }
        let rho = agard_density(z, cfg)?;
        let lower = T::one() / (a * (log_r - a.ln()));
        Ok(DensityValue { density: rho.density - lower, error: rho.error })
    }
}

/// One-shot form of [`LiZhongBound::margin`].
pub fn lizhong_margin<T: Real>(z: Complex<T>, log_r: T, cfg: &PlaneQuadrature) -> Result<DensityValue<T>> {
    LiZhongBound::new(cfg)?.margin(z, log_r, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Complete elliptic integral with complex parameter, by the AGM on the
    /// principal branch. Independent closed form used only as an oracle.
    fn elliptic_k(m: Complex<f64>) -> Complex<f64> {
        let mut a = Complex::new(1.0, 0.0);
        let mut b = (Complex::new(1.0, 0.0) - m).sqrt();
        for _ in 0..60 {
            let an = (a + b) * 0.5;
            let mut bn = (a * b).sqrt();
            if (an - bn).norm() > (an + bn).norm() {
                bn = -bn;
            }
            a = an;
            b = bn;
        }
        Complex::new(std::f64::consts::FRAC_PI_2, 0.0) / a
    }

    fn elliptic_density(z: Complex<f64>) -> f64 {
        let one = Complex::new(1.0, 0.0);
        let k1 = elliptic_k(z);
        let k2 = elliptic_k(one - z);
        std::f64::consts::PI / (4.0 * z.norm() * (one - z).norm() * (k1 * k2.conj()).re)
    }

    #[test]
    fn density_at_minus_one() {
        let rho = agard_density(Complex::new(-1.0f64, 0.0), &PlaneQuadrature::default()).unwrap();
        assert!((rho.density - 0.2284732905222318).abs() < 1e-9, "{rho:?}");
        assert!(rho.error < 1e-8);
    }

    #[test]
    fn hypothesis_integral_value() {
        let q = hypothesis_integral::<f64>(&PlaneQuadrature::default()).unwrap();
        assert!((q.value - 4.376879230452953).abs() < 1e-8, "{q:?}");
        assert!(q.value < 4.0 + 4f64.ln());
    }

    #[test]
    fn agrees_with_elliptic_closed_form() {
        for (re, im) in [(0.5, 0.5), (0.0, 2.0), (-0.3, 0.01), (3.0, -4.0), (1e-3, 1e-3)] {
            let z = Complex::new(re, im);
            let rho = agard_density(z, &PlaneQuadrature::default()).unwrap();
            let exact = elliptic_density(z);
            assert!((rho.density - exact).abs() < 1e-7 * exact, "z={z}: {} vs {exact}", rho.density);
        }
    }

    #[test]
    fn frozen_reference_values() {
        let cfg = PlaneQuadrature::default();
        let d = |re: f64, im: f64| agard_density(Complex::new(re, im), &cfg).unwrap().density;
        assert!((d(0.5, 0.5) - 0.566584195497403).abs() < 1e-8);
        assert!((d(0.0, 2.0) - 0.133793405846192).abs() < 1e-8);
        assert!((d(0.01, 0.0) - 13.631854582891206).abs() < 1e-6);
    }

    #[test]
    fn punctures_are_rejected() {
        let cfg = PlaneQuadrature::default();
        assert!(matches!(agard_density(Complex::new(0.0, 0.0), &cfg), Err(Error::Domain(_))));
        assert!(matches!(agard_density(Complex::new(1.0, 0.0), &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn disk_density_at_origin_is_two() {
        assert_eq!(disk_density(Complex::new(0.0f64, 0.0)).unwrap().density, 2.0);
        assert!(disk_density(Complex::new(1.0f64, 0.0)).is_err());
    }

    #[test]
    fn single_precision_disk_density() {
        let v = disk_density(Complex::new(0.5f32, 0.0)).unwrap().density;
        assert!((v - 8.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn punctured_density_example() {
        let v = punctured_disk_density(Complex::new(0.5f64, 0.0), 2.0).unwrap().density;
        assert!((v - 1.0 / (0.5 * (2f64.ln() + 2f64.ln()))).abs() < 1e-15);
    }

    #[test]
    fn lizhong_lower_bound() {
        let cfg = PlaneQuadrature::default();
        let bound = LiZhongBound::<f64>::new(&cfg).unwrap();
        assert!((bound.threshold - (4.0 + 4.0f64.ln())).abs() < 1e-15);
        for z in [Complex::new(0.5, 0.0), Complex::new(-0.3, 0.35), Complex::new(0.0, 0.999), Complex::new(0.002, 0.0)] {
            let m = bound.margin(z, 6.0, &cfg).unwrap();
            assert!(m.density >= -m.error, "{z}: {m:?}");
        }
        let edge = bound.margin(Complex::new(-0.999999, 0.0), 6.0, &cfg).unwrap();
        assert!((edge.density - (0.2284732905222318 - 1.0 / 6.0)).abs() < 1e-4);
        assert!(matches!(lizhong_margin(Complex::new(0.5, 0.0), 5.0f64, &cfg), Err(Error::Precondition(_))));
        assert!(matches!(bound.margin(Complex::new(1.5, 0.0), 6.0, &cfg), Err(Error::Domain(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn symmetries_of_the_thrice_punctured_sphere(re in -2.0..2.0f64, im in 0.2..2.0f64) {
            let z = Complex::new(re, im);
            let cfg = PlaneQuadrature::default();
            let r = |w: Complex<f64>| agard_density(w, &cfg).unwrap().density;
            let base = r(z);
            // z -> 1 - z is an isometry; z -> conj(z) as well.
            prop_assert!((r(Complex::new(1.0, 0.0) - z) - base).abs() < 1e-6 * base);
            prop_assert!((r(z.conj()) - base).abs() < 1e-6 * base);
            // z -> 1/z pulls the density back with factor |z|^-2.
            let inv = r(z.inv()) / z.norm_sqr();
            prop_assert!((inv - base).abs() < 1e-6 * base);
        }

        #[test]
        fn disk_distance_is_symmetric(a in -0.9..0.9f64, b in -0.4..0.4f64, c in -0.9..0.9f64) {
            let z = Complex::new(a, b);
            let w = Complex::new(c, -b);
            let d1 = disk_distance(z, w).unwrap();
            let d2 = disk_distance(w, z).unwrap();
            prop_assert!((d1 - d2).abs() < 1e-12);
            prop_assert!(d1 >= 0.0);
        }
    }
}
