use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{agard_density, PlaneQuadrature};
use crate::motion::HolomorphicMotion;
use crate::io::{Cell, Table};
use crate::scalar::{lit, to_f64, Real};

/// Value with the magnitude of the last extrapolation correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentEstimate<T> {
    pub value: Complex<T>,
    pub error: T,
}

/// `V(z) = lim (h(c, z) − z) / c` by Neville extrapolation of the difference
/// quotients at `steps` to `c = 0`.
pub fn tangent_vector<T: Real, M: HolomorphicMotion<T>>(motion: &M, z: Complex<T>, steps: &[Complex<T>]) -> Result<TangentEstimate<T>> {
    if steps.len() < 2 {
        return Err(Error::Config(format!("{} steps given, extrapolation needs at least 2", steps.len())));
    }
    if steps.iter().any(|s| s.norm() == T::zero()) {
        return Err(Error::Domain("zero step".into()));
    }
    let h = motion.eval_path(z, steps)?;
    let mut table: Vec<Complex<T>> = h.iter().zip(steps).map(|(w, c)| (w - z) / c).collect();
    let mut error = T::zero();
    // Neville's scheme evaluated at 0: stage k combines nodes i and i + k.
    for k in 1..steps.len() {
        for i in 0..steps.len() - k {
            let (ci, ck) = (steps[i], steps[i + k]);
            let next = (table[i + 1] * ci - table[i] * ck) / (ci - ck);
            if i == 0 {
                error = (next - table[0]).norm();
            }
            table[i] = next;
        }
    }
    Ok(TangentEstimate { value: table[0], error })
}

/// Steps `r/8, r/16` along the positive real axis.
pub fn default_steps<T: Real>(radius: T) -> Vec<Complex<T>> {
    let r = if radius.is_finite() { radius } else { T::one() };
    vec![Complex::new(r / lit(8.0), T::zero()), Complex::new(r / lit(16.0), T::zero())]
}

/// Tangent vectors of a motion at sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField<T> {
    pub points: Vec<Complex<T>>,
    pub values: Vec<Complex<T>>,
    pub errors: Vec<T>,
    /// Parameter radius of the motion; `scale * V` is the tangent of the
    /// motion reparametrized over the unit disk.
    pub scale: T,
}

impl<T: Real> TangentField<T> {
    pub fn sample<M: HolomorphicMotion<T>>(motion: &M, points: &[Complex<T>], steps: &[Complex<T>]) -> Result<Self> {
        let est: Vec<TangentEstimate<T>> = points.par_iter().map(|&z| tangent_vector(motion, z, steps)).collect::<Result<_>>()?;
        let r = motion.parameter_radius();
        Ok(TangentField {
            points: points.to_vec(),
            values: est.iter().map(|e| e.value).collect(),
            errors: est.iter().map(|e| e.error).collect(),
            scale: if r.is_finite() { r } else { T::one() },
        })
    }

    pub fn from_fn(points: &[Complex<T>], v: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        TangentField {
            points: points.to_vec(),
            values: points.iter().map(|&z| v(z)).collect(),
            errors: vec![T::zero(); points.len()],
            scale: T::one(),
        }
    }

    pub fn unit_disk_values(&self) -> Vec<Complex<T>> {
        self.values.iter().map(|v| v * self.scale).collect()
    }

    /// `|V(z)| / |z|²` at each sample point of modulus at least 1.
    pub fn growth(&self) -> Vec<(T, T)> {
        self.points
            .iter()
            .zip(&self.values)
            .filter(|(z, _)| z.norm() >= T::one())
            .map(|(z, v)| (z.norm(), v.norm() / z.norm_sqr()))
            .collect()
    }
}

/// Second-difference probe `|(V(b)−V(a))/(b−a) − (V(c)−V(b))/(c−b)|` along
/// a sequence of `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct VanishingProbe<T> {
    pub bs: Vec<Complex<T>>,
    pub values: Vec<T>,
}

impl<T: Real> VanishingProbe<T> {
    /// Last value not above the first.
    pub fn trend_holds(&self) -> bool {
        match (self.values.first(), self.values.last()) {
            (Some(f), Some(l)) => l <= f,
            _ => true,
        }
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["b_re", "b_im", "probe"]);
        for (b, v) in self.bs.iter().zip(&self.values) {
            t.push([b.re, b.im, *v].into_iter().map(|x| Cell::from(to_f64(x))).collect());
        }
        t
    }
}

pub fn vanishing_probe<T: Real>(v: impl Fn(Complex<T>) -> Complex<T>, a: Complex<T>, c: Complex<T>, bs: &[Complex<T>]) -> VanishingProbe<T> {
    let (va, vc) = (v(a), v(c));
    let values = bs
        .iter()
        .map(|&b| {
            let vb = v(b);
            ((vb - va) / (b - a) - (vc - vb) / (c - b)).norm()
        })
        .collect();
    VanishingProbe { bs: bs.to_vec(), values }
}

/// Right-hand side `2/(ρ(w) |w|) + 2/(ρ(z2) |z2|)` with `w = (z2 − z1)/z2`
/// bounding `|V(z2) − V(z1)| / |z2 − z1|` for a normalized motion over the
/// unit disk. Returns the bound and its quadrature error.
pub fn quotient_bound<T: Real>(z1: Complex<T>, z2: Complex<T>, cfg: &PlaneQuadrature) -> Result<(T, T)> {
    let w = (z2 - z1) / z2;
    let two = lit::<T>(2.0);
    let a = agard_density(w, cfg)?;
    let b = agard_density(z2, cfg)?;
    let ta = two / (a.density * w.norm());
    let tb = two / (b.density * z2.norm());
    let err = ta * a.error / a.density + tb * b.error / b.density;
    Ok((ta + tb, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::{AffineMotion, IdentityMotion};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn tangents_of_analytic_motions() {
        let steps = default_steps(1.0);
        let z = c(0.7, -1.2);
        assert_eq!(tangent_vector(&IdentityMotion, z, &steps).unwrap().value, c(0.0, 0.0));
        let v = tangent_vector(&AffineMotion, z, &steps).unwrap();
        assert!((v.value - z.conj()).norm() < 1e-14);
        assert!(v.error < 1e-14);
        assert!(matches!(tangent_vector(&AffineMotion, z, &steps[..1]), Err(Error::Config(_))));
        assert!(matches!(tangent_vector(&AffineMotion, z, &[c(0.5, 0.0), c(1.5, 0.0)]), Err(Error::Domain(_))));
    }

    struct Quadratic;
    impl HolomorphicMotion<f64> for Quadratic {
        fn parameter_radius(&self) -> f64 {
            1.0
        }
        fn eval_path(&self, z: Complex<f64>, params: &[Complex<f64>]) -> Result<Vec<Complex<f64>>> {
            Ok(params.iter().map(|&p| z + p * z.conj() + p * p * 3.0 + p * p * p).collect())
        }
    }

    #[test]
    fn richardson_removes_the_linear_term() {
        let z = c(0.4, 0.2);
        let steps = [c(0.1, 0.0), c(0.05, 0.0), c(0.025, 0.0)];
        let v = tangent_vector(&Quadratic, z, &steps).unwrap();
        assert!((v.value - z.conj()).norm() < 1e-13);
        let two = tangent_vector(&Quadratic, z, &steps[..2]).unwrap();
        assert!((two.value - z.conj()).norm() < 0.01);
        assert!(two.error > 0.1);
    }

    #[test]
    fn vanishing_probe_examples() {
        let bs: Vec<_> = [2.0, 4.0, 8.0, 16.0, 32.0].iter().map(|&b| c(b, 0.0)).collect();
        let zero = vanishing_probe(|_| c(0.0, 0.0), c(0.3, 0.1), c(-0.2, 0.5), &bs);
        assert!(zero.values.iter().all(|&v| v == 0.0));
        let lin = vanishing_probe(|z| z * 2.0, c(0.3, 0.1), c(-0.2, 0.5), &bs);
        assert!(lin.values.iter().all(|&v| v < 1e-14));
        let conj = vanishing_probe(|z: Complex<f64>| z.conj(), c(0.3, 0.1), c(-0.2, 0.5), &bs);
        assert!(conj.trend_holds());
        assert!(conj.values.windows(2).all(|w| w[1] < w[0]));
        assert!(*conj.values.last().unwrap() < 0.05);
    }

    #[test]
    fn quotient_bound_for_a_normalized_affine_motion() {
        // h(c, z) = z + (c/2)(z̄ − z) fixes 0, 1, ∞ and V(z) = −i Im z.
        let cfg = PlaneQuadrature::default();
        let v = |z: Complex<f64>| c(0.0, -z.im);
        for (z1, z2) in [(c(0.3, 0.2), c(-0.5, 0.8)), (c(2.0, -1.0), c(2.01, -0.98)), (c(0.9, 0.1), c(1.1, -0.1))] {
            let q = (v(z2) - v(z1)).norm() / (z2 - z1).norm();
            let (b, e) = quotient_bound(z1, z2, &cfg).unwrap();
            assert!(q <= b + e, "{z1} {z2}: {q} > {b}");
        }
    }
}
