use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fatou::series::PowerSeries;
use crate::io::read_json;
use crate::scalar::{lit, Real};

/// Tail tolerance for truncated compositions on `|z| = r0/2`.
pub const TRUNCATION_LIMIT: f64 = 1e-10;

/// A germ `f(z) = z(1 + a z^n + ...)` with multiplier 1, known through a
/// truncated coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicGerm<T> {
    /// `series.coeffs[k]` multiplies `z^k`.
    pub series: PowerSeries<Complex<T>>,
    pub n: usize,
    pub a: Complex<T>,
    /// Radius of convergence, or a radius inside it.
    pub r0: T,
    /// Iterate count `q` this germ represents.
    pub q: usize,
    /// Bound on the dropped tail on `|z| = r0/2` (zero for exact inputs).
    pub tail: T,
}

impl<T: Real> ParabolicGerm<T> {
    pub fn new(coefficients: Vec<Complex<T>>, r0: T) -> Result<Self> {
        let series = PowerSeries::new(coefficients);
        let zero = Complex::new(T::zero(), T::zero());
        if series.coeff(0) != zero {
            return Err(Error::NotParabolic("f(0) must be 0".into()));
        }
        if series.coeff(1) != Complex::new(T::one(), T::zero()) {
            return Err(Error::NotParabolic(format!("multiplier {} is not 1", series.coeff(1))));
        }
        if !(r0 > T::zero()) {
            return Err(Error::Config(format!("radius r0 = {r0} must be positive")));
        }
        let k = (2..series.len())
            .find(|&k| series.coeff(k) != zero)
            .ok_or_else(|| Error::NotParabolic("a = 0: f is the identity to the given order".into()))?;
        Ok(ParabolicGerm { a: series.coeff(k), n: k - 1, series, r0, q: 1, tail: T::zero() })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let file: GermFile = read_json(&path)?;
        let coeffs = file.coefficients.iter().map(|&[re, im]| Complex::new(lit(re), lit(im))).collect();
        let germ = ParabolicGerm::new(coeffs, lit(file.r0))?;
        germ.germ_power(file.q.unwrap_or(1), file.terms.unwrap_or(DEFAULT_TERMS))
    }

    /// `f^q` by truncated composition to `len` terms. The tail that was cut
    /// is estimated from the next `len` coefficients.
    pub fn germ_power(&self, q: usize, len: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::Config("iterate count q must be at least 1".into()));
        }
        if q == 1 {
            return Ok(self.clone());
        }
        let wide = 2 * len;
        let base = self.series.truncated(wide);
        let mut acc = base.clone();
        for _ in 1..q {
            acc = base.compose(&acc, wide)?;
        }
        let rho = self.r0 / lit(2.0);
        let tail = acc.tail_bound(len, rho) + self.tail * lit(q as f64);
        if tail > lit(TRUNCATION_LIMIT) {
            return Err(Error::Truncation { bound: crate::scalar::to_f64(tail), limit: TRUNCATION_LIMIT });
        }
        let mut g = ParabolicGerm::new(acc.truncated(len).coeffs, self.r0)?;
        g.q = self.q * q;
        g.tail = tail;
        Ok(g)
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.series.eval(z)
    }
}

pub const DEFAULT_TERMS: usize = 64;

/// On-disk germ description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GermFile {
    /// `[re, im]` of the coefficient of `z^k`, starting at `k = 0`.
    pub coefficients: Vec<[f64; 2]>,
    pub r0: f64,
    #[serde(default)]
    pub q: Option<usize>,
    #[serde(default)]
    pub terms: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn normal_form_data() {
        let g = ParabolicGerm::new(vec![c(0.0), c(1.0), c(0.0), c(-0.5), c(2.0)], 1.0).unwrap();
        assert_eq!(g.n, 2);
        assert_eq!(g.a, c(-0.5));
        assert!(matches!(ParabolicGerm::new(vec![c(0.0), c(1.0)], 1.0), Err(Error::NotParabolic(_))));
        assert!(matches!(ParabolicGerm::new(vec![c(0.0), c(0.5), c(1.0)], 1.0), Err(Error::NotParabolic(_))));
    }

    #[test]
    fn powers_of_z_plus_z_squared() {
        let g = ParabolicGerm::new(vec![c(0.0), c(1.0), c(1.0)], 0.5).unwrap();
        assert_eq!(g.germ_power(1, 8).unwrap(), g);
        let g2 = g.germ_power(2, 8).unwrap();
        assert_eq!(g2.series.coeffs[..5], [c(0.0), c(1.0), c(2.0), c(2.0), c(1.0)]);
        assert_eq!(g2.n, 1);
        assert_eq!(g2.a, c(2.0));
        assert_eq!(g2.q, 2);
        let g4 = g.germ_power(4, 20).unwrap();
        let g22 = g2.germ_power(2, 20).unwrap();
        for k in 0..20 {
            assert!((g4.series.coeff(k) - g22.series.coeff(k)).norm() < 1e-12);
        }
        assert!(matches!(g.germ_power(4, 6), Err(Error::Truncation { .. })));
    }
}
