use num_complex::Complex;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Truncated power series `Σ_k coeffs[k] z^k` over any numeric ring.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<S> {
    pub coeffs: Vec<S>,
}

impl<S: Num + Clone> PowerSeries<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// The series padded or cut to `len` terms.
    pub fn truncated(&self, len: usize) -> Self {
        PowerSeries { coeffs: (0..len).map(|k| self.coeff(k)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        PowerSeries { coeffs: (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect() }
    }

    pub fn mul(&self, other: &Self, len: usize) -> Self {
        let mut out = vec![S::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        PowerSeries { coeffs: out }
    }

    pub fn pow(&self, k: usize, len: usize) -> Self {
        let mut acc = PowerSeries::new(vec![S::one()]).truncated(len);
        let mut base = self.truncated(len);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, len);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, len);
            }
        }
        acc
    }

    /// `1 / self` to `len` terms; the constant term must be nonzero.
    pub fn reciprocal(&self, len: usize) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::Degenerate("series with zero constant term has no reciprocal".into()));
        }
        let inv0 = S::one() / c0;
        let mut out: Vec<S> = Vec::with_capacity(len);
        for k in 0..len {
            if k == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut s = S::zero();
            for j in 1..=k {
                s = s + self.coeff(j) * out[k - j].clone();
            }
            out.push(S::zero() - inv0.clone() * s);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `self ∘ inner` to `len` terms; `inner` must vanish at 0.
    pub fn compose(&self, inner: &Self, len: usize) -> Result<Self> {
        if !inner.coeff(0).is_zero() {
            return Err(Error::Degenerate("inner series must vanish at 0".into()));
        }
        let inner = inner.truncated(len);
        let mut acc = PowerSeries::new(vec![S::zero(); len]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner, len);
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        Ok(acc)
    }

    /// Horner evaluation at a point of the coefficient ring.
    pub fn eval_exact(&self, z: S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * z.clone() + c.clone())
    }
}

impl<T: Real> PowerSeries<Complex<T>> {
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, c| acc * z + c)
    }

    pub fn derivative_at(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * crate::scalar::count::<T>(k);
        }
        acc
    }

    /// `Σ_{k ≥ from} |c_k| ρ^k`.
    pub fn tail_bound(&self, from: usize, rho: T) -> T {
        self.coeffs.iter().enumerate().skip(from).map(|(k, c)| c.norm() * rho.powi(k as i32)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    fn series(v: &[i64]) -> PowerSeries<Q> {
        PowerSeries::new(v.iter().map(|&n| q(n)).collect())
    }

    #[test]
    fn second_iterate_of_z_plus_z_squared() {
        let f = series(&[0, 1, 1]);
        let f2 = f.compose(&f, 8).unwrap();
        assert_eq!(f2, series(&[0, 1, 2, 2, 1, 0, 0, 0]));
    }

    #[test]
    fn composition_is_associative() {
        let f = series(&[0, 1, 1, -2]);
        let f2 = f.compose(&f, 12).unwrap();
        let f4a = f2.compose(&f2, 12).unwrap();
        let f3 = f.compose(&f2, 12).unwrap();
        let f4b = f.compose(&f3, 12).unwrap();
        assert_eq!(f4a, f4b);
    }

    #[test]
    fn reciprocal_of_geometric() {
        let one_plus_z = series(&[1, 1]);
        let r = one_plus_z.reciprocal(6).unwrap();
        assert_eq!(r, series(&[1, -1, 1, -1, 1, -1]));
        assert_eq!(r.mul(&one_plus_z, 6), series(&[1, 0, 0, 0, 0, 0]));
        assert!(series(&[0, 1]).reciprocal(3).is_err());
        assert_eq!(one_plus_z.pow(3, 5), series(&[1, 3, 3, 1, 0]));
        assert_eq!(series(&[1, 2, 3]).eval_exact(Q::new(1, 2)), Q::new(11, 4));
    }

    #[test]
    fn complex_evaluation() {
        let s = PowerSeries::new(vec![Complex::new(1.0, 0.0), Complex::new(0.0, 2.0), Complex::new(3.0, 0.0)]);
        let z = Complex::new(0.5, -0.25);
        assert!((s.eval(z) - (Complex::new(1.0, 0.0) + Complex::new(0.0, 2.0) * z + z * z * 3.0)).norm() < 1e-15);
        assert!((s.derivative_at(z) - (Complex::new(0.0, 2.0) + z * 6.0)).norm() < 1e-15);
    }
}
