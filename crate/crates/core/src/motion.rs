//! Holomorphic motions as evaluable objects.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A holomorphic motion `h(c, z)` of (a subset of) the sphere over the disk
/// `|c| < parameter_radius`, fixing infinity and with `h(0, z) = z`.
pub trait HolomorphicMotion<T: Real>: Sync {
    fn parameter_radius(&self) -> T;

    /// `h(c, z)` for each `c` in `params`.
    fn eval_path(&self, z: Complex<T>, params: &[Complex<T>]) -> Result<Vec<Complex<T>>>;

    fn eval(&self, c: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
        Ok(self.eval_path(z, std::slice::from_ref(&c))?[0])
    }

    /// The slice `z -> h(c, z)` on a list of points.
    fn eval_slice(&self, c: Complex<T>, points: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        points.par_iter().map(|&z| self.eval(c, z)).collect()
    }
}

pub(crate) fn check_parameter<T: Real>(c: Complex<T>, radius: T) -> Result<()> {
    if c.norm() >= radius {
        return Err(Error::Domain(format!("parameter |c| = {} outside the disk of radius {radius}", c.norm())));
    }
    Ok(())
}

/// The trivial motion `h(c, z) = z`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityMotion;

impl<T: Real> HolomorphicMotion<T> for IdentityMotion {
    fn parameter_radius(&self) -> T {
        T::infinity()
    }

    fn eval_path(&self, z: Complex<T>, params: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        Ok(vec![z; params.len()])
    }
}

/// `h(c, z) = z + c conj(z)` over the unit disk: each slice is an affine
/// quasiconformal map with constant Beltrami coefficient `c`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AffineMotion;

impl<T: Real> HolomorphicMotion<T> for AffineMotion {
    fn parameter_radius(&self) -> T {
        T::one()
    }

    fn eval_path(&self, z: Complex<T>, params: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        params
            .iter()
            .map(|&c| {
                check_parameter(c, T::one())?;
                Ok(z + c * z.conj())
            })
            .collect()
    }
}
