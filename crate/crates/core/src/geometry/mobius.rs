//! Möbius transformations of the sphere.

use num_complex::Complex;

use super::sphere::{spherical_distance, SpherePoint};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// `z -> (a z + b) / (c z + d)`, stored with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> MobiusMap<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if det.norm() <= T::epsilon() * scale * scale {
            return Err(Error::Degenerate("Möbius determinant vanishes".into()));
        }
        let s = det.sqrt().inv();
        Ok(MobiusMap { a: a * s, b: b * s, c: c * s, d: d * s })
    }

    pub fn identity() -> Self {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        MobiusMap { a: one, b: zero, c: zero, d: one }
    }

    pub fn apply(&self, p: SpherePoint<T>) -> SpherePoint<T> {
        let zero = T::zero();
        match p {
            SpherePoint::Infinity => {
                if self.c.norm() == zero {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == zero {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    pub fn inverse(&self) -> Self {
        MobiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        MobiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Equality as maps: coefficients agree up to a common sign.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        let close = |s: Complex<T>| {
            (self.a - other.a * s).norm() <= tol
                && (self.b - other.b * s).norm() <= tol
                && (self.c - other.c * s).norm() <= tol
                && (self.d - other.d * s).norm() <= tol
        };
        let one = Complex::new(T::one(), T::zero());
        close(one) || close(-one)
    }
}

/// The unique Möbius map sending `p1, p2, p3` to `0, 1, inf`.
pub fn mobius_through<T: Real>(p1: SpherePoint<T>, p2: SpherePoint<T>, p3: SpherePoint<T>) -> Result<MobiusMap<T>> {
    let tol = T::epsilon() * lit(16.0);
    if spherical_distance(p1, p2) <= tol || spherical_distance(p1, p3) <= tol || spherical_distance(p2, p3) <= tol {
        return Err(Error::Degenerate("Möbius normalization needs three distinct points".into()));
    }
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    use SpherePoint::*;
    match (p1, p2, p3) {
        (Finite(p1), Finite(p2), Infinity) => MobiusMap::new(one, -p1, zero, p2 - p1),
        (Infinity, Finite(p2), Finite(p3)) => MobiusMap::new(zero, p2 - p3, one, -p3),
        (Finite(p1), Infinity, Finite(p3)) => MobiusMap::new(one, -p1, one, -p3),
        (Finite(p1), Finite(p2), Finite(p3)) => {
            MobiusMap::new(p2 - p3, -p1 * (p2 - p3), p2 - p1, -p3 * (p2 - p1))
        }
        _ => unreachable!("distinct points contain at most one infinity"),
    }
}
