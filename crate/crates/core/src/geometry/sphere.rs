//! Points of the Riemann sphere and the chordal metric.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, recip, Real};

/// A point of the Riemann sphere. Points near infinity are handled through the
/// chart `w = 1/z` wherever that is better conditioned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpherePoint<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> SpherePoint<T> {
    pub fn finite(re: T, im: T) -> Self {
        SpherePoint::Finite(Complex::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex<T>> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    /// Coordinate in the chart at infinity, `1/z`.
    pub fn inverse_chart(&self) -> Complex<T> {
        match self {
            SpherePoint::Finite(z) => recip(*z),
            SpherePoint::Infinity => Complex::new(T::zero(), T::zero()),
        }
    }
}

impl<T: Real> From<Complex<T>> for SpherePoint<T> {
    fn from(z: Complex<T>) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }
}

/// Chordal distance `2|z-w| / sqrt((1+|z|^2)(1+|w|^2))`, bounded by 2.
pub fn spherical_distance<T: Real>(z: SpherePoint<T>, w: SpherePoint<T>) -> T {
    let two = lit::<T>(2.0);
    match (z, w) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => T::zero(),
        (SpherePoint::Infinity, SpherePoint::Finite(a)) | (SpherePoint::Finite(a), SpherePoint::Infinity) => {
            two / (T::one() + a.norm_sqr()).sqrt()
        }
        (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
            // The metric is invariant under z -> 1/z; use the chart where both are small.
            let (a, b) = if a.norm() > T::one() && b.norm() > T::one() {
                (recip(a), recip(b))
            } else {
                (a, b)
            };
            two * (a - b).norm() / ((T::one() + a.norm_sqr()) * (T::one() + b.norm_sqr())).sqrt()
        }
    }
}

/// Cross-ratio `[z1, z2, z3, z4] = (z1-z3)(z2-z4) / ((z1-z4)(z2-z3))`,
/// so that `[z, 1, 0, inf] = z`.
pub fn cross_ratio<T: Real>(points: [SpherePoint<T>; 4]) -> Result<Complex<T>> {
    let tol = T::epsilon() * lit(16.0);
    for i in 0..4 {
        for j in (i + 1)..4 {
            if spherical_distance(points[i], points[j]) <= tol {
                return Err(Error::Degenerate(format!(
                    "cross-ratio points {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    use SpherePoint::*;
    let value = match points {
        [Infinity, Finite(z2), Finite(z3), Finite(z4)] => (z2 - z4) / (z2 - z3),
        [Finite(z1), Infinity, Finite(z3), Finite(z4)] => (z1 - z3) / (z1 - z4),
        [Finite(z1), Finite(z2), Infinity, Finite(z4)] => (z2 - z4) / (z1 - z4),
        [Finite(z1), Finite(z2), Finite(z3), Infinity] => (z1 - z3) / (z2 - z3),
        [Finite(z1), Finite(z2), Finite(z3), Finite(z4)] => {
            ((z1 - z3) * (z2 - z4)) / ((z1 - z4) * (z2 - z3))
        }
        _ => unreachable!("distinct points contain at most one infinity"),
    };
    Ok(value)
}
