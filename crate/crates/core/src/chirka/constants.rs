//! Separation and size constants of a finite point motion.

use num_complex::Complex;
use serde::Serialize;

use super::bump::Bump;
use super::motion::FinitePointMotion;
use crate::error::{Error, Result};
use crate::scalar::{count, lit, to_f64, Real};

/// Safety factor applied to the sampled minimum separation.
pub const SEPARATION_DEFLATION: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotionConstants<T> {
    /// Lower bound for the separation of any two trajectories, 0 and 1
    /// included, over the closed unit disk.
    pub delta: T,
    /// `sup |f_i|` over the disk.
    pub c4: T,
    /// `sup |∂f_i/∂c̄|` over the disk.
    pub c5: T,
    /// `sup |λ'|` of the cutoff with radius `δ/2`.
    pub c6: T,
    /// Lipschitz constant `2 C5 C6` of `Φ` in the fibre variable.
    pub l: T,
    /// Bound `2 C5` on `|Φ|`.
    pub d: T,
    /// `Φ(c, w) = 0` for `|w| >= C4 + δ/2`.
    pub big_r: T,
}

/// Sampling mesh on the closed unit disk: `radial + 1` circles (including
/// the centre and the boundary) of `angular` points each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantsMesh {
    pub radial: usize,
    pub angular: usize,
}

impl Default for ConstantsMesh {
    fn default() -> Self {
        ConstantsMesh { radial: 64, angular: 256 }
    }
}

impl ConstantsMesh {
    pub fn points<T: Real>(&self) -> Vec<Complex<T>> {
        let mut pts = vec![Complex::new(T::zero(), T::zero())];
        for j in 1..=self.radial {
            let r = count::<T>(j) / count::<T>(self.radial);
            for l in 0..self.angular {
                let th = T::TAU() * count::<T>(l) / count::<T>(self.angular);
                pts.push(Complex::from_polar(r, th));
            }
        }
        pts
    }
}

pub fn motion_constants<T: Real>(motion: &FinitePointMotion<T>, mesh: &ConstantsMesh) -> Result<MotionConstants<T>> {
    let trajectories = motion.with_fixed_points();
    let pts = mesh.points::<T>();
    let mut values = Vec::with_capacity(trajectories.len());
    let mut c4 = T::zero();
    let mut c5 = T::zero();
    for t in &trajectories {
        let mut row = Vec::with_capacity(pts.len());
        for &c in &pts {
            let (v, d) = t.reflect(c)?;
            c4 = c4.max(v.norm());
            c5 = c5.max(d.norm());
            row.push(v);
        }
        values.push(row);
    }
    let mut sep = T::infinity();
    let mut worst = (0, 1, Complex::new(T::zero(), T::zero()));
    for i in 0..trajectories.len() {
        for j in (i + 1)..trajectories.len() {
            for (k, &c) in pts.iter().enumerate() {
                let d = (values[i][k] - values[j][k]).norm();
                if d < sep {
                    sep = d;
                    worst = (i, j, c);
                }
            }
        }
    }
    let delta = sep * lit(SEPARATION_DEFLATION);
    if !(delta > lit(1e-12)) {
        // Indices count 0 and 1 as points 0 and 1; the moving points follow.
        return Err(Error::Collision { first: worst.0, second: worst.1, separation: to_f64(sep), c_re: to_f64(worst.2.re), c_im: to_f64(worst.2.im) });
    }
    let c6 = Bump::new(delta / lit(2.0)).lipschitz();
    let two = lit::<T>(2.0);
    Ok(MotionConstants { delta, c4, c5, c6, l: two * c5 * c6, d: two * c5, big_r: c4 + delta / two })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chirka::motion::Trajectory;

    #[test]
    fn two_constant_points() {
        let m = FinitePointMotion::new(vec![Trajectory::constant(Complex::new(3.0f64, 0.0)), Trajectory::constant(Complex::new(4.0, 0.0))]).unwrap();
        let k = motion_constants(&m, &ConstantsMesh::default()).unwrap();
        assert!((k.delta - 0.95).abs() < 1e-15);
        assert_eq!(k.c5, 0.0);
        assert_eq!(k.l, 0.0);
        assert_eq!(k.c4, 4.0);
    }

    #[test]
    fn colliding_trajectories() {
        // 1.5 + c/2 reaches the fixed point 1 at c = -1.
        let m = FinitePointMotion::new(vec![Trajectory::polynomial(Complex::new(1.5f64, 0.0), vec![Complex::new(0.5, 0.0)])]).unwrap();
        let err = motion_constants(&m, &ConstantsMesh::default()).unwrap_err();
        assert!(matches!(err, Error::Collision { first: 1, second: 2, .. }), "{err:?}");
    }
}
