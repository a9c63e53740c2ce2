//! Motions of finitely many points given by trajectories holomorphic in the
//! parameter.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{read_json, write_json};
use crate::scalar::{count, lit, to_f64, Real};

/// Trajectory `h(c) = base + Σ_{k>=1} a_k c^k` on the unit disk. In the
/// exterior coordinate `u = 1/c` this is `base + Σ a_k u^(-k)`, holomorphic
/// near infinity with value `base` there.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub base: Complex<T>,
    pub coefficients: Vec<Complex<T>>,
    /// Whether the coefficient list truncates a longer series (as opposed to
    /// describing a polynomial trajectory exactly).
    pub truncated: bool,
}

/// Tail tolerance for truncated coefficient lists.
pub const TAIL_LIMIT: f64 = 1e-12;

impl<T: Real> Trajectory<T> {
    pub fn constant(base: Complex<T>) -> Self {
        Trajectory { base, coefficients: Vec::new(), truncated: false }
    }

    pub fn polynomial(base: Complex<T>, coefficients: Vec<Complex<T>>) -> Self {
        Trajectory { base, coefficients, truncated: false }
    }

    /// `h(c)` by Horner's rule.
    pub fn eval(&self, c: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for a in self.coefficients.iter().rev() {
            acc = (acc + a) * c;
        }
        self.base + acc
    }

    /// The trajectory at exterior coordinate `u`, i.e. `h(1/u)`.
    pub fn eval_exterior(&self, u: Complex<T>) -> Complex<T> {
        self.eval(u.inv())
    }

    /// Reflection across the unit circle: for `|c| <= 1` the value
    /// `base + Σ a_k conj(c)^k` with its `∂/∂c̄` derivative; zero derivative
    /// beyond the circle.
    pub fn reflect(&self, c: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        if c.norm() > T::one() {
            return Ok((self.eval_exterior(c), Complex::new(T::zero(), T::zero())));
        }
        let bound = self.tail_bound(c.norm());
        if bound > lit(TAIL_LIMIT) {
            return Err(Error::Truncation { bound: to_f64(bound), limit: TAIL_LIMIT });
        }
        let cb = c.conj();
        let mut value = Complex::new(T::zero(), T::zero());
        let mut deriv = Complex::new(T::zero(), T::zero());
        for (k, a) in self.coefficients.iter().enumerate().rev() {
            deriv = deriv * cb + a * count::<T>(k + 1);
            value = (value + a) * cb;
        }
        Ok((self.base + value, deriv))
    }

    /// `∂h/∂c̄` of the reflected trajectory: `a_1 + 2 a_2 c̄ + …` inside the
    /// closed unit disk, zero outside.
    pub fn dbar_coefficient(&self, c: Complex<T>) -> Result<Complex<T>> {
        Ok(self.reflect(c)?.1)
    }

    /// `|a|_∞ ρ^(M+1) / (1 - ρ)` for truncated lists, zero otherwise.
    pub fn tail_bound(&self, rho: T) -> T {
        if !self.truncated {
            return T::zero();
        }
        if rho >= T::one() {
            return T::infinity();
        }
        let sup = self.coefficients.iter().fold(T::zero(), |m, a| m.max(a.norm()));
        sup * rho.powi(self.coefficients.len() as i32 + 1) / (T::one() - rho)
    }

    /// The trajectory `c -> h(r c)`.
    pub fn rescaled(&self, r: T) -> Self {
        let mut scale = T::one();
        let coefficients = self
            .coefficients
            .iter()
            .map(|a| {
                scale *= r;
                a * scale
            })
            .collect();
        Trajectory { base: self.base, coefficients, truncated: self.truncated }
    }

    /// Recovers `terms` coefficients from samples of the exterior trajectory
    /// at `u_j = radius e^{2πij/N}`, `N = samples.len() >= 2 terms`.
    pub fn fit_boundary_samples(samples: &[Complex<T>], radius: T, terms: usize) -> Result<Self> {
        let n = samples.len();
        if n < 2 * terms + 1 || !(radius > T::one()) {
            return Err(Error::Config("boundary fit needs radius > 1 and at least 2M + 1 samples".into()));
        }
        let theta = |j: usize| T::TAU() * count::<T>(j) / count::<T>(n);
        let inv_n = T::one() / count::<T>(n);
        let mode = |k: usize| -> Complex<T> {
            samples
                .iter()
                .enumerate()
                .map(|(j, f)| f * Complex::from_polar(T::one(), count::<T>(k) * theta(j)))
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
                * inv_n
        };
        let base = mode(0);
        let coefficients = (1..=terms).map(|k| mode(k) * radius.powi(k as i32)).collect();
        let fitted = Trajectory { base, coefficients, truncated: true };
        let residual = samples
            .iter()
            .enumerate()
            .map(|(j, f)| (fitted.eval_exterior(Complex::from_polar(radius, theta(j))) - f).norm())
            .fold(T::zero(), T::max);
        if residual > lit(1e-8) {
            return Err(Error::Precondition(format!("boundary fit residual {residual} exceeds 1e-8")));
        }
        Ok(fitted)
    }
}

/// A normalized motion of `{0, 1, inf} ∪ {z_2, ...}`: the points 0, 1 and
/// infinity are fixed and only the listed trajectories move.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePointMotion<T> {
    pub trajectories: Vec<Trajectory<T>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BoundarySamplesFile {
    radius: f64,
    values: Vec<[f64; 2]>,
    terms: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct TrajectoryFile {
    base: [f64; 2],
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    coefficients: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary_samples: Option<BoundarySamplesFile>,
    #[serde(default)]
    truncated: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct MotionFile {
    trajectories: Vec<TrajectoryFile>,
}

fn c2<T: Real>(p: [f64; 2]) -> Complex<T> {
    Complex::new(lit(p[0]), lit(p[1]))
}

impl<T: Real> FinitePointMotion<T> {
    pub fn new(trajectories: Vec<Trajectory<T>>) -> Result<Self> {
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        for (i, t) in trajectories.iter().enumerate() {
            if t.base == zero || t.base == one {
                return Err(Error::Degenerate(format!("trajectory {i} starts at a normalization point")));
            }
            if trajectories[..i].iter().any(|s| s.base == t.base) {
                return Err(Error::Degenerate(format!("trajectory {i} repeats a base point")));
            }
        }
        Ok(FinitePointMotion { trajectories })
    }

    /// Base points of every trajectory, including 0 and 1 (infinity omitted).
    pub fn base_points(&self) -> Vec<Complex<T>> {
        let mut pts = vec![Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())];
        pts.extend(self.trajectories.iter().map(|t| t.base));
        pts
    }

    /// All finite trajectories including the constant ones at 0 and 1.
    pub fn with_fixed_points(&self) -> Vec<Trajectory<T>> {
        let mut all = vec![Trajectory::constant(Complex::new(T::zero(), T::zero())), Trajectory::constant(Complex::new(T::one(), T::zero()))];
        all.extend(self.trajectories.iter().cloned());
        all
    }

    pub fn rescaled(&self, r: T) -> Self {
        FinitePointMotion { trajectories: self.trajectories.iter().map(|t| t.rescaled(r)).collect() }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file: MotionFile = read_json(path)?;
        let mut trajectories = Vec::with_capacity(file.trajectories.len());
        for t in file.trajectories {
            let traj = match t.boundary_samples {
                Some(bs) => {
                    let samples: Vec<Complex<T>> = bs.values.iter().map(|&p| c2(p)).collect();
                    let fitted = Trajectory::fit_boundary_samples(&samples, lit(bs.radius), bs.terms)?;
                    if (fitted.base - c2(t.base)).norm() > lit(1e-8) {
                        return Err(Error::Parse {
                            path: path.display().to_string(),
                            message: "boundary samples disagree with the declared base point".into(),
                        });
                    }
                    fitted
                }
                None => Trajectory {
                    base: c2(t.base),
                    coefficients: t.coefficients.iter().map(|&p| c2(p)).collect(),
                    truncated: t.truncated,
                },
            };
            trajectories.push(traj);
        }
        FinitePointMotion::new(trajectories)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let p = |z: Complex<T>| [to_f64(z.re), to_f64(z.im)];
        let file = MotionFile {
            trajectories: self
                .trajectories
                .iter()
                .map(|t| TrajectoryFile {
                    base: p(t.base),
                    coefficients: t.coefficients.iter().map(|&a| p(a)).collect(),
                    boundary_samples: None,
                    truncated: t.truncated,
                })
                .collect(),
        };
        write_json(path, &file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Trajectory<f64> {
        Trajectory::polynomial(Complex::new(2.0, 0.0), vec![Complex::new(0.0, 0.5), Complex::new(0.1, 0.0), Complex::new(0.0, -0.05)])
    }

    #[test]
    fn dbar_coefficients() {
        let c = |re: f64| Complex::new(re, 0.0);
        let t = Trajectory::polynomial(c(2.0), vec![c(0.1)]);
        assert_eq!(t.reflect(c(0.0)).unwrap().0, c(2.0));
        assert_eq!(t.dbar_coefficient(c(0.0)).unwrap(), c(0.1));
        assert_eq!(t.dbar_coefficient(Complex::new(0.3, -0.8)).unwrap(), c(0.1));
        assert_eq!(t.dbar_coefficient(c(1.5)).unwrap(), c(0.0));
        let t = Trajectory::polynomial(c(2.0), vec![c(0.0), c(1.0)]);
        assert!((t.dbar_coefficient(c(0.5)).unwrap() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn reflection_is_continuous_across_the_circle() {
        let t = sample();
        for k in 0..16 {
            let c = Complex::from_polar(1.0, 0.4 * k as f64);
            let (inside, _) = t.reflect(c * (1.0 - 1e-12)).unwrap();
            let (outside, d) = t.reflect(c * (1.0 + 1e-12)).unwrap();
            assert!((inside - outside).norm() < 1e-10);
            assert_eq!(d, Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn reflected_derivative_is_conjugate_derivative() {
        let t = sample();
        let c = Complex::new(0.3, -0.4);
        let h = 1e-6;
        let (_, d) = t.reflect(c).unwrap();
        let fx = (t.reflect(c + h).unwrap().0 - t.reflect(c - h).unwrap().0) / (2.0 * h);
        let fy = (t.reflect(c + Complex::new(0.0, h)).unwrap().0 - t.reflect(c - Complex::new(0.0, h)).unwrap().0) / (2.0 * h);
        let dbar = (fx + Complex::new(0.0, 1.0) * fy) * 0.5;
        assert!((dbar - d).norm() < 1e-8);
    }

    #[test]
    fn truncated_series_diverges_on_the_circle() {
        let mut t = sample();
        t.truncated = true;
        assert!(matches!(t.reflect(Complex::new(1.0, 0.0)), Err(Error::Truncation { .. })));
    }

    #[test]
    fn boundary_fit_recovers_coefficients() {
        let t = sample();
        let n = 16;
        let samples: Vec<_> = (0..n).map(|j| t.eval_exterior(Complex::from_polar(1.25, std::f64::consts::TAU * j as f64 / n as f64))).collect();
        let fit = Trajectory::fit_boundary_samples(&samples, 1.25, 4).unwrap();
        assert!((fit.base - t.base).norm() < 1e-12);
        for (a, b) in fit.coefficients.iter().zip(&t.coefficients) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(fit.coefficients[3].norm() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = FinitePointMotion::new(vec![sample()]).unwrap();
        let p = dir.path().join("m.json");
        m.write(&p).unwrap();
        assert_eq!(FinitePointMotion::<f64>::read(&p).unwrap(), m);
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = FinitePointMotion::<f64>::read("/nonexistent/motion.json").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert_eq!(err.category().exit_code(), 2);
    }
}
