//! Fixed-point solution of `f = z + P[Φ(·, f)]` on the unit disk and the
//! resulting extension of a finite motion.

use num_complex::Complex;
use rayon::prelude::*;

use super::constants::{motion_constants, ConstantsMesh, MotionConstants};
use super::motion::FinitePointMotion;
use super::phi::BumpField;
use crate::cauchy::polar::{exterior_sum, DiskCauchy, PolarMesh};
use crate::error::{Error, Result};
use crate::motion::{check_parameter, HolomorphicMotion};
use crate::scalar::{lit, to_f64, Real};

/// Damped Picard iteration `f <- f + ω (z + K f - f)`, stopped once the
/// fixed-point residual `sup |z + K f - f|` drops below `tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub omega: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { omega: 0.5, tol: 1e-8, max_iter: 500 }
    }
}

/// Discretization and solver settings for the extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionConfig {
    pub radial_panels: usize,
    pub panel_order: usize,
    pub angular: usize,
    pub constants_mesh: ConstantsMesh,
    pub solver: SolverConfig,
    /// Largest `|c| / r` at which the extension is evaluated.
    pub max_parameter_ratio: f64,
}

impl Default for ExtensionConfig {
    fn default() -> Self {
        ExtensionConfig {
            radial_panels: 8,
            panel_order: 8,
            angular: 256,
            constants_mesh: ConstantsMesh::default(),
            solver: SolverConfig::default(),
            max_parameter_ratio: 0.95,
        }
    }
}

/// Solution for one point `z`: the extended trajectory is
/// `H(c, z) = z + Σ_k moments[k] (c/r)^(k+1)` for `|c| < r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvedTrajectory<T> {
    pub z: Complex<T>,
    pub moments: Vec<Complex<T>>,
    pub iterations: usize,
    pub residual: T,
    /// `sup |f - z|` over the disk mesh; bounded by `D` in theory.
    pub displacement: T,
    pub history: Vec<T>,
}

impl<T: Real> SolvedTrajectory<T> {
    fn trivial(z: Complex<T>) -> Self {
        SolvedTrajectory { z, moments: Vec::new(), iterations: 0, residual: T::zero(), displacement: T::zero(), history: Vec::new() }
    }

    /// `H(c, z)` for `|c| < r`.
    pub fn eval(&self, c: Complex<T>, r: T) -> Complex<T> {
        self.z + exterior_sum(&self.moments, c / r)
    }

    /// `∂H/∂c` at `c = 0`.
    pub fn tangent(&self, r: T) -> Complex<T> {
        self.moments.first().map(|m| m / r).unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }
}

/// The extension of a finite motion to `Δ_r × C`, evaluated point by point.
pub struct ChirkaMotion<T: Real> {
    motion: FinitePointMotion<T>,
    r: T,
    constants: MotionConstants<T>,
    operator: DiskCauchy<T>,
    field: BumpField<T>,
    config: ExtensionConfig,
    moment_count: usize,
}

impl<T: Real> std::fmt::Debug for ChirkaMotion<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChirkaMotion").field("r", &self.r).field("constants", &self.constants).finish_non_exhaustive()
    }
}

impl<T: Real> ChirkaMotion<T> {
    /// Prepares the extension over `|c| < r`, `0 < r < 1`, of a motion given
    /// over the unit disk.
    pub fn new(motion: &FinitePointMotion<T>, r: T, config: ExtensionConfig) -> Result<Self> {
        if !(r > T::zero() && r < T::one()) {
            return Err(Error::Domain(format!("extension radius {r} must lie in (0, 1)")));
        }
        if !(config.max_parameter_ratio > 0.0 && config.max_parameter_ratio < 1.0) {
            return Err(Error::Config("max_parameter_ratio must lie in (0, 1)".into()));
        }
        let scaled = motion.rescaled(r);
        let constants = motion_constants(&scaled, &config.constants_mesh)?;
        let mesh = PolarMesh::new(config.radial_panels, config.panel_order, config.angular)?;
        let nodes = mesh.nodes();
        let field = BumpField::new(&scaled.trajectories, &nodes, constants.delta)?;
        let operator = DiskCauchy::new(mesh);
        let moment_count = operator.moment_count(lit(config.max_parameter_ratio), lit(1e-17));
        Ok(ChirkaMotion { motion: scaled, r, constants, operator, field, config, moment_count })
    }

    pub fn radius(&self) -> T {
        self.r
    }

    pub fn constants(&self) -> &MotionConstants<T> {
        &self.constants
    }

    /// The motion being extended, reparametrized over the disk of radius `r`
    /// and rescaled to the unit disk.
    pub fn rescaled_motion(&self) -> &FinitePointMotion<T> {
        &self.motion
    }

    pub fn config(&self) -> &ExtensionConfig {
        &self.config
    }

    pub fn field(&self) -> &BumpField<T> {
        &self.field
    }

    /// Parameter nodes of the disk mesh (in the rescaled unit-disk
    /// coordinate `c / r`).
    pub fn parameter_nodes(&self) -> Vec<Complex<T>> {
        self.operator.mesh().nodes()
    }

    /// `K f = P[Φ(·, f)]` for values of `f` at the parameter nodes.
    pub fn apply_k(&self, f: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if f.len() != self.operator.mesh().len() {
            return Err(Error::Shape(format!("{} values for {} parameter nodes", f.len(), self.operator.mesh().len())));
        }
        let q: Vec<Complex<T>> = f.iter().enumerate().map(|(k, &w)| self.field.eval(k, w)).collect();
        Ok(self.operator.apply(&q))
    }

    pub fn solve(&self, z: Complex<T>) -> Result<SolvedTrajectory<T>> {
        let f = vec![z; self.operator.mesh().len()];
        if self.field.vanishes_for(&f) {
            return Ok(SolvedTrajectory::trivial(z));
        }
        self.iterate(z, f)
    }

    /// Solves from the initial guess `init` at every parameter node instead
    /// of the constant `z`.
    pub fn solve_from(&self, z: Complex<T>, init: &[Complex<T>]) -> Result<SolvedTrajectory<T>> {
        if init.len() != self.operator.mesh().len() {
            return Err(Error::Shape(format!("{} initial values for {} parameter nodes", init.len(), self.operator.mesh().len())));
        }
        self.iterate(z, init.to_vec())
    }

    fn iterate(&self, z: Complex<T>, mut f: Vec<Complex<T>>) -> Result<SolvedTrajectory<T>> {
        let phi = |f: &[Complex<T>]| -> Vec<Complex<T>> { f.iter().enumerate().map(|(k, &w)| self.field.eval(k, w)).collect() };
        let mut q = phi(&f);
        let omega = lit::<T>(self.config.solver.omega);
        let tol = lit::<T>(self.config.solver.tol);
        let mut history = Vec::new();
        for it in 0..self.config.solver.max_iter {
            let kf = self.operator.apply(&q);
            let mut res = T::zero();
            let residual: Vec<Complex<T>> = kf
                .iter()
                .zip(&f)
                .map(|(k, &fv)| {
                    let r = z + k - fv;
                    res = res.max(r.norm());
                    r
                })
                .collect();
            history.push(res);
            if !res.is_finite() {
                break;
            }
            if res < tol {
                let displacement = f.iter().fold(T::zero(), |m, &v| m.max((v - z).norm()));
                let moments = self.operator.moments(&q, self.moment_count);
                return Ok(SolvedTrajectory { z, moments, iterations: it, residual: res, displacement, history });
            }
            for (fv, r) in f.iter_mut().zip(&residual) {
                *fv += r * omega;
            }
            q = phi(&f);
        }
        Err(Error::NonConvergence {
            iterations: self.config.solver.max_iter,
            residual: history.last().map(|&r| to_f64(r)).unwrap_or(f64::NAN),
            history: history.into_iter().map(to_f64).collect(),
        })
    }

    fn check(&self, c: Complex<T>) -> Result<()> {
        check_parameter(c, self.r)?;
        if c.norm() > self.r * lit(self.config.max_parameter_ratio) {
            return Err(Error::Domain(format!("|c| = {} exceeds the evaluated range {} r", c.norm(), self.config.max_parameter_ratio)));
        }
        Ok(())
    }

    pub fn solve_many(&self, points: &[Complex<T>]) -> Vec<Result<SolvedTrajectory<T>>> {
        points.par_iter().map(|&z| self.solve(z)).collect()
    }
}

impl<T: Real> HolomorphicMotion<T> for ChirkaMotion<T> {
    fn parameter_radius(&self) -> T {
        self.r
    }

    fn eval_path(&self, z: Complex<T>, params: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        for &c in params {
            self.check(c)?;
        }
        let sol = self.solve(z)?;
        Ok(params.iter().map(|&c| sol.eval(c, self.r)).collect())
    }
}

impl<T: Real> std::fmt::Display for MotionConstants<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "delta={} C4={} C5={} C6={} L={} D={} R={}", self.delta, self.c4, self.c5, self.c6, self.l, self.d, self.big_r)
    }
}
