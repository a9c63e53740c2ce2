//! Sampling the extended motion on a point set and auditing the result.

use std::path::Path;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use super::constants::MotionConstants;
use super::motion::FinitePointMotion;
use super::solver::{ChirkaMotion, ExtensionConfig};
use crate::error::{Error, Result};
use crate::geometry::sphere::{spherical_distance, SpherePoint};
use crate::grid::{GridSamples, GridSpec};
use crate::io::{write_json, Cell, Table};
use crate::motion::HolomorphicMotion;
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointFailure {
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionDiagnostics<T> {
    pub constants: MotionConstants<T>,
    pub max_residual: T,
    pub max_iterations: usize,
    /// `sup |f_z - z|` over solved points, to compare with `constants.d`.
    pub max_displacement: T,
    /// `max |H(c, z_i) - h(c, z_i)|` over data points and parameters.
    pub data_agreement: T,
    /// Minimum pairwise chordal distance of the images, per parameter.
    pub injectivity: Vec<T>,
    pub failures: Vec<PointFailure>,
}

/// Values `H(c_p, z_k)` stored parameter-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedMotion<T> {
    pub r: T,
    pub points: Vec<Complex<T>>,
    pub params: Vec<Complex<T>>,
    pub values: Vec<Complex<T>>,
    /// `∂H/∂c (0, z_k)`.
    pub tangents: Vec<Complex<T>>,
    /// Set when `points` are the nodes of a grid, in grid order.
    pub grid: Option<GridSpec<T>>,
    pub diagnostics: ExtensionDiagnostics<T>,
}

/// Images closer than this (chordally) count as an injectivity failure.
pub const INJECTIVITY_FLOOR: f64 = 1e-13;

impl<T: Real> ExtendedMotion<T> {
    /// Solves the extension at every point and evaluates it at every parameter.
    /// Points whose solve fails are recorded and carry NaN values.
    pub fn sample(motion: &ChirkaMotion<T>, points: &[Complex<T>], params: &[Complex<T>], grid: Option<GridSpec<T>>) -> Result<Self> {
        if let Some(g) = grid {
            if g.len() != points.len() {
                return Err(Error::Shape("grid does not match the point list".into()));
            }
        }
        for &c in params {
            motion.eval_path(Complex::new(T::zero(), T::zero()), &[c])?;
        }
        let r = motion.radius();
        let nan = Complex::new(T::nan(), T::nan());
        let solved = motion.solve_many(points);
        let mut failures = Vec::new();
        let mut max_residual = T::zero();
        let mut max_iterations = 0;
        let mut max_displacement = T::zero();
        let mut tangents = Vec::with_capacity(points.len());
        for (k, s) in solved.iter().enumerate() {
            match s {
                Ok(s) => {
                    max_residual = max_residual.max(s.residual);
                    max_iterations = max_iterations.max(s.iterations);
                    max_displacement = max_displacement.max(s.displacement);
                    tangents.push(s.tangent(r));
                }
                Err(e) => {
                    failures.push(PointFailure { index: k, message: e.to_string() });
                    tangents.push(nan);
                }
            }
        }
        let mut values = Vec::with_capacity(points.len() * params.len());
        for &c in params {
            for s in &solved {
                values.push(match s {
                    Ok(s) => s.eval(c, r),
                    Err(_) => nan,
                });
            }
        }

        let data = motion.rescaled_motion();
        let data_solved = motion.solve_many(&data.trajectories.iter().map(|t| t.base).collect::<Vec<_>>());
        let mut data_agreement = T::zero();
        for (t, s) in data.trajectories.iter().zip(data_solved) {
            let s = s?;
            for &c in params {
                data_agreement = data_agreement.max((s.eval(c, r) - t.eval(c / r)).norm());
            }
        }

        let np = points.len();
        let injectivity: Vec<T> = (0..params.len())
            .into_par_iter()
            .map(|p| {
                let slice = &values[p * np..(p + 1) * np];
                let mut best = T::infinity();
                for i in 0..np {
                    if slice[i].re.is_nan() {
                        continue;
                    }
                    for j in (i + 1)..np {
                        if slice[j].re.is_nan() {
                            continue;
                        }
                        best = best.min(spherical_distance(SpherePoint::Finite(slice[i]), SpherePoint::Finite(slice[j])));
                    }
                }
                best
            })
            .collect();
        if let Some((p, d)) = injectivity.iter().enumerate().find(|(_, d)| **d < lit(INJECTIVITY_FLOOR)) {
            return Err(Error::Injectivity(format!("images collide at parameter {} (distance {d})", params[p])));
        }

        let diagnostics = ExtensionDiagnostics {
            constants: *motion.constants(),
            max_residual,
            max_iterations,
            max_displacement,
            data_agreement,
            injectivity,
            failures,
        };
        Ok(ExtendedMotion { r, points: points.to_vec(), params: params.to_vec(), values, tangents, grid, diagnostics })
    }

    pub fn slice(&self, param: usize) -> &[Complex<T>] {
        let n = self.points.len();
        &self.values[param * n..(param + 1) * n]
    }

    /// The slice at a parameter as grid samples, when the points form a grid.
    pub fn grid_slice(&self, param: usize) -> Result<GridSamples<T>> {
        let grid = self.grid.ok_or_else(|| Error::Precondition("extension was not sampled on a grid".into()))?;
        GridSamples::new(grid, self.slice(param).to_vec())
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["c_re", "c_im", "z_re", "z_im", "h_re", "h_im"]);
        for (p, c) in self.params.iter().enumerate() {
            for (z, h) in self.points.iter().zip(self.slice(p)) {
                t.push(
                    [c.re, c.im, z.re, z.im, h.re, h.im]
                        .into_iter()
                        .map(|x| Cell::from(to_f64(x)))
                        .collect(),
                );
            }
        }
        t
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.to_table().write(path)
    }

    /// Writes `<stem>.json` (radius, parameters, grid and diagnostics) and
    /// `<stem>.csv` (the [`to_table`](Self::to_table) values).
    pub fn write(&self, stem: impl AsRef<Path>) -> Result<()>
    where
        T: Serialize,
    {
        let stem = stem.as_ref();
        let p = |z: &Complex<T>| [to_f64(z.re), to_f64(z.im)];
        let header = ExtensionHeader {
            r: to_f64(self.r),
            points: self.points.len(),
            params: self.params.iter().map(p).collect(),
            grid: self.grid.map(|g| GridHeader { origin: p(&g.origin), spacing: to_f64(g.spacing), nx: g.nx, ny: g.ny }),
            columns: ["c_re", "c_im", "z_re", "z_im", "h_re", "h_im"],
            diagnostics: &self.diagnostics,
        };
        write_json(stem.with_extension("json"), &header)?;
        self.write_csv(stem.with_extension("csv"))
    }
}

#[derive(Serialize)]
struct GridHeader {
    origin: [f64; 2],
    spacing: f64,
    nx: usize,
    ny: usize,
}

#[derive(Serialize)]
struct ExtensionHeader<'a, T> {
    r: f64,
    points: usize,
    params: Vec<[f64; 2]>,
    grid: Option<GridHeader>,
    columns: [&'static str; 6],
    diagnostics: &'a ExtensionDiagnostics<T>,
}

impl<T: Real> HolomorphicMotion<T> for ExtendedMotion<T> {
    fn parameter_radius(&self) -> T {
        self.r
    }

    /// Only the stored points and parameters can be evaluated.
    fn eval_path(&self, z: Complex<T>, params: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let k = self
            .points
            .iter()
            .position(|&p| p == z)
            .ok_or_else(|| Error::Domain(format!("{z} is not a sampled point")))?;
        params
            .iter()
            .map(|&c| {
                let p = self
                    .params
                    .iter()
                    .position(|&q| q == c)
                    .ok_or_else(|| Error::Domain(format!("{c} is not a sampled parameter")))?;
                Ok(self.values[p * self.points.len() + k])
            })
            .collect()
    }
}

/// Builds the extension of `motion` over `|c| < r` and samples it.
pub fn extend_motion<T: Real>(
    motion: &FinitePointMotion<T>,
    r: T,
    points: &[Complex<T>],
    params: &[Complex<T>],
    grid: Option<GridSpec<T>>,
    config: ExtensionConfig,
) -> Result<ExtendedMotion<T>> {
    let chirka = ChirkaMotion::new(motion, r, config)?;
    ExtendedMotion::sample(&chirka, points, params, grid)
}

/// `sup |∂H/∂c̄|` of `c -> H(c, z)` by centred differences on an `n x n`
/// mesh of `[-a, a]^2` with `a = ratio * r / sqrt 2`, so the mesh stays in
/// the disk `|c| <= ratio * r`.
pub fn parameter_holomorphy_residual<T: Real>(motion: &ChirkaMotion<T>, z: Complex<T>, n: usize, ratio: T) -> Result<T> {
    let a = ratio * motion.radius() / lit::<T>(2.0).sqrt();
    let grid = GridSpec::square(Complex::new(T::zero(), T::zero()), a, n)?;
    let nodes = grid.nodes();
    let values = motion.eval_path(z, &nodes)?;
    let samples = GridSamples::new(grid, values)?;
    let mut sup = T::zero();
    for iy in 1..n - 1 {
        for ix in 1..n - 1 {
            sup = sup.max(samples.wirtinger(ix, iy).1.norm());
        }
    }
    Ok(sup)
}
