//! Cauchy transform of densities supported in the closed unit disk,
//! discretized on a polar mesh: uniform in angle, Gauss–Legendre panels in
//! radius. Angular Fourier modes decouple the operator into radial Volterra
//! integrals, so on the mesh it is exact up to the radial quadrature.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::geometry::quadrature::gauss_legendre;
use crate::scalar::{count, lit, Real};

/// Nodes `ρ_j e^{2πi l / N}` with `ρ_j` the Gauss points of `panels` equal
/// radial panels of `order` nodes each. Node `(j, l)` has flat index `j*N + l`.
#[derive(Debug, Clone)]
pub struct PolarMesh<T> {
    pub panels: usize,
    pub order: usize,
    pub angular: usize,
    pub radii: Vec<T>,
    pub radial_weights: Vec<T>,
    unit: Vec<Complex<T>>,
}

impl<T: Real> PolarMesh<T> {
    pub fn new(panels: usize, order: usize, angular: usize) -> Result<Self> {
        if panels == 0 || order == 0 || angular < 8 || !angular.is_multiple_of(2) {
            return Err(Error::Config("polar mesh needs panels, order > 0 and an even angular count >= 8".into()));
        }
        let (x, w) = gauss_legendre(order);
        let mut radii = Vec::with_capacity(panels * order);
        let mut radial_weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = p as f64 / panels as f64;
            let h = 1.0 / panels as f64;
            for (xi, wi) in x.iter().zip(&w) {
                radii.push(lit(a + 0.5 * h * (xi + 1.0)));
                radial_weights.push(lit(0.5 * h * wi));
            }
        }
        let unit = (0..angular)
            .map(|l| {
                let th = 2.0 * std::f64::consts::PI * l as f64 / angular as f64;
                Complex::new(lit(th.cos()), lit(th.sin()))
            })
            .collect();
        Ok(PolarMesh { panels, order, angular, radii, radial_weights, unit })
    }

    pub fn radial_len(&self) -> usize {
        self.radii.len()
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angular
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, j: usize, l: usize) -> Complex<T> {
        self.unit[l] * self.radii[j]
    }

    pub fn nodes(&self) -> Vec<Complex<T>> {
        (0..self.radial_len()).flat_map(|j| (0..self.angular).map(move |l| (j, l))).map(|(j, l)| self.node(j, l)).collect()
    }

    /// Area weight of the nodes on ring `j`.
    pub fn area_weight(&self, j: usize) -> T {
        self.radial_weights[j] * self.radii[j] * T::TAU() / count::<T>(self.angular)
    }

    /// Largest radius of the mesh.
    pub fn outer_radius(&self) -> T {
        *self.radii.last().expect("nonempty mesh")
    }
}

fn lagrange_row(nodes: &[f64], t: f64) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .fold(1.0, |acc, (_, &xk)| acc * (t - xk) / (nodes[i] - xk))
        })
        .collect()
}

/// The operator `F -> P F` on mesh values, for `F` supported in the unit disk.
pub struct DiskCauchy<T: Real> {
    mesh: PolarMesh<T>,
    /// Radial weights `[target ring][mode][source ring]` for modes
    /// `m = -N/2+1 ..= N/2-1`.
    weights: Vec<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for DiskCauchy<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiskCauchy").field("mesh", &self.mesh).finish_non_exhaustive()
    }
}

impl<T: Real> DiskCauchy<T> {
    pub fn new(mesh: PolarMesh<T>) -> Self {
        let nr = mesh.radial_len();
        let n = mesh.angular;
        let modes = n - 1;
        let m_lo = -(n as i64) / 2 + 1;
        let order = mesh.order;
        let hpanel = 1.0 / mesh.panels as f64;
        let radii: Vec<f64> = mesh.radii.iter().map(|r| r.to_f64().unwrap()).collect();
        let rw: Vec<f64> = mesh.radial_weights.iter().map(|r| r.to_f64().unwrap()).collect();
        let sub = order + 4;
        let (gx, gw) = gauss_legendre(sub);
        let mut weights = vec![0.0f64; nr * modes * nr];
        for j in 0..nr {
            let s = radii[j];
            let panel = j / order;
            let (a, b) = (panel as f64 * hpanel, (panel + 1) as f64 * hpanel);
            let pnodes = &radii[panel * order..(panel + 1) * order];
            // Sub-rules on [s, b] and [a, s] with interpolation onto the panel nodes.
            let sub_rule = |lo: f64, hi: f64| -> Vec<(f64, f64, Vec<f64>)> {
                gx.iter()
                    .zip(&gw)
                    .map(|(x, w)| {
                        let t = lo + 0.5 * (hi - lo) * (x + 1.0);
                        (t, 0.5 * (hi - lo) * w, lagrange_row(pnodes, t))
                    })
                    .collect()
            };
            let upper = sub_rule(s, b);
            let lower = sub_rule(a, s);
            for mi in 0..modes {
                let m = m_lo + mi as i64;
                let row = &mut weights[(j * modes + mi) * nr..(j * modes + mi + 1) * nr];
                if m >= 1 {
                    let e = (m - 1) as i32;
                    let kernel = |rho: f64| -2.0 * (s / rho).powi(e);
                    for i in (panel + 1) * order..nr {
                        row[i] += rw[i] * kernel(radii[i]);
                    }
                    for (t, w, lag) in &upper {
                        let k = w * kernel(*t);
                        for (c, li) in lag.iter().enumerate() {
                            row[panel * order + c] += k * li;
                        }
                    }
                } else {
                    let e = (1 - m) as i32;
                    let kernel = |rho: f64| 2.0 * (rho / s).powi(e);
                    for i in 0..panel * order {
                        row[i] += rw[i] * kernel(radii[i]);
                    }
                    for (t, w, lag) in &lower {
                        let k = w * kernel(*t);
                        for (c, li) in lag.iter().enumerate() {
                            row[panel * order + c] += k * li;
                        }
                    }
                }
            }
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        DiskCauchy { mesh, weights: weights.into_iter().map(lit).collect(), forward, inverse }
    }

    pub fn mesh(&self) -> &PolarMesh<T> {
        &self.mesh
    }

    /// Angular spectra `X_k` (unnormalized forward DFT) of each ring.
    pub fn spectra(&self, values: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut buf = values.to_vec();
        for ring in buf.chunks_mut(self.mesh.angular) {
            self.forward.process(ring);
        }
        buf
    }

    /// `P F` at the mesh nodes.
    pub fn apply(&self, values: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.mesh.angular;
        let nr = self.mesh.radial_len();
        let modes = n - 1;
        let m_lo = -(n as i64) / 2 + 1;
        let spec = self.spectra(values);
        let inv_n = T::one() / count::<T>(n);
        let mut out = vec![Complex::new(T::zero(), T::zero()); nr * n];
        for j in 0..nr {
            let target = &mut out[j * n..(j + 1) * n];
            for mi in 0..modes {
                let m = m_lo + mi as i64;
                let src = m.rem_euclid(n as i64) as usize;
                let row = &self.weights[(j * modes + mi) * nr..(j * modes + mi + 1) * nr];
                let mut acc = Complex::new(T::zero(), T::zero());
                for i in 0..nr {
                    acc += spec[i * n + src] * row[i];
                }
                let dst = (m - 1).rem_euclid(n as i64) as usize;
                target[dst] = acc * inv_n;
            }
            self.inverse.process(target);
        }
        out
    }

    /// Discrete moments `(1/π) Σ A F ζ^k` for `k < count`, so that
    /// `P F(u) = Σ_k moment_k u^(-k-1)` for `|u|` beyond the outer ring.
    pub fn moments(&self, values: &[Complex<T>], count_: usize) -> Vec<Complex<T>> {
        let n = self.mesh.angular;
        let spec = self.spectra(values);
        let nr = self.mesh.radial_len();
        let mut out = Vec::with_capacity(count_);
        let mut powers: Vec<T> = (0..nr).map(|j| self.mesh.area_weight(j) * T::FRAC_1_PI()).collect();
        for k in 0..count_ {
            // Σ_l F e^{ikθ_l} is the forward coefficient of index -k.
            let idx = (n - k % n) % n;
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..nr {
                acc += spec[j * n + idx] * powers[j];
            }
            out.push(acc);
            for (p, &rho) in powers.iter_mut().zip(&self.mesh.radii) {
                *p *= rho;
            }
        }
        out
    }

    /// Number of moments needed for relative accuracy `tol` at
    /// `|u| >= 1/t_max`.
    pub fn moment_count(&self, t_max: T, tol: T) -> usize {
        let q = self.mesh.outer_radius() * t_max;
        let k = tol.ln() / q.ln();
        k.ceil().to_usize().unwrap_or(usize::MAX).max(1)
    }
}

/// Evaluates `Σ_k moment_k u^(-k-1)` by Horner's rule in `v = 1/u`.
pub fn exterior_sum<T: Real>(moments: &[Complex<T>], v: Complex<T>) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for m in moments.iter().rev() {
        acc = acc * v + m;
    }
    acc * v
}
