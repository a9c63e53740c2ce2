use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fatou::chart::{guard, PetalChart};
use crate::grid::{GridSamples, GridSpec};
use crate::io::{Cell, Table};
use crate::qc::beltrami;
use crate::scalar::{count, lit, to_f64, Real};

/// Resolution of the Beltrami audit on the seed strip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripAudit {
    /// Nodes per unit length.
    pub per_unit: usize,
    /// The audit window is `|Im w| ≤ half_height`.
    pub half_height: f64,
}

impl Default for StripAudit {
    fn default() -> Self {
        StripAudit { per_unit: 32, half_height: 2.0 }
    }
}

fn smoothstep<T: Real>(u: T) -> T {
    let u = u.max(T::zero()).min(T::one());
    u * u * (lit::<T>(3.0) - lit::<T>(2.0) * u)
}

/// The conjugacy `ψ_m` on `Re w ≥ τ`: an explicit quasiconformal map of the
/// seed strip `τ+m ≤ Re w ≤ τ+m+1` onto `x_m ≤ Re ≤ x_m+1` which agrees
/// with `F` across the two edges, carried to the other strips by `F^{∓i}`.
#[derive(Debug, Clone)]
pub struct StripConjugacy<'a, T> {
    pub chart: &'a PetalChart<T>,
    pub m: usize,
    /// `Re F^m(τ)`.
    pub x_m: T,
    /// Sup of the seed-strip Beltrami coefficient and its theoretical cap
    /// `(K(x_m) − 1)/(K(x_m) + 1)`.
    pub beltrami_sup: T,
    pub beltrami_cap: T,
    pub k_m: T,
}

impl<'a, T: Real> StripConjugacy<'a, T> {
    pub fn new(chart: &'a PetalChart<T>, m: usize, audit: StripAudit) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("stage index m must be at least 1".into()));
        }
        let orbit = chart.orbit(Complex::new(chart.tau, T::zero()), m)?;
        let x_m = orbit[m].re;
        let cs = chart.critical_parameter(x_m)?;
        let mut s = StripConjugacy { chart, m, x_m, beltrami_sup: T::zero(), beltrami_cap: cs, k_m: T::one() };
        let h = T::one() / count::<T>(audit.per_unit);
        let ny = (2.0 * audit.half_height * audit.per_unit as f64).round() as usize + 1;
        let origin = Complex::new(chart.tau + count::<T>(m), -lit::<T>(audit.half_height));
        let grid = GridSpec::new(origin, h, audit.per_unit + 1, ny)?;
        let samples = GridSamples::from_fn(grid, |w| s.seed(w));
        let mu = beltrami(&samples)?;
        s.k_m = mu.dilatation()?;
        s.beltrami_sup = mu.sup_norm;
        Ok(s)
    }

    /// `h(β_m(w))` with `β_m(w) = w + x_m − τ − m` and
    /// `h(v) = v + σ(Re v − x_m) η((v − 1)^(-1/n))`.
    pub fn seed(&self, w: Complex<T>) -> Complex<T> {
        let v = w + (self.x_m - self.chart.tau - count::<T>(self.m));
        let s = smoothstep(v.re - self.x_m);
        if s == T::zero() {
            return v;
        }
        v + self.chart.eta_at(self.chart.xi(v - T::one())) * s
    }

    pub fn eval(&self, w: Complex<T>) -> Result<Complex<T>> {
        let tau = self.chart.tau;
        if w.re < tau {
            return Err(Error::Domain(format!("{w} is left of Re w = {tau}")));
        }
        let shift = (w.re - tau - count::<T>(self.m)).floor();
        let i = -shift.to_i64().ok_or_else(|| Error::NumericalDegeneracy(format!("strip index of {w}")))?;
        let mut p = self.seed(w + lit::<T>(i as f64));
        if i > 0 {
            for _ in 0..i {
                p = self.chart.inverse(p)?;
            }
        } else {
            for _ in 0..(-i) {
                p = self.chart.forward(p);
                guard(p)?;
            }
        }
        Ok(p)
    }

    /// `|F(ψ(w)) − ψ(w + 1)|`.
    pub fn conjugacy_residual(&self, w: Complex<T>) -> Result<T> {
        Ok((self.chart.forward(self.eval(w)?) - self.eval(w + T::one())?).norm())
    }
}

/// Outcome of iterating `ψ_m` towards the Fatou coordinate.
#[derive(Debug, Clone)]
pub struct FatouCoordinate<T> {
    pub test_points: Vec<Complex<T>>,
    /// `Ψ` (the last iterate) at the test points.
    pub values: Vec<Complex<T>>,
    pub residuals: Vec<T>,
    pub conjugacy_residual: T,
    pub m: usize,
    pub converged: bool,
    pub history: Vec<StageRecord<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageRecord<T> {
    pub m: usize,
    pub x_m: T,
    /// `sup |ψ_m − ψ_{m−1}|` over the test points (`NaN` at `m = 1`).
    pub difference: T,
    pub beltrami_sup: T,
    pub beltrami_cap: T,
}

impl<T: Real> FatouCoordinate<T> {
    pub fn values_table(&self) -> Table {
        let mut t = Table::new(&["w_re", "w_im", "psi_re", "psi_im", "residual"]);
        for ((w, p), r) in self.test_points.iter().zip(&self.values).zip(&self.residuals) {
            t.push([w.re, w.im, p.re, p.im, *r].into_iter().map(|x| Cell::from(to_f64(x))).collect());
        }
        t
    }

    pub fn convergence_table(&self) -> Table {
        let mut t = Table::new(&["m", "x_m", "difference", "beltrami_sup", "beltrami_cap"]);
        for h in &self.history {
            let mut row = vec![Cell::from(h.m)];
            row.extend([h.x_m, h.difference, h.beltrami_sup, h.beltrami_cap].into_iter().map(|x| Cell::from(to_f64(x))));
            t.push(row);
        }
        t
    }
}

/// Runs `ψ_1, ψ_2, …` until successive iterates differ by less than `tol` on
/// the test points, or `m_max` is reached; the last iterate is returned
/// either way with `converged` set accordingly.
pub fn fatou_coordinate<T: Real>(chart: &PetalChart<T>, m_max: usize, tol: T, test_points: &[Complex<T>], audit: StripAudit) -> Result<FatouCoordinate<T>> {
    if m_max < 2 {
        return Err(Error::Config(format!("m_max = {m_max} must be at least 2")));
    }
    if test_points.is_empty() {
        return Err(Error::Config("no test points".into()));
    }
    let mut history = Vec::new();
    let mut prev: Option<Vec<Complex<T>>> = None;
    let mut converged = false;
    let mut last = None;
    for m in 1..=m_max {
        let strip = StripConjugacy::new(chart, m, audit)?;
        let values: Vec<Complex<T>> = test_points.par_iter().map(|&w| strip.eval(w)).collect::<Result<_>>()?;
        let difference = match &prev {
            Some(p) => p.iter().zip(&values).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max),
            None => T::nan(),
        };
        history.push(StageRecord { m, x_m: strip.x_m, difference, beltrami_sup: strip.beltrami_sup, beltrami_cap: strip.beltrami_cap });
        prev = Some(values);
        last = Some(strip);
        if difference < tol {
            converged = true;
            break;
        }
    }
    let strip = last.expect("at least one stage ran");
    let values = prev.expect("at least one stage ran");
    let residuals: Vec<T> = test_points.par_iter().map(|&w| strip.conjugacy_residual(w)).collect::<Result<_>>()?;
    let conjugacy_residual = residuals.iter().copied().fold(T::zero(), T::max);
    Ok(FatouCoordinate { test_points: test_points.to_vec(), values, residuals, conjugacy_residual, m: strip.m, converged, history })
}

/// Convenience form of [`StripConjugacy::new`].
pub fn strip_conjugacy<T: Real>(chart: &PetalChart<T>, m: usize, audit: StripAudit) -> Result<StripConjugacy<'_, T>> {
    StripConjugacy::new(chart, m, audit)
}

/// Forward orbit `w_0, …, w_m` of a point of `Re w ≥ τ`.
pub fn orbit_asymptotics<T: Real>(chart: &PetalChart<T>, w0: Complex<T>, m: usize) -> Result<Vec<Complex<T>>> {
    if w0.re < chart.tau {
        return Err(Error::Domain(format!("{w0} is left of Re w = {}", chart.tau)));
    }
    chart.orbit(w0, m)
}

/// A grid of `nx × ny` points in `[τ + a, τ + b] × [−y, y]`.
pub fn test_grid<T: Real>(chart: &PetalChart<T>, a: T, b: T, y: T, nx: usize, ny: usize) -> Vec<Complex<T>> {
    let step = |lo: T, hi: T, k: usize, n: usize| if n == 1 { (lo + hi) / lit(2.0) } else { lo + (hi - lo) * count::<T>(k) / count::<T>(n - 1) };
    (0..ny)
        .flat_map(|j| (0..nx).map(move |i| (i, j)))
        .map(|(i, j)| Complex::new(chart.tau + step(a, b, i, nx), step(-y, y, j, ny)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatou::germ::ParabolicGerm;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn chart() -> PetalChart<f64> {
        let germ = ParabolicGerm::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], 0.5).unwrap();
        PetalChart::new(&germ, 64).unwrap()
    }

    #[test]
    fn first_stage() {
        let ch = chart();
        let s = strip_conjugacy(&ch, 1, StripAudit::default()).unwrap();
        assert!((s.x_m - (ch.tau + 1.0 + 1.0 / (ch.tau - 1.0))).abs() < 1e-12);
        for y in [-3.0, 0.0, 0.7, 5.0] {
            let w = c(ch.tau + 1.0, y);
            assert!((ch.forward(s.eval(w).unwrap()) - s.eval(w + 1.0).unwrap()).norm() < 1e-12);
        }
        assert!(s.beltrami_sup <= s.beltrami_cap + 0.05);
        assert!((s.eval(c(ch.tau, 0.0)).unwrap() - ch.tau).norm() < 1e-9);
    }

    #[test]
    fn functional_equation_holds_across_strips() {
        let ch = chart();
        let s = strip_conjugacy(&ch, 4, StripAudit::default()).unwrap();
        for w in test_grid(&ch, 0.1, 7.0, 2.0, 6, 3) {
            assert!(s.conjugacy_residual(w).unwrap() < 4e-12 * 4.0 * w.norm().max(1.0));
        }
        assert!(matches!(s.eval(c(ch.tau - 0.5, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn orbit_is_asymptotic_to_translation() {
        let ch = chart();
        let orbit = orbit_asymptotics(&ch, c(ch.tau, 0.0), 100).unwrap();
        assert!(orbit.windows(2).all(|p| {
            let step = (p[1] - p[0]).re;
            (0.5..=1.5).contains(&step)
        }));
        let ratio = (orbit[100] - orbit[0]).re / 100.0;
        assert!((0.9..=1.1).contains(&ratio));
    }

    #[test]
    fn coordinate_iteration_records_history() {
        let ch = chart();
        let pts = test_grid(&ch, 0.5, 2.5, 1.0, 3, 2);
        let fc = fatou_coordinate(&ch, 6, 1e-7, &pts, StripAudit::default()).unwrap();
        assert_eq!(fc.history.len(), 6);
        assert!(!fc.converged);
        assert!(fc.conjugacy_residual < 1e-10);
        let b: Vec<f64> = fc.history.iter().map(|h| h.beltrami_sup).collect();
        assert!(b.windows(2).all(|p| p[1] <= p[0]));
        assert!(fc.history[5].difference < fc.history[1].difference);
        assert_eq!(fc.values_table().len(), 6);
        assert!(matches!(fatou_coordinate(&ch, 1, 1e-7, &pts, StripAudit::default()), Err(Error::Config(_))));
    }
}
