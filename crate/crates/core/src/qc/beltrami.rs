use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridSamples, GridSpec};
use crate::scalar::{lit, Real};

/// Derivatives `|∂h|` at or below this are treated as vanishing.
pub const DERIVATIVE_FLOOR: f64 = 1e-8;

/// Beltrami coefficient `∂̄h / ∂h` of a sampled map on the interior nodes of
/// its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BeltramiField<T> {
    pub grid: GridSpec<T>,
    pub values: Vec<Complex<T>>,
    /// `false` where `|∂h|` vanished; such nodes hold zero and are left out
    /// of `sup_norm`.
    pub mask: Vec<bool>,
    pub sup_norm: T,
    pub flagged: usize,
}

impl<T: Real> BeltramiField<T> {
    /// A field given directly by its values, all unflagged.
    pub fn from_values(grid: GridSpec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidBeltrami("non-finite coefficient".into()));
        }
        let sup_norm = values.iter().fold(T::zero(), |m, v| m.max(v.norm()));
        let mask = vec![true; values.len()];
        Ok(BeltramiField { grid, values, mask, sup_norm, flagged: 0 })
    }

    pub fn constant(grid: GridSpec<T>, mu: Complex<T>) -> Result<Self> {
        Self::from_values(grid, vec![mu; grid.len()])
    }

    /// No flagged nodes and `sup_norm < 1`.
    pub fn is_valid(&self) -> bool {
        self.flagged == 0 && self.sup_norm < T::one()
    }

    pub fn require_valid(&self) -> Result<()> {
        if self.flagged > 0 {
            return Err(Error::InvalidBeltrami(format!("{} nodes with vanishing z-derivative", self.flagged)));
        }
        if self.sup_norm >= T::one() {
            return Err(Error::InvalidBeltrami(format!("sup norm {} is not below 1", self.sup_norm)));
        }
        Ok(())
    }

    /// `K = (1 + ‖μ‖) / (1 − ‖μ‖)`.
    pub fn dilatation(&self) -> Result<T> {
        self.require_valid()?;
        Ok((T::one() + self.sup_norm) / (T::one() - self.sup_norm))
    }
}

/// Beltrami coefficient of grid samples by centred differences; the outer ring
/// of nodes is dropped.
pub fn beltrami<T: Real>(samples: &GridSamples<T>) -> Result<BeltramiField<T>> {
    let grid = samples.grid.interior()?;
    let floor = lit::<T>(DERIVATIVE_FLOOR);
    let mut values = Vec::with_capacity(grid.len());
    let mut mask = Vec::with_capacity(grid.len());
    for iy in 1..samples.grid.ny - 1 {
        for ix in 1..samples.grid.nx - 1 {
            let (dz, dzb) = samples.wirtinger(ix, iy);
            if dz.norm() <= floor || !dz.re.is_finite() || !dz.im.is_finite() {
                values.push(Complex::new(T::zero(), T::zero()));
                mask.push(false);
            } else {
                values.push(dzb / dz);
                mask.push(true);
            }
        }
    }
    let flagged = mask.iter().filter(|&&m| !m).count();
    let sup_norm = values.iter().fold(T::zero(), |m, v| m.max(v.norm()));
    Ok(BeltramiField { grid, values, mask, sup_norm, flagged })
}

/// Dilatation of a slice against the bound `(1 + |c|/r) / (1 − |c|/r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilatationReport<T> {
    pub c: Complex<T>,
    pub k: T,
    pub bound: T,
    /// `bound − k`.
    pub margin: T,
    pub sup_norm: T,
}

impl<T: Real> DilatationReport<T> {
    pub fn new(field: &BeltramiField<T>, c: Complex<T>, radius: T) -> Result<Self> {
        let k = field.dilatation()?;
        let t = if radius.is_finite() { c.norm() / radius } else { T::zero() };
        if t >= T::one() {
            return Err(Error::Domain(format!("|c| = {} is not below r = {radius}", c.norm())));
        }
        let bound = (T::one() + t) / (T::one() - t);
        Ok(DilatationReport { c, k, bound, margin: bound - k, sup_norm: field.sup_norm })
    }
}
