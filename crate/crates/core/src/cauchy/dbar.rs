//! Finite-difference check of `∂/∂c̄ (Pf) = f`.

use num_complex::Complex;

use super::field::SampledField;
use super::transform::{cauchy_transform, TransformConfig};
use crate::error::{Error, Result};
use crate::grid::{GridSamples, GridSpec};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbarResidual<T> {
    /// `sup |∂̄(Pf) - f|` over the tested interior nodes.
    pub sup: T,
    pub worst_node: Complex<T>,
    pub nodes_tested: usize,
}

/// Computes `Pf` on `grid` (the field's own grid when `None`), applies
/// centred differences at interior nodes accepted by `include`, and compares
/// with the sampled density.
pub fn dbar_residual<T: Real>(
    field: &SampledField<T>,
    grid: Option<&GridSpec<T>>,
    include: impl Fn(Complex<T>) -> bool,
    cfg: &TransformConfig,
) -> Result<DbarResidual<T>> {
    let grid = *grid.unwrap_or(&field.grid);
    if grid.nx < 4 || grid.ny < 4 {
        return Err(Error::Config("finite-difference grid needs at least 4 nodes per axis".into()));
    }
    let nodes = grid.nodes();
    let pf = cauchy_transform(field, &nodes, cfg)?;
    let samples = GridSamples::new(grid, pf.values)?;
    let mut out = DbarResidual { sup: T::zero(), worst_node: grid.origin, nodes_tested: 0 };
    for iy in 1..grid.ny - 1 {
        for ix in 1..grid.nx - 1 {
            let z = grid.node(ix, iy);
            if !include(z) {
                continue;
            }
            let (_, dbar) = samples.wirtinger(ix, iy);
            let r = (dbar - field.sample(z)).norm();
            out.nodes_tested += 1;
            if r > out.sup {
                out.sup = r;
                out.worst_node = z;
            }
        }
    }
    if out.nodes_tested == 0 {
        return Err(Error::EmptySample("no interior node passed the filter".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(z: Complex<f64>) -> Complex<f64> {
        let r2 = z.norm_sqr();
        if r2 >= 1.0 {
            Complex::new(0.0, 0.0)
        } else {
            Complex::new((-1.0 / (1.0 - r2)).exp() * std::f64::consts::E, 0.0)
        }
    }

    #[test]
    fn smooth_bump_residual_shrinks() {
        let cfg = TransformConfig::default();
        let mut last = f64::INFINITY;
        for n in [24, 48] {
            let f = SampledField::from_fn(GridSpec::cells(1.2, n).unwrap(), 1.0, bump);
            let r = dbar_residual(&f, None, |_| true, &cfg).unwrap();
            assert!(r.sup < last);
            last = r.sup;
        }
        assert!(last < 0.05, "{last}");
    }

    #[test]
    fn tiny_grid_is_rejected() {
        let f = SampledField::from_fn(GridSpec::cells(1.0, 3).unwrap(), 1.0, bump);
        assert!(matches!(dbar_residual(&f, None, |_| true, &TransformConfig::default()), Err(Error::Config(_))));
    }
}
