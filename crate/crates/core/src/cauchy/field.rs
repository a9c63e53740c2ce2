//! Compactly supported complex densities sampled on a Cartesian grid.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::io::{read_json, read_numeric_csv, write_json, Cell, Table};
use crate::scalar::{lit, to_f64, Real};

/// A piecewise-constant density: `values[k]` is the value on the square cell
/// of side `spacing` centred at grid node `k`. Nodes outside the closed disk
/// of radius `support_radius` carry zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField<T> {
    pub grid: GridSpec<T>,
    pub values: Vec<Complex<T>>,
    pub support_radius: T,
}

#[derive(Debug, Serialize, Deserialize)]
struct FieldHeader {
    origin: [f64; 2],
    spacing: f64,
    nx: usize,
    ny: usize,
    support_radius: f64,
}

impl<T: Real> SampledField<T> {
    pub fn new(grid: GridSpec<T>, values: Vec<Complex<T>>, support_radius: T) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} samples for {} nodes", values.len(), grid.len())));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Config("field contains non-finite samples".into()));
        }
        let nodes = grid.nodes();
        if nodes.iter().zip(&values).any(|(z, v)| z.norm() > support_radius && v.norm() != T::zero()) {
            return Err(Error::Precondition("field is nonzero outside its support radius".into()));
        }
        Ok(SampledField { grid, values, support_radius })
    }

    /// Samples `f` at the nodes of `grid`, zeroing nodes outside the support.
    pub fn from_fn(grid: GridSpec<T>, support_radius: T, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        let values = grid
            .nodes()
            .into_iter()
            .map(|z| if z.norm() <= support_radius { f(z) } else { Complex::new(T::zero(), T::zero()) })
            .collect();
        SampledField { grid, values, support_radius }
    }

    /// The indicator of the closed disk of radius `radius` on an `n x n` cell
    /// grid covering `[-a, a]^2`.
    pub fn disk_indicator(radius: T, half_width: T, n: usize) -> Result<Self> {
        let grid = GridSpec::cells(half_width, n)?;
        Ok(SampledField::from_fn(grid, radius, |_| Complex::new(T::one(), T::zero())))
    }

    /// Piecewise-constant value at `z` (zero off the grid).
    pub fn sample(&self, z: Complex<T>) -> Complex<T> {
        match self.grid.cell_of(z) {
            Some((ix, iy)) => self.values[self.grid.index(ix, iy)],
            None => Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// Writes `<stem>.json` (grid header) and `<stem>.csv` (samples).
    pub fn write(&self, stem: impl AsRef<Path>) -> Result<()> {
        let stem = stem.as_ref();
        let header = FieldHeader {
            origin: [to_f64(self.grid.origin.re), to_f64(self.grid.origin.im)],
            spacing: to_f64(self.grid.spacing),
            nx: self.grid.nx,
            ny: self.grid.ny,
            support_radius: to_f64(self.support_radius),
        };
        write_json(stem.with_extension("json"), &header)?;
        let mut table = Table::new(&["ix", "iy", "re", "im"]);
        for iy in 0..self.grid.ny {
            for ix in 0..self.grid.nx {
                let v = self.values[self.grid.index(ix, iy)];
                table.push(vec![Cell::from(ix), Cell::from(iy), to_f64(v.re).into(), to_f64(v.im).into()]);
            }
        }
        table.write(stem.with_extension("csv"))
    }

    pub fn read(stem: impl AsRef<Path>) -> Result<Self> {
        let stem = stem.as_ref();
        let header: FieldHeader = read_json(stem.with_extension("json"))?;
        let grid = GridSpec::new(Complex::new(lit(header.origin[0]), lit(header.origin[1])), lit(header.spacing), header.nx, header.ny)?;
        let (_, rows) = read_numeric_csv(stem.with_extension("csv"))?;
        let mut values = vec![Complex::new(T::zero(), T::zero()); grid.len()];
        for row in rows {
            let (ix, iy) = (row[0] as usize, row[1] as usize);
            if ix >= grid.nx || iy >= grid.ny {
                return Err(Error::Shape(format!("sample index ({ix}, {iy}) outside the grid")));
            }
            values[grid.index(ix, iy)] = Complex::new(lit(row[2]), lit(row[3]));
        }
        SampledField::new(grid, values, lit(header.support_radius))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let f = SampledField::from_fn(GridSpec::cells(1.0f64, 8).unwrap(), 0.9, |z| z * z);
        f.write(dir.path().join("f")).unwrap();
        let g = SampledField::<f64>::read(dir.path().join("f")).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_values_outside_support() {
        let grid = GridSpec::cells(1.0f64, 4).unwrap();
        let values = vec![Complex::new(1.0, 0.0); 16];
        assert!(SampledField::new(grid, values, 0.5).is_err());
    }
}
