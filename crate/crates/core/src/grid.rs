//! Uniform Cartesian grids in the plane and complex samples on them.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{count, lit, Real};

/// Nodes `origin + ix*h + i*iy*h` for `ix < nx`, `iy < ny`, stored row-major
/// (index `iy * nx + ix`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub origin: Complex<T>,
    pub spacing: T,
    pub nx: usize,
    pub ny: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(origin: Complex<T>, spacing: T, nx: usize, ny: usize) -> Result<Self> {
        if !(spacing > T::zero()) || nx == 0 || ny == 0 {
            return Err(Error::Config("grid needs positive spacing and dimensions".into()));
        }
        Ok(GridSpec { origin, spacing, nx, ny })
    }

    /// `n x n` nodes centred on `center` with the given half-width, including
    /// the boundary.
    pub fn square(center: Complex<T>, half_width: T, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config("square grid needs at least two nodes per side".into()));
        }
        let h = lit::<T>(2.0) * half_width / count::<T>(n - 1);
        GridSpec::new(center - Complex::new(half_width, half_width), h, n, n)
    }

    /// Cell-centred grid of `n x n` square cells tiling `[-a, a]^2`.
    pub fn cells(half_width: T, n: usize) -> Result<Self> {
        let h = lit::<T>(2.0) * half_width / count::<T>(n);
        let first = -half_width + h / lit(2.0);
        GridSpec::new(Complex::new(first, first), h, n, n)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, ix: usize, iy: usize) -> Complex<T> {
        self.origin + Complex::new(count::<T>(ix) * self.spacing, count::<T>(iy) * self.spacing)
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn nodes(&self) -> Vec<Complex<T>> {
        (0..self.ny)
            .flat_map(|iy| (0..self.nx).map(move |ix| (ix, iy)))
            .map(|(ix, iy)| self.node(ix, iy))
            .collect()
    }

    /// Fractional grid coordinates of `z`.
    pub fn coordinates(&self, z: Complex<T>) -> (T, T) {
        let d = (z - self.origin) / self.spacing;
        (d.re, d.im)
    }

    /// Index of the node whose cell contains `z`, if any.
    pub fn cell_of(&self, z: Complex<T>) -> Option<(usize, usize)> {
        let (x, y) = self.coordinates(z);
        let half = lit::<T>(0.5);
        let ix = (x + half).floor();
        let iy = (y + half).floor();
        if ix < T::zero() || iy < T::zero() {
            return None;
        }
        let (ix, iy) = (ix.to_usize()?, iy.to_usize()?);
        (ix < self.nx && iy < self.ny).then_some((ix, iy))
    }

    /// The grid with the outer ring of nodes removed.
    pub fn interior(&self) -> Result<Self> {
        if self.nx < 3 || self.ny < 3 {
            return Err(Error::Config("grid too small to have interior nodes".into()));
        }
        GridSpec::new(self.origin + Complex::new(self.spacing, self.spacing), self.spacing, self.nx - 2, self.ny - 2)
    }
}

/// Complex values on the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples<T> {
    pub grid: GridSpec<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> GridSamples<T> {
    pub fn new(grid: GridSpec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        Ok(GridSamples { grid, values })
    }

    pub fn from_fn(grid: GridSpec<T>, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        GridSamples { grid, values }
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex<T> {
        self.values[self.grid.index(ix, iy)]
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn bilinear(&self, z: Complex<T>) -> Option<Complex<T>> {
        let (x, y) = self.grid.coordinates(z);
        let eps = lit::<T>(1e-9);
        let maxx = count::<T>(self.grid.nx - 1);
        let maxy = count::<T>(self.grid.ny - 1);
        if x < -eps || y < -eps || x > maxx + eps || y > maxy + eps {
            return None;
        }
        let x = x.max(T::zero()).min(maxx);
        let y = y.max(T::zero()).min(maxy);
        let ix = x.floor().to_usize()?.min(self.grid.nx.saturating_sub(2));
        let iy = y.floor().to_usize()?.min(self.grid.ny.saturating_sub(2));
        let fx = x - count::<T>(ix);
        let fy = y - count::<T>(iy);
        if self.grid.nx == 1 || self.grid.ny == 1 {
            return Some(self.at(ix, iy));
        }
        let one = T::one();
        let v = self.at(ix, iy) * (one - fx) * (one - fy)
            + self.at(ix + 1, iy) * fx * (one - fy)
            + self.at(ix, iy + 1) * (one - fx) * fy
            + self.at(ix + 1, iy + 1) * fx * fy;
        Some(v)
    }

    /// Centred differences `(∂_z h, ∂_zbar h)` at an interior node.
    pub fn wirtinger(&self, ix: usize, iy: usize) -> (Complex<T>, Complex<T>) {
        let two_h = lit::<T>(2.0) * self.grid.spacing;
        let hx = (self.at(ix + 1, iy) - self.at(ix - 1, iy)) / two_h;
        let hy = (self.at(ix, iy + 1) - self.at(ix, iy - 1)) / two_h;
        let i = Complex::new(T::zero(), T::one());
        let half = lit::<T>(0.5);
        ((hx - i * hy) * half, (hx + i * hy) * half)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_lookup_and_interpolation() {
        let g = GridSpec::square(Complex::new(0.0f64, 0.0), 1.0, 5).unwrap();
        assert_eq!(g.cell_of(Complex::new(0.01, -0.02)), Some((2, 2)));
        assert_eq!(g.cell_of(Complex::new(3.0, 0.0)), None);
        let s = GridSamples::from_fn(g, |z| z * 2.0 + Complex::new(1.0, 0.0));
        let v = s.bilinear(Complex::new(0.3, -0.7)).unwrap();
        assert!((v - Complex::new(1.6, -1.4)).norm() < 1e-14);
        let (dz, dzb) = s.wirtinger(2, 2);
        assert!((dz - Complex::new(2.0, 0.0)).norm() < 1e-14);
        assert!(dzb.norm() < 1e-14);
    }
}
