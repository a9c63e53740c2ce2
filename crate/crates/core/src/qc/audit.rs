use num_complex::Complex;
use rayon::prelude::*;

use crate::chirka::ExtendedMotion;
use crate::error::{Error, Result};
use crate::geometry::{cross_ratio, SpherePoint};
use crate::grid::{GridSamples, GridSpec};
use crate::io::{Cell, Table};
use crate::motion::HolomorphicMotion;
use crate::qc::beltrami::{beltrami, DilatationReport};
use crate::scalar::{blocked_sum, count, lit, to_f64, Real};

/// Angular samples per circle in [`circular_distortion`].
pub const CIRCLE_SAMPLES: usize = 256;

/// Cross-ratios closer than this to `0`, `1` or `∞` (in the chordal metric
/// for `∞`) count as a collision.
pub const CROSS_RATIO_GUARD: f64 = 1e-10;

/// Dilatation of a stored slice of an extended motion. `c` must be one of the
/// sampled parameters and the motion must have been sampled on a grid.
pub fn dilatation_bound_check<T: Real>(motion: &ExtendedMotion<T>, c: Complex<T>) -> Result<DilatationReport<T>> {
    let p = motion
        .params
        .iter()
        .position(|&q| q == c)
        .ok_or_else(|| Error::Precondition(format!("{c} is not a sampled parameter")))?;
    let field = beltrami(&motion.grid_slice(p)?)?;
    DilatationReport::new(&field, c, motion.r)
}

/// Dilatation of the slice `h(c, ·)` of any motion, sampled on `grid`.
pub fn dilatation_on_grid<T: Real, M: HolomorphicMotion<T>>(motion: &M, grid: &GridSpec<T>, c: Complex<T>) -> Result<DilatationReport<T>> {
    let values = motion.eval_slice(c, &grid.nodes())?;
    let field = beltrami(&GridSamples::new(*grid, values)?)?;
    DilatationReport::new(&field, c, motion.parameter_radius())
}

pub fn dilatation_table<T: Real>(reports: &[DilatationReport<T>]) -> Table {
    let mut t = Table::new(&["c_re", "c_im", "k", "bound", "margin"]);
    for r in reports {
        t.push([r.c.re, r.c.im, r.k, r.bound, r.margin].into_iter().map(|x| Cell::from(to_f64(x))).collect());
    }
    t
}

/// Largest ratio `max |H(z) − H(a)| / min |H(z) − H(a)|` over circles
/// `|z − a| = ρ`, for each `ρ` in `radii`.
pub fn circular_distortion_with<T: Real>(
    map: impl Fn(Complex<T>) -> Option<Complex<T>>,
    a: Complex<T>,
    radii: &[T],
) -> Result<T> {
    let centre = map(a).ok_or_else(|| Error::Domain(format!("centre {a} outside the sampled domain")))?;
    let mut worst = T::one();
    for &rho in radii {
        let mut hi = T::zero();
        let mut lo = T::infinity();
        for l in 0..CIRCLE_SAMPLES {
            let t = T::TAU() * count::<T>(l) / count::<T>(CIRCLE_SAMPLES);
            let z = a + Complex::from_polar(rho, t);
            let w = map(z).ok_or_else(|| Error::Domain(format!("circle of radius {rho} leaves the sampled domain")))?;
            let d = (w - centre).norm();
            hi = hi.max(d);
            lo = lo.min(d);
        }
        if lo <= T::zero() {
            return Err(Error::Injectivity(format!("circle of radius {rho} meets the image of its centre")));
        }
        worst = worst.max(hi / lo);
    }
    Ok(worst)
}

/// [`circular_distortion_with`] on grid samples, read by bilinear interpolation.
pub fn circular_distortion<T: Real>(samples: &GridSamples<T>, a: Complex<T>, radii: &[T]) -> Result<T> {
    circular_distortion_with(|z| samples.bilinear(z), a, radii)
}

/// `Cr(h(c, S))` along a parameter path. The sphere point `∞` is fixed.
pub fn cross_ratio_track<T: Real, M: HolomorphicMotion<T>>(
    motion: &M,
    quadruple: [SpherePoint<T>; 4],
    path: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    cross_ratio(quadruple)?;
    let moved: Vec<Option<Vec<Complex<T>>>> = quadruple
        .iter()
        .map(|p| p.as_finite().map(|z| motion.eval_path(z, path)).transpose())
        .collect::<Result<_>>()?;
    let guard = lit::<T>(CROSS_RATIO_GUARD);
    (0..path.len())
        .map(|k| {
            let pts: [SpherePoint<T>; 4] = std::array::from_fn(|i| match &moved[i] {
                Some(v) => SpherePoint::Finite(v[k]),
                None => SpherePoint::Infinity,
            });
            let cr = cross_ratio(pts).map_err(|e| Error::Injectivity(format!("at path index {k}: {e}")))?;
            let chordal_inf = lit::<T>(2.0) / (T::one() + cr.norm_sqr()).sqrt();
            if cr.norm() < guard || (cr - T::one()).norm() < guard || chordal_inf < guard {
                return Err(Error::Injectivity(format!("cross-ratio {cr} at path index {k} reaches {{0, 1, ∞}}")));
            }
            Ok(cr)
        })
        .collect()
}

pub fn track_table<T: Real>(track: &[Complex<T>]) -> Table {
    let mut t = Table::new(&["index", "cr_re", "cr_im"]);
    for (k, z) in track.iter().enumerate() {
        t.push(vec![Cell::from(k), Cell::from(to_f64(z.re)), Cell::from(to_f64(z.im))]);
    }
    t
}

/// Samples `Ψ(c) = ∬_W α μ(c, ·)` on `params` and returns `sup |∂Ψ/∂c̄|` over
/// its interior nodes. The window `W` is `window` minus its outer ring, where
/// `μ` is defined.
pub fn beltrami_holomorphy_residual<T: Real, M: HolomorphicMotion<T>>(
    motion: &M,
    alpha: impl Fn(Complex<T>) -> Complex<T> + Sync,
    window: &GridSpec<T>,
    params: &GridSpec<T>,
) -> Result<T> {
    if params.nx < 3 || params.ny < 3 {
        return Err(Error::Config(format!("parameter mesh {}x{} is too small for centred differences", params.nx, params.ny)));
    }
    let points = window.nodes();
    let cs = params.nodes();
    let paths: Vec<Vec<Complex<T>>> = points.par_iter().map(|&z| motion.eval_path(z, &cs)).collect::<Result<_>>()?;
    let inner = window.interior()?;
    let weights: Vec<Complex<T>> = inner.nodes().into_iter().map(&alpha).collect();
    let area = window.spacing * window.spacing;
    let psi: Vec<Complex<T>> = (0..cs.len())
        .into_par_iter()
        .map(|k| {
            let slice = GridSamples::new(*window, paths.iter().map(|p| p[k]).collect())?;
            let mu = beltrami(&slice)?;
            mu.require_valid()?;
            let terms: Vec<Complex<T>> = mu.values.iter().zip(&weights).map(|(m, w)| m * w).collect();
            Ok(blocked_sum(&terms) * area)
        })
        .collect::<Result<_>>()?;
    let psi = GridSamples::new(*params, psi)?;
    let mut sup = T::zero();
    for iy in 1..params.ny - 1 {
        for ix in 1..params.nx - 1 {
            sup = sup.max(psi.wirtinger(ix, iy).1.norm());
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::{AffineMotion, IdentityMotion};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn affine_motion_saturates_the_bound() {
        let g = GridSpec::square(c(0.0, 0.0), 1.0, 11).unwrap();
        for k in [0.0, 0.3, 0.6] {
            let r = dilatation_on_grid(&AffineMotion, &g, c(0.0, k)).unwrap();
            assert!((r.k - (1.0 + k) / (1.0 - k)).abs() < 1e-10);
            assert!(r.margin.abs() < 1e-10);
        }
    }

    #[test]
    fn circles_under_affine_maps() {
        let g = GridSpec::square(c(0.0, 0.0), 1.0, 41).unwrap();
        let id = GridSamples::from_fn(g, |z| z);
        assert!((circular_distortion(&id, c(0.1, 0.0), &[0.1, 0.3]).unwrap() - 1.0).abs() < 1e-12);
        let dbl = GridSamples::from_fn(g, |z| z * 2.0);
        assert!((circular_distortion(&dbl, c(0.0, 0.2), &[0.2]).unwrap() - 1.0).abs() < 1e-12);
        let k = 0.4;
        let aff = GridSamples::from_fn(g, |z| z + z.conj() * k);
        let ratio = circular_distortion(&aff, c(0.0, 0.0), &[0.05, 0.1]).unwrap();
        assert!((ratio - (1.0 + k) / (1.0 - k)).abs() < 1e-3);
        assert!(matches!(circular_distortion(&aff, c(0.0, 0.0), &[1.5]), Err(Error::Domain(m)) if m.contains("1.5")));
    }

    #[test]
    fn conformal_polynomial_has_unit_distortion_in_the_limit() {
        let f = |z: Complex<f64>| Some(z + z * z * 0.3);
        let ratios: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|&r| circular_distortion_with(f, c(0.1, 0.1), &[r]).unwrap()).collect();
        assert!(ratios[2] < ratios[1] && ratios[1] < ratios[0]);
        assert!(ratios[2] - 1.0 < 0.04);
    }

    #[test]
    fn cross_ratio_tracks() {
        let quad = [SpherePoint::finite(2.0, 0.0), SpherePoint::finite(1.0, 0.0), SpherePoint::finite(0.0, 0.0), SpherePoint::Infinity];
        let path: Vec<_> = (0..10).map(|k| c(0.08 * k as f64, -0.03 * k as f64)).collect();
        let track = cross_ratio_track(&AffineMotion, quad, &path).unwrap();
        for (cc, cr) in path.iter().zip(&track) {
            let expected = (c(2.0, 0.0) + cc.conj() * 2.0) / (c(1.0, 0.0) + cc.conj());
            assert!((cr - expected).norm() < 1e-14);
        }
        let quad = [SpherePoint::finite(0.3, 0.5), SpherePoint::finite(1.0, 0.0), SpherePoint::finite(0.0, 0.0), SpherePoint::Infinity];
        let id = cross_ratio_track(&IdentityMotion, quad, &path).unwrap();
        assert!(id.iter().all(|z| *z == c(0.3, 0.5)));
        let moving = cross_ratio_track(&AffineMotion, quad, &path).unwrap();
        assert_eq!(moving[0], c(0.3, 0.5));
        let t = track_table(&moving);
        assert_eq!(t.len(), 10);
    }

    #[test]
    fn collapsing_quadruple_is_an_injectivity_error() {
        // h(c, z) = z + c z̄ folds 0.5i onto 0 at c = 1 − tiny.
        let quad = [SpherePoint::finite(0.0, 0.5), SpherePoint::finite(1.0, 0.0), SpherePoint::finite(0.0, 0.0), SpherePoint::Infinity];
        let err = cross_ratio_track(&AffineMotion, quad, &[c(1.0 - 1e-12, 0.0)]);
        assert!(matches!(err, Err(Error::Injectivity(_))));
    }

    #[test]
    fn holomorphy_of_the_coefficient() {
        let window = GridSpec::square(c(0.0, 0.0), 0.8, 9).unwrap();
        let params = GridSpec::square(c(0.0, 0.0), 0.4, 5).unwrap();
        let alpha = |z: Complex<f64>| c(1.0 - z.norm_sqr(), 0.3 * z.re);
        let id = beltrami_holomorphy_residual(&IdentityMotion, alpha, &window, &params).unwrap();
        assert_eq!(id, 0.0);
        let aff = beltrami_holomorphy_residual(&AffineMotion, alpha, &window, &params).unwrap();
        assert!(aff < 1e-12);
        let small = GridSpec::square(c(0.0, 0.0), 0.4, 2).unwrap();
        assert!(matches!(beltrami_holomorphy_residual(&AffineMotion, alpha, &window, &small), Err(Error::Config(_))));
    }
}
