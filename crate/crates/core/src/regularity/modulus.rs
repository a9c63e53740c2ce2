use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{Cell, Table};
use crate::motion::HolomorphicMotion;
use crate::regularity::tangent::TangentField;
use crate::scalar::{count, lit, to_f64, Real};

/// Smallest separation used by [`log_spaced_pairs`].
pub const MIN_SEPARATION: f64 = 1e-5;
pub const PAIR_DIRECTIONS: usize = 8;

/// Pairs `(z, z + t e^{iθ})` for `separations` values of `t`, log-spaced in
/// `[1e-5, δ)`, and [`PAIR_DIRECTIONS`] directions `θ`, around each centre.
pub fn log_spaced_pairs<T: Real>(centres: &[Complex<T>], delta: T, separations: usize) -> Vec<(Complex<T>, Complex<T>)> {
    let lo = lit::<T>(MIN_SEPARATION).ln();
    let hi = delta.ln();
    let mut out = Vec::with_capacity(centres.len() * separations * PAIR_DIRECTIONS);
    for &z in centres {
        for j in 0..separations {
            let t = (lo + (hi - lo) * count::<T>(j) / count::<T>(separations)).exp();
            for d in 0..PAIR_DIRECTIONS {
                let theta = T::TAU() * count::<T>(d) / count::<T>(PAIR_DIRECTIONS);
                out.push((z, z + Complex::from_polar(t, theta)));
            }
        }
    }
    out
}

/// Outcome of the `ε log ε` check on a tangent field.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusReport<T> {
    pub pairs_tested: usize,
    /// Worst `|V(z2) − V(z1)| / (|z2 − z1| log(1/|z2 − z1|))`.
    pub worst_ratio: T,
    pub worst_pair: (Complex<T>, Complex<T>),
    /// `2 + C / log(1/δ)`.
    pub coefficient: T,
    pub m1: T,
    pub c: T,
    pub delta: T,
    pub big_r: T,
}

impl<T: Real> ModulusReport<T> {
    pub fn holds(&self) -> bool {
        self.worst_ratio <= self.coefficient
    }
}

/// Checks `|V(z2) − V(z1)| ≤ |z2 − z1| (2 + C/log(1/δ)) log(1/|z2 − z1|)` over
/// every pair of samples with `|z_i| < R` and `|z1 − z2| < δ`, using the
/// unit-disk normalization of `V`. `C = M1 + 2 log r` where
/// `M1 = max_{1 ≤ |z| ≤ R} |V(z)/z| + 2 log|z|` over the samples.
pub fn vector_modulus_check<T: Real>(field: &TangentField<T>, big_r: T, delta: T, log_r: T) -> Result<ModulusReport<T>> {
    if !(delta > T::zero() && delta < lit(0.5)) {
        return Err(Error::Config(format!("δ = {delta} must lie in (0, 1/2)")));
    }
    let v = field.unit_disk_values();
    let pts = &field.points;
    let m1 = pts
        .iter()
        .zip(&v)
        .filter(|(z, _)| z.norm() >= T::one() && z.norm() <= big_r)
        .map(|(z, w)| (w / z).norm() + lit::<T>(2.0) * z.norm().ln())
        .fold(None, |m: Option<T>, x| Some(m.map_or(x, |m| m.max(x))))
        .ok_or_else(|| Error::EmptySample(format!("no samples in the annulus 1 <= |z| <= {big_r}")))?;
    let c = m1 + lit::<T>(2.0) * log_r;
    let coefficient = lit::<T>(2.0) + c / (T::one() / delta).ln();
    let inside: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].norm() < big_r).collect();
    let (tested, worst) = inside
        .par_iter()
        .enumerate()
        .map(|(a, &i)| {
            let mut tested = 0usize;
            let mut worst = (T::zero(), (i, i));
            for &j in &inside[a + 1..] {
                let t = (pts[j] - pts[i]).norm();
                if t >= delta || t == T::zero() {
                    continue;
                }
                tested += 1;
                let ratio = (v[j] - v[i]).norm() / (t * (T::one() / t).ln());
                if ratio > worst.0 {
                    worst = (ratio, (i, j));
                }
            }
            (tested, worst)
        })
        .reduce(
            || (0, (T::zero(), (0, 0))),
            |x, y| (x.0 + y.0, if y.1 .0 > x.1 .0 { y.1 } else { x.1 }),
        );
    if tested == 0 {
        return Err(Error::EmptySample(format!("no pairs with |z| < {big_r} and separation below {delta}")));
    }
    let (ratio, (i, j)) = worst;
    Ok(ModulusReport { pairs_tested: tested, worst_ratio: ratio, worst_pair: (pts[i], pts[j]), coefficient, m1, c, delta, big_r })
}

/// Least-squares fit of `log |h(c,z2) − h(c,z1)|` against `log |z2 − z1|`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderFit<T> {
    pub slope: T,
    pub intercept: T,
    /// `(1 − ρ)/(1 + ρ) − 0.05` with `ρ = |c|/r`.
    pub lower_bound: T,
    /// `(|z2 − z1|, |h(c,z2) − h(c,z1)|)` per pair.
    pub samples: Vec<(T, T)>,
}

impl<T: Real> HolderFit<T> {
    pub fn meets_bound(&self) -> bool {
        self.slope >= self.lower_bound
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["t", "s0", "sc"]);
        for &(s0, sc) in &self.samples {
            t.push(vec![Cell::from(to_f64(s0)), Cell::from(to_f64(s0)), Cell::from(to_f64(sc))]);
        }
        t
    }
}

pub const MIN_FIT_PAIRS: usize = 8;

pub fn holder_exponent_fit<T: Real, M: HolomorphicMotion<T>>(motion: &M, c: Complex<T>, pairs: &[(Complex<T>, Complex<T>)]) -> Result<HolderFit<T>> {
    if pairs.len() < MIN_FIT_PAIRS {
        return Err(Error::InsufficientData(format!("{} pairs given, the fit needs {MIN_FIT_PAIRS}", pairs.len())));
    }
    let samples: Vec<(T, T)> = pairs
        .par_iter()
        .map(|&(z1, z2)| {
            let w1 = motion.eval(c, z1)?;
            let w2 = motion.eval(c, z2)?;
            Ok(((z2 - z1).norm(), (w2 - w1).norm()))
        })
        .collect::<Result<_>>()?;
    if samples.iter().any(|&(a, b)| a == T::zero() || b == T::zero()) {
        return Err(Error::Degenerate("a pair has coincident points or images".into()));
    }
    let n = count::<T>(samples.len());
    let xs: Vec<T> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<T> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|x| (*x - mx) * (*x - mx)).sum();
    let sxy: T = xs.iter().zip(&ys).map(|(x, y)| (*x - mx) * (*y - my)).sum();
    if sxx == T::zero() {
        return Err(Error::Degenerate("all pairs have the same separation".into()));
    }
    let slope = sxy / sxx;
    let r = motion.parameter_radius();
    let rho = if r.is_finite() { c.norm() / r } else { T::zero() };
    let lower_bound = (T::one() - rho) / (T::one() + rho) - lit(0.05);
    Ok(HolderFit { slope, intercept: my - slope * mx, lower_bound, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::AffineMotion;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn centres() -> Vec<Complex<f64>> {
        (0..24).map(|k| Complex::from_polar(0.3 + 0.07 * k as f64, 2.4 * k as f64)).collect()
    }

    #[test]
    fn pair_layout() {
        let p = log_spaced_pairs(&[c(0.0, 0.0)], 0.1, 4);
        assert_eq!(p.len(), 32);
        assert!(((p[0].1 - p[0].0).norm() - 1e-5).abs() < 1e-18);
        assert!(p.iter().all(|(a, b)| (b - a).norm() < 0.1));
    }

    fn field_of(v: impl Fn(Complex<f64>) -> Complex<f64>) -> TangentField<f64> {
        let pts: Vec<_> = log_spaced_pairs(&centres(), 0.1, 6).into_iter().flat_map(|(a, b)| [a, b]).collect();
        TangentField::from_fn(&pts, v)
    }

    #[test]
    fn zero_field_has_zero_ratio() {
        let r = vector_modulus_check(&field_of(|_| c(0.0, 0.0)), 2.0, 0.1, 6.0).unwrap();
        assert_eq!(r.worst_ratio, 0.0);
        assert!(r.pairs_tested >= 24 * 48);
        assert!(r.holds());
    }

    #[test]
    fn conjugation_ratio_is_inverse_log() {
        let r = vector_modulus_check(&field_of(|z| z.conj()), 2.0, 0.1, 6.0).unwrap();
        let t = (r.worst_pair.1 - r.worst_pair.0).norm();
        assert!((r.worst_ratio - 1.0 / (1.0 / t).ln()).abs() < 1e-9);
        assert!(r.worst_ratio < 1.0 / (10.0f64).ln() + 1e-9);
        assert!(r.holds());
    }

    #[test]
    fn admissibility_errors() {
        let far = TangentField::from_fn(&[c(1.5, 0.0), c(-1.5, 0.0)], |z| z);
        assert!(matches!(vector_modulus_check(&far, 2.0, 0.1, 6.0), Err(Error::EmptySample(_))));
        assert!(matches!(vector_modulus_check(&far, 2.0, 0.7, 6.0), Err(Error::Config(_))));
    }

    #[test]
    fn holder_fits() {
        let pairs = log_spaced_pairs(&centres()[..2], 0.1, 4);
        let id = holder_exponent_fit(&AffineMotion, c(0.0, 0.0), &pairs).unwrap();
        assert!((id.slope - 1.0).abs() < 1e-12);
        assert!(id.intercept.abs() < 1e-12);
        let aff = holder_exponent_fit(&AffineMotion, c(0.6, 0.0), &pairs).unwrap();
        assert!((aff.slope - 1.0).abs() < 0.05);
        assert!(aff.meets_bound());
        assert_eq!(aff.to_table().len(), pairs.len());
        assert!(matches!(holder_exponent_fit(&AffineMotion, c(0.0, 0.0), &pairs[..7]), Err(Error::InsufficientData(_))));
    }
}
