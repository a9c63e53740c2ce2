//! Kobayashi distances on the unit ball of `L^∞` Beltrami coefficients, and
//! their comparison with representative-level Teichmüller distances.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::io::{Cell, Table};
use crate::qc::BeltramiField;
use crate::scalar::{count, lit, to_f64, Real};

/// `|1 − ν̄μ|` below this is a degeneracy.
pub const DEGENERACY_FLOOR: f64 = 1e-14;
pub const MONOTONE_SLACK: f64 = 1e-12;

/// A point of the open unit ball of a sup-normed space of functions,
/// sampled on finitely many nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint<T> {
    pub values: Vec<Complex<T>>,
    pub grid: Option<GridSpec<T>>,
    pub norm: T,
}

impl<T: Real> BallPoint<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        let norm = values.iter().fold(T::zero(), |m, v| m.max(v.norm()));
        if !(norm < T::one()) {
            return Err(Error::OutsideBall(to_f64(norm)));
        }
        Ok(BallPoint { values, grid: None, norm })
    }

    pub fn from_field(field: &BeltramiField<T>) -> Result<Self> {
        field.require_valid().map_err(|_| Error::OutsideBall(to_f64(field.sup_norm)))?;
        let mut p = BallPoint::new(field.values.clone())?;
        p.grid = Some(field.grid);
        Ok(p)
    }

    pub fn zero_like(&self) -> Self {
        BallPoint { values: vec![Complex::new(T::zero(), T::zero()); self.values.len()], grid: self.grid, norm: T::zero() }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.values.len() != other.values.len() || self.grid != other.grid {
            return Err(Error::Shape("ball points live on different grids".into()));
        }
        Ok(())
    }
}

/// `2 atanh ‖v‖ = log((1 + ‖v‖)/(1 − ‖v‖))`.
pub fn ball_distance_to_origin<T: Real>(v: &BallPoint<T>) -> Result<T> {
    if !(v.norm < T::one()) {
        return Err(Error::OutsideBall(to_f64(v.norm)));
    }
    Ok(lit::<T>(2.0) * v.norm.atanh())
}

/// Pointwise `(q − p)/(1 − p̄ q)`: the ball automorphism taking `p` to 0,
/// applied to `q`.
fn translate<T: Real>(p: &BallPoint<T>, q: &BallPoint<T>) -> Result<Vec<Complex<T>>> {
    p.check_shape(q)?;
    let one = Complex::new(T::one(), T::zero());
    let floor = lit::<T>(DEGENERACY_FLOOR);
    p.values
        .iter()
        .zip(&q.values)
        .enumerate()
        .map(|(k, (a, b))| {
            let den = one - a.conj() * b;
            if den.norm() < floor {
                return Err(Error::NumericalDegeneracy(format!("|1 − ν̄μ| = {:e} at node {k}", to_f64(den.norm()))));
            }
            Ok((b - a) / den)
        })
        .collect()
}

fn sup<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

/// `d_K(p, q) = 2 atanh ‖(q − p)/(1 − p̄ q)‖∞`.
pub fn ball_distance<T: Real>(p: &BallPoint<T>, q: &BallPoint<T>) -> Result<T> {
    let k = sup(&translate(p, q)?);
    if !(k < T::one()) {
        return Err(Error::OutsideBall(to_f64(k)));
    }
    Ok(lit::<T>(2.0) * k.atanh())
}

/// Kobayashi distance between two valid Beltrami fields on the same grid.
pub fn beltrami_ball_distance<T: Real>(mu: &BeltramiField<T>, nu: &BeltramiField<T>) -> Result<T> {
    mu.require_valid()?;
    nu.require_valid()?;
    if mu.grid != nu.grid {
        return Err(Error::Shape("Beltrami fields on different grids".into()));
    }
    ball_distance(&BallPoint::from_field(nu)?, &BallPoint::from_field(mu)?)
}

/// `log((1 + k)/(1 − k))` with `k = ‖μ‖∞`. No minimization over the
/// Teichmüller class is done, so this is an upper bound for the class
/// distance to the origin.
pub fn teich_distance_representative<T: Real>(mu: &BeltramiField<T>) -> Result<T> {
    mu.require_valid()?;
    let k = mu.sup_norm;
    Ok(((T::one() + k) / (T::one() - k)).ln())
}

/// The same upper bound for a pair, from the coefficient
/// `(μ − ν)/(1 − ν̄μ)` of `f^μ ∘ (f^ν)^(-1)` (up to a unimodular factor).
pub fn teich_pair_representative<T: Real>(mu: &BallPoint<T>, nu: &BallPoint<T>) -> Result<T> {
    let k = sup(&translate(nu, mu)?);
    Ok(((T::one() + k) / (T::one() - k)).ln())
}

/// `d_1, …, d_n` between two ball points over chains placed on the
/// automorphism geodesic.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDistance<T> {
    pub n: usize,
    pub value: T,
    /// `d_1, …, d_n`.
    pub history: Vec<T>,
    /// Every fresh chain minimum satisfied `d_k ≤ d_{k−1} + 1e-12`.
    pub monotone: bool,
}

/// The point `γ(s)` of the geodesic from `p` to `q`, `s ∈ [0, 1]`:
/// `γ(s) = T_p^{-1}(s T_p(q))` pointwise.
fn geodesic_point<T: Real>(p: &BallPoint<T>, u: &[Complex<T>], s: T) -> BallPoint<T> {
    let values: Vec<Complex<T>> = p
        .values
        .iter()
        .zip(u)
        .map(|(a, w)| {
            let v = w * s;
            (v + a) / (Complex::new(T::one(), T::zero()) + a.conj() * v)
        })
        .collect();
    let norm = sup(&values);
    BallPoint { values, grid: p.grid, norm }
}

fn chain_length<T: Real>(p: &BallPoint<T>, u: &[Complex<T>], knots: &[T]) -> Result<T> {
    let pts: Vec<BallPoint<T>> = knots.iter().map(|&s| geodesic_point(p, u, s)).collect();
    pts.windows(2).map(|w| ball_distance(&w[0], &w[1])).sum()
}

pub fn chain_distance<T: Real>(p: &BallPoint<T>, q: &BallPoint<T>, n: usize) -> Result<ChainDistance<T>> {
    if n == 0 {
        return Err(Error::Config("chain length must be at least 1".into()));
    }
    let u = translate(p, q)?;
    let top = sup(&u);
    if !(top < T::one()) {
        return Err(Error::OutsideBall(to_f64(top)));
    }
    let d1 = lit::<T>(2.0) * top.atanh();
    let mut history = vec![d1];
    let mut monotone = true;
    for k in 2..=n {
        let kk = count::<T>(k);
        let uniform: Vec<T> = (0..=k).map(|i| count::<T>(i) / kk).collect();
        // Equal hyperbolic steps along the extremal node.
        let hyperbolic: Vec<T> = if top > T::zero() {
            let a = top.atanh();
            (0..=k).map(|i| (a * count::<T>(i) / kk).tanh() / top).collect()
        } else {
            uniform.clone()
        };
        let fresh = chain_length(p, &u, &uniform)?.min(chain_length(p, &u, &hyperbolic)?);
        let prev = *history.last().expect("history is non-empty");
        monotone &= fresh <= prev + lit(MONOTONE_SLACK);
        // A (k−1)-chain is a k-chain with a repeated point.
        history.push(fresh.min(prev));
    }
    Ok(ChainDistance { n, value: *history.last().expect("history is non-empty"), history, monotone })
}

/// Rows `(pair id, d_1, d_n, d_T representative)`.
pub fn distance_table<T: Real>(rows: &[(usize, T, T, T)]) -> Table {
    let mut t = Table::new(&["pair", "d1", "dn", "dt_rep"]);
    for &(id, d1, dn, dt) in rows {
        t.push(vec![Cell::from(id), Cell::from(to_f64(d1)), Cell::from(to_f64(dn)), Cell::from(to_f64(dt))]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::disk_distance;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn grid() -> GridSpec<f64> {
        GridSpec::square(c(0.0, 0.0), 1.0, 3).unwrap()
    }

    fn field(mu: Complex<f64>) -> BeltramiField<f64> {
        BeltramiField::constant(grid(), mu).unwrap()
    }

    #[test]
    fn origin_distances() {
        assert_eq!(ball_distance_to_origin(&BallPoint::new(vec![c(0.0, 0.0)]).unwrap()).unwrap(), 0.0);
        let half = BallPoint::new(vec![c(0.5, 0.0), c(0.0, -0.2)]).unwrap();
        assert!((ball_distance_to_origin(&half).unwrap() - 3.0f64.ln()).abs() < 1e-12);
        let d: Vec<f64> = [0.9, 0.99, 0.999].iter().map(|&t| ball_distance_to_origin(&BallPoint::new(vec![c(t, 0.0)]).unwrap()).unwrap()).collect();
        assert!(d[0] < d[1] && d[1] < d[2]);
        assert!(matches!(BallPoint::new(vec![c(1.0, 0.0)]), Err(Error::OutsideBall(_))));
    }

    #[test]
    fn beltrami_distances() {
        let mu = field(c(0.5, 0.0));
        let nu = field(c(-0.5, 0.0));
        assert!((beltrami_ball_distance(&mu, &nu).unwrap() - 9.0f64.ln()).abs() < 1e-12);
        assert_eq!(beltrami_ball_distance(&mu, &mu).unwrap(), 0.0);
        let zero = field(c(0.0, 0.0));
        let direct = ball_distance_to_origin(&BallPoint::from_field(&mu).unwrap()).unwrap();
        assert!((beltrami_ball_distance(&mu, &zero).unwrap() - direct).abs() < 1e-15);
        assert!((teich_distance_representative(&mu).unwrap() - 3.0f64.ln()).abs() < 1e-12);
        assert_eq!(teich_distance_representative(&zero).unwrap(), 0.0);
        let other = BeltramiField::constant(GridSpec::square(c(0.0, 0.0), 1.0, 4).unwrap(), c(0.1, 0.0)).unwrap();
        assert!(matches!(beltrami_ball_distance(&mu, &other), Err(Error::Shape(_))));
    }

    #[test]
    fn chains_between_equal_points_and_to_the_origin() {
        let p = BallPoint::new(vec![c(0.3, 0.1), c(-0.2, 0.4)]).unwrap();
        let d = chain_distance(&p, &p, 4).unwrap();
        assert!(d.history.iter().all(|&x| x == 0.0));
        let o = p.zero_like();
        let d = chain_distance(&o, &p, 1).unwrap();
        assert!((d.value - ball_distance_to_origin(&p).unwrap()).abs() < 1e-15);
        let d5 = chain_distance(&o, &p, 5).unwrap();
        assert!(d5.monotone);
        assert!((d5.value - d.value).abs() < 1e-12);
    }

    #[test]
    fn near_degenerate_pair() {
        let p = BallPoint::new(vec![c(1.0 - 1e-15, 0.0)]);
        assert!(p.is_ok());
        let p = p.unwrap();
        assert!(matches!(ball_distance(&p, &p), Err(Error::NumericalDegeneracy(_))));
    }

    proptest! {
        #[test]
        fn symmetry_and_triangle(a in -0.8f64..0.8, b in -0.8f64..0.8, x in -0.8f64..0.8, y in -0.8f64..0.8, s in -0.5f64..0.5, t in -0.5f64..0.5) {
            let f = [field(c(a, b * 0.5)), field(c(x * 0.5, y)), field(c(s, t))];
            let d = |i: usize, j: usize| beltrami_ball_distance(&f[i], &f[j]).unwrap();
            prop_assert!((d(0, 1) - d(1, 0)).abs() < 1e-12);
            prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
        }

        #[test]
        fn linear_discs_pull_back_the_disk_metric(r1 in 0.0f64..0.9, t1 in 0.0f64..6.0, r2 in 0.0f64..0.9, t2 in 0.0f64..6.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let v = [c(0.6, 0.0), c(0.2 * a, -0.4 * b), c(-0.3, 0.1)];
            let nv = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let (c1, c2) = (Complex::from_polar(r1, t1), Complex::from_polar(r2, t2));
            let p = BallPoint::new(v.iter().map(|z| z / nv * c1).collect()).unwrap();
            let q = BallPoint::new(v.iter().map(|z| z / nv * c2).collect()).unwrap();
            let dk = ball_distance(&p, &q).unwrap();
            prop_assert!((dk - disk_distance(c1, c2).unwrap()).abs() < 1e-12);
        }
    }
}
