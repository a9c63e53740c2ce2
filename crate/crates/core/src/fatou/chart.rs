use num_complex::Complex;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::fatou::germ::ParabolicGerm;
use crate::fatou::series::PowerSeries;
use crate::motion::{check_parameter, HolomorphicMotion};
use crate::scalar::{count, lit, to_f64, Real};

/// Circle samples used to bound `sup |η|` on `|ξ| = r`.
pub const ETA_SAMPLES: usize = 256;
pub const NEWTON_STEPS: usize = 50;
pub const NEWTON_TOL: f64 = 1e-12;
/// Orbits leaving `|w| < ORBIT_LIMIT` are treated as overflow.
pub const ORBIT_LIMIT: f64 = 1e100;

/// Coordinate `w = d / z^n` on an attracting petal, in which `f` becomes
/// `F(w) = w + 1 + η(w^(-1/n))` on the half-plane `Re w > τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PetalChart<T> {
    pub germ: ParabolicGerm<T>,
    pub n: usize,
    /// `d = −1/(n a)`.
    pub d: Complex<T>,
    /// Principal `d^(1/n)`; the petal is `z = d^(1/n) w^(-1/n)`.
    pub d_root: Complex<T>,
    /// `η` as a series in `ξ`; the constant term is zero.
    pub eta: PowerSeries<Complex<T>>,
    /// `|η| ≤ 1/2` on `|ξ| ≤ r`.
    pub r: T,
    /// `1/r^n + 2`.
    pub tau: T,
}

impl<T: Real> PetalChart<T> {
    pub fn new(germ: &ParabolicGerm<T>, terms: usize) -> Result<Self> {
        let zero = Complex::new(T::zero(), T::zero());
        if germ.a == zero {
            return Err(Error::NotParabolic("a = 0".into()));
        }
        let n = germ.n;
        let d = -Complex::new(T::one(), T::zero()) / (germ.a * count::<T>(n));
        let d_root = if n == 1 { d } else { d.powf(T::one() / count::<T>(n)) };
        // f(z) = z (1 + G(z)); F(w) = w S(z) with S = (1 + G)^(-n).
        let len = n + terms + 1;
        let mut g = vec![Complex::new(T::one(), T::zero())];
        g.extend((1..len).map(|k| germ.series.coeff(k + 1)));
        let s = PowerSeries::new(g).reciprocal(len)?.pow(n, len);
        let mut eta = vec![zero];
        let mut power = d_root.powi(n as i32);
        for j in 1..=terms {
            power *= d_root;
            eta.push(s.coeff(n + j) * power);
        }
        let eta = PowerSeries::new(eta);
        let r = petal_radius(&eta)?;
        let tau = T::one() / r.powi(n as i32) + lit(2.0);
        Ok(PetalChart { germ: germ.clone(), n, d, d_root, eta, r, tau })
    }

    /// Principal `w^(-1/n)`.
    pub fn xi(&self, w: Complex<T>) -> Complex<T> {
        if self.n == 1 {
            crate::scalar::recip(w)
        } else {
            w.powf(-T::one() / count::<T>(self.n))
        }
    }

    pub fn eta_at(&self, xi: Complex<T>) -> Complex<T> {
        self.eta.eval(xi)
    }

    pub fn forward(&self, w: Complex<T>) -> Complex<T> {
        w + T::one() + self.eta.eval(self.xi(w))
    }

    pub fn forward_derivative(&self, w: Complex<T>) -> Complex<T> {
        let xi = self.xi(w);
        let dxi = -xi / (w * count::<T>(self.n));
        Complex::new(T::one(), T::zero()) + self.eta.derivative_at(xi) * dxi
    }

    /// `φ ∘ f ∘ φ^(-1)` evaluated through the germ itself.
    pub fn conjugate_direct(&self, w: Complex<T>) -> Complex<T> {
        let z = self.d_root * self.xi(w);
        self.d / self.germ.eval(z).powi(self.n as i32)
    }

    /// `F^(-1)(t)` by Newton's method from `t − 1`.
    pub fn inverse(&self, t: Complex<T>) -> Result<Complex<T>> {
        let tol = lit::<T>(NEWTON_TOL).max(T::epsilon() * lit(64.0) * t.norm());
        let mut v = t - T::one();
        for _ in 0..NEWTON_STEPS {
            let res = self.forward(v) - t;
            if res.norm() < tol {
                return Ok(v);
            }
            v = v - res / self.forward_derivative(v);
            if !v.re.is_finite() || !v.im.is_finite() {
                break;
            }
        }
        if (self.forward(v) - t).norm() < tol {
            return Ok(v);
        }
        Err(Error::Inversion { re: to_f64(t.re), im: to_f64(t.im), reason: format!("no convergence in {NEWTON_STEPS} steps") })
    }

    /// `F^k(w0)` for `k = 0..=m`.
    pub fn orbit(&self, w0: Complex<T>, m: usize) -> Result<Vec<Complex<T>>> {
        let mut out = Vec::with_capacity(m + 1);
        let mut w = w0;
        out.push(w);
        for _ in 0..m {
            w = self.forward(w);
            guard(w)?;
            out.push(w);
        }
        Ok(out)
    }

    /// `K(x) = (1 + c*)/(1 − c*)` with `c* = 1/(r (x−1)^(1/n))`.
    pub fn dilatation_schedule(&self, x: T) -> Result<T> {
        let cs = self.critical_parameter(x)?;
        Ok((T::one() + cs) / (T::one() - cs))
    }

    pub fn critical_parameter(&self, x: T) -> Result<T> {
        if !(x > T::one()) {
            return Err(Error::PetalTooSmall(format!("x = {x} must exceed 1")));
        }
        let cs = T::one() / (self.r * (x - T::one()).powf(T::one() / count::<T>(self.n)));
        if cs >= T::one() {
            return Err(Error::PetalTooSmall(format!("c* = {cs} at x = {x}")));
        }
        Ok(cs)
    }
}

pub(crate) fn guard<T: Real>(w: Complex<T>) -> Result<()> {
    if !w.re.is_finite() || !w.im.is_finite() || w.norm() > lit(ORBIT_LIMIT) {
        return Err(Error::NumericalDegeneracy(format!("orbit left the numerical range at {w}")));
    }
    Ok(())
}

pub fn petal_chart<T: Real>(germ: &ParabolicGerm<T>, terms: usize) -> Result<PetalChart<T>> {
    PetalChart::new(germ, terms)
}

fn circle_sup<T: Real>(eta: &PowerSeries<Complex<T>>, r: T) -> T {
    (0..ETA_SAMPLES)
        .map(|l| eta.eval(Complex::from_polar(r, T::TAU() * count::<T>(l) / count::<T>(ETA_SAMPLES))).norm())
        .fold(T::zero(), T::max)
}

/// Largest `r` (dyadic bracket, then bisection) with `sup_{|ξ|=r} |η| ≤ 1/2`
/// and a negligible last series term.
fn petal_radius<T: Real>(eta: &PowerSeries<Complex<T>>) -> Result<T> {
    let half = lit::<T>(0.5);
    let last = eta.coeffs.last().map(|c| c.norm()).unwrap_or_else(T::zero);
    let terms = eta.len().saturating_sub(1) as i32;
    let ok = |r: T| circle_sup(eta, r) <= half && last * r.powi(terms) <= lit(1e-13);
    let mut lo = T::one();
    let mut steps = 0;
    while !ok(lo) {
        lo *= half;
        steps += 1;
        if steps > 60 {
            return Err(Error::NumericalDegeneracy("no radius with |η| ≤ 1/2 found".into()));
        }
    }
    if steps == 0 {
        return Ok(lo);
    }
    let mut hi = lo + lo;
    for _ in 0..40 {
        let mid = (lo + hi) * half;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `φ ∘ f ∘ φ^(-1)(w)` in exact arithmetic for a germ `z + a z^2 + …`
/// (`n = 1`, so `φ(z) = d/z` with `d = −1/a`).
pub fn exact_conjugate<Q: Num + Clone>(coeffs: &[Q], w: Q) -> Result<Q> {
    let a = coeffs.get(2).cloned().unwrap_or_else(Q::zero);
    if a.is_zero() {
        return Err(Error::NotParabolic("exact chart needs a nonzero z^2 coefficient".into()));
    }
    let d = Q::zero() - Q::one() / a;
    let z = d.clone() / w;
    let fz = PowerSeries::new(coeffs.to_vec()).eval_exact(z);
    Ok(d / fz)
}

/// Exact `η` coefficients `b_1, …, b_len` for `n = 1`.
pub fn exact_eta_coefficients<Q: Num + Clone>(coeffs: &[Q], len: usize) -> Result<Vec<Q>> {
    let a = coeffs.get(2).cloned().unwrap_or_else(Q::zero);
    if a.is_zero() {
        return Err(Error::NotParabolic("exact chart needs a nonzero z^2 coefficient".into()));
    }
    let d = Q::zero() - Q::one() / a;
    let mut g = vec![Q::one()];
    g.extend((1..len + 2).map(|k| coeffs.get(k + 1).cloned().unwrap_or_else(Q::zero)));
    let s = PowerSeries::new(g).reciprocal(len + 2)?;
    let mut power = d.clone();
    Ok((1..=len)
        .map(|j| {
            power = power.clone() * d.clone();
            s.coeff(1 + j) * power.clone()
        })
        .collect())
}

/// Motion of the two lines `Re w = x` (fixed) and `Re w = x + 1` over the
/// unit disk, whose slice at `c*` is `w ↦ w + η((w−1)^(-1/n))` on the
/// right line.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryMotion<'a, T> {
    pub chart: &'a PetalChart<T>,
    pub x: T,
    pub c_star: T,
    pub k: T,
    scale: T,
}

pub fn boundary_motion<T: Real>(chart: &PetalChart<T>, x: T) -> Result<BoundaryMotion<'_, T>> {
    if x < chart.tau {
        return Err(Error::Precondition(format!("x = {x} is below τ = {}", chart.tau)));
    }
    let c_star = chart.critical_parameter(x)?;
    let k = (T::one() + c_star) / (T::one() - c_star);
    let scale = chart.r * (x - T::one()).powf(T::one() / count::<T>(chart.n));
    Ok(BoundaryMotion { chart, x, c_star, k, scale })
}

impl<T: Real> BoundaryMotion<'_, T> {
    fn on_line(&self, w: Complex<T>, x: T) -> bool {
        (w.re - x).abs() <= lit::<T>(1e-12) * x.abs().max(T::one())
    }
}

impl<T: Real> HolomorphicMotion<T> for BoundaryMotion<'_, T> {
    fn parameter_radius(&self) -> T {
        T::one()
    }

    fn eval_path(&self, w: Complex<T>, params: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        for &c in params {
            check_parameter(c, T::one())?;
        }
        if self.on_line(w, self.x) {
            return Ok(vec![w; params.len()]);
        }
        if !self.on_line(w, self.x + T::one()) {
            return Err(Error::Domain(format!("{w} is not on Re w = {} or {}", self.x, self.x + T::one())));
        }
        let xi = self.chart.xi(w - T::one());
        Ok(params.iter().map(|&c| w + self.chart.eta_at(c * xi * self.scale)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    pub(crate) fn quadratic_chart() -> PetalChart<f64> {
        let germ = ParabolicGerm::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], 0.5).unwrap();
        PetalChart::new(&germ, 64).unwrap()
    }

    #[test]
    fn quadratic_chart_data() {
        let ch = quadratic_chart();
        assert_eq!(ch.d, c(-1.0, 0.0));
        assert!(ch.eta.coeffs[1..].iter().all(|b| (b - c(1.0, 0.0)).norm() < 1e-15));
        // |ξ/(1−ξ)| ≤ 1/2 exactly up to r = 1/3.
        assert!(ch.r <= 1.0 / 3.0 && ch.r > 1.0 / 3.0 - 1e-6);
        assert!((ch.tau - (1.0 / ch.r + 2.0)).abs() < 1e-15);
        for w in [c(6.0, 0.0), c(7.5, -3.0), c(5.1, 20.0)] {
            let exact = w * w / (w - 1.0);
            assert!((ch.forward(w) - exact).norm() < 1e-12);
            assert!((ch.conjugate_direct(w) - exact).norm() < 1e-12);
        }
    }

    #[test]
    fn exact_rational_chart() {
        type Q = Ratio<i64>;
        let coeffs = [Q::from_integer(0), Q::from_integer(1), Q::from_integer(1)];
        assert_eq!(exact_conjugate(&coeffs, Q::from_integer(2)).unwrap(), Q::from_integer(4));
        let b = exact_eta_coefficients(&coeffs, 6).unwrap();
        assert!(b.iter().all(|x| *x == Q::from_integer(1)));
        // z + 2z^2 + z^3: d = −1/2.
        let cubic = [Q::from_integer(0), Q::from_integer(1), Q::from_integer(2), Q::from_integer(1)];
        let wv = Q::from_integer(3);
        let z = Q::new(-1, 2) / wv;
        let fz = z + z * z * Q::from_integer(2) + z * z * z;
        assert_eq!(exact_conjugate(&cubic, wv).unwrap(), Q::new(-1, 2) / fz);
    }

    #[test]
    fn higher_order_chart_matches_the_germ() {
        let germ = ParabolicGerm::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.5), c(0.2, 0.0)], 0.5).unwrap();
        let ch = PetalChart::new(&germ, 48).unwrap();
        assert_eq!(ch.n, 2);
        for w in [c(ch.tau + 1.0, 0.3), c(ch.tau + 4.0, -2.0)] {
            assert!((ch.forward(w) - ch.conjugate_direct(w)).norm() < 1e-10);
        }
    }

    #[test]
    fn newton_inversion() {
        let ch = quadratic_chart();
        for t in [c(9.0, 0.0), c(12.0, -4.0), c(8.0, 30.0)] {
            let v = ch.inverse(t).unwrap();
            assert!((ch.forward(v) - t).norm() < 1e-12);
        }
    }

    #[test]
    fn boundary_motion_slices() {
        let ch = quadratic_chart();
        let x = ch.tau + 3.0;
        let bm = boundary_motion(&ch, x).unwrap();
        let w = c(x + 1.0, 2.5);
        assert_eq!(bm.eval(c(0.0, 0.0), w).unwrap(), w);
        assert_eq!(bm.eval(c(0.3, 0.1), c(x, -1.0)).unwrap(), c(x, -1.0));
        let at_star = bm.eval(c(bm.c_star, 0.0), w).unwrap();
        assert!((at_star - (w + ch.eta_at(ch.xi(w - 1.0)))).norm() < 1e-14);
        for k in 0..50 {
            let p = Complex::from_polar(0.99, 0.4 * k as f64);
            let img = bm.eval(p, c(x + 1.0, -10.0 + 0.4 * k as f64)).unwrap();
            assert!(img.re >= x + 0.5);
        }
        let ks: Vec<f64> = [0.0, 1.0, 4.0, 16.0, 64.0].iter().map(|&dx| ch.dilatation_schedule(ch.tau + dx).unwrap()).collect();
        assert!(ks.windows(2).all(|p| p[1] < p[0]) && ks[4] < 1.1);
        assert!(matches!(boundary_motion(&ch, ch.tau - 1.0), Err(Error::Precondition(_))));
        assert!(matches!(ch.critical_parameter(2.5), Err(Error::PetalTooSmall(_))));
        assert!(matches!(bm.eval(c(0.1, 0.0), c(x + 0.5, 0.0)), Err(Error::Domain(_))));
    }
}
