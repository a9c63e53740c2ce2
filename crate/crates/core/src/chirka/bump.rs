//! The cutoff `λ(x) = exp(-x² / (ε² - x²))` for `0 <= x < ε`, zero beyond.

use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump<T> {
    pub radius: T,
}

impl<T: Real> Bump<T> {
    pub fn new(radius: T) -> Self {
        Bump { radius }
    }

    pub fn value(&self, x: T) -> T {
        let e2 = self.radius * self.radius;
        let x2 = x * x;
        if x2 >= e2 {
            T::zero()
        } else {
            (-x2 / (e2 - x2)).exp()
        }
    }

    pub fn derivative(&self, x: T) -> T {
        let e2 = self.radius * self.radius;
        let x2 = x * x;
        if x2 >= e2 {
            return T::zero();
        }
        let d = e2 - x2;
        -lit::<T>(2.0) * x * e2 / (d * d) * (-x2 / d).exp()
    }

    /// `sup |λ'|`: grid search followed by golden-section refinement.
    pub fn lipschitz(&self) -> T {
        let n = 2000usize;
        let f = |x: T| self.derivative(x).abs();
        let step = self.radius / lit(n as f64);
        let best = (1..n).max_by(|&a, &b| {
            f(step * lit(a as f64)).partial_cmp(&f(step * lit(b as f64))).unwrap_or(std::cmp::Ordering::Equal)
        });
        let k = best.unwrap_or(1);
        let (mut a, mut b) = (step * lit((k - 1) as f64), step * lit((k + 1) as f64));
        let g = lit::<T>(0.5 * (5f64.sqrt() - 1.0));
        for _ in 0..100 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if f(x1) > f(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        f((a + b) / lit(2.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn values_at_ends() {
        let b = Bump::new(0.5f64);
        assert_eq!(b.value(0.0), 1.0);
        assert_eq!(b.value(0.5), 0.0);
        assert_eq!(b.value(0.7), 0.0);
    }

    #[test]
    fn lipschitz_scales_inversely_with_radius() {
        let l1 = Bump::new(1.0f64).lipschitz();
        let l2 = Bump::new(0.25f64).lipschitz();
        assert!((l2 - 4.0 * l1).abs() < 1e-9);
        // Oracle: maximize |λ'| on a 10^6-point grid.
        let b = Bump::new(1.0f64);
        let brute = (1..1_000_000).map(|i| b.derivative(i as f64 * 1e-6).abs()).fold(0.0, f64::max);
        assert!((l1 - brute).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn derivative_bounded_by_lipschitz(x in 0.0..0.6f64) {
            let b = Bump::new(0.5f64);
            prop_assert!(b.derivative(x).abs() <= b.lipschitz() + 1e-12);
            prop_assert!((0.0..=1.0).contains(&b.value(x)));
        }
    }
}
