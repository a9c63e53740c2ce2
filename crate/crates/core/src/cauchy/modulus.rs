//! Empirical moduli of continuity of a computed transform.

use super::transform::TransformResult;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulusKind<T> {
    /// `|Pf(c) - Pf(c')| / (|f| t log(1/t))` over pairs with `t = |c - c'| < 1/2`.
    EpsLogEps,
    /// `|Pf(c) - Pf(c')| / (|f| t^alpha)` over all distinct pairs.
    Holder { exponent: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusEstimate<T> {
    pub value: T,
    pub pair: (usize, usize),
    pub pairs_tested: usize,
}

pub fn empirical_modulus<T: Real>(result: &TransformResult<T>, norm_f: T, kind: ModulusKind<T>) -> Result<ModulusEstimate<T>> {
    if !(norm_f > T::zero()) {
        return Err(Error::Precondition("density norm must be positive".into()));
    }
    let half = lit::<T>(0.5);
    let mut best = ModulusEstimate { value: T::zero(), pair: (0, 0), pairs_tested: 0 };
    let n = result.targets.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let t = (result.targets[i] - result.targets[j]).norm();
            let scale = match kind {
                ModulusKind::EpsLogEps => {
                    if !(t > T::zero() && t < half) {
                        continue;
                    }
                    t * (T::one() / t).ln()
                }
                ModulusKind::Holder { exponent } => {
                    if t == T::zero() {
                        continue;
                    }
                    t.powf(exponent)
                }
            };
            let ratio = (result.values[i] - result.values[j]).norm() / (norm_f * scale);
            best.pairs_tested += 1;
            if ratio > best.value {
                best.value = ratio;
                best.pair = (i, j);
            }
        }
    }
    if best.pairs_tested == 0 {
        return Err(Error::EmptySample("no admissible target pairs".into()));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    #[test]
    fn identity_values_give_unit_lipschitz_ratio() {
        let targets: Vec<_> = (0..5).map(|k| Complex::new(0.1 * k as f64, 0.0)).collect();
        let res = TransformResult { values: targets.clone(), targets, field_norm: 1.0 };
        let m = empirical_modulus(&res, 1.0, ModulusKind::Holder { exponent: 1.0 }).unwrap();
        assert!((m.value - 1.0).abs() < 1e-12);
        assert_eq!(m.pairs_tested, 10);
    }

    #[test]
    fn far_pairs_are_not_admissible() {
        let targets = vec![Complex::new(0.0, 0.0), Complex::new(0.9, 0.0)];
        let res = TransformResult { values: targets.clone(), targets, field_norm: 1.0 };
        assert!(matches!(empirical_modulus(&res, 1.0, ModulusKind::EpsLogEps), Err(Error::EmptySample(_))));
    }
}
