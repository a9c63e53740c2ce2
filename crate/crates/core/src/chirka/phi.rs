//! The almost-complex structure `Φ(c, w) = Σ_i λ(|w - f_i(c)|) ∂f_i/∂c̄ (c)`.

use num_complex::Complex;

use super::bump::Bump;
use super::motion::Trajectory;
use crate::error::Result;
use crate::scalar::{lit, Real};

/// `Φ` tabulated at a fixed set of parameter nodes in the closed unit disk.
#[derive(Debug, Clone)]
pub struct BumpField<T> {
    bump: Bump<T>,
    /// `[trajectory][node]` values and `∂/∂c̄` derivatives of the reflected trajectories.
    values: Vec<Vec<Complex<T>>>,
    derivatives: Vec<Vec<Complex<T>>>,
}

impl<T: Real> BumpField<T> {
    /// Constant trajectories contribute nothing and may be omitted.
    pub fn new(trajectories: &[Trajectory<T>], nodes: &[Complex<T>], delta: T) -> Result<Self> {
        let mut values = Vec::with_capacity(trajectories.len());
        let mut derivatives = Vec::with_capacity(trajectories.len());
        for t in trajectories {
            let mut v = Vec::with_capacity(nodes.len());
            let mut d = Vec::with_capacity(nodes.len());
            for &c in nodes {
                let (a, b) = t.reflect(c)?;
                v.push(a);
                d.push(b);
            }
            values.push(v);
            derivatives.push(d);
        }
        Ok(BumpField { bump: Bump::new(delta / lit(2.0)), values, derivatives })
    }

    pub fn bump(&self) -> &Bump<T> {
        &self.bump
    }

    /// `Φ(node, w)`. Trajectories are more than `δ` apart, so at most one
    /// term is nonzero.
    pub fn eval(&self, node: usize, w: Complex<T>) -> Complex<T> {
        for (v, d) in self.values.iter().zip(&self.derivatives) {
            let x = (w - v[node]).norm();
            if x < self.bump.radius {
                return d[node] * self.bump.value(x);
            }
        }
        Complex::new(T::zero(), T::zero())
    }

    /// Whether `Φ(node, w)` vanishes for every node.
    pub fn vanishes_for(&self, w: &[Complex<T>]) -> bool {
        w.iter().enumerate().all(|(k, &w)| self.eval(k, w) == Complex::new(T::zero(), T::zero()))
    }

    /// Number of terms that are nonzero at `(node, w)`; used by audits.
    pub fn active_terms(&self, node: usize, w: Complex<T>) -> usize {
        self.values.iter().filter(|v| (w - v[node]).norm() < self.bump.radius).count()
    }
}
