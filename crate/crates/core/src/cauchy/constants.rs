//! Constants in the moduli of continuity of the Cauchy transform.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::quadrature::{elliptic_k_from_complement, plane_integral, tanh_sinh, PlaneQuadrature, SingularIntegrand};
use crate::scalar::{lit, to_f64, Real};

/// Constants for a density with `sup |f| = norm_f` supported in
/// `|ζ| <= r0`, observed on targets `|c| <= r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuityConstants<T> {
    pub r: T,
    pub r0: T,
    pub p: T,
    pub q: T,
    pub norm_f: T,
    /// Bound `|Pf| <= c1 |f|` on the support disk.
    pub c1: T,
    /// Hölder constant for exponent `1 - 2/p`.
    pub c2: T,
    /// `∬_{|ζ|<2} dA / (|ζ| |ζ-1|)`.
    pub c3: T,
    pub b: T,
    /// Coefficient of `|c - c'| log(1/|c - c'|)`.
    pub c: T,
    /// `max(c1, c2)`.
    pub a_r: T,
}

/// `∬_{|ζ|<2} dA / (|ζ| |ζ-1|)`, reduced to a radial integral of the
/// complete elliptic integral and computed by tanh-sinh on `[0,1]` and `[1,2]`.
pub fn two_disk_constant() -> f64 {
    // ∫_0^{2π} dθ / |ρ e^{iθ} - 1| = 4 K(m) / (1 + ρ) with sqrt(1-m) = |1-ρ| / (1+ρ).
    let radial = |rho: f64, gap: f64| 4.0 * elliptic_k_from_complement(gap / (1.0 + rho)) / (1.0 + rho);
    let inner = tanh_sinh(|rho, _, to_one| radial(rho, to_one), 0.0, 1.0);
    let outer = tanh_sinh(|rho, from_one, _| radial(rho, from_one), 1.0, 2.0);
    inner.value + outer.value
}

/// `∬_C (|z| |z-1|)^(-q) dA` for `1 < q < 2`.
pub fn hole_integral(q: f64) -> Result<f64> {
    let pts = [Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)];
    let spec = SingularIntegrand { points: &pts, near_exponents: &[q, q], far_exponent: 2.0 * q };
    // Weaker far-field decay needs more outer decades for the tail model.
    let cfg = PlaneQuadrature { outer_decades: 12.0, ..PlaneQuadrature::default() };
    let v = plane_integral(&spec, |z: Complex<f64>| (z.norm() * (z - Complex::new(1.0, 0.0)).norm()).powf(-q), &cfg)?;
    Ok(v.value)
}

pub fn modulus_constants<T: Real>(r: T, r0: T, p: T, norm_f: T) -> Result<ContinuityConstants<T>> {
    let two = lit::<T>(2.0);
    if !(p > two) {
        return Err(Error::Exponent(to_f64(p)));
    }
    if !(r > T::zero()) || !(r0 > T::zero()) || !(norm_f >= T::zero()) {
        return Err(Error::Domain("radii must be positive and the norm nonnegative".into()));
    }
    let q = p / (p - T::one());
    let pi = T::PI();
    let c1 = two * r;
    let hole: T = lit(hole_integral(to_f64(q))?);
    let c2 = pi.powf(T::one() / p - T::one()) * r.powf(two / p) * hole.powf(T::one() / q);
    let c3: T = lit(two_disk_constant());
    let four_pi = lit::<T>(4.0) * pi;
    let ln2 = two.ln();
    let b = (four_pi * (T::one() + r).ln() + c3 * norm_f - four_pi * ln2) / (pi * ln2) + lit::<T>(4.0) * norm_f;
    let c = b * (T::one() + r0.ln() / ln2);
    Ok(ContinuityConstants { r, r0, p, q, norm_f, c1, c2, c3, b, c, a_r: c1.max(c2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_disk_constant_value() {
        assert!((two_disk_constant() - 12.853488735394436).abs() < 1e-10);
    }

    #[test]
    fn hole_integral_values() {
        // Closed form π γ(1-q/2)² γ(q-1), γ(x) = Γ(x)/Γ(1-x).
        for (q, exact) in [(1.5, 27.50074327208149), (4.0 / 3.0, 24.32588479218808), (1.2, 27.48449284686414)] {
            let v = hole_integral(q).unwrap();
            assert!((v - exact).abs() < 1e-7 * exact, "q={q}: {v} vs {exact}");
        }
    }

    #[test]
    fn unit_disk_constants() {
        let k = modulus_constants(1.0f64, 1.0, 4.0, 1.0).unwrap();
        assert_eq!(k.c1, 2.0);
        let expected_b = 12.853488735394436 / (std::f64::consts::PI * 2f64.ln()) + 4.0;
        assert!((k.b - expected_b).abs() < 1e-9);
        assert!((k.c - k.b).abs() < 1e-12);
        assert!(k.a_r >= k.c1 && k.a_r >= k.c2);
    }

    #[test]
    fn exponent_must_exceed_two() {
        assert!(matches!(modulus_constants(1.0f64, 1.0, 2.0, 1.0), Err(Error::Exponent(_))));
        assert!(matches!(modulus_constants(1.0f64, 1.0, 1.5, 1.0), Err(Error::Exponent(_))));
    }
}
