use holomotion::cauchy::*;
use holomotion::grid::GridSpec;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> TransformConfig {
    TransformConfig::default()
}

fn smooth_field(grid: GridSpec<f64>, seed: u64) -> SampledField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<Complex<f64>> = (0..4).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    SampledField::from_fn(grid, 1.0, move |z| {
        let v = a[0] + a[1] * z + a[2] * z.conj() + a[3] * z * z.conj();
        v / (1.0 + v.norm())
    })
}

#[test]
fn zero_field_has_zero_transform() {
    let grid = GridSpec::<f64>::cells(1.0, 16).unwrap();
    let field = SampledField::from_fn(grid, 1.0, |_| Complex::new(0.0, 0.0));
    let res = cauchy_transform(&field, &[Complex::new(0.1, 0.0), Complex::new(5.0, 2.0)], &cfg()).unwrap();
    assert!(res.values.iter().all(|v| v.norm() == 0.0));
    assert_eq!(res.field_norm, 0.0);
}

#[test]
fn target_on_a_node_is_finite() {
    let grid = GridSpec::<f64>::cells(1.0, 16).unwrap();
    let field = SampledField::from_fn(grid, 1.0, |_| Complex::new(1.0, 0.0));
    let res = cauchy_transform(&field, &[grid.node(7, 9), grid.node(0, 0)], &cfg()).unwrap();
    assert!(res.values.iter().all(|v| v.re.is_finite() && v.im.is_finite()));
}

#[test]
fn decay_at_infinity() {
    let field = SampledField::disk_indicator(1.0, 1.05, 96).unwrap();
    let h = field.grid.spacing;
    let mass = field.values.iter().map(|v| v.re).sum::<f64>() * h * h;
    for k in 0..8 {
        let c = Complex::from_polar(3.0 * 2f64.powi(k), 0.7 * k as f64);
        let v = cauchy_transform(&field, &[c], &cfg()).unwrap().values[0];
        assert!(v.norm() <= 1.05f64.powi(2) * 2.0 / (c.norm() - 1.5));
        if k > 3 {
            assert!((v * c - mass / std::f64::consts::PI).norm() < 1.5 / c.norm());
        }
    }
}

#[test]
fn uniform_bound_on_the_support_disk() {
    let k = modulus_constants(1.0, 1.0, 4.0, 1.0).unwrap();
    let grid = GridSpec::cells(1.05, 48).unwrap();
    let targets: Vec<_> = (0..40).map(|j| Complex::from_polar((j as f64 / 40.0).sqrt(), 2.4 * j as f64)).collect();
    for seed in 0..6 {
        let field = smooth_field(grid, seed);
        let res = cauchy_transform(&field, &targets, &cfg()).unwrap();
        let sup = res.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        assert!(sup <= k.c1 * res.field_norm, "{sup} > {} * {}", k.c1, res.field_norm);
    }
}

#[test]
fn scaling_covariance() {
    let lambda = 2.5;
    let base = GridSpec::cells(1.0, 32).unwrap();
    let scaled = GridSpec::cells(lambda, 32).unwrap();
    let f = |z: Complex<f64>| Complex::new(1.0 - z.norm_sqr(), 0.3 * z.im);
    let fa = SampledField::from_fn(base, 1.0, f);
    let fb = SampledField::from_fn(scaled, lambda, move |z| f(z / lambda));
    for c in [Complex::new(0.2, -0.3), Complex::new(0.9, 0.9), Complex::new(-2.0, 0.5)] {
        let a = cauchy_transform(&fa, &[c], &cfg()).unwrap().values[0];
        let b = cauchy_transform(&fb, &[c * lambda], &cfg()).unwrap().values[0];
        assert!((b - a * lambda).norm() < 1e-12, "{b} vs {}", a * lambda);
    }
}

#[test]
fn dbar_recovers_disk_indicator_away_from_the_edge() {
    let residual = |n: usize| {
        let field = SampledField::disk_indicator(1.0f64, 1.5, n).unwrap();
        let h = field.grid.spacing;
        let band = (2.0 * h).max(0.15);
        let res = dbar_residual(&field, None, |z| (z.norm() - 1.0).abs() > band, &cfg()).unwrap();
        assert!(res.nodes_tested > n * n / 4);
        res.sup
    };
    let (coarse, fine) = (residual(60), residual(120));
    assert!(coarse < 2e-2, "{coarse}");
    assert!(fine < 0.5 * coarse, "{fine} vs {coarse}");
}
