//! One function per scenario. Each writes its files into the output
//! directory and returns a JSON summary for the manifest.

use std::fs;
use std::path::Path;

use holomotion::acceptance::{audit_parameters, reference_motion, Suite};
use holomotion::cauchy::{cauchy_transform, empirical_modulus, modulus_constants, ModulusKind, SampledField, TransformConfig};
use holomotion::chirka::{ChirkaMotion, ExtendedMotion, ExtensionConfig, FinitePointMotion, SolverConfig};
use holomotion::fatou::{fatou_coordinate, test_grid, ParabolicGerm, PetalChart, StripAudit};
use holomotion::geometry::SpherePoint;
use holomotion::grid::GridSpec;
use holomotion::io::{write_json, Cell, Table};
use holomotion::kobayashi::{ball_distance, chain_distance, distance_table, teich_pair_representative, BallPoint};
use holomotion::qc::{circular_distortion, cross_ratio_track, dilatation_bound_check, dilatation_table, track_table};
use holomotion::regularity::{vanishing_probe, default_steps, holder_exponent_fit, log_spaced_pairs, vector_modulus_check, TangentField};
use holomotion::{Error, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::*;

/// What a scenario produced: a summary and a verdict for the exit status.
pub struct Outcome {
    pub summary: Value,
    pub files: Vec<String>,
    /// Set when the scenario ran to completion but a reported check failed.
    pub failure: Option<Failure>,
}

pub enum Failure {
    Checks(String),
    NonConvergence(String),
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Writer<'_> {
    fn table(&mut self, name: &str, table: &Table) -> Result<()> {
        table.write(self.dir.join(name))?;
        self.files.push(name.into());
        Ok(())
    }

    fn json(&mut self, name: &str, value: &Value) -> Result<()> {
        write_json(self.dir.join(name), value)?;
        self.files.push(name.into());
        Ok(())
    }

    fn finish(self, summary: Value, failure: Option<Failure>) -> Outcome {
        Outcome { summary, files: self.files, failure }
    }
}

fn c(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn run(cfg: &ExperimentConfig, dir: &Path) -> Result<Outcome> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let w = Writer { dir, files: Vec::new() };
    match cfg.scenario {
        Scenario::CauchyModulus => cauchy(cfg, w),
        Scenario::ChirkaExtend => chirka(cfg, w),
        Scenario::QcAudit => qc(cfg, w),
        Scenario::Regularity => regularity(cfg, w),
        Scenario::Fatou => fatou(cfg, w),
        Scenario::Kobayashi => kobayashi(cfg, w),
        Scenario::AcceptanceSuite => acceptance(cfg, w),
    }
}

/// Loads every input the scenario names, so that `validate` fails the same
/// way `run` would.
pub fn check_inputs(cfg: &ExperimentConfig) -> Result<()> {
    match cfg.scenario {
        Scenario::CauchyModulus => {
            let p: CauchyParams = cfg.params()?;
            if let Some(stem) = &p.field {
                cfg.input(&stem.with_extension("json"))?;
                cfg.input(&stem.with_extension("csv"))?;
            }
        }
        Scenario::ChirkaExtend => {
            load_motion(cfg, cfg.params::<MotionParams>()?.motion.as_deref())?;
        }
        Scenario::QcAudit => {
            load_motion(cfg, cfg.params::<QcParams>()?.extension.motion.as_deref())?;
        }
        Scenario::Regularity => {
            load_motion(cfg, cfg.params::<RegularityParams>()?.motion.as_deref())?;
        }
        Scenario::Fatou => {
            load_germ(cfg, &cfg.params()?)?;
        }
        Scenario::Kobayashi => {
            cfg.params::<KobayashiParams>()?;
        }
        Scenario::AcceptanceSuite => {
            cfg.params::<AcceptanceParams>()?;
        }
    }
    Ok(())
}

fn load_motion(cfg: &ExperimentConfig, path: Option<&Path>) -> Result<FinitePointMotion<f64>> {
    match path {
        Some(p) => FinitePointMotion::read(cfg.input(p)?),
        None => Ok(reference_motion()),
    }
}

fn load_germ(cfg: &ExperimentConfig, p: &FatouParams) -> Result<ParabolicGerm<f64>> {
    match &p.germ {
        Some(path) => ParabolicGerm::read(cfg.input(path)?),
        None => ParabolicGerm::new(p.coefficients.iter().map(|&a| c(a)).collect(), p.r0),
    }
}

fn extension_config(s: &SolverParams) -> ExtensionConfig {
    ExtensionConfig {
        angular: s.angular,
        solver: SolverConfig { omega: s.omega, tol: s.tol, max_iter: s.max_iter },
        ..ExtensionConfig::default()
    }
}

fn cauchy(cfg: &ExperimentConfig, mut w: Writer) -> Result<Outcome> {
    let p: CauchyParams = cfg.params()?;
    let field = match &p.field {
        Some(stem) => {
            cfg.input(&stem.with_extension("json"))?;
            SampledField::read(cfg.resolve(stem))?
        }
        None => SampledField::disk_indicator(p.radius, p.half_width, p.n)?,
    };
    let targets: Vec<C64> = (0..p.targets).map(|k| C64::from_polar(p.target_radius * ((k as f64 + 0.5) / p.targets as f64).sqrt(), 2.399963 * k as f64)).collect();
    let res = cauchy_transform(&field, &targets, &TransformConfig::default())?;
    let mut table = Table::new(&["c_re", "c_im", "pf_re", "pf_im"]);
    for (t, v) in targets.iter().zip(&res.values) {
        table.push(vec![Cell::from(t.re), Cell::from(t.im), Cell::from(v.re), Cell::from(v.im)]);
    }
    w.table("transform.csv", &table)?;
    let norm = res.field_norm;
    let constants = modulus_constants(field.support_radius.max(p.target_radius), field.support_radius, p.p, norm)?;
    let summary = if norm > 0.0 {
        let log = empirical_modulus(&res, norm, ModulusKind::EpsLogEps)?;
        let holder = empirical_modulus(&res, norm, ModulusKind::Holder { exponent: 1.0 - 2.0 / p.p })?;
        json!({
            "field_norm": norm,
            "eps_log_eps": { "value": log.value, "bound": constants.c, "pairs": log.pairs_tested },
            "holder": { "exponent": 1.0 - 2.0 / p.p, "value": holder.value, "bound": constants.a_r, "pairs": holder.pairs_tested },
            "constants": constants,
        })
    } else {
        json!({ "field_norm": 0.0, "constants": constants })
    };
    w.json("modulus.json", &summary)?;
    Ok(w.finish(summary, None))
}

fn sample_extension(cfg: &ExperimentConfig, p: &MotionParams) -> Result<(ChirkaMotion<f64>, ExtendedMotion<f64>)> {
    let motion = load_motion(cfg, p.motion.as_deref())?;
    let chirka = ChirkaMotion::new(&motion, p.r, extension_config(&p.solver))?;
    let mut params: Vec<C64> = match &p.params {
        Some(list) => list.iter().map(|&a| c(a)).collect(),
        None => audit_parameters(p.r),
    };
    let mut rng = rng(cfg.seed);
    let limit = chirka.config().max_parameter_ratio * p.r;
    params.extend((0..p.random_params).map(|_| C64::from_polar(limit * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))));
    let grid = GridSpec::square(c(p.grid.center), p.grid.half_width, p.grid.n)?;
    let ext = ExtendedMotion::sample(&chirka, &grid.nodes(), &params, Some(grid))?;
    Ok((chirka, ext))
}

fn chirka(cfg: &ExperimentConfig, mut w: Writer) -> Result<Outcome> {
    let p: MotionParams = cfg.params()?;
    let (_, ext) = sample_extension(cfg, &p)?;
    ext.write(w.dir.join("extension"))?;
    w.files.extend(["extension.json".to_string(), "extension.csv".to_string()]);
    let mut tangents = Table::new(&["z_re", "z_im", "v_re", "v_im"]);
    for (z, v) in ext.points.iter().zip(&ext.tangents) {
        tangents.push(vec![Cell::from(z.re), Cell::from(z.im), Cell::from(v.re), Cell::from(v.im)]);
    }
    w.table("tangents.csv", &tangents)?;
    let summary = json!({ "r": ext.r, "points": ext.points.len(), "params": ext.params.len(), "diagnostics": ext.diagnostics });
    w.json("diagnostics.json", &summary)?;
    let failure = (!ext.diagnostics.failures.is_empty()).then(|| Failure::NonConvergence(format!("{} points failed to solve", ext.diagnostics.failures.len())));
    Ok(w.finish(summary, failure))
}

fn qc(cfg: &ExperimentConfig, mut w: Writer) -> Result<Outcome> {
    let p: QcParams = cfg.params()?;
    let (chirka, ext) = sample_extension(cfg, &p.extension)?;
    let reports = ext.params.iter().map(|&c| dilatation_bound_check(&ext, c)).collect::<Result<Vec<_>>>()?;
    w.table("dilatation.csv", &dilatation_table(&reports))?;
    let mut distortion = Table::new(&["c_re", "c_im", "distortion"]);
    for (k, c) in ext.params.iter().enumerate() {
        let d = circular_distortion(&ext.grid_slice(k)?, C64::new(p.distortion_centre[0], p.distortion_centre[1]), &p.distortion_radii)?;
        distortion.push(vec![Cell::from(c.re), Cell::from(c.im), Cell::from(d)]);
    }
    w.table("distortion.csv", &distortion)?;
    let data = chirka.rescaled_motion().trajectories[0].base;
    let quadruple = [SpherePoint::Finite(data), SpherePoint::finite(1.0, 0.0), SpherePoint::finite(0.0, 0.0), SpherePoint::Infinity];
    let path: Vec<C64> = (0..=32).map(|k| C64::new(0.9 * p.extension.r * k as f64 / 32.0, 0.0)).collect();
    let track = cross_ratio_track(&chirka, quadruple, &path)?;
    w.table("cross_ratio.csv", &track_table(&track))?;
    let worst = reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let summary = json!({ "params": reports.len(), "min_margin": worst, "reports": reports });
    w.json("qc_summary.json", &summary)?;
    let failure = (worst < 0.0).then(|| Failure::Checks(format!("dilatation exceeds its bound (margin {worst:e})")));
    Ok(w.finish(summary, failure))
}

fn regularity(cfg: &ExperimentConfig, mut w: Writer) -> Result<Outcome> {
    let p: RegularityParams = cfg.params()?;
    let motion = load_motion(cfg, p.motion.as_deref())?;
    let chirka = ChirkaMotion::new(&motion, p.r, extension_config(&p.solver))?;
    let centres: Vec<C64> = (0..p.centres).map(|k| C64::from_polar(p.centre_radius * ((k as f64 + 0.5) / p.centres as f64).sqrt(), 2.39996 * k as f64)).collect();
    let pairs: Vec<_> = log_spaced_pairs(&centres, p.delta, p.separations).into_iter().take(p.pairs).collect();
    let pts: Vec<C64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let field = TangentField::sample(&chirka, &pts, &default_steps(p.r))?;
    let report = vector_modulus_check(&field, p.big_r, p.delta, p.log_r.unwrap_or(4.0 + 4f64.ln() + 0.5))?;
    let mut table = Table::new(&["z_re", "z_im", "v_re", "v_im", "error"]);
    for ((z, v), e) in field.points.iter().zip(field.unit_disk_values()).zip(&field.errors) {
        table.push(vec![Cell::from(z.re), Cell::from(z.im), Cell::from(v.re), Cell::from(v.im), Cell::from(*e)]);
    }
    w.table("tangent.csv", &table)?;
    let hc = p.holder_parameter.map(c).unwrap_or_else(|| C64::from_polar(p.r / 2.0, 0.8));
    let hp = log_spaced_pairs(&[C64::new(0.3, -0.4), C64::new(1.6, 0.2)], p.delta, 4);
    let fit = holder_exponent_fit(&chirka, hc, &hp)?;
    w.table("holder.csv", &fit.to_table())?;
    let r = p.r;
    let v = |z: C64| chirka.solve(z).map(|s| s.tangent(r) * r).unwrap_or(C64::new(f64::NAN, f64::NAN));
    let a = motion.trajectories.first().map(|t| t.base + 0.05).unwrap_or(C64::new(0.5, 0.5));
    let bs: Vec<C64> = (1..=8).map(|k| C64::new(2f64.powi(k), 0.0)).collect();
    let probe = vanishing_probe(v, a, C64::new(0.5, -0.5), &bs);
    w.table("vanishing.csv", &probe.to_table())?;
    let summary = json!({
        "modulus": {
            "pairs": report.pairs_tested,
            "worst_ratio": report.worst_ratio,
            "coefficient": report.coefficient,
            "m1": report.m1,
            "c": report.c,
            "holds": report.holds(),
        },
        "vanishing_trend": probe.trend_holds(),
        "holder": { "c": [hc.re, hc.im], "slope": fit.slope, "lower_bound": fit.lower_bound, "meets_bound": fit.meets_bound() },
    });
    w.json("regularity.json", &summary)?;
    let failure = (!report.holds() || !fit.meets_bound()).then(|| Failure::Checks("tangent modulus or Hölder bound violated".into()));
    Ok(w.finish(summary, failure))
}

fn fatou(cfg: &ExperimentConfig, mut w: Writer) -> Result<Outcome> {
    let p: FatouParams = cfg.params()?;
    let germ = load_germ(cfg, &p)?;
    let chart = PetalChart::new(&germ, p.terms)?;
    let w0 = C64::new(chart.tau + 1.0, 0.0);
    let orbit = chart.orbit(w0, p.orbit_steps)?;
    let mut orbit_table = Table::new(&["k", "w_re", "w_im"]);
    for (k, z) in orbit.iter().enumerate() {
        orbit_table.push(vec![Cell::from(k), Cell::from(z.re), Cell::from(z.im)]);
    }
    w.table("orbit.csv", &orbit_table)?;
    let [a, b, y] = p.test_grid;
    let pts = test_grid(&chart, a, b, y, p.nx, p.ny);
    let fc = fatou_coordinate(&chart, p.m_max, p.tol, &pts, StripAudit::default())?;
    w.table("convergence.csv", &fc.convergence_table())?;
    w.table("residuals.csv", &fc.values_table())?;
    let ratio = (orbit[orbit.len() - 1] - orbit[0]) / (orbit.len() - 1) as f64;
    let summary = json!({
        "petal_radius": chart.r,
        "tau": chart.tau,
        "stages": fc.m,
        "converged": fc.converged,
        "last_difference": fc.history.last().map(|h| h.difference),
        "conjugacy_residual": fc.conjugacy_residual,
        "orbit_ratio": [ratio.re, ratio.im],
    });
    w.json("fatou.json", &summary)?;
    let failure = (!fc.converged).then(|| Failure::NonConvergence(format!("no convergence to {:e} within {} stages", p.tol, p.m_max)));
    Ok(w.finish(summary, failure))
}

fn kobayashi(cfg: &ExperimentConfig, mut w: Writer) -> Result<Outcome> {
    let p: KobayashiParams = cfg.params()?;
    let pairs: Vec<(BallPoint<f64>, BallPoint<f64>)> = match &p.pairs {
        Some(list) => list
            .iter()
            .map(|[a, b]| Ok((BallPoint::new(a.iter().map(|&z| c(z)).collect())?, BallPoint::new(b.iter().map(|&z| c(z)).collect())?)))
            .collect::<Result<_>>()?,
        None => {
            let mut rng = rng(cfg.seed);
            let mut point = || BallPoint::new((0..p.dimension).map(|_| C64::from_polar(p.max_norm * rng.gen::<f64>(), rng.gen_range(0.0..std::f64::consts::TAU))).collect());
            (0..p.random_pairs).map(|_| Ok((point()?, point()?))).collect::<Result<_>>()?
        }
    };
    let mut rows = Vec::new();
    let mut chains = Table::new(&["pair", "n", "dn"]);
    let mut monotone = true;
    for (k, (a, b)) in pairs.iter().enumerate() {
        let chain = chain_distance(a, b, p.chain_length)?;
        monotone &= chain.monotone;
        for (n, d) in chain.history.iter().enumerate() {
            chains.push(vec![Cell::from(k), Cell::from(n + 1), Cell::from(*d)]);
        }
        let d1 = ball_distance(a, b)?;
        rows.push((k, d1, chain.value, teich_pair_representative(a, b)?));
    }
    w.table("distances.csv", &distance_table(&rows))?;
    w.table("chains.csv", &chains)?;
    let summary = json!({ "pairs": rows.len(), "chain_length": p.chain_length, "monotone": monotone });
    w.json("kobayashi.json", &summary)?;
    Ok(w.finish(summary, (!monotone).then(|| Failure::Checks("chain distances increased".into()))))
}

fn acceptance(cfg: &ExperimentConfig, mut w: Writer) -> Result<Outcome> {
    cfg.params::<AcceptanceParams>()?;
    let mut suite = Suite::new(cfg.seed, w.dir)?;
    let outcomes = suite.run_all()?;
    let mut lines = String::new();
    for o in &outcomes {
        println!("{}", o.summary());
        lines.push_str(&o.summary());
        lines.push('\n');
        w.files.extend(o.files.iter().cloned());
    }
    let path = w.dir.join("summary.txt");
    fs::write(&path, lines).map_err(|e| Error::io(&path, e))?;
    w.files.push("summary.txt".into());
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    let summary = json!({ "criteria": outcomes, "failed": failed });
    w.json("acceptance.json", &summary)?;
    let failure = (!failed.is_empty()).then(|| Failure::Checks(format!("criteria {failed:?} failed")));
    Ok(w.finish(summary, failure))
}
