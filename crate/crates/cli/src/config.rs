//! Experiment configuration: one JSON document per run.

use std::fs;
use std::path::{Path, PathBuf};

use holomotion::{Error, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    CauchyModulus,
    ChirkaExtend,
    QcAudit,
    Regularity,
    Fatou,
    Kobayashi,
    AcceptanceSuite,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::CauchyModulus => "cauchy-modulus",
            Scenario::ChirkaExtend => "chirka-extend",
            Scenario::QcAudit => "qc-audit",
            Scenario::Regularity => "regularity",
            Scenario::Fatou => "fatou",
            Scenario::Kobayashi => "kobayashi",
            Scenario::AcceptanceSuite => "acceptance-suite",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub params: serde_json::Value,
    /// Directory that relative input paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from("runs/latest")
}

fn default_seed() -> u64 {
    holomotion::acceptance::DEFAULT_SEED
}

impl ExperimentConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| Error::Parse { path: path.display().to_string(), message: e.to_string() })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    /// Scenario parameters; a missing `params` object means all defaults.
    pub fn params<P: DeserializeOwned>(&self) -> Result<P> {
        let value = if self.params.is_null() { serde_json::Value::Object(Default::default()) } else { self.params.clone() };
        serde_json::from_value(value).map_err(|e| Error::Config(format!("{} params: {e}", self.scenario.name())))
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    /// Resolves an input path and checks that it exists.
    pub fn input(&self, path: &Path) -> Result<PathBuf> {
        let p = self.resolve(path);
        if !p.exists() {
            return Err(Error::Config(format!("input file {} does not exist", p.display())));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub center: [f64; 2],
    pub half_width: f64,
    pub n: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        GridParams { center: [0.4, 0.3], half_width: 1.3, n: 32 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CauchyParams {
    /// Stem of a field written by `SampledField::write`; the disk
    /// indicator is used when absent.
    pub field: Option<PathBuf>,
    pub radius: f64,
    pub half_width: f64,
    pub n: usize,
    pub targets: usize,
    pub target_radius: f64,
    pub p: f64,
}

impl Default for CauchyParams {
    fn default() -> Self {
        CauchyParams { field: None, radius: 1.0, half_width: 1.5, n: 256, targets: 200, target_radius: 0.95, p: 4.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverParams {
    #[serde(default = "default_omega")]
    pub omega: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_angular")]
    pub angular: usize,
}

fn default_omega() -> f64 {
    0.5
}
fn default_tol() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    500
}
fn default_angular() -> usize {
    256
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams { omega: default_omega(), tol: default_tol(), max_iter: default_max_iter(), angular: default_angular() }
    }
}

/// A finite motion extended over `|c| < r` and sampled on a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionParams {
    /// Motion JSON; the built-in reference motion when absent.
    #[serde(default)]
    pub motion: Option<PathBuf>,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(default)]
    pub grid: GridParams,
    /// Parameters `[re, im]`; ten spread over `|c| < 0.73 r` when absent.
    #[serde(default)]
    pub params: Option<Vec<[f64; 2]>>,
    /// Additional uniformly random parameters with `|c| < 0.95 r`.
    #[serde(default)]
    pub random_params: usize,
    #[serde(default)]
    pub solver: SolverParams,
}

fn default_r() -> f64 {
    0.5
}

impl Default for MotionParams {
    fn default() -> Self {
        MotionParams { motion: None, r: default_r(), grid: GridParams::default(), params: None, random_params: 0, solver: SolverParams::default() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QcParams {
    #[serde(default)]
    pub extension: MotionParams,
    /// Circles `|z - a| = ρ` for the distortion audit.
    #[serde(default = "default_distortion_centre")]
    pub distortion_centre: [f64; 2],
    #[serde(default = "default_distortion_radii")]
    pub distortion_radii: Vec<f64>,
}

fn default_distortion_centre() -> [f64; 2] {
    [0.4, 0.3]
}
fn default_distortion_radii() -> Vec<f64> {
    vec![0.1, 0.2, 0.4, 0.8]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularityParams {
    #[serde(default)]
    pub motion: Option<PathBuf>,
    #[serde(default = "default_r")]
    pub r: f64,
    #[serde(default = "default_centres")]
    pub centres: usize,
    #[serde(default = "default_centre_radius")]
    pub centre_radius: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_separations")]
    pub separations: usize,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "default_big_r")]
    pub big_r: f64,
    /// Defaults to `4 + log 4 + 1/2`.
    #[serde(default)]
    pub log_r: Option<f64>,
    /// Parameter for the Hölder fit; `r/2 · e^{0.8 i}` when absent.
    #[serde(default)]
    pub holder_parameter: Option<[f64; 2]>,
    #[serde(default)]
    pub solver: SolverParams,
}

fn default_centres() -> usize {
    13
}
fn default_centre_radius() -> f64 {
    1.85
}
fn default_delta() -> f64 {
    0.1
}
fn default_separations() -> usize {
    5
}
fn default_pairs() -> usize {
    500
}
fn default_big_r() -> f64 {
    2.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FatouParams {
    /// Germ JSON; `coefficients`/`r0` are used when absent.
    pub germ: Option<PathBuf>,
    pub coefficients: Vec<[f64; 2]>,
    pub r0: f64,
    pub terms: usize,
    pub m_max: usize,
    pub tol: f64,
    /// Test grid `[τ + a, τ + b] × [−y, y]` with `nx × ny` points.
    pub test_grid: [f64; 3],
    pub nx: usize,
    pub ny: usize,
    pub orbit_steps: usize,
}

impl Default for FatouParams {
    fn default() -> Self {
        FatouParams {
            germ: None,
            coefficients: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 0.0]],
            r0: 0.5,
            terms: holomotion::fatou::DEFAULT_TERMS,
            m_max: 64,
            tol: 1e-7,
            test_grid: [0.5, 2.5, 1.5],
            nx: 5,
            ny: 4,
            orbit_steps: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KobayashiParams {
    /// Explicit pairs of ball points, each a list of `[re, im]` values.
    pub pairs: Option<Vec<[Vec<[f64; 2]>; 2]>>,
    /// Otherwise this many random pairs.
    pub random_pairs: usize,
    pub dimension: usize,
    pub max_norm: f64,
    pub chain_length: usize,
}

impl Default for KobayashiParams {
    fn default() -> Self {
        KobayashiParams { pairs: None, random_pairs: 50, dimension: 6, max_norm: 0.9, chain_length: 8 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AcceptanceParams {}
