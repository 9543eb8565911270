//! Declarative experiment configuration.
//!
//! A single TOML file of flat key/value pairs selects the experiment and
//! its parameters; every field has a default matching the 8-qubit
//! reference setup, and the `--experiment`, `--seed`, `--out` and
//! `--format` flags override the file. The fully resolved configuration is
//! embedded verbatim in every output file header, so a result file always
//! records how it was produced.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ShotsConvergence,
    PhaseScan,
    SectorDecomposition,
    Qvap,
}

impl std::str::FromStr for ExperimentKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "shots-convergence" => Ok(ExperimentKind::ShotsConvergence),
            "phase-scan" => Ok(ExperimentKind::PhaseScan),
            "sector-decomposition" => Ok(ExperimentKind::SectorDecomposition),
            "qvap" => Ok(ExperimentKind::Qvap),
            other => Err(CliError::Config(format!(
                "unknown experiment '{other}' (expected shots-convergence, phase-scan, \
                 sector-decomposition or qvap)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Config(format!(
                "unknown format '{other}' (expected csv or json)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryChoice {
    Parity,
    Number,
    Spin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QvapMode {
    Exact,
    Shots,
}

fn default_n_qubits() -> usize {
    8
}
fn default_target() -> usize {
    4
}
fn default_phi() -> f64 {
    0.0
}
fn default_mu() -> f64 {
    std::f64::consts::FRAC_PI_2
}
fn default_shot_schedule() -> Vec<u64> {
    (4..=13).map(|e| 1u64 << e).collect()
}
fn default_grid_points() -> usize {
    64
}
fn default_n_levels() -> usize {
    8
}
fn default_delta_e() -> f64 {
    1.0
}
fn default_g_values() -> Vec<f64> {
    vec![0.0, 0.2, 0.4, 0.6, 0.8]
}
fn default_pairs() -> usize {
    4
}
fn default_qvap_max_iters() -> usize {
    4000
}
fn default_qvap_restarts() -> u32 {
    2
}
fn default_qvap_mode() -> QvapMode {
    QvapMode::Exact
}
fn default_qvap_shots() -> u64 {
    4096
}

/// The experiment configuration as read from the TOML file; every field
/// optional or defaulted, flags may override the header fields.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Option<ExperimentKind>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,

    #[serde(default = "default_n_qubits")]
    pub n_qubits: usize,
    pub symmetry: Option<SymmetryChoice>,
    #[serde(default = "default_target")]
    pub target: usize,
    #[serde(default = "default_phi")]
    pub phi: f64,
    #[serde(default = "default_mu")]
    pub mu: f64,
    /// 0 selects the exact spin phase evolution; any positive value the
    /// Trotter circuit with that many steps.
    #[serde(default)]
    pub trotter_steps: u32,
    #[serde(default = "default_shot_schedule")]
    pub shot_schedule: Vec<u64>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default = "default_n_levels")]
    pub n_levels: usize,
    #[serde(default = "default_delta_e")]
    pub delta_e: f64,
    #[serde(default = "default_g_values")]
    pub g_values: Vec<f64>,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "default_qvap_max_iters")]
    pub qvap_max_iters: usize,
    #[serde(default = "default_qvap_restarts")]
    pub qvap_restarts: u32,
    #[serde(default = "default_qvap_mode")]
    pub qvap_mode: QvapMode,
    #[serde(default = "default_qvap_shots")]
    pub qvap_shots: u64,
}

impl RawConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{path:?}: {e}")))
    }
}

impl Default for RawConfig {
    fn default() -> Self {
        // an empty document exercises exactly the serde field defaults
        toml::from_str("").expect("empty config parses")
    }
}

/// Fully resolved configuration; serialised into every output header.
#[derive(Clone, Debug, Serialize)]
pub struct ResolvedConfig {
    pub experiment: ExperimentKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub format: OutputFormat,
    pub n_qubits: usize,
    pub symmetry: SymmetryChoice,
    pub target: usize,
    pub phi: f64,
    pub mu: f64,
    pub trotter_steps: u32,
    pub shot_schedule: Vec<u64>,
    pub grid_points: usize,
    pub n_levels: usize,
    pub delta_e: f64,
    pub g_values: Vec<f64>,
    pub pairs: usize,
    pub qvap_max_iters: usize,
    pub qvap_restarts: u32,
    pub qvap_mode: QvapMode,
    pub qvap_shots: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Flag overrides collected from the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub experiment: Option<ExperimentKind>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

pub fn resolve(raw: RawConfig, overrides: Overrides) -> Result<ResolvedConfig, CliError> {
    let experiment = overrides
        .experiment
        .or(raw.experiment)
        .ok_or_else(|| CliError::Config("no experiment selected (flag or config file)".into()))?;
    let seed = overrides.seed.or(raw.seed);
    let format = overrides.format.or(raw.format).unwrap_or(OutputFormat::Csv);
    let out = overrides.out.or(raw.out);
    let symmetry = raw.symmetry.unwrap_or(match experiment {
        ExperimentKind::SectorDecomposition => SymmetryChoice::Number,
        _ => SymmetryChoice::Number,
    });

    let config = ResolvedConfig {
        experiment,
        seed,
        format,
        n_qubits: raw.n_qubits,
        symmetry,
        target: raw.target,
        phi: raw.phi,
        mu: raw.mu,
        trotter_steps: raw.trotter_steps,
        shot_schedule: raw.shot_schedule,
        grid_points: raw.grid_points,
        n_levels: raw.n_levels,
        delta_e: raw.delta_e,
        g_values: raw.g_values,
        pairs: raw.pairs,
        qvap_max_iters: raw.qvap_max_iters,
        qvap_restarts: raw.qvap_restarts,
        qvap_mode: raw.qvap_mode,
        qvap_shots: raw.qvap_shots,
        out,
    };
    validate(&config)?;
    Ok(config)
}

fn validate(config: &ResolvedConfig) -> Result<(), CliError> {
    if config.n_qubits == 0 || config.n_qubits > symres_core::state::MAX_QUBITS {
        return Err(CliError::Config(format!(
            "n_qubits must be in 1..={}",
            symres_core::state::MAX_QUBITS
        )));
    }
    match config.experiment {
        ExperimentKind::ShotsConvergence => {
            if config.seed.is_none() {
                return Err(CliError::MissingSeed);
            }
            if config.shot_schedule.is_empty() || config.shot_schedule.contains(&0) {
                return Err(CliError::InvalidSchedule);
            }
            if config.target > config.n_qubits {
                return Err(CliError::Config(
                    "target sector exceeds the qubit count".into(),
                ));
            }
        }
        ExperimentKind::PhaseScan => {
            if config.grid_points < 2 {
                return Err(CliError::Config("grid_points must be at least 2".into()));
            }
            if config.target > config.n_qubits {
                return Err(CliError::Config(
                    "target sector exceeds the qubit count".into(),
                ));
            }
        }
        ExperimentKind::SectorDecomposition => {
            if config.symmetry == SymmetryChoice::Parity {
                return Err(CliError::Config(
                    "sector-decomposition supports the number and spin symmetries".into(),
                ));
            }
        }
        ExperimentKind::Qvap => {
            if config.seed.is_none() {
                return Err(CliError::MissingSeed);
            }
            if config.g_values.is_empty() {
                return Err(CliError::Config("g_values must not be empty".into()));
            }
        }
    }
    Ok(())
}

/// The resolved configuration as `key = value` TOML lines for headers.
pub fn header_lines(config: &ResolvedConfig) -> Vec<String> {
    let toml = toml::to_string(config).expect("resolved config serialises");
    toml.lines().map(|l| l.to_string()).collect()
}
