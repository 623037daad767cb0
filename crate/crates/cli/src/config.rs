//! JSON config files and flag-over-file resolution.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::path::{Path, PathBuf};

use cmur_core::cmur::{Direction, SearchConfig};
use cmur_core::qcore::{build_state, DensityMatrix, ProjectiveMeasurement, StateFamily, StateParams};
use serde::Deserialize;

use crate::args::{MeasArgs, SearchArgs, StateArgs, ThetaGrid};
use crate::error::CliError;
use crate::output::Format;

/// Everything a config file may set. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    pub family: Option<String>,
    pub xi: Option<f64>,
    pub p: Option<f64>,
    pub state_seed: Option<u64>,
    pub state: Option<PathBuf>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub basis: Option<PathBuf>,
    pub direction: Option<String>,
    pub xis: Option<Vec<f64>>,
    pub theta_steps: Option<usize>,
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub xi_steps: Option<usize>,
    pub p_steps: Option<usize>,
    pub single_samples: Option<usize>,
    pub hemisphere_points: Option<usize>,
    pub vecs: Option<Vec<Vec<f64>>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub search: Option<SearchConfig>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Reads a state or measurement file. Unreadable or malformed JSON is a config error;
/// well-formed input that fails the library's validity checks is a domain error.
fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T, CliError> {
    let ctx = |e: &dyn std::fmt::Display| format!("{what} {}: {e}", path.display());
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(ctx(&e)))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Config(ctx(&e)))?;
    serde_json::from_value(value).map_err(|e| {
        const CHECKS: [&str; 4] = ["domain error", "shape error", "unsupported dimension", "invalid input"];
        if CHECKS.iter().any(|c| e.to_string().starts_with(c)) {
            CliError::Domain(ctx(&e))
        } else {
            CliError::Config(ctx(&e))
        }
    })
}

/// Flags layered over a config file.
pub struct Resolver {
    pub file: FileConfig,
}

impl Resolver {
    pub fn new(config: Option<&Path>, command: &str) -> Result<Self, CliError> {
        let file = match config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        if let Some(c) = &file.command {
            if c != command {
                return Err(CliError::Config(format!("config file is for '{c}', not '{command}'")));
            }
        }
        Ok(Self { file })
    }

    pub fn seed(&self, s: &SearchArgs) -> u64 {
        s.seed.or(self.file.seed).or(self.file.search.map(|c| c.seed)).unwrap_or(0)
    }

    pub fn search(&self, s: &SearchArgs) -> Result<SearchConfig, CliError> {
        let base = self.file.search.unwrap_or_default();
        let cfg = SearchConfig {
            starts: s.starts.unwrap_or(base.starts),
            max_iters: s.max_iters.unwrap_or(base.max_iters),
            tol: s.tol.unwrap_or(base.tol),
            seed: self.seed(s),
        };
        if cfg.starts == 0 {
            return Err(CliError::Config("starts must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn format(&self, flag: Option<Format>, default: Format) -> Format {
        flag.or(self.file.format).unwrap_or(default)
    }

    pub fn out(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.file.out.clone())
    }

    /// The state and, when it came from a family, the family and its parameters.
    /// A `--state` or `--family` flag decides first, then the file's `state`, then its `family`.
    pub fn state(&self, a: &StateArgs, seed: u64) -> Result<(DensityMatrix, Option<(StateFamily, StateParams)>), CliError> {
        let file_family = || -> Result<Option<StateFamily>, CliError> {
            self.file.family.as_deref().map(|s| s.parse().map_err(|e: cmur_core::Error| CliError::Config(e.to_string()))).transpose()
        };
        let family = match (&a.state, a.family) {
            (Some(path), _) => return Ok((read_json(path, "state")?, None)),
            (None, Some(f)) => f,
            (None, None) => match (&self.file.state, file_family()?) {
                (Some(path), _) => return Ok((read_json(path, "state")?, None)),
                (None, Some(f)) => f,
                (None, None) => return Err(CliError::Config("no state given: pass --family or --state".into())),
            },
        };
        let params = StateParams {
            xi: a.xi.or(self.file.xi).unwrap_or(0.0),
            p: a.p.or(self.file.p).unwrap_or(1.0),
            seed: a.state_seed.or(self.file.state_seed).unwrap_or(seed),
        };
        Ok((build_state(family, &params)?, Some((family, params))))
    }

    pub fn measurement(&self, m: &MeasArgs) -> Result<(ProjectiveMeasurement, Option<(f64, f64)>), CliError> {
        let angles = |theta: f64| -> Result<(ProjectiveMeasurement, Option<(f64, f64)>), CliError> {
            let phi = m.phi.or(self.file.phi).unwrap_or(0.0);
            if !(0.0..=PI).contains(&theta) {
                return Err(CliError::domain(format!("θ = {theta} outside [0, π]")));
            }
            Ok((ProjectiveMeasurement::qubit(theta, phi)?, Some((theta, phi))))
        };
        match (&m.basis, m.theta) {
            (Some(path), _) => Ok((read_json(path, "measurement")?, None)),
            (None, Some(theta)) => angles(theta),
            (None, None) => match (&self.file.basis, self.file.theta) {
                (Some(path), _) => Ok((read_json(path, "measurement")?, None)),
                (None, Some(theta)) => angles(theta),
                (None, None) => Err(CliError::Config("no measurement given: pass --theta or --basis".into())),
            },
        }
    }

    pub fn direction(&self, m: &MeasArgs) -> Result<Direction, CliError> {
        match (m.direction, &self.file.direction) {
            (Some(d), _) => Ok(d),
            (None, Some(s)) => s.parse().map_err(|e: cmur_core::Error| CliError::Config(e.to_string())),
            (None, None) => Ok(Direction::ReduceAByB),
        }
    }

    /// θ grid and ξ list for the figure commands.
    pub fn theta_grid(&self, g: &ThetaGrid, steps: usize, xis: &[f64]) -> Result<(Vec<f64>, Vec<f64>), CliError> {
        let n = self.steps(g.theta_steps.or(self.file.theta_steps).unwrap_or(steps), "theta_steps")?;
        let lo = g.theta_min.or(self.file.theta_min).unwrap_or(0.0);
        let hi = g.theta_max.or(self.file.theta_max).unwrap_or(FRAC_PI_2);
        if !(0.0..=PI).contains(&lo) || !(0.0..=PI).contains(&hi) || lo > hi {
            return Err(CliError::domain(format!("θ range [{lo}, {hi}] not inside [0, π]")));
        }
        let xis = g.xis.clone().or_else(|| self.file.xis.clone()).unwrap_or_else(|| xis.to_vec());
        if xis.is_empty() {
            return Err(CliError::Config("empty ξ list".into()));
        }
        Ok((linspace(lo, hi, n), xis))
    }

    pub fn steps(&self, n: usize, name: &str) -> Result<usize, CliError> {
        if n < 2 {
            return Err(CliError::Config(format!("{name} must be at least 2, got {n}")));
        }
        Ok(n)
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}

pub const FIGURE1_XIS: [f64; 4] = [0.0, PI / 16.0, FRAC_PI_8, FRAC_PI_4];
pub const FIGURE2_XIS: [f64; 3] = [0.0, FRAC_PI_8, FRAC_PI_4];
