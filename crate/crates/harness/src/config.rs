use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use bergreen_core::desc::{DomainDesc, WeightDesc};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Kernel,
    Green,
    VerifyIdentity,
    Exhaust,
    PdeGreen,
    Distance,
    GaugeExperiment,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Kernel => "kernel",
            Experiment::Green => "green",
            Experiment::VerifyIdentity => "verify-identity",
            Experiment::Exhaust => "exhaust",
            Experiment::PdeGreen => "pde-green",
            Experiment::Distance => "distance",
            Experiment::GaugeExperiment => "gauge-experiment",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Pairs `(z, w)` given explicitly, or drawn from a seeded generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointSet {
    Explicit { pairs: Vec<[[f64; 2]; 2]> },
    Random { count: usize, seed: Option<u64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedPathChoice {
    Analytic,
    FiniteDifference,
    Richardson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyParameter {
    BasisOrder,
    QuadOrder,
    GridResolution,
    FdStep,
}

impl StudyParameter {
    pub fn name(self) -> &'static str {
        match self {
            StudyParameter::BasisOrder => "basis_order",
            StudyParameter::QuadOrder => "quad_order",
            StudyParameter::GridResolution => "grid_resolution",
            StudyParameter::FdStep => "fd_step",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudySpec {
    pub parameter: StudyParameter,
    pub values: Vec<f64>,
}

/// Tolerance overrides; unset entries take the experiment default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Identity residual on closed-form and analytic paths.
    pub identity: Option<f64>,
    /// Identity residual on the finite-difference path.
    pub identity_fd: Option<f64>,
    /// Relative error on grid paths.
    pub grid: Option<f64>,
    /// Kernel agreement with a reference kernel.
    pub kernel: Option<f64>,
    /// Every other check.
    pub generic: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub domain: DomainDesc,
    /// `None` means `rho = 1`.
    pub weight: Option<WeightDesc>,
    pub basis_order: usize,
    pub laurent_range: (i64, i64),
    pub quad_order: usize,
    pub grid_resolution: usize,
    pub fd_step: f64,
    pub mixed_path: MixedPathChoice,
    pub points: PointSet,
    /// Random points are drawn from the domain shrunk by this factor.
    pub margin: f64,
    pub min_separation: f64,
    pub exhaustion_steps: usize,
    pub tolerances: Tolerances,
    pub study: Option<StudySpec>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::VerifyIdentity,
            domain: DomainDesc {
                kind: "unit_disk".into(),
                params: vec![],
            },
            weight: None,
            basis_order: 30,
            laurent_range: (-15, 15),
            quad_order: 40,
            grid_resolution: 128,
            fd_step: 1e-3,
            mixed_path: MixedPathChoice::Analytic,
            points: PointSet::Random { count: 25, seed: None },
            margin: 0.7,
            min_separation: 0.05,
            exhaustion_steps: 6,
            tolerances: Tolerances::default(),
            study: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Checks parameter ranges and that the domain and weight descriptions
    /// can be built.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        if !(1..=80).contains(&self.basis_order) {
            return bad(format!("basis_order {} outside 1..=80", self.basis_order));
        }
        if !(2..=200).contains(&self.quad_order) {
            return bad(format!("quad_order {} outside 2..=200", self.quad_order));
        }
        if !(8..=512).contains(&self.grid_resolution) {
            return bad(format!("grid_resolution {} outside 8..=512", self.grid_resolution));
        }
        if !(self.fd_step > 0.0 && self.fd_step <= 0.1) {
            return bad(format!("fd_step {} outside (0, 0.1]", self.fd_step));
        }
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return bad(format!("margin {} outside (0, 1)", self.margin));
        }
        if !(self.min_separation >= 0.0) {
            return bad(format!("min_separation {} is negative", self.min_separation));
        }
        if !(1..=30).contains(&self.exhaustion_steps) {
            return bad(format!("exhaustion_steps {} outside 1..=30", self.exhaustion_steps));
        }
        let (lo, hi) = self.laurent_range;
        if lo > 0 || hi < 0 || hi - lo > 80 {
            return bad(format!("laurent_range ({lo}, {hi}) must contain 0 and span at most 80"));
        }
        match &self.points {
            PointSet::Random { count, seed } => {
                if *count == 0 || *count > 10_000 {
                    return bad(format!("random point count {count} outside 1..=10000"));
                }
                if seed.is_none() {
                    return bad("random point sets need a seed".into());
                }
            }
            PointSet::Explicit { pairs } => {
                if pairs.is_empty() {
                    return bad("explicit point list is empty".into());
                }
                if pairs.iter().flatten().flatten().any(|v| !v.is_finite()) {
                    return bad("explicit point list contains non-finite coordinates".into());
                }
            }
        }
        let tols = [
            self.tolerances.identity,
            self.tolerances.identity_fd,
            self.tolerances.grid,
            self.tolerances.kernel,
            self.tolerances.generic,
        ];
        if tols.iter().flatten().any(|t| !(*t > 0.0)) {
            return bad("tolerances must be positive".into());
        }
        if let Some(study) = &self.study {
            if study.values.len() < 3 {
                return bad("a convergence study needs at least 3 values".into());
            }
            let up = study.values.windows(2).all(|w| w[1] > w[0]);
            let down = study.values.windows(2).all(|w| w[1] < w[0]);
            if !(up || down) {
                return bad("convergence study values must be strictly monotone".into());
            }
        }
        let domain = self
            .domain
            .to_domain::<f64>()
            .map_err(|e| ConfigError::Invalid(format!("domain: {e}")))?;
        if let Some(w) = &self.weight {
            let wd = w
                .to_weight::<f64>()
                .map_err(|e| ConfigError::Invalid(format!("weight: {e}")))?;
            if !wd.domain().same_region(&domain) {
                return bad("weight domain differs from the experiment domain".into());
            }
        }
        Ok(())
    }

    /// Applies the command-line overrides.
    pub fn override_with(&mut self, seed: Option<u64>, points: Option<usize>, tol: Option<f64>) {
        if let PointSet::Random { count, seed: s } = &mut self.points {
            if let Some(n) = points {
                *count = n;
            }
            if seed.is_some() {
                *s = seed;
            }
        } else if let Some(n) = points {
            self.points = PointSet::Random { count: n, seed };
        }
        if let Some(t) = tol {
            self.tolerances = Tolerances {
                identity: Some(t),
                identity_fd: Some(t),
                grid: Some(t),
                kernel: Some(t),
                generic: Some(t),
            };
        }
    }
}
