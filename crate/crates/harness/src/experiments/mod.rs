//! One function per experiment; each fills a [`RunOutput`].

mod distance;
mod exhaust;
mod gauge;
mod green;
mod identity;
mod kernel;
mod pde;
mod study;

use thiserror::Error;

use bergreen_core::bergman::kernel_from_gram;
use bergreen_core::geometry::build_quadrature;
use bergreen_core::{BasisSpec, Complex64, Domain, KernelApproximation, QuadratureRule, Weight};

use crate::config::{ConfigError, Experiment, ExperimentConfig, PointSet};
use crate::convergence::StudyError;
use crate::points::random_pairs;
use crate::report::{Report, RunOutput};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numeric(#[from] bergreen_core::Error),
    #[error(transparent)]
    Study(#[from] StudyError),
}

/// Validates `config` and runs the experiment it names.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, RunError> {
    config.validate()?;
    let ctx = Context::new(config)?;
    let mut out = RunOutput::new(Report::new(config));
    match config.experiment {
        Experiment::Kernel => kernel::run(&ctx, &mut out)?,
        Experiment::Green => green::run(&ctx, &mut out)?,
        Experiment::VerifyIdentity => identity::run(&ctx, &mut out)?,
        Experiment::Exhaust => exhaust::run(&ctx, &mut out)?,
        Experiment::PdeGreen => pde::run(&ctx, &mut out)?,
        Experiment::Distance => distance::run(&ctx, &mut out)?,
        Experiment::GaugeExperiment => gauge::run(&ctx, &mut out)?,
    }
    if let Some(spec) = &config.study {
        study::run(&ctx, spec, &mut out)?;
    }
    Ok(out)
}

pub(crate) struct Context<'a> {
    pub cfg: &'a ExperimentConfig,
    pub domain: Domain,
    pub weight: Weight,
    pub pairs: Vec<(Complex64, Complex64)>,
}

impl<'a> Context<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Result<Self, RunError> {
        let domain: Domain = cfg.domain.to_domain()?;
        let weight = match &cfg.weight {
            Some(w) => w.to_weight()?,
            None => Weight::constant(domain.clone()),
        };
        let pairs = match &cfg.points {
            PointSet::Explicit { pairs } => pairs
                .iter()
                .map(|[z, w]| (Complex64::new(z[0], z[1]), Complex64::new(w[0], w[1])))
                .collect(),
            PointSet::Random { count, seed } => {
                let seed = seed.ok_or_else(|| ConfigError::Invalid("random point sets need a seed".into()))?;
                random_pairs(&domain, *count, seed, cfg.margin, cfg.min_separation)?
            }
        };
        Ok(Self {
            cfg,
            domain,
            weight,
            pairs,
        })
    }

    pub fn basis(&self) -> bergreen_core::Result<BasisSpec> {
        match self.domain {
            Domain::Annulus { .. } => {
                let (lo, hi) = self.cfg.laurent_range;
                BasisSpec::laurent(lo, hi, self.domain.clone())
            }
            _ => BasisSpec::monomials(self.cfg.basis_order, self.domain.clone()),
        }
    }

    pub fn rule(&self) -> bergreen_core::Result<QuadratureRule> {
        build_quadrature(&self.domain, self.cfg.quad_order)
    }

    /// Gram-quadrature kernel for the configured domain, weight and orders.
    pub fn gram_kernel(&self, out: &mut RunOutput) -> bergreen_core::Result<KernelApproximation> {
        let k = kernel_from_gram(&self.basis()?, &self.weight, &self.rule()?)?;
        let cond = k.condition();
        if cond.effective_order < cond.requested_order {
            out.report.notes.push(format!(
                "Gram matrix ill-conditioned: basis reduced from {} to {} functions",
                cond.requested_order, cond.effective_order
            ));
        }
        out.report.diagnostic("kernel_condition", cond);
        Ok(k)
    }

    pub fn tol_identity(&self) -> f64 {
        self.cfg.tolerances.identity.unwrap_or(1e-5)
    }

    pub fn tol_identity_fd(&self) -> f64 {
        self.cfg.tolerances.identity_fd.unwrap_or(1e-4)
    }

    pub fn tol_grid(&self) -> f64 {
        self.cfg.tolerances.grid.unwrap_or(0.05)
    }

    pub fn tol_kernel(&self) -> f64 {
        self.cfg.tolerances.kernel.unwrap_or(1e-6)
    }

    pub fn tol_generic(&self, default: f64) -> f64 {
        self.cfg.tolerances.generic.unwrap_or(default)
    }
}

/// `[re z, im z, re w, im w]` as CSV cells.
pub(crate) fn pair_cells(z: Complex64, w: Complex64) -> [f64; 4] {
    [z.re, z.im, w.re, w.im]
}

pub(crate) fn max_of(values: &[f64]) -> f64 {
    values
        .iter()
        .copied()
        .fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}
