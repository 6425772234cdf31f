use bergreen_core::bergman::BergmanKernel;
use bergreen_core::green::{identity_residual, weighted_green, MixedPath};
use bergreen_core::weights::{solve_gauge, Representation};
use bergreen_core::{ClosedFormKernel, Complex64, Error, GreenFunction, Polynomial, QuadratureRule};

use super::{max_of, Context, RunError};
use crate::config::PointSet;
use crate::points::random_points;
use crate::report::{Check, CsvTable, RunOutput};

/// Points at which the gauge system is evaluated.
pub const GAUGE_NODES: usize = 50;
/// Sizes `eps` of the perturbation `g -> g exp(conj(eps z))`.
pub const PERTURBATIONS: [f64; 4] = [0.0, 1e-3, 1e-2, 1e-1];

pub(super) fn run(ctx: &Context, out: &mut RunOutput) -> Result<(), RunError> {
    let gauge = match solve_gauge(&ctx.weight) {
        Ok(g) => g,
        Err(Error::GaugeInfeasible { residual }) => {
            out.report.diagnostic("max_abs_laplacian_ln_rho", residual);
            out.report.assume(format!(
                "rho is not log-harmonic (max |Laplacian ln rho| = {residual:.3e}); the gauge system has no \
                 antiholomorphic solution"
            ));
            out.report.notes.push("gauge infeasible; nothing to verify".into());
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };

    let nodes = match &ctx.cfg.points {
        PointSet::Random { seed: Some(seed), .. } => random_points(&ctx.domain, GAUGE_NODES, *seed, ctx.cfg.margin)?,
        _ => ctx.pairs.iter().flat_map(|&(z, w)| [z, w]).collect(),
    };
    let rule = QuadratureRule {
        weights: vec![1.0; nodes.len()],
        nodes,
        order: 0,
        domain: ctx.domain.clone(),
    };
    let r = gauge.residuals(&rule)?;
    out.report.diagnostic("gauge_residuals", r);

    let expected: (Vec<Complex64>, Polynomial) = match ctx.weight.representation() {
        Representation::HoloModulusSquared(mu) => (mu.coeffs().iter().map(|c| c.conj()).collect(), Polynomial::zero()),
        Representation::LogHarmonic(h) => (vec![Complex64::new(1.0, 0.0)], h.clone()),
        Representation::GenericC1(_) => unreachable!("generic weights never yield a gauge"),
    };
    let coefficient_mismatch = usize::from(gauge.antiholomorphic_coefficients() != expected.0)
        + usize::from(*gauge.exponent_polynomial() != expected.1);
    out.report.check(Check::holds(
        "gauge coefficients equal the conjugated weight factor",
        coefficient_mismatch,
    ));
    out.report.check(Check::below(
        "log-derivative equation residual (max)",
        r.log_derivative,
        1e-8,
    ));
    out.report
        .check(Check::below("constraint equation residual (max)", r.constraint, 1e-8));
    out.report
        .check(Check::below("antiholomorphy |dg/dw| (max)", r.antiholomorphic, 1e-10));
    out.report.check(Check::below(
        "decomposition |g|^2 = rho^2 e^(2 Re h) (max)",
        r.decomposition,
        1e-10,
    ));

    if !ctx.domain.is_disk_family() {
        out.report
            .notes
            .push("perturbation study needs a closed-form Green's function; skipped".into());
        return Ok(());
    }
    let kernel: Box<dyn BergmanKernel<f64>> = match ClosedFormKernel::for_weight(&ctx.weight, ctx.cfg.laurent_range) {
        Ok(k) => Box::new(k),
        Err(_) => Box::new(ctx.gram_kernel(out)?),
    };
    let mut table = CsvTable::new(
        "gauge_perturbation.csv",
        &[
            "eps",
            "identity_residual_max",
            "constraint_residual",
            "decomposition_residual",
        ],
    );
    let mut by_eps = Vec::new();
    for eps in PERTURBATIONS {
        let q = Polynomial::new(vec![Complex64::new(0.0, 0.0), Complex64::new(eps, 0.0)]);
        let g = gauge.perturbed(&q);
        let rp = g.residuals(&rule)?;
        let green = weighted_green(GreenFunction::for_domain(&ctx.domain)?, g)?;
        let mut res = Vec::new();
        for &(z, w) in ctx.pairs.iter().filter(|(z, w)| z != w) {
            res.push(identity_residual(kernel.as_ref(), &green, &ctx.weight, z, w, MixedPath::Analytic)?.residual);
        }
        let m = max_of(&res);
        table.push(&[eps, m, rp.constraint, rp.decomposition]);
        by_eps.push(m);
    }
    out.report.check(Check::below(
        "unperturbed gauge satisfies the identity (max)",
        by_eps[0],
        ctx.tol_identity(),
    ));
    out.report.check(Check::at_least(
        format!("perturbation eps = {:e} breaks the identity (max)", PERTURBATIONS[3]),
        by_eps[3],
        ctx.tol_identity(),
    ));
    out.add_table(table);
    Ok(())
}
