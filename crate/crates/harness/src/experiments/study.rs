use bergreen_core::bergman::{kernel_from_gram, BergmanKernel};
use bergreen_core::geometry::build_quadrature;
use bergreen_core::green::wirtinger_mixed;
use bergreen_core::{BasisSpec, ClosedFormKernel, Complex64, GreenFunction};

use super::{max_of, pde, Context, RunError};
use crate::config::{ConfigError, StudyParameter, StudySpec};
use crate::convergence::convergence_study;
use crate::report::{Check, CsvTable, RunOutput};

/// Expected order of the central-difference mixed derivative and its allowed
/// deviation.
pub const FD_ORDER: f64 = 2.0;
pub const FD_ORDER_SLACK: f64 = 0.3;

fn count(v: f64) -> Result<usize, String> {
    if v >= 1.0 && v.fract() == 0.0 {
        Ok(v as usize)
    } else {
        Err(format!("{v} is not a positive integer"))
    }
}

/// Max relative error of the Gram kernel against the closed form.
fn kernel_error(ctx: &Context, basis_order: usize, quad_order: usize) -> Result<f64, String> {
    let reference = ClosedFormKernel::for_weight(&ctx.weight, ctx.cfg.laurent_range).map_err(|e| e.to_string())?;
    let basis = match ctx.basis().map_err(|e| e.to_string())?.kind() {
        bergreen_core::bergman::BasisKind::Laurent { .. } => {
            let m = basis_order as i64;
            BasisSpec::laurent(-m, m, ctx.domain.clone())
        }
        _ => BasisSpec::monomials(basis_order, ctx.domain.clone()),
    }
    .map_err(|e| e.to_string())?;
    let rule = build_quadrature(&ctx.domain, quad_order).map_err(|e| e.to_string())?;
    let k = kernel_from_gram(&basis, &ctx.weight, &rule).map_err(|e| e.to_string())?;
    let errs: Vec<f64> = ctx
        .pairs
        .iter()
        .map(|&(z, w)| {
            let r = reference.kernel(z, w);
            (k.eval(z, w) - r).norm() / r.norm()
        })
        .collect();
    Ok(max_of(&errs))
}

/// Max relative error of the plain central-difference mixed derivative of
/// `G` against the analytic one.
fn fd_error(ctx: &Context, step: f64) -> Result<f64, String> {
    let g = GreenFunction::for_domain(&ctx.domain).map_err(|e| e.to_string())?;
    let h = |z: Complex64, w: Complex64| Complex64::new(g.eval(z, w).unwrap_or(f64::NAN), 0.0);
    let errs: Vec<f64> = ctx
        .pairs
        .iter()
        .map(|&(z, w)| {
            let exact = g.mixed_derivative(z, w).unwrap_or(Complex64::new(f64::NAN, 0.0));
            (wirtinger_mixed(h, z, w, step) - exact).norm() / exact.norm()
        })
        .collect();
    Ok(max_of(&errs))
}

pub(super) fn run(ctx: &Context, spec: &StudySpec, out: &mut RunOutput) -> Result<(), RunError> {
    let name = spec.parameter.name();
    let table = match spec.parameter {
        StudyParameter::FdStep => {
            if !ctx.domain.is_disk_family() {
                return Err(ConfigError::Invalid("the fd_step study needs a disk-family domain".into()).into());
            }
            convergence_study(spec.parameter, &spec.values, |s| fd_error(ctx, s))?
        }
        StudyParameter::GridResolution => convergence_study(spec.parameter, &spec.values, |n| {
            pde::rectangle_oracle_error(ctx, count(n)?).map_err(|e| e.to_string())
        })?,
        StudyParameter::BasisOrder => convergence_study(spec.parameter, &spec.values, |n| {
            kernel_error(ctx, count(n)?, ctx.cfg.quad_order)
        })?,
        StudyParameter::QuadOrder => convergence_study(spec.parameter, &spec.values, |n| {
            kernel_error(ctx, ctx.cfg.basis_order, count(n)?)
        })?,
    };
    match spec.parameter {
        StudyParameter::FdStep => out.report.check(Check::below(
            format!("{name} study: |fitted order - {FD_ORDER}|"),
            (table.fitted_order - FD_ORDER).abs(),
            FD_ORDER_SLACK,
        )),
        StudyParameter::GridResolution => out.report.check(Check::at_least(
            format!("{name} study: fitted order"),
            table.fitted_order,
            pde::MIN_GRID_ORDER,
        )),
        StudyParameter::BasisOrder => {
            out.report.check(Check::holds(
                format!("{name} study: error strictly decreasing"),
                usize::from(!table.decreasing()),
            ));
            out.report.check(Check::below(
                format!("{name} study: geometric rate"),
                table.geometric_rate.unwrap_or(f64::NAN),
                1.0,
            ));
        }
        StudyParameter::QuadOrder => out.report.notes.push(format!("{name} study is report-only")),
    }
    let mut csv = CsvTable::new(format!("study_{name}.csv"), &["value", "error"]);
    for r in &table.rows {
        csv.push(&[r.value, r.error.unwrap_or(f64::NAN)]);
    }
    out.add_table(csv);
    out.report.convergence.push(table);
    Ok(())
}
