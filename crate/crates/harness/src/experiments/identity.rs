use std::collections::BTreeMap;
use std::f64::consts::PI;

use bergreen_core::bergman::BergmanKernel;
use bergreen_core::green::{identity_residual, weighted_green, MixedPath};
use bergreen_core::pdegreen::{discretize, factor};
use bergreen_core::weights::solve_gauge;
use bergreen_core::{ClosedFormKernel, Complex64, Error, Gauge, GreenFunction, GridSpec};

use super::{max_of, pair_cells, Context, RunError};
use crate::config::{ConfigError, MixedPathChoice};
use crate::report::{Check, CsvTable, PointRecord, RunOutput};

pub(super) fn run(ctx: &Context, out: &mut RunOutput) -> Result<(), RunError> {
    match solve_gauge(&ctx.weight) {
        Ok(gauge) if ctx.domain.is_disk_family() => closed_form(ctx, out, gauge),
        Ok(_) => grid(ctx, out, true),
        Err(Error::GaugeInfeasible { residual }) => {
            out.report.assume(format!(
                "rho is not log-harmonic (max |Laplacian ln rho| = {residual:.3e}); no antiholomorphic gauge g with \
                 G_rho = g(z) conj(g(w)) G exists, so identity residuals are reported without a pass/fail judgement"
            ));
            if ctx.domain.is_disk_family() {
                return Err(ConfigError::Invalid(
                    "a weight without a gauge needs a grid domain (rectangle or annulus)".into(),
                )
                .into());
            }
            grid(ctx, out, false)
        }
        Err(e) => Err(e.into()),
    }
}

fn note_record(out: &mut RunOutput, index: usize, z: Complex64, w: Complex64, note: String) {
    out.report.records.push(PointRecord {
        index,
        z: [z.re, z.im],
        w: [w.re, w.im],
        values: BTreeMap::new(),
        note: Some(note),
    });
}

fn closed_form(ctx: &Context, out: &mut RunOutput, gauge: Gauge) -> Result<(), RunError> {
    let k = ctx.gram_kernel(out)?;
    let gr = weighted_green(GreenFunction::for_domain(&ctx.domain)?, gauge)?;
    let step = ctx.cfg.fd_step;
    let fd_path = match ctx.cfg.mixed_path {
        MixedPathChoice::FiniteDifference => MixedPath::FiniteDifference(step),
        _ => MixedPath::Richardson(step),
    };
    let has_factor = ctx.weight.holomorphic_factor(ctx.domain.center()).is_some();
    let unweighted = if ctx.weight.is_constant() || !has_factor {
        None
    } else {
        ClosedFormKernel::for_domain(&ctx.domain, ctx.cfg.laurent_range).ok()
    };
    let mut table = CsvTable::new(
        "identity.csv",
        &[
            "re_z",
            "im_z",
            "re_w",
            "im_w",
            "re_K",
            "im_K",
            "re_rhs",
            "im_rhs",
            "residual",
            "residual_fd",
            "transform_defect",
        ],
    );
    let (mut analytic, mut fd, mut transform) = (Vec::new(), Vec::new(), Vec::new());
    let mut failures = 0;
    for (i, &(z, w)) in ctx.pairs.iter().enumerate() {
        if z == w {
            note_record(out, i, z, w, "diagonal pair excluded (z = w)".into());
            continue;
        }
        let evaluated = identity_residual(&k, &gr, &ctx.weight, z, w, MixedPath::Analytic)
            .and_then(|a| Ok((a, identity_residual(&k, &gr, &ctx.weight, z, w, fd_path)?)));
        let (a, f) = match evaluated {
            Ok(v) => v,
            Err(e) => {
                failures += 1;
                note_record(out, i, z, w, format!("not evaluated: {e}"));
                continue;
            }
        };
        let t = match (
            &unweighted,
            ctx.weight.holomorphic_factor(z),
            ctx.weight.holomorphic_factor(w),
        ) {
            (Some(k0), Some(mu_z), Some(mu_w)) => {
                let k0v = k0.kernel(z, w);
                (a.kernel * mu_z * mu_w.conj() - k0v).norm() / k0v.norm()
            }
            _ => f64::NAN,
        };
        analytic.push(a.residual);
        fd.push(f.residual);
        transform.push(t);
        let mut c = pair_cells(z, w).to_vec();
        c.extend([
            a.kernel.re,
            a.kernel.im,
            a.green_side.re,
            a.green_side.im,
            a.residual,
            f.residual,
            t,
        ]);
        table.push(&c);
        out.report.records.push(PointRecord {
            index: i,
            z: [z.re, z.im],
            w: [w.re, w.im],
            values: BTreeMap::from([
                ("residual".into(), a.residual),
                ("residual_fd".into(), f.residual),
                ("transform_defect".into(), t),
            ]),
            note: None,
        });
    }
    out.report.summarize("residual", &analytic);
    out.report.summarize("residual_fd", &fd);
    out.report
        .check(Check::holds("pairs evaluated without numerical error", failures));
    out.report.check(Check::below(
        "identity residual, analytic path (max)",
        max_of(&analytic),
        ctx.tol_identity(),
    ));
    let fd_name = match fd_path {
        MixedPath::Richardson(_) => format!("identity residual, Richardson FD step {step:e} (max)"),
        _ => format!("identity residual, FD step {step:e} (max)"),
    };
    out.report
        .check(Check::below(fd_name, max_of(&fd), ctx.tol_identity_fd()));
    if unweighted.is_some() {
        out.report.summarize("transform_defect", &transform);
        out.report.check(Check::below(
            "transform K_rho mu(z) conj(mu(w)) = K (max rel)",
            max_of(&transform),
            ctx.tol_kernel(),
        ));
    }
    out.add_table(table);
    Ok(())
}

/// Pairs closer than this many (radial) cells get a near-diagonal note.
pub const NEAR_DIAGONAL_CELLS: f64 = 16.0;

/// Identity residuals `|K - rhs| / sqrt(K(z,z) K(w,w))` on one grid
/// resolution; `None` marks pairs that could not be evaluated.
fn grid_residuals(
    ctx: &Context,
    out: &mut RunOutput,
    kernel: &dyn BergmanKernel<f64>,
    n: usize,
    record: Option<&mut CsvTable>,
) -> Result<Vec<Option<f64>>, RunError> {
    let grid = GridSpec::with_resolution(ctx.domain.clone(), n)?;
    let op = factor(discretize(&grid, &ctx.weight)?)?;
    let richardson = ctx.cfg.mixed_path != MixedPathChoice::FiniteDifference;
    let mut table = record;
    let mut res = Vec::with_capacity(ctx.pairs.len());
    let snap = |p: Complex64| -> bergreen_core::Result<Complex64> {
        let (i, j) = grid.nearest_node(p)?;
        Ok(grid.point(i as isize, j as isize))
    };
    for (idx, &(z, w)) in ctx.pairs.iter().enumerate() {
        let evaluated = (|| -> bergreen_core::Result<(Complex64, Complex64, Complex64, Complex64)> {
            let (zs, ws) = (snap(z)?, snap(w)?);
            let m = op.mixed_derivative(zs, ws, richardson)?;
            let rhs = m * (-2.0 / (PI * ctx.weight.eval(zs)? * ctx.weight.eval(ws)?));
            Ok((zs, ws, kernel.kernel(zs, ws), rhs))
        })();
        match evaluated {
            Ok((zs, ws, k, rhs)) => {
                let r = (k - rhs).norm() / (kernel.diagonal(zs) * kernel.diagonal(ws)).sqrt();
                let rel = (k - rhs).norm() / k.norm();
                res.push(Some(r));
                if let Some(t) = table.as_deref_mut() {
                    let mut c = pair_cells(zs, ws).to_vec();
                    c.extend([k.re, k.im, rhs.re, rhs.im, r, rel]);
                    t.push(&c);
                    out.report.records.push(PointRecord {
                        index: idx,
                        z: [zs.re, zs.im],
                        w: [ws.re, ws.im],
                        values: BTreeMap::from([("residual".into(), r), ("relative_to_K".into(), rel)]),
                        note: Some(if (zs - ws).norm() < NEAR_DIAGONAL_CELLS * grid.spacing().0 {
                            format!(
                                "snapped to grid nodes at resolution {n}; fewer than {NEAR_DIAGONAL_CELLS} cells apart, \
                                 the grid mixed derivative is unreliable this close to the diagonal"
                            )
                        } else {
                            format!("snapped to grid nodes at resolution {n}")
                        }),
                    });
                }
            }
            Err(e) => {
                res.push(None);
                if table.is_some() {
                    note_record(out, idx, z, w, format!("not evaluated: {e}"));
                }
            }
        }
    }
    if table.is_some() {
        if let Some(&(_, w)) = ctx.pairs.first() {
            if let Ok(g) = op.solve_green(w) {
                out.report.diagnostic("solver", g.stats());
            }
        }
    }
    Ok(res)
}

fn grid(ctx: &Context, out: &mut RunOutput, judged: bool) -> Result<(), RunError> {
    let k = ctx.gram_kernel(out)?;
    let n = ctx.cfg.grid_resolution;
    let mut table = CsvTable::new(
        "identity.csv",
        &[
            "re_z",
            "im_z",
            "re_w",
            "im_w",
            "re_K",
            "im_K",
            "re_rhs",
            "im_rhs",
            "residual",
            "relative_to_K",
        ],
    );
    let fine = grid_residuals(ctx, out, &k, n, Some(&mut table))?;
    let failures = fine.iter().filter(|r| r.is_none()).count();
    let fine: Vec<f64> = fine.into_iter().flatten().collect();
    out.report.summarize("residual", &fine);
    out.report.diagnostic("grid_resolution", n);
    out.add_table(table);
    if !judged {
        let nonfinite = fine.iter().filter(|r| !r.is_finite()).count() + failures;
        out.report
            .check(Check::holds("identity residuals finite (report only)", nonfinite));
        return Ok(());
    }
    out.report
        .check(Check::holds("pairs evaluated without numerical error", failures));
    out.report.check(Check::below(
        format!("grid identity residual at resolution {n} (max, diagonal-normalized)"),
        max_of(&fine),
        ctx.tol_grid(),
    ));
    if n / 2 >= 16 {
        let coarse: Vec<f64> = grid_residuals(ctx, out, &k, n / 2, None)?
            .into_iter()
            .flatten()
            .collect();
        out.report.diagnostic("coarse_residual_max", max_of(&coarse));
        out.report.check(Check::below(
            format!("refinement {} -> {n} improves the max residual (fine / coarse)", n / 2),
            max_of(&fine) / max_of(&coarse),
            1.0,
        ));
    }
    Ok(())
}
