use std::collections::BTreeMap;

use bergreen_core::bergman::{extremal_function, reproducing_residuals, BergmanKernel};
use bergreen_core::{ClosedFormKernel, Complex64};

use super::{max_of, pair_cells, Context, RunError};
use crate::report::{Check, CsvTable, PointRecord, RunOutput};

/// Highest degree (or absolute Laurent exponent) tested for the reproducing
/// property.
const REPRODUCING_DEGREE: i64 = 10;

pub(super) fn run(ctx: &Context, out: &mut RunOutput) -> Result<(), RunError> {
    let k = ctx.gram_kernel(out)?;
    let reference = ClosedFormKernel::for_weight(&ctx.weight, ctx.cfg.laurent_range).ok();
    if reference.is_none() {
        out.report
            .notes
            .push("no closed-form kernel for this domain and weight; reference columns are NaN".into());
    }
    let mut table = CsvTable::new(
        "kernel.csv",
        &[
            "re_z", "im_z", "re_w", "im_w", "re_K", "im_K", "re_K_ref", "im_K_ref", "rel_err",
        ],
    );
    let (mut rel, mut herm) = (Vec::new(), Vec::new());
    for (i, &(z, w)) in ctx.pairs.iter().enumerate() {
        let kv = k.eval(z, w);
        let kr = reference
            .as_ref()
            .map_or(Complex64::new(f64::NAN, f64::NAN), |r| r.kernel(z, w));
        let e = (kv - kr).norm() / kr.norm();
        let h = (kv - k.eval(w, z).conj()).norm() / kv.norm().max(1.0);
        rel.push(e);
        herm.push(h);
        let mut c = pair_cells(z, w).to_vec();
        c.extend([kv.re, kv.im, kr.re, kr.im, e]);
        table.push(&c);
        out.report.records.push(PointRecord {
            index: i,
            z: [z.re, z.im],
            w: [w.re, w.im],
            values: BTreeMap::from([("rel_err".into(), e), ("hermitian_defect".into(), h)]),
            note: None,
        });
    }
    out.report.summarize("kernel_rel_err", &rel);
    if reference.is_some() {
        out.report.check(Check::below(
            "kernel vs closed form (max rel)",
            max_of(&rel),
            ctx.tol_kernel(),
        ));
    }
    out.report.check(Check::below(
        "hermitian symmetry (max)",
        max_of(&herm),
        ctx.tol_generic(1e-12),
    ));

    // extremal function and reproducing property at the first point of each pair
    let rule = ctx.rule()?;
    let basis = k.basis();
    let functions: Vec<Vec<Complex64>> = basis
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.abs() <= REPRODUCING_DEGREE)
        .map(|(idx, _)| {
            let mut c = vec![Complex64::new(0.0, 0.0); basis.len()];
            c[idx] = Complex64::new(1.0, 0.0);
            c
        })
        .collect();
    let mut ext = CsvTable::new(
        "extremal.csv",
        &[
            "re_t",
            "im_t",
            "K_tt",
            "norm_sq",
            "norm_defect",
            "value_defect",
            "max_reproducing_residual",
        ],
    );
    let (mut norm_def, mut val_def, mut repro) = (Vec::new(), Vec::new(), Vec::new());
    for &(t, _) in &ctx.pairs {
        let phi = extremal_function(&k, t)?;
        let nd = (phi.norm_sq * k.diag(t) - 1.0).abs();
        let vd = (phi.value(t) - Complex64::new(1.0, 0.0)).norm();
        let rr = max_of(&reproducing_residuals(&k, &functions, t, &rule)?);
        norm_def.push(nd);
        val_def.push(vd);
        repro.push(rr);
        ext.push(&[t.re, t.im, k.diag(t), phi.norm_sq, nd, vd, rr]);
    }
    out.report.summarize("reproducing_residual", &repro);
    out.report.check(Check::below(
        "extremal norm_sq * K(t,t) = 1 (max defect)",
        max_of(&norm_def),
        ctx.tol_generic(1e-8),
    ));
    out.report.check(Check::below(
        "extremal phi(t) = 1 (max defect)",
        max_of(&val_def),
        ctx.tol_generic(1e-10),
    ));
    out.report.check(Check::below(
        format!("reproducing property, degree <= {REPRODUCING_DEGREE} (max)"),
        max_of(&repro),
        ctx.tol_kernel(),
    ));
    out.add_table(table);
    out.add_table(ext);
    Ok(())
}
