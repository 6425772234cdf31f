use std::collections::BTreeMap;

use bergreen_core::bergman::BergmanKernel;
use bergreen_core::geometry::exhaustion_sequence;
use bergreen_core::{ClosedFormKernel, Domain, GreenFunction};

use super::{Context, RunError};
use crate::config::ConfigError;
use crate::report::{Check, CsvTable, PointRecord, RunOutput};

/// Step parameter written to the table: the radius of a disk step, the outer
/// radius of an annulus step.
fn step_size(d: &Domain) -> f64 {
    match d {
        Domain::Annulus { outer, .. } => *outer,
        _ => d.as_disk().map_or(f64::NAN, |(_, r)| r),
    }
}

pub(super) fn run(ctx: &Context, out: &mut RunOutput) -> Result<(), RunError> {
    if !matches!(
        ctx.domain,
        Domain::UnitDisk | Domain::Disk { .. } | Domain::Annulus { .. }
    ) {
        return Err(ConfigError::Invalid(format!(
            "exhaustion needs a disk or annulus, not {}",
            ctx.domain.kind().name()
        ))
        .into());
    }
    let laurent = ctx.cfg.laurent_range;
    let ex = exhaustion_sequence(&ctx.domain, ctx.cfg.exhaustion_steps)?;
    out.report.check(Check::holds(
        "exhaustion steps compactly nested",
        usize::from(!ex.is_monotone(256)),
    ));
    let limit_kernel = ClosedFormKernel::for_weight(&ctx.weight, laurent)?;
    let limit_green = GreenFunction::for_domain(&ctx.domain).ok();
    let steps: Vec<(ClosedFormKernel, Option<GreenFunction>)> = ex
        .steps
        .iter()
        .map(|s| {
            let k = ClosedFormKernel::for_weight(&ctx.weight.restricted_to(s.clone()), laurent)?;
            Ok((k, GreenFunction::for_domain(s).ok()))
        })
        .collect::<bergreen_core::Result<_>>()?;

    let mut table = CsvTable::new(
        "exhaust.csv",
        &[
            "pair",
            "step",
            "size",
            "re_z",
            "im_z",
            "re_w",
            "im_w",
            "h",
            "re_K",
            "im_K",
            "kernel_gap",
        ],
    );
    let (mut h_violations, mut gap_violations) = (0, 0);
    let (mut final_gaps, mut final_h_gaps) = (Vec::new(), Vec::new());
    for (p, &(z, w)) in ctx.pairs.iter().enumerate() {
        let k_limit = limit_kernel.kernel(z, w);
        let mut prev: Option<(f64, f64)> = None;
        let mut last = None;
        let mut first_step = None;
        for (j, (dom, (k, g))) in ex.steps.iter().zip(&steps).enumerate() {
            if !dom.contains(z) || !dom.contains(w) {
                continue;
            }
            first_step.get_or_insert(j + 1);
            let h = g.as_ref().and_then(|g| g.harmonic_part(z, w).ok()).unwrap_or(f64::NAN);
            let kv = k.kernel(z, w);
            let gap = (kv - k_limit).norm();
            table.push(&[
                p as f64,
                (j + 1) as f64,
                step_size(dom),
                z.re,
                z.im,
                w.re,
                w.im,
                h,
                kv.re,
                kv.im,
                gap,
            ]);
            if let Some((h0, gap0)) = prev {
                if !h.is_nan() && !(h > h0) {
                    h_violations += 1;
                }
                if !(gap <= gap0) {
                    gap_violations += 1;
                }
            }
            prev = Some((h, gap));
            last = Some((j + 1, h, gap));
        }
        let Some((j_last, h_last, gap_last)) = last else {
            out.report.records.push(PointRecord {
                index: p,
                z: [z.re, z.im],
                w: [w.re, w.im],
                values: BTreeMap::new(),
                note: Some("pair lies outside every exhaustion step".into()),
            });
            continue;
        };
        let h_gap = match &limit_green {
            Some(g) => (g.harmonic_part(z, w)? - h_last).abs(),
            None => f64::NAN,
        };
        final_gaps.push(gap_last);
        if !h_gap.is_nan() {
            final_h_gaps.push(h_gap);
        }
        out.report.records.push(PointRecord {
            index: p,
            z: [z.re, z.im],
            w: [w.re, w.im],
            values: BTreeMap::from([
                ("kernel_gap".into(), gap_last),
                ("harmonic_gap".into(), h_gap),
                ("final_step".into(), j_last as f64),
            ]),
            note: first_step
                .filter(|&s| s > 1)
                .map(|s| format!("pair enters the exhaustion at step {s}")),
        });
    }
    out.report.summarize("kernel_gap_final", &final_gaps);
    out.report.summarize("harmonic_gap_final", &final_h_gaps);
    if limit_green.is_some() {
        out.report
            .check(Check::holds("h_j(z,w) strictly increasing in j", h_violations));
    } else {
        out.report
            .notes
            .push("no closed-form Green's function on this domain; h_j not tabulated".into());
    }
    out.report
        .check(Check::holds("|K_j - K| nonincreasing in j", gap_violations));
    out.report.check(Check::below(
        format!("|K_j - K| at the last step (j = {})", ctx.cfg.exhaustion_steps),
        super::max_of(&final_gaps),
        ctx.tol_generic(1e-2),
    ));
    out.add_table(table);
    Ok(())
}
