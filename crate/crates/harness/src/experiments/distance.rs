use std::collections::BTreeMap;

use bergreen_core::bergman::skwarczynski_distance;
use bergreen_core::ClosedFormKernel;

use super::{max_of, pair_cells, Context, RunError};
use crate::report::{Check, CsvTable, PointRecord, RunOutput};

pub(super) fn run(ctx: &Context, out: &mut RunOutput) -> Result<(), RunError> {
    let k = ctx.gram_kernel(out)?;
    let reference = ClosedFormKernel::for_weight(&ctx.weight, ctx.cfg.laurent_range).ok();
    let mut table = CsvTable::new("distance.csv", &["re_z", "im_z", "re_w", "im_w", "d", "d_ref"]);
    let (mut diff, mut asym) = (Vec::new(), Vec::new());
    let mut out_of_range = 0;
    for (i, &(z, w)) in ctx.pairs.iter().enumerate() {
        let d = skwarczynski_distance(&k, z, w)?;
        let d_ref = match &reference {
            Some(r) => skwarczynski_distance(r, z, w)?,
            None => f64::NAN,
        };
        if !(0.0..=1.0).contains(&d) {
            out_of_range += 1;
        }
        asym.push((d - skwarczynski_distance(&k, w, z)?).abs());
        diff.push((d - d_ref).abs());
        let mut c = pair_cells(z, w).to_vec();
        c.extend([d, d_ref]);
        table.push(&c);
        out.report.records.push(PointRecord {
            index: i,
            z: [z.re, z.im],
            w: [w.re, w.im],
            values: BTreeMap::from([("distance".into(), d), ("reference".into(), d_ref)]),
            note: None,
        });
    }
    let self_distance = max_of(
        &ctx.pairs
            .iter()
            .map(|&(z, _)| skwarczynski_distance(&k, z, z))
            .collect::<Result<Vec<_>, _>>()?,
    );
    out.report.check(Check::holds("distance in [0, 1]", out_of_range));
    out.report.check(Check::below(
        "distance symmetry (max)",
        max_of(&asym),
        ctx.tol_generic(1e-12),
    ));
    out.report
        .check(Check::below("d(z, z) (max)", self_distance, ctx.tol_generic(1e-6)));
    if reference.is_some() {
        out.report.check(Check::below(
            "distance vs closed-form kernel (max)",
            max_of(&diff),
            ctx.tol_kernel(),
        ));
    }
    out.add_table(table);
    Ok(())
}
