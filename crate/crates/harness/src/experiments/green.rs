use std::collections::BTreeMap;

use bergreen_core::green::wirtinger_mixed_richardson;
use bergreen_core::{Complex64, GreenFunction};

use super::{max_of, pair_cells, Context, RunError};
use crate::config::ConfigError;
use crate::report::{Check, CsvTable, PointRecord, RunOutput};

const BOUNDARY_SAMPLES: usize = 64;

pub(super) fn run(ctx: &Context, out: &mut RunOutput) -> Result<(), RunError> {
    let g = GreenFunction::for_domain(&ctx.domain).map_err(|_| {
        ConfigError::Invalid(format!(
            "the green experiment needs a disk-family domain, got {}; use pde-green",
            ctx.domain.kind().name()
        ))
    })?;
    let step = ctx.cfg.fd_step;
    let mut table = CsvTable::new(
        "green.csv",
        &[
            "re_z",
            "im_z",
            "re_w",
            "im_w",
            "G",
            "h",
            "re_mixed",
            "im_mixed",
            "re_mixed_fd",
            "im_mixed_fd",
        ],
    );
    let (mut asym, mut fd_err, mut boundary) = (Vec::new(), Vec::new(), Vec::new());
    let mut nonpositive = 0;
    for (i, &(z, w)) in ctx.pairs.iter().enumerate() {
        let h = g.harmonic_part(z, w)?;
        if z == w {
            out.report.records.push(PointRecord {
                index: i,
                z: [z.re, z.im],
                w: [w.re, w.im],
                values: BTreeMap::from([("h".into(), h)]),
                note: Some("diagonal pair: G excluded, only h reported".into()),
            });
            continue;
        }
        let gv = g.eval(z, w)?;
        if !(gv > 0.0) {
            nonpositive += 1;
        }
        asym.push((gv - g.eval(w, z)?).abs() / gv.abs().max(1.0));
        let m = g.mixed_derivative(z, w).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let hf = |a: Complex64, b: Complex64| Complex64::new(g.harmonic_part(a, b).unwrap_or(f64::NAN), 0.0);
        let mfd = wirtinger_mixed_richardson(hf, z, w, step);
        fd_err.push((m - mfd).norm() / m.norm().max(1.0));
        for zb in ctx.domain.boundary_points(BOUNDARY_SAMPLES) {
            boundary.push(g.eval(zb, w)?.abs());
        }
        let mut c = pair_cells(z, w).to_vec();
        c.extend([gv, h, m.re, m.im, mfd.re, mfd.im]);
        table.push(&c);
        out.report.records.push(PointRecord {
            index: i,
            z: [z.re, z.im],
            w: [w.re, w.im],
            values: BTreeMap::from([("G".into(), gv), ("h".into(), h)]),
            note: None,
        });
    }
    out.report.check(Check::holds("G(z, w) > 0", nonpositive));
    out.report.check(Check::below(
        "symmetry G(z,w) = G(w,z) (max)",
        max_of(&asym),
        ctx.tol_generic(1e-12),
    ));
    out.report.check(Check::below(
        format!("boundary vanishing over {BOUNDARY_SAMPLES} points (max)"),
        max_of(&boundary),
        ctx.tol_generic(1e-10),
    ));
    out.report.check(Check::below(
        "finite-difference vs analytic mixed derivative (max rel)",
        max_of(&fd_err),
        ctx.tol_identity_fd(),
    ));
    out.add_table(table);
    Ok(())
}
