use std::collections::BTreeMap;

use bergreen_core::pdegreen::{discretize, factor, rectangle_series_green, DiscreteGreen, FactoredOperator};
use bergreen_core::weights::solve_gauge;
use bergreen_core::{Complex64, Domain, Error, Gauge, GridSpec, Weight};

use super::{max_of, Context, RunError};
use crate::config::{ConfigError, StudyParameter};
use crate::convergence::convergence_study;
use crate::report::{Check, CsvTable, PointRecord, RunOutput};

/// Modes per direction in the rectangle eigen-expansion oracle.
pub const SERIES_TERMS: usize = 200;
/// Required fitted order of the grid Green's function on a rectangle.
pub const MIN_GRID_ORDER: f64 = 1.5;

struct Level {
    n: usize,
    oracle_errors: Vec<f64>,
    factorization_errors: Vec<f64>,
}

struct Solvers {
    grid: GridSpec,
    plain: FactoredOperator<f64>,
    weighted: Option<FactoredOperator<f64>>,
}

impl Solvers {
    fn new(domain: &Domain, weight: &Weight, n: usize) -> bergreen_core::Result<Self> {
        let grid = GridSpec::with_resolution(domain.clone(), n)?;
        let plain = factor(discretize(&grid, &Weight::constant(domain.clone()))?)?;
        let weighted = if weight.is_constant() {
            None
        } else {
            Some(factor(discretize(&grid, weight)?)?)
        };
        Ok(Self { grid, plain, weighted })
    }

    fn snap(&self, p: Complex64) -> bergreen_core::Result<(usize, usize, Complex64)> {
        let (i, j) = self.grid.nearest_node(p)?;
        Ok((i, j, self.grid.point(i as isize, j as isize)))
    }
}

fn at(g: &DiscreteGreen<f64>, (i, j): (usize, usize)) -> Complex64 {
    g.value_at_node(i as isize, j as isize)
}

pub(super) fn run(ctx: &Context, out: &mut RunOutput) -> Result<(), RunError> {
    let rect = match ctx.domain {
        Domain::Rectangle { x0, x1, y0, y1 } => Some((x0, x1, y0, y1)),
        Domain::Annulus { .. } => None,
        _ => {
            return Err(ConfigError::Invalid(format!(
                "pde-green needs a rectangle or annulus, not {}",
                ctx.domain.kind().name()
            ))
            .into())
        }
    };
    let n = ctx.cfg.grid_resolution;
    if n < 32 {
        return Err(
            ConfigError::Invalid("pde-green refines from n/4 to n and needs grid_resolution >= 32".into()).into(),
        );
    }
    let gauge: Option<Gauge> = match solve_gauge(&ctx.weight) {
        Ok(g) => Some(g),
        Err(Error::GaugeInfeasible { residual }) => {
            out.report.assume(format!(
                "rho is not log-harmonic (max |Laplacian ln rho| = {residual:.3e}); the weighted grid Green's function \
                 is reported without a factorization check"
            ));
            None
        }
        Err(e) => return Err(e.into()),
    };

    let mut levels = Vec::new();
    let mut field = CsvTable::new("grid_field.csv", &["i", "j", "x", "y", "re_G", "im_G"]);
    let mut max_imag: f64 = 0.0;
    let (mut symmetry, mut weighted_symmetry) = (Vec::new(), Vec::new());
    let mut failures = 0;
    for (li, &res) in [n / 4, n / 2, n].iter().enumerate() {
        let finest = li == 2;
        let s = Solvers::new(&ctx.domain, &ctx.weight, res)?;
        let mut level = Level {
            n: res,
            oracle_errors: Vec::new(),
            factorization_errors: Vec::new(),
        };
        for (p, &(z, w)) in ctx.pairs.iter().enumerate() {
            let evaluated = (|| -> bergreen_core::Result<(Complex64, Complex64, BTreeMap<String, f64>)> {
                let (zi, zj, zs) = s.snap(z)?;
                let (wi, wj, ws) = s.snap(w)?;
                if (zi, zj) == (wi, wj) {
                    return Err(Error::Diagonal { re: zs.re, im: zs.im });
                }
                let gw = s.plain.solve_green_at_node(wi, wj)?;
                max_imag = max_imag.max(gw.max_abs_imag());
                let g = at(&gw, (zi, zj));
                let mut values = BTreeMap::from([("G".to_string(), g.re)]);
                if let Some(r) = rect {
                    let e = (g.re - rectangle_series_green(r, SERIES_TERMS, zs, ws)).abs();
                    level.oracle_errors.push(e);
                    values.insert("oracle_error".into(), e);
                }
                let weighted = match &s.weighted {
                    Some(op) => {
                        let gr = op.solve_green_at_node(wi, wj)?;
                        let v = at(&gr, (zi, zj));
                        values.insert("re_G_rho".into(), v.re);
                        values.insert("im_G_rho".into(), v.im);
                        if let Some(gauge) = &gauge {
                            let pred = gauge.eval(zs) * gauge.eval(ws).conj() * g;
                            let e = (v - pred).norm() / pred.norm();
                            level.factorization_errors.push(e);
                            values.insert("factorization_error".into(), e);
                        }
                        Some((gr, v))
                    }
                    None => None,
                };
                if finest {
                    if p == 0 {
                        out.report.diagnostic("solver", gw.stats());
                        let f = weighted.as_ref().map_or(&gw, |(gr, _)| gr);
                        for (k, v) in f.values().iter().enumerate() {
                            let (i, j) = s.grid.coords(k);
                            let x = s.grid.point(i as isize, j as isize);
                            field.push(&[i as f64, j as f64, x.re, x.im, v.re, v.im]);
                        }
                    }
                    let gz = s.plain.solve_green_at_node(zi, zj)?;
                    let sym = (at(&gz, (wi, wj)) - g).norm() / g.norm();
                    symmetry.push(sym);
                    values.insert("symmetry_defect".into(), sym);
                    if let (Some(op), Some((_, v))) = (&s.weighted, &weighted) {
                        let back = at(&op.solve_green_at_node(zi, zj)?, (wi, wj));
                        let wsym = (back.conj() - v).norm() / v.norm();
                        weighted_symmetry.push(wsym);
                        values.insert("weighted_symmetry_defect".into(), wsym);
                    }
                }
                Ok((zs, ws, values))
            })();
            if !finest {
                continue;
            }
            let record = match evaluated {
                Ok((zs, ws, values)) => PointRecord {
                    index: p,
                    z: [zs.re, zs.im],
                    w: [ws.re, ws.im],
                    values,
                    note: Some(format!("snapped to grid nodes at resolution {res}")),
                },
                Err(e) => {
                    failures += 1;
                    PointRecord {
                        index: p,
                        z: [z.re, z.im],
                        w: [w.re, w.im],
                        values: BTreeMap::new(),
                        note: Some(format!("not evaluated: {e}")),
                    }
                }
            };
            out.report.records.push(record);
        }
        levels.push(level);
    }

    let mut table = CsvTable::new(
        "pde_convergence.csv",
        &["resolution", "oracle_error", "factorization_error"],
    );
    for l in &levels {
        table.push(&[l.n as f64, max_of(&l.oracle_errors), max_of(&l.factorization_errors)]);
    }
    out.report
        .check(Check::holds("pairs evaluated at the finest resolution", failures));
    out.report.check(Check::below(
        "unweighted grid Green's function is real (max |imag|)",
        max_imag,
        1e-10,
    ));
    out.report.summarize("symmetry_defect", &symmetry);
    out.report.check(Check::below(
        "discrete symmetry G(z,w) = G(w,z) (max rel)",
        max_of(&symmetry),
        1e-8,
    ));
    if !weighted_symmetry.is_empty() {
        out.report.summarize("weighted_symmetry_defect", &weighted_symmetry);
        out.report.check(Check::below(
            "weighted symmetry G_rho(z,w) = conj G_rho(w,z) (max rel)",
            max_of(&weighted_symmetry),
            ctx.tol_grid(),
        ));
    }

    let resolutions: Vec<f64> = levels.iter().map(|l| l.n as f64).collect();
    if rect.is_some() {
        let errs: Vec<f64> = levels.iter().map(|l| max_of(&l.oracle_errors)).collect();
        fit_and_check(out, "grid vs eigen-expansion", &resolutions, &errs);
        out.report.check(Check::below(
            format!("grid vs eigen-expansion at resolution {n} (max abs)"),
            errs[2],
            ctx.tol_generic(1e-3),
        ));
    }
    if has_factorization(&levels) {
        let errs: Vec<f64> = levels.iter().map(|l| max_of(&l.factorization_errors)).collect();
        out.report.check(Check::below(
            format!("factorization G_rho = g(z) conj(g(w)) G at resolution {n} (max rel)"),
            errs[2],
            ctx.tol_grid(),
        ));
        out.report.check(Check::below(
            format!("factorization error improves from {} to {n} (fine / coarse)", n / 4),
            errs[2] / errs[0],
            1.0,
        ));
    }
    out.add_table(table);
    out.add_table(field);
    Ok(())
}

fn has_factorization(levels: &[Level]) -> bool {
    levels.iter().all(|l| !l.factorization_errors.is_empty())
}

fn fit_and_check(out: &mut RunOutput, name: &str, resolutions: &[f64], errors: &[f64]) {
    let mut errs = errors.iter();
    match convergence_study(StudyParameter::GridResolution, resolutions, |_| {
        errs.next().copied().ok_or_else(|| "missing error".to_string())
    }) {
        Ok(t) => {
            out.report.check(Check::at_least(
                format!("{name}: fitted order"),
                t.fitted_order,
                MIN_GRID_ORDER,
            ));
            out.report.convergence.push(t);
        }
        Err(e) => {
            out.report.notes.push(format!("{name}: {e}"));
            out.report.check(Check::at_least(
                format!("{name}: fitted order"),
                f64::NAN,
                MIN_GRID_ORDER,
            ));
        }
    }
}

/// Max grid-vs-oracle error of the unweighted Green's function over the
/// configured pairs at resolution `n` on a rectangle.
pub(super) fn rectangle_oracle_error(ctx: &Context, n: usize) -> bergreen_core::Result<f64> {
    let Domain::Rectangle { x0, x1, y0, y1 } = ctx.domain else {
        return Err(Error::UnsupportedDomain(
            "the eigen-expansion oracle needs a rectangle".into(),
        ));
    };
    let grid = GridSpec::with_resolution(ctx.domain.clone(), n)?;
    let op = factor(discretize(&grid, &Weight::constant(ctx.domain.clone()))?)?;
    let mut worst: f64 = 0.0;
    for &(z, w) in &ctx.pairs {
        let (zi, zj) = grid.nearest_node(z)?;
        let (wi, wj) = grid.nearest_node(w)?;
        if (zi, zj) == (wi, wj) {
            continue;
        }
        let g = at(&op.solve_green_at_node(wi, wj)?, (zi, zj)).re;
        let (zs, ws) = (
            grid.point(zi as isize, zj as isize),
            grid.point(wi as isize, wj as isize),
        );
        worst = worst.max((g - rectangle_series_green((x0, x1, y0, y1), SERIES_TERMS, zs, ws)).abs());
    }
    Ok(worst)
}
