use std::time::Instant;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::pdegreen::{bicgstab, relative_residual, BandLu, DiscreteOperator, GridSpec, SolverStats};
use crate::scalar::{Cplx, Real};

/// Grids with at most this many unknowns are solved by banded LU.
pub const DIRECT_LIMIT: usize = 40_000;
/// Relative residual required from the iterative solver.
pub const ITERATIVE_TOLERANCE: f64 = 1e-10;
/// Minimum number of cells between a source and the boundary.
pub const SOURCE_MARGIN: usize = 2;

enum Solver<T> {
    Direct(BandLu<T>),
    Iterative,
}

/// A discrete operator prepared for repeated Green's function solves.
pub struct FactoredOperator<T> {
    op: DiscreteOperator<T>,
    solver: Solver<T>,
    factor_seconds: f64,
}

/// Band-friendly numbering: rows of the rectangle stay in natural order; on
/// the annulus, angular rows are interleaved `0, n-1, 1, n-2, ...` so the
/// periodic wrap couples nearby rows.
fn band_permutation<T: Real>(grid: &GridSpec<T>) -> Vec<usize> {
    let (n1, n2) = (grid.n1(), grid.n2());
    (0..grid.len())
        .map(|k| {
            let (i, j) = (k % n1, k / n1);
            let row = if !grid.is_polar() {
                j
            } else if j < n2 / 2 {
                2 * j
            } else {
                2 * (n2 - 1 - j) + 1
            };
            row * n1 + i
        })
        .collect()
}

/// Factors `op` when it is small enough for the direct solver.
pub fn factor<T: Real>(op: DiscreteOperator<T>) -> Result<FactoredOperator<T>> {
    let start = Instant::now();
    let solver = if op.grid().len() <= DIRECT_LIMIT {
        Solver::Direct(BandLu::factor(op.matrix(), band_permutation(op.grid()))?)
    } else {
        Solver::Iterative
    };
    Ok(FactoredOperator {
        op,
        solver,
        factor_seconds: start.elapsed().as_secs_f64(),
    })
}

impl<T: Real> FactoredOperator<T> {
    pub fn operator(&self) -> &DiscreteOperator<T> {
        &self.op
    }

    pub fn grid(&self) -> &GridSpec<T> {
        self.op.grid()
    }

    /// Solves `P_rho G = -(pi/2) delta_h` for a source snapped to the nearest
    /// node, `delta_h` being `1 / cell area` there.
    pub fn solve_green(&self, source: Cplx<T>) -> Result<DiscreteGreen<T>> {
        let (i, j) = self.grid().nearest_node(source)?;
        self.solve_green_at_node(i, j)
    }

    pub fn solve_green_at_node(&self, i: usize, j: usize) -> Result<DiscreteGreen<T>> {
        let grid = self.grid();
        if i >= grid.n1() || j >= grid.n2() {
            return Err(Error::Parameter(format!("node ({i}, {j}) is not interior")));
        }
        if grid.boundary_margin(i, j) < SOURCE_MARGIN {
            return Err(Error::Parameter(format!(
                "source node ({i}, {j}) is closer than {SOURCE_MARGIN} cells to the boundary"
            )));
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut rhs = vec![zero; grid.len()];
        let idx = grid.index(i, j);
        rhs[idx] = Complex::new(-T::FRAC_PI_2() / grid.cell_area(i, j), T::zero());
        let start = Instant::now();
        let (values, iterations, method, bandwidth) = match &self.solver {
            Solver::Direct(lu) => (lu.solve(&rhs), 0, "band-lu", lu.bandwidth()),
            Solver::Iterative => {
                let (x, it) = bicgstab(self.op.matrix(), &rhs, T::lit(ITERATIVE_TOLERANCE), 50 * grid.len())?;
                (x, it, "bicgstab-jacobi", 0)
            }
        };
        let solve_seconds = start.elapsed().as_secs_f64();
        let residual = relative_residual(self.op.matrix(), &values, &rhs).as_f64();
        if !residual.is_finite() || residual > 1e-6 {
            return Err(Error::Solver(format!(
                "Green's function solve left relative residual {residual:e}"
            )));
        }
        Ok(DiscreteGreen {
            grid: grid.clone(),
            source_node: (i, j),
            values,
            stats: SolverStats {
                method: method.into(),
                residual,
                iterations,
                bandwidth,
                factor_seconds: self.factor_seconds,
                solve_seconds,
            },
        })
    }

    /// Mixed derivative `d^2 G / dz dconj(w)` at the nodes nearest `z` and
    /// `w`, from source-shifted solves. With `richardson`, shifts of one and
    /// two cells are combined as `(4 D(1) - D(2)) / 3`.
    pub fn mixed_derivative(&self, z: Cplx<T>, w: Cplx<T>, richardson: bool) -> Result<Cplx<T>> {
        let (wi, wj) = self.grid().nearest_node(w)?;
        let center = self.solve_green_at_node(wi, wj)?;
        let steps: &[isize] = if richardson { &[1, 2] } else { &[1] };
        let mut shifted = Vec::new();
        for &s in steps {
            for (di, dj) in [(s, 0), (-s, 0), (0, s), (0, -s)] {
                let i = wi as isize + di;
                let j = self
                    .grid()
                    .wrap2(wj as isize + dj)
                    .ok_or_else(|| Error::Parameter("shifted source leaves the grid".into()))?;
                if i < 0 || i >= self.grid().n1() as isize {
                    return Err(Error::Parameter("shifted source leaves the grid".into()));
                }
                shifted.push(self.solve_green_at_node(i as usize, j)?);
            }
        }
        grid_mixed_derivative(&center, z, &shifted)
    }
}

/// Discrete Green's function `G(., w)` on the interior nodes; boundary values
/// are zero.
#[derive(Clone, Debug)]
pub struct DiscreteGreen<T> {
    grid: GridSpec<T>,
    source_node: (usize, usize),
    values: Vec<Cplx<T>>,
    stats: SolverStats,
}

impl<T: Real> DiscreteGreen<T> {
    /// Wraps externally computed node values (natural ordering).
    pub fn from_values(grid: GridSpec<T>, source_node: (usize, usize), values: Vec<Cplx<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Parameter(format!(
                "expected {} node values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            source_node,
            values,
            stats: SolverStats {
                method: "external".into(),
                residual: 0.0,
                iterations: 0,
                bandwidth: 0,
                factor_seconds: 0.0,
                solve_seconds: 0.0,
            },
        })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn source_node(&self) -> (usize, usize) {
        self.source_node
    }

    /// Snapped source location.
    pub fn source(&self) -> Cplx<T> {
        self.grid
            .point(self.source_node.0 as isize, self.source_node.1 as isize)
    }

    pub fn values(&self) -> &[Cplx<T>] {
        &self.values
    }

    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    /// Value at node `(i, j)`; zero on the boundary ring.
    pub fn value_at_node(&self, i: isize, j: isize) -> Cplx<T> {
        match self.grid.interior_index(i, j) {
            Some(k) => self.values[k],
            None => Complex::new(T::zero(), T::zero()),
        }
    }

    /// Value at the node nearest `z`.
    pub fn value_near(&self, z: Cplx<T>) -> Result<Cplx<T>> {
        let (i, j) = self.grid.nearest_node(z)?;
        Ok(self.values[self.grid.index(i, j)])
    }

    /// Bilinear interpolation in grid coordinates.
    pub fn interpolate(&self, z: Cplx<T>) -> Result<Cplx<T>> {
        if !self.grid.domain().contains_closed(z, T::lit(1e-12)) {
            return Err(Error::Parameter(format!(
                "({}, {}) is outside the grid domain",
                z.re, z.im
            )));
        }
        let (s1, s2) = self.grid.fractional(z);
        let (f1, f2) = (s1.floor(), s2.floor());
        let (t1, t2) = (s1 - f1, s2 - f2);
        let (i, j) = (f1.to_isize().unwrap_or(-1), f2.to_isize().unwrap_or(-1));
        let one = T::one();
        Ok(self.value_at_node(i, j) * ((one - t1) * (one - t2))
            + self.value_at_node(i + 1, j) * (t1 * (one - t2))
            + self.value_at_node(i, j + 1) * ((one - t1) * t2)
            + self.value_at_node(i + 1, j + 1) * (t1 * t2))
    }

    pub fn max_abs_imag(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.im.abs()))
    }
}

/// `d^2 G(z, w) / dz dconj(w)` from a center solve (source `w`) and
/// source-shifted solves.
///
/// `shifted` holds, for each shift `s` in `1` (and `2` when eight solves are
/// given), sources at `w + s e1`, `w - s e1`, `w + s e2`, `w - s e2` with `e1`,
/// `e2` the grid directions (x/y, or radial/angular). Derivatives in `z` are
/// centered differences with the same number of cells; eight solves enable
/// Richardson extrapolation `(4 D(1) - D(2)) / 3`. Polar grids use
/// `d/dz = e^{-i t}(d_r - (i/r) d_t) / 2` and the conjugate form in `w`.
pub fn grid_mixed_derivative<T: Real>(
    center: &DiscreteGreen<T>,
    z: Cplx<T>,
    shifted: &[DiscreteGreen<T>],
) -> Result<Cplx<T>> {
    let grid = center.grid();
    let levels = match shifted.len() {
        4 => 1,
        8 => 2,
        n => {
            return Err(Error::Parameter(format!(
                "grid mixed derivative needs 4 or 8 shifted solves, got {n}"
            )))
        }
    };
    let (wi, wj) = center.source_node();
    for (k, g) in shifted.iter().enumerate() {
        let s = (k / 4 + 1) as isize;
        let (di, dj) = [(s, 0), (-s, 0), (0, s), (0, -s)][k % 4];
        let want_i = wi as isize + di;
        let want_j = grid.wrap2(wj as isize + dj);
        let (gi, gj) = g.source_node();
        if g.grid() != grid || gi as isize != want_i || Some(gj) != want_j {
            return Err(Error::Parameter(format!(
                "shifted solve {k} has source node ({gi}, {gj}); expected ({want_i}, {want_j:?})"
            )));
        }
    }
    let (zi, zj) = grid.nearest_node(z)?;
    if (zi, zj) == (wi, wj) {
        let p = center.source();
        return Err(Error::Diagonal {
            re: p.re.as_f64(),
            im: p.im.as_f64(),
        });
    }
    let (h1, h2) = grid.spacing();
    let zp = grid.point(zi as isize, zj as isize);
    let wp = center.source();
    let one = Complex::new(T::one(), T::zero());
    let (cz, kz, cw, kw) = if grid.is_polar() {
        let tz = zp.im.atan2(zp.re);
        let tw = wp.im.atan2(wp.re);
        (
            Complex::from_polar(T::one(), -tz),
            T::one() / zp.norm(),
            Complex::from_polar(T::one(), tw),
            T::one() / wp.norm(),
        )
    } else {
        (one, T::one(), one, T::one())
    };
    let i_unit = Complex::new(T::zero(), T::one());
    let mixed = |level: usize| -> Cplx<T> {
        let s = level as isize;
        let sf = T::lit(level as f64);
        let g = &shifted[(level - 1) * 4..level * 4];
        let (zi, zj) = (zi as isize, zj as isize);
        // d/d(z-axis a) of field f at z
        let dz = |f: &DiscreteGreen<T>, axis: usize| -> Cplx<T> {
            if axis == 0 {
                (f.value_at_node(zi + s, zj) - f.value_at_node(zi - s, zj)) / (T::lit(2.0) * sf * h1)
            } else {
                (f.value_at_node(zi, zj + s) - f.value_at_node(zi, zj - s)) / (T::lit(2.0) * sf * h2)
            }
        };
        let dw = |za: usize, wa: usize| -> Cplx<T> {
            let (plus, minus, h) = if wa == 0 {
                (&g[0], &g[1], h1)
            } else {
                (&g[2], &g[3], h2)
            };
            (dz(plus, za) - dz(minus, za)) / (T::lit(2.0) * sf * h)
        };
        let g11 = dw(0, 0);
        let g12 = dw(0, 1);
        let g21 = dw(1, 0);
        let g22 = dw(1, 1);
        (g11 + i_unit * g12 * kw - i_unit * g21 * kz + g22 * (kz * kw)) * cz * cw * T::lit(0.25)
    };
    Ok(if levels == 1 {
        mixed(1)
    } else {
        (mixed(1) * T::lit(4.0) - mixed(2)) / T::lit(3.0)
    })
}

/// Eigenfunction expansion of the Green's function of `-Delta G = 2 pi delta`
/// on a rectangle with `terms x terms` modes:
/// `G = 2 pi sum phi_mn(z) phi_mn(w) / lambda_mn`.
pub fn rectangle_series_green<T: Real>(rect: (T, T, T, T), terms: usize, z: Cplx<T>, w: Cplx<T>) -> T {
    let (x0, x1, y0, y1) = rect;
    let (lx, ly) = (x1 - x0, y1 - y0);
    let pi = T::PI();
    let sx: Vec<T> = (1..=terms)
        .map(|m| {
            let k = T::from_count(m) * pi / lx;
            (k * (z.re - x0)).sin() * (k * (w.re - x0)).sin()
        })
        .collect();
    let sy: Vec<T> = (1..=terms)
        .map(|n| {
            let k = T::from_count(n) * pi / ly;
            (k * (z.im - y0)).sin() * (k * (w.im - y0)).sin()
        })
        .collect();
    let mut acc = crate::scalar::CompensatedSum::new();
    for (m, a) in sx.iter().enumerate() {
        let km = T::from_count(m + 1) * pi / lx;
        for (n, b) in sy.iter().enumerate() {
            let kn = T::from_count(n + 1) * pi / ly;
            acc.add(*a * *b / (km * km + kn * kn));
        }
    }
    T::TAU() * T::lit(4.0) / (lx * ly) * acc.total()
}
