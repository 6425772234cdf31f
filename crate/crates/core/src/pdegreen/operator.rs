use num_complex::Complex;

use crate::error::{Error, Result};
use crate::pdegreen::GridSpec;
use crate::scalar::{Cplx, Real};
use crate::weights::Weight;

/// Compressed sparse row matrix with complex entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Cplx<T>>,
}

impl<T: Real> CsrMatrix<T> {
    /// Builds from per-row `(column, value)` lists; duplicate columns are summed.
    pub fn from_rows(rows: Vec<Vec<(usize, Cplx<T>)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            let start = cols.len();
            for (c, v) in row {
                if cols.len() > start && cols[cols.len() - 1] == c {
                    let last = vals.len() - 1;
                    vals[last] = vals[last] + v;
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Cplx<T>)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn max_row_nnz(&self) -> usize {
        self.row_ptr.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        self.row(i)
            .find(|&(c, _)| c == j)
            .map_or(Complex::new(T::zero(), T::zero()), |(_, v)| v)
    }

    pub fn is_real(&self) -> bool {
        self.vals.iter().all(|v| v.im == T::zero())
    }

    pub fn mul_vec(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (c, v)| acc + v * x[c])
            })
            .collect()
    }

    pub fn diagonal(&self) -> Vec<Cplx<T>> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}

/// Finite-difference discretization of `P_rho u = d/dzbar (1/rho) du/dz`
/// on the interior nodes of a grid, with Dirichlet boundary values removed.
///
/// `P_rho u = (1/4) div(a grad u) + (i/4)(a_y u_x - a_x u_y)` with `a = 1/rho`.
/// The divergence part uses harmonic means of `a` on cell faces; the
/// rotational part uses centered differences and the analytic gradient of `a`.
#[derive(Clone, Debug)]
pub struct DiscreteOperator<T> {
    grid: GridSpec<T>,
    weight: Weight<T>,
    matrix: CsrMatrix<T>,
    /// `(row, boundary point, coefficient)` couplings dropped from the matrix.
    boundary: Vec<(usize, Cplx<T>, Cplx<T>)>,
}

fn harmonic_mean<T: Real>(a: T, b: T) -> T {
    T::lit(2.0) * a * b / (a + b)
}

pub fn discretize<T: Real>(grid: &GridSpec<T>, weight: &Weight<T>) -> Result<DiscreteOperator<T>> {
    if !weight.domain().same_region(grid.domain()) {
        return Err(Error::Parameter("weight and grid must share one domain".into()));
    }
    let (h1, h2) = grid.spacing();
    let quarter = T::lit(0.25);
    let two = T::lit(2.0);
    let i_unit = Complex::new(T::zero(), T::one());
    // 1/rho on interior nodes and the boundary ring
    let a_at = |i: isize, j: isize| -> Result<T> { Ok(T::one() / weight.eval(grid.point(i, j))?) };

    let mut rows = Vec::with_capacity(grid.len());
    let mut boundary = Vec::new();
    for idx in 0..grid.len() {
        let (iu, ju) = grid.coords(idx);
        let (i, j) = (iu as isize, ju as isize);
        let p = grid.point(i, j);
        let rho = weight.eval(p)?;
        let a = T::one() / rho;
        let (rx, ry) = weight.gradient(p);
        let ax = -rx / (rho * rho);
        let ay = -ry / (rho * rho);
        let nb = [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)];
        let mut coef = [Complex::new(T::zero(), T::zero()); 4];
        let diag;
        if grid.is_polar() {
            let r = grid.coord1(i);
            let th = grid.coord2(j);
            let rp = r + h1 / two;
            let rm = r - h1 / two;
            let fe = harmonic_mean(a, a_at(i + 1, j)?) * rp / (r * h1 * h1);
            let fw = harmonic_mean(a, a_at(i - 1, j)?) * rm / (r * h1 * h1);
            let fn_ = harmonic_mean(a, a_at(i, j + 1)?) / (r * r * h2 * h2);
            let fs = harmonic_mean(a, a_at(i, j - 1)?) / (r * r * h2 * h2);
            let (s, c) = th.sin_cos();
            let ar = ax * c + ay * s;
            let ath = r * (ay * c - ax * s);
            let rot_r = i_unit * (quarter * ath / (r * two * h1));
            let rot_t = i_unit * (quarter * ar / (r * two * h2));
            coef[0] = Complex::new(quarter * fe, T::zero()) + rot_r;
            coef[1] = Complex::new(quarter * fw, T::zero()) - rot_r;
            coef[2] = Complex::new(quarter * fn_, T::zero()) - rot_t;
            coef[3] = Complex::new(quarter * fs, T::zero()) + rot_t;
            diag = -quarter * (fe + fw + fn_ + fs);
        } else {
            let fe = harmonic_mean(a, a_at(i + 1, j)?) / (h1 * h1);
            let fw = harmonic_mean(a, a_at(i - 1, j)?) / (h1 * h1);
            let fn_ = harmonic_mean(a, a_at(i, j + 1)?) / (h2 * h2);
            let fs = harmonic_mean(a, a_at(i, j - 1)?) / (h2 * h2);
            let rot_x = i_unit * (quarter * ay / (two * h1));
            let rot_y = i_unit * (quarter * ax / (two * h2));
            coef[0] = Complex::new(quarter * fe, T::zero()) + rot_x;
            coef[1] = Complex::new(quarter * fw, T::zero()) - rot_x;
            coef[2] = Complex::new(quarter * fn_, T::zero()) - rot_y;
            coef[3] = Complex::new(quarter * fs, T::zero()) + rot_y;
            diag = -quarter * (fe + fw + fn_ + fs);
        }
        let mut row = vec![(idx, Complex::new(diag, T::zero()))];
        for (&(ni, nj), &c) in nb.iter().zip(&coef) {
            match grid.interior_index(ni, nj) {
                Some(k) => row.push((k, c)),
                None => boundary.push((idx, grid.point(ni, nj), c)),
            }
        }
        rows.push(row);
    }
    Ok(DiscreteOperator {
        grid: grid.clone(),
        weight: weight.clone(),
        matrix: CsrMatrix::from_rows(rows),
        boundary,
    })
}

impl<T: Real> DiscreteOperator<T> {
    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn weight(&self) -> &Weight<T> {
        &self.weight
    }

    pub fn matrix(&self) -> &CsrMatrix<T> {
        &self.matrix
    }

    /// Applies the stencil to samples of `f`, including the boundary values
    /// that Dirichlet elimination drops from the matrix.
    pub fn apply_to_function<F: Fn(Cplx<T>) -> Cplx<T>>(&self, f: F) -> Vec<Cplx<T>> {
        let samples: Vec<Cplx<T>> = (0..self.grid.len())
            .map(|k| {
                let (i, j) = self.grid.coords(k);
                f(self.grid.point(i as isize, j as isize))
            })
            .collect();
        let mut out = self.matrix.mul_vec(&samples);
        for &(row, p, c) in &self.boundary {
            out[row] = out[row] + c * f(p);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;
    use crate::poly::Polynomial;
    use crate::scalar::c64;

    fn square() -> Domain<f64> {
        Domain::rectangle(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn unit_weight_is_quarter_laplacian() {
        let g = GridSpec::new(square(), 9, 9).unwrap();
        let op = discretize(&g, &Weight::constant(square())).unwrap();
        let m = op.matrix();
        assert!(m.is_real());
        assert!(m.max_row_nnz() <= 5);
        let k = g.index(4, 4);
        assert!((m.get(k, k).re + 4.0 * 0.25 / 0.01).abs() < 1e-9);
        assert!((m.get(k, g.index(5, 4)).re - 0.25 / 0.01).abs() < 1e-9);
        for i in 0..m.dim() {
            for (j, v) in m.row(i) {
                assert_eq!(v, m.get(j, i));
            }
        }
    }

    fn consistency_error(domain: Domain<f64>, weight: &Weight<f64>, n: usize) -> f64 {
        let g = GridSpec::with_resolution(domain, n).unwrap();
        let op = discretize(&g, weight).unwrap();
        let out = op.apply_to_function(|z| z * z);
        let mut worst: f64 = 0.0;
        for (k, v) in out.iter().enumerate() {
            let (i, j) = g.coords(k);
            let z = g.point(i as isize, j as isize);
            // P(z^2) = 2 z d(1/rho)/dzbar
            let rho = weight.value(z);
            let exact = z * 2.0 * (-weight.d_dzbar(z) / (rho * rho));
            worst = worst.max((v - exact).norm());
        }
        worst
    }

    #[test]
    fn consistency_order_with_rotational_part() {
        let h = Polynomial::new(vec![c64(0.0, 0.0), c64(1.0, 0.0)]);
        for d in [square(), Domain::annulus(0.5, 1.0).unwrap()] {
            let w = Weight::log_harmonic(h.clone(), d.clone());
            let e1 = consistency_error(d.clone(), &w, 16);
            let e2 = consistency_error(d.clone(), &w, 32);
            let e3 = consistency_error(d.clone(), &w, 64);
            let order = ((e1 / e3).log2()) / 2.0;
            assert!(order >= 1.5, "{d:?}: {e1} {e2} {e3}");
        }
    }
}
