use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pdegreen::CsrMatrix;
use crate::scalar::{Cplx, Real};

/// Banded LU factorization without pivoting, stored as split real and
/// imaginary arrays. Row `k` holds columns `k-b ..= k+b`. A purely real
/// matrix skips the imaginary arithmetic.
#[derive(Clone, Debug)]
pub struct BandLu<T> {
    n: usize,
    b: usize,
    re: Vec<T>,
    im: Vec<T>,
    /// natural index -> band index
    perm: Vec<usize>,
    real: bool,
}

impl<T: Real> BandLu<T> {
    /// Factors `a` after renumbering unknowns by `perm` (natural -> band).
    pub fn factor(a: &CsrMatrix<T>, perm: Vec<usize>) -> Result<Self> {
        let n = a.dim();
        if perm.len() != n {
            return Err(Error::Parameter("permutation length mismatch".into()));
        }
        let mut b = 0;
        for i in 0..n {
            for (j, _) in a.row(i) {
                b = b.max(perm[i].abs_diff(perm[j]));
            }
        }
        let w = 2 * b + 1;
        let real = a.is_real();
        let mut re = vec![T::zero(); n * w];
        let mut im = if real { Vec::new() } else { vec![T::zero(); n * w] };
        for i in 0..n {
            let pi = perm[i];
            for (j, v) in a.row(i) {
                let off = pi * w + (perm[j] + b - pi);
                re[off] = v.re;
                if !real {
                    im[off] = v.im;
                }
            }
        }
        let mut lu = Self {
            n,
            b,
            re,
            im,
            perm,
            real,
        };
        lu.eliminate()?;
        Ok(lu)
    }

    fn eliminate(&mut self) -> Result<()> {
        let (n, b) = (self.n, self.b);
        let w = 2 * b + 1;
        for k in 0..n {
            let pr = self.re[k * w + b];
            let pi = if self.real { T::zero() } else { self.im[k * w + b] };
            let pn = pr * pr + pi * pi;
            if !(pn > T::zero()) || !pn.is_finite() {
                return Err(Error::Solver(format!("zero or non-finite pivot at band row {k}")));
            }
            let m = b.min(n - 1 - k);
            for di in 1..=m {
                let i = k + di;
                let lpos = b - di;
                let (head, tail) = self.re.split_at_mut(i * w);
                let kr = &head[k * w + b + 1..k * w + b + 1 + m];
                if self.real {
                    let l = tail[lpos] / pr;
                    tail[lpos] = l;
                    if l == T::zero() {
                        continue;
                    }
                    for (x, &y) in tail[lpos + 1..lpos + 1 + m].iter_mut().zip(kr) {
                        *x = *x - l * y;
                    }
                } else {
                    let (ihead, itail) = self.im.split_at_mut(i * w);
                    let ki = &ihead[k * w + b + 1..k * w + b + 1 + m];
                    let (ar, ai) = (tail[lpos], itail[lpos]);
                    let lr = (ar * pr + ai * pi) / pn;
                    let li = (ai * pr - ar * pi) / pn;
                    tail[lpos] = lr;
                    itail[lpos] = li;
                    if lr == T::zero() && li == T::zero() {
                        continue;
                    }
                    let xr = &mut tail[lpos + 1..lpos + 1 + m];
                    let xi = &mut itail[lpos + 1..lpos + 1 + m];
                    for t in 0..m {
                        xr[t] = xr[t] - (lr * kr[t] - li * ki[t]);
                        xi[t] = xi[t] - (lr * ki[t] + li * kr[t]);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.b
    }

    #[inline]
    fn entry(&self, off: usize) -> Cplx<T> {
        Complex::new(self.re[off], if self.real { T::zero() } else { self.im[off] })
    }

    /// Solves `A x = rhs` (both in natural ordering).
    pub fn solve(&self, rhs: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let (n, b) = (self.n, self.b);
        let w = 2 * b + 1;
        let mut y = vec![Complex::new(T::zero(), T::zero()); n];
        for (i, v) in rhs.iter().enumerate() {
            y[self.perm[i]] = *v;
        }
        for k in 0..n {
            let yk = y[k];
            for di in 1..=b.min(n - 1 - k) {
                let i = k + di;
                y[i] = y[i] - self.entry(i * w + b - di) * yk;
            }
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for t in 1..=b.min(n - 1 - k) {
                s = s - self.entry(k * w + b + t) * y[k + t];
            }
            y[k] = s / self.entry(k * w + b);
        }
        (0..n).map(|i| y[self.perm[i]]).collect()
    }
}

/// Diagnostics of a linear solve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverStats {
    pub method: String,
    /// `||b - A x|| / ||b||`
    pub residual: f64,
    pub iterations: usize,
    pub bandwidth: usize,
    pub factor_seconds: f64,
    pub solve_seconds: f64,
}

fn dot<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * *y)
}

fn norm<T: Real>(a: &[Cplx<T>]) -> T {
    a.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt()
}

/// `||b - A x|| / ||b||`.
pub fn relative_residual<T: Real>(a: &CsrMatrix<T>, x: &[Cplx<T>], b: &[Cplx<T>]) -> T {
    let ax = a.mul_vec(x);
    let r: Vec<Cplx<T>> = b.iter().zip(&ax).map(|(u, v)| *u - *v).collect();
    let nb = norm(b);
    if nb == T::zero() {
        norm(&r)
    } else {
        norm(&r) / nb
    }
}

/// Jacobi-preconditioned BiCGSTAB. Returns the solution and the iteration count.
pub fn bicgstab<T: Real>(a: &CsrMatrix<T>, b: &[Cplx<T>], tol: T, max_iter: usize) -> Result<(Vec<Cplx<T>>, usize)> {
    let n = a.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let inv_diag: Vec<Cplx<T>> = a
        .diagonal()
        .into_iter()
        .map(|d| if d == zero { one } else { one / d })
        .collect();
    let precond = |v: &[Cplx<T>]| -> Vec<Cplx<T>> { v.iter().zip(&inv_diag).map(|(x, d)| *x * *d).collect() };
    let nb = norm(b);
    let mut x = vec![zero; n];
    if nb == T::zero() {
        return Ok((x, 0));
    }
    let mut r = b.to_vec();
    let r_hat = r.clone();
    let (mut rho_old, mut alpha, mut omega) = (one, one, one);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for it in 1..=max_iter {
        let rho = dot(&r_hat, &r);
        if rho.norm() == T::zero() {
            return Err(Error::Solver(format!("BiCGSTAB breakdown (rho = 0) at iteration {it}")));
        }
        let beta = (rho / rho_old) * (alpha / omega);
        for k in 0..n {
            p[k] = r[k] + beta * (p[k] - omega * v[k]);
        }
        let y = precond(&p);
        v = a.mul_vec(&y);
        let denom = dot(&r_hat, &v);
        if denom.norm() == T::zero() {
            return Err(Error::Solver(format!(
                "BiCGSTAB breakdown (r_hat . v = 0) at iteration {it}"
            )));
        }
        alpha = rho / denom;
        let s: Vec<Cplx<T>> = r.iter().zip(&v).map(|(ri, vi)| *ri - alpha * *vi).collect();
        if norm(&s) / nb < tol {
            for k in 0..n {
                x[k] = x[k] + alpha * y[k];
            }
            return Ok((x, it));
        }
        let z = precond(&s);
        let t = a.mul_vec(&z);
        let tt = dot(&t, &t);
        omega = if tt.norm() == T::zero() { zero } else { dot(&t, &s) / tt };
        for k in 0..n {
            x[k] = x[k] + alpha * y[k] + omega * z[k];
            r[k] = s[k] - omega * t[k];
        }
        if norm(&r) / nb < tol {
            return Ok((x, it));
        }
        if omega == zero {
            return Err(Error::Solver(format!(
                "BiCGSTAB stagnation (omega = 0) at iteration {it}"
            )));
        }
        rho_old = rho;
    }
    Err(Error::Solver(format!(
        "BiCGSTAB did not reach relative residual {tol} in {max_iter} iterations"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    fn test_matrix(complex: bool) -> CsrMatrix<f64> {
        // 1D Laplacian-like tridiagonal plus a periodic corner
        let n = 12;
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![(i, c64(-4.0, if complex { 0.3 } else { 0.0 }))];
                row.push(((i + 1) % n, c64(1.0, if complex { 0.2 } else { 0.0 })));
                row.push(((i + n - 1) % n, c64(1.0, if complex { -0.1 } else { 0.0 })));
                row
            })
            .collect();
        CsrMatrix::from_rows(rows)
    }

    fn interleave(n: usize) -> Vec<usize> {
        (0..n)
            .map(|j| if j < n / 2 { 2 * j } else { 2 * (n - 1 - j) + 1 })
            .collect()
    }

    #[test]
    fn band_lu_solves_periodic_system() {
        for complex in [false, true] {
            let a = test_matrix(complex);
            let lu = BandLu::factor(&a, interleave(12)).unwrap();
            assert_eq!(lu.bandwidth(), 2);
            let b: Vec<Cplx<f64>> = (0..12).map(|k| c64(k as f64, 1.0)).collect();
            let x = lu.solve(&b);
            assert!(relative_residual(&a, &x, &b) < 1e-14);
        }
    }

    #[test]
    fn bicgstab_matches_direct() {
        let a = test_matrix(true);
        let b: Vec<Cplx<f64>> = (0..12).map(|k| c64(1.0, k as f64)).collect();
        let (x, it) = bicgstab(&a, &b, 1e-12, 500).unwrap();
        assert!(it > 0);
        assert!(relative_residual(&a, &x, &b) < 1e-11);
    }
}
