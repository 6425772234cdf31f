//! Small dense Hermitian linear algebra: Cholesky factorization, triangular
//! solves and eigenvalues. Matrices are square and stored row-major.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Cplx<T>) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cplx<T>) {
        self.data[i * self.n + j] = v;
    }

    /// Leading `k x k` block.
    pub fn leading(&self, k: usize) -> Self {
        Self::from_fn(k, |i, j| self.get(i, j))
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `D A D` with `D = diag(1/sqrt(A_ii))`; unit diagonal for a positive diagonal.
    pub fn unit_diagonal_scaling(&self) -> Self {
        let d: Vec<T> = (0..self.n).map(|i| T::one() / self.get(i, i).re.sqrt()).collect();
        Self::from_fn(self.n, |i, j| self.get(i, j) * (d[i] * d[j]))
    }
}

/// Lower-triangular Cholesky factor `L` with `A = L L^H`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cholesky<T> {
    l: Matrix<T>,
}

impl<T: Real> Cholesky<T> {
    /// Factors a Hermitian positive definite matrix. Only the lower triangle
    /// of `a` is read.
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        let n = a.dim();
        let mut l = Matrix::zeros(n);
        for j in 0..n {
            let mut d = a.get(j, j).re;
            for k in 0..j {
                d = d - l.get(j, k).norm_sqr();
            }
            if !(d > T::zero()) || !d.is_finite() {
                return Err(Error::Numeric(format!("cholesky pivot {j} is not positive ({d})")));
            }
            let djj = d.sqrt();
            l.set(j, j, Complex::new(djj, T::zero()));
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s = s - l.get(i, k) * l.get(j, k).conj();
                }
                l.set(i, j, s / djj);
            }
        }
        Ok(Self { l })
    }

    pub fn factor_matrix(&self) -> &Matrix<T> {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.l.dim()
    }

    /// Solves `L y = b` for the leading `b.len()` unknowns.
    pub fn forward_solve(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let n = b.len().min(self.l.dim());
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = b[i];
            for (k, yk) in y.iter().enumerate() {
                s = s - self.l.get(i, k) * *yk;
            }
            y.push(s / self.l.get(i, i).re);
        }
        y
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let n = self.l.dim();
        let mut x = self.forward_solve(b);
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s = s - self.l.get(k, i).conj() * x[k];
            }
            x[i] = s / self.l.get(i, i).re;
        }
        x
    }
}

/// Eigenvalues of a Hermitian matrix in ascending order, by cyclic Jacobi
/// rotations on the real symmetric embedding `[[Re A, -Im A], [Im A, Re A]]`
/// (every eigenvalue appears twice there; one copy of each is returned).
pub fn hermitian_eigenvalues<T: Real>(a: &Matrix<T>) -> Vec<T> {
    let n = a.dim();
    let m = 2 * n;
    let mut s = vec![T::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            let v = a.get(i, j);
            s[i * m + j] = v.re;
            s[(i + n) * m + (j + n)] = v.re;
            s[i * m + (j + n)] = -v.im;
            s[(i + n) * m + j] = v.im;
        }
    }
    let mut scale = T::zero();
    for v in &s {
        scale = scale + *v * *v;
    }
    let tol = T::epsilon() * T::epsilon() * scale.max(T::min_positive_value());
    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..m {
            for q in (p + 1)..m {
                off = off + s[p * m + q] * s[p * m + q];
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = s[p * m + q];
                if apq == T::zero() {
                    continue;
                }
                let app = s[p * m + p];
                let aqq = s[q * m + q];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let sn = t * c;
                for k in 0..m {
                    let akp = s[k * m + p];
                    let akq = s[k * m + q];
                    s[k * m + p] = c * akp - sn * akq;
                    s[k * m + q] = sn * akp + c * akq;
                }
                for k in 0..m {
                    let apk = s[p * m + k];
                    let aqk = s[q * m + k];
                    s[p * m + k] = c * apk - sn * aqk;
                    s[q * m + k] = sn * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<T> = (0..m).map(|i| s[i * m + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    eig.into_iter().step_by(2).collect()
}
