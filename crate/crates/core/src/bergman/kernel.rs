use num_complex::Complex;
use serde::Serialize;

use crate::bergman::{BasisSpec, BergmanKernel};
use crate::error::{Error, Result};
use crate::geometry::QuadratureRule;
use crate::linalg::{hermitian_eigenvalues, Cholesky, Matrix};
use crate::scalar::{ComplexSum, Cplx, Real};
use crate::weights::Weight;

/// Leading blocks of the unit-diagonal Gram matrix whose eigenvalue ratio
/// falls below this are discarded.
pub const CONDITION_THRESHOLD: f64 = 1e-12;

fn check_rule<T: Real>(basis: &BasisSpec<T>, weight: &Weight<T>, rule: &QuadratureRule<T>) -> Result<()> {
    if !rule.domain.same_region(basis.domain()) || !weight.domain().same_region(basis.domain()) {
        return Err(Error::Parameter(
            "basis, weight and quadrature rule must share one domain".into(),
        ));
    }
    Ok(())
}

/// `G[m][n] = sum_k w_k rho(z_k) e_m(z_k) conj(e_n(z_k))`. The upper triangle
/// is accumulated and mirrored, so the result is exactly Hermitian.
pub fn gram_matrix<T: Real>(basis: &BasisSpec<T>, weight: &Weight<T>, rule: &QuadratureRule<T>) -> Result<Matrix<T>> {
    check_rule(basis, weight, rule)?;
    let g = assemble_gram(basis, weight, rule)?;
    if let Err(Error::Numeric(_)) = Cholesky::factor(&g) {
        let eig = hermitian_eigenvalues(&g);
        return Err(Error::IllConditioned {
            min_eig: eig.first().map_or(0.0, |e| e.as_f64()),
            max_eig: eig.last().map_or(0.0, |e| e.as_f64()),
        });
    }
    Ok(g)
}

/// Truncated kernel `K(z,w) = b(z)^T G^{-1} conj(b(w))`, evaluated as
/// `<L^{-1} b(z), L^{-1} b(w)>` with `G = L L^H`.
#[derive(Clone, Debug)]
pub struct KernelApproximation<T> {
    basis: BasisSpec<T>,
    weight: Weight<T>,
    factor: Cholesky<T>,
    requested_order: usize,
    min_eig: T,
    max_eig: T,
    quadrature_order: usize,
}

/// Condition data of a built kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub requested_order: usize,
    pub effective_order: usize,
    /// Extreme eigenvalues of the retained unit-diagonal Gram block.
    pub min_eig: f64,
    pub max_eig: f64,
}

fn ratio_ok<T: Real>(eig: &[T], threshold: T) -> bool {
    match (eig.first(), eig.last()) {
        (Some(&lo), Some(&hi)) => lo >= threshold * hi && lo > T::zero(),
        _ => false,
    }
}

/// Builds the kernel from the Gram matrix. When the unit-diagonal Gram matrix
/// has `lambda_min < 1e-12 lambda_max`, the basis is truncated to the longest
/// well-conditioned prefix; [`KernelApproximation::condition`] reports the
/// effective order.
pub fn kernel_from_gram<T: Real>(
    basis: &BasisSpec<T>,
    weight: &Weight<T>,
    rule: &QuadratureRule<T>,
) -> Result<KernelApproximation<T>> {
    check_rule(basis, weight, rule)?;
    let n = basis.len();
    let g = assemble_gram(basis, weight, rule)?;
    for i in 0..n {
        let d = g.get(i, i).re;
        if !(d > T::zero()) {
            return Err(Error::IllConditioned {
                min_eig: d.as_f64(),
                max_eig: d.as_f64(),
            });
        }
    }
    let scaled = g.unit_diagonal_scaling();
    let threshold = T::lit(CONDITION_THRESHOLD).max(T::epsilon() * T::lit(16.0));
    // eigenvalue ratios of leading blocks are monotone (interlacing), so bisect
    let mut eig = hermitian_eigenvalues(&scaled);
    let mut keep = n;
    if !ratio_ok(&eig, threshold) {
        let (mut good, mut bad) = (1, n);
        while bad - good > 1 {
            let mid = (good + bad) / 2;
            if ratio_ok(&hermitian_eigenvalues(&scaled.leading(mid)), threshold) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        keep = good;
        eig = hermitian_eigenvalues(&scaled.leading(keep));
    }
    let factor = Cholesky::factor(&g.leading(keep)).map_err(|_| Error::IllConditioned {
        min_eig: eig[0].as_f64(),
        max_eig: eig[eig.len() - 1].as_f64(),
    })?;
    Ok(KernelApproximation {
        basis: basis.clone(),
        weight: weight.clone(),
        factor,
        requested_order: n,
        min_eig: eig[0],
        max_eig: eig[eig.len() - 1],
        quadrature_order: rule.order,
    })
}

fn assemble_gram<T: Real>(basis: &BasisSpec<T>, weight: &Weight<T>, rule: &QuadratureRule<T>) -> Result<Matrix<T>> {
    let n = basis.len();
    let mut weighted = Vec::with_capacity(rule.len());
    for (&z, &wt) in rule.nodes.iter().zip(&rule.weights) {
        weighted.push((basis.eval_all(z), wt * weight.eval(z)?));
    }
    let mut g = Matrix::zeros(n);
    for m in 0..n {
        for k in m..n {
            let mut acc = ComplexSum::new();
            for (e, wr) in &weighted {
                acc.add(e[m] * e[k].conj() * *wr);
            }
            let v = acc.total();
            if m == k {
                g.set(m, m, Complex::new(v.re, T::zero()));
            } else {
                g.set(m, k, v);
                g.set(k, m, v.conj());
            }
        }
    }
    Ok(g)
}

impl<T: Real> KernelApproximation<T> {
    pub fn basis(&self) -> &BasisSpec<T> {
        &self.basis
    }

    pub fn weight(&self) -> &Weight<T> {
        &self.weight
    }

    /// Number of basis functions actually used.
    pub fn order(&self) -> usize {
        self.factor.dim()
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature_order
    }

    pub fn gram_factor(&self) -> &Cholesky<T> {
        &self.factor
    }

    pub fn condition(&self) -> ConditionReport {
        ConditionReport {
            requested_order: self.requested_order,
            effective_order: self.order(),
            min_eig: self.min_eig.as_f64(),
            max_eig: self.max_eig.as_f64(),
        }
    }

    /// Coordinates `L^{-1} b(z)` of the orthonormalized basis at `z`.
    pub fn orthonormal_values(&self, z: Cplx<T>) -> Vec<Cplx<T>> {
        let mut b = self.basis.eval_all(z);
        b.truncate(self.order());
        self.factor.forward_solve(&b)
    }

    pub fn eval(&self, z: Cplx<T>, w: Cplx<T>) -> Cplx<T> {
        self.eval_truncated(z, w, self.order())
    }

    /// Kernel of the span of the first `n` basis functions (capped at the order).
    pub fn eval_truncated(&self, z: Cplx<T>, w: Cplx<T>, n: usize) -> Cplx<T> {
        let n = n.min(self.order());
        let vz = self.orthonormal_values(z);
        let vw = if z == w { vz.clone() } else { self.orthonormal_values(w) };
        let mut acc = ComplexSum::new();
        for i in 0..n {
            acc.add(vz[i] * vw[i].conj());
        }
        acc.total()
    }

    pub fn diag(&self, z: Cplx<T>) -> T {
        self.orthonormal_values(z)
            .iter()
            .fold(T::zero(), |acc, v| acc + v.norm_sqr())
    }

    /// Kernel values at all pairs of `points`, reusing the orthonormal values.
    pub fn matrix(&self, points: &[Cplx<T>]) -> Matrix<T> {
        let v: Vec<Vec<Cplx<T>>> = points.iter().map(|&p| self.orthonormal_values(p)).collect();
        Matrix::from_fn(points.len(), |i, j| {
            let mut acc = ComplexSum::new();
            for (a, b) in v[i].iter().zip(&v[j]) {
                acc.add(*a * b.conj());
            }
            acc.total()
        })
    }
}

impl<T: Real> BergmanKernel<T> for KernelApproximation<T> {
    fn kernel(&self, z: Cplx<T>, w: Cplx<T>) -> Cplx<T> {
        self.eval(z, w)
    }

    fn diagonal(&self, z: Cplx<T>) -> T {
        self.diag(z)
    }
}

/// Minimizer of the weighted norm among holomorphic `f` with `f(t) = 1`:
/// `phi(z) = K(z,t) / K(t,t)` with `||phi||^2 = 1 / K(t,t)`.
#[derive(Clone, Debug)]
pub struct ExtremalFunction<T> {
    kernel: KernelApproximation<T>,
    t: Cplx<T>,
    k_tt: T,
    pub norm_sq: T,
}

impl<T: Real> ExtremalFunction<T> {
    pub fn t(&self) -> Cplx<T> {
        self.t
    }

    pub fn kernel(&self) -> &KernelApproximation<T> {
        &self.kernel
    }

    pub fn value(&self, z: Cplx<T>) -> Cplx<T> {
        self.kernel.eval(z, self.t) / self.k_tt
    }
}

pub fn extremal_function<T: Real>(kernel: &KernelApproximation<T>, t: Cplx<T>) -> Result<ExtremalFunction<T>> {
    if !kernel.basis().domain().contains(t) {
        return Err(Error::Parameter(format!("t = ({}, {}) is not interior", t.re, t.im)));
    }
    let k_tt = kernel.diag(t);
    if !(k_tt > T::zero()) || !k_tt.is_finite() {
        return Err(Error::DegenerateKernel(k_tt.as_f64()));
    }
    Ok(ExtremalFunction {
        kernel: kernel.clone(),
        t,
        k_tt,
        norm_sq: T::one() / k_tt,
    })
}

/// `|f(t) - <f, K(., t)>_rho|` for `f = sum_k coeffs[k] e_k`, with the inner
/// product taken over `rule`.
pub fn reproducing_residual<T: Real>(
    kernel: &KernelApproximation<T>,
    coeffs: &[Cplx<T>],
    t: Cplx<T>,
    rule: &QuadratureRule<T>,
) -> Result<T> {
    Ok(reproducing_residuals(kernel, &[coeffs.to_vec()], t, rule)?[0])
}

/// [`reproducing_residual`] for several functions at one point, sharing the
/// kernel evaluations at the quadrature nodes.
pub fn reproducing_residuals<T: Real>(
    kernel: &KernelApproximation<T>,
    functions: &[Vec<Cplx<T>>],
    t: Cplx<T>,
    rule: &QuadratureRule<T>,
) -> Result<Vec<T>> {
    let basis = kernel.basis();
    let vt = kernel.orthonormal_values(t);
    let mut acc: Vec<ComplexSum<T>> = functions.iter().map(|_| ComplexSum::new()).collect();
    for (&z, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let vz = kernel.orthonormal_values(z);
        let mut kzt = ComplexSum::new();
        for (a, b) in vz.iter().zip(&vt) {
            kzt.add(*a * b.conj());
        }
        let rho = kernel.weight().eval(z)?;
        let kw = kzt.total().conj() * (wt * rho);
        for (f, a) in functions.iter().zip(acc.iter_mut()) {
            a.add(basis.combine(f, z) * kw);
        }
    }
    Ok(functions
        .iter()
        .zip(&acc)
        .map(|(f, a)| (basis.combine(f, t) - a.total()).norm())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_quadrature, Domain};
    use crate::poly::Polynomial;
    use crate::scalar::c64;
    use std::f64::consts::PI;

    fn unit_kernel(maxdeg: usize) -> KernelApproximation<f64> {
        let d = Domain::unit_disk();
        let basis = BasisSpec::monomials(maxdeg, d.clone()).unwrap();
        let rule = build_quadrature(&d, maxdeg + 2).unwrap();
        kernel_from_gram(&basis, &Weight::constant(d), &rule).unwrap()
    }

    #[test]
    fn gram_entries_on_unit_disk() {
        let d = Domain::<f64>::unit_disk();
        let basis = BasisSpec::monomials(4, d.clone()).unwrap();
        let g = gram_matrix(&basis, &Weight::constant(d.clone()), &build_quadrature(&d, 8).unwrap()).unwrap();
        assert!((g.get(1, 1).re - PI / 2.0).abs() < 1e-13);
        assert!(g.get(1, 2).norm() < 1e-14);
        assert_eq!(g.hermitian_defect(), 0.0);
    }

    #[test]
    fn laurent_gram_on_annulus() {
        let d = Domain::annulus(0.5, 1.0).unwrap();
        let basis = BasisSpec::laurent(-1, 1, d.clone()).unwrap();
        let g = gram_matrix(&basis, &Weight::constant(d.clone()), &build_quadrature(&d, 20).unwrap()).unwrap();
        assert!((g.get(2, 2).re - 2.0 * PI * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn unit_disk_kernel_values() {
        let k = unit_kernel(12);
        assert!((k.eval(c64(0.0, 0.0), c64(0.0, 0.0)).re - 1.0 / PI).abs() < 1e-10);
        let z = c64::<f64>(0.3, 0.0);
        let w = c64::<f64>(0.0, 0.2);
        let one = c64::<f64>(1.0, 0.0);
        let exact = one / ((one - z * w.conj()).powi(2) * PI);
        // truncation at degree 12 leaves |zw|^13 ~ 1e-12
        assert!((k.eval(z, w) - exact).norm() < 1e-9);
        assert_eq!(k.condition().effective_order, 13);
    }

    #[test]
    fn extremal_at_origin_and_half() {
        let k = unit_kernel(30);
        let e = extremal_function(&k, c64(0.0, 0.0)).unwrap();
        assert!((e.norm_sq - PI).abs() < 1e-10);
        assert!((e.value(c64(0.4, 0.3)) - c64(1.0, 0.0)).norm() < 1e-10);
        let e = extremal_function(&k, c64(0.5, 0.0)).unwrap();
        assert!((e.value(c64(0.5, 0.0)) - c64(1.0, 0.0)).norm() < 1e-12);
        assert!((e.norm_sq - 0.5625 * PI).abs() < 1e-6);
    }

    #[test]
    fn reproducing_weighted() {
        let d = Domain::<f64>::unit_disk();
        let mu = Polynomial::new(vec![c64(2.0, 0.0), c64(1.0, 0.0)]);
        let w = Weight::holo_modulus_squared(mu, d.clone()).unwrap();
        let basis = BasisSpec::monomials(10, d.clone()).unwrap();
        let rule = build_quadrature(&d, 14).unwrap();
        let k = kernel_from_gram(&basis, &w, &rule).unwrap();
        let mut f = vec![c64(0.0, 0.0); 11];
        f[1] = c64(1.0, 0.0);
        assert!(reproducing_residual(&k, &f, c64(0.2, 0.0), &rule).unwrap() < 1e-10);
    }

    #[test]
    fn degenerate_order_is_reduced() {
        let d = Domain::rectangle(0.0, 1.0, 0.0, 0.05).unwrap();
        let basis = BasisSpec::monomials(60, d.clone()).unwrap();
        let rule = build_quadrature(&d, 70).unwrap();
        let k = kernel_from_gram(&basis, &Weight::constant(d), &rule).unwrap();
        let c = k.condition();
        assert!(c.effective_order < 61, "{c:?}");
        assert!(c.min_eig >= CONDITION_THRESHOLD * c.max_eig);
    }
}
