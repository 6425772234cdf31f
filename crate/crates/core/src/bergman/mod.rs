//! Weighted Bergman kernels of the model domains: Gram-matrix
//! orthonormalization of a polynomial or Laurent basis, extremal functions,
//! reproducing-property checks, closed forms and the Skwarczyński distance.

mod basis;
mod closed_form;
mod kernel;

pub use basis::{BasisKind, BasisSpec, DEFAULT_LAURENT_RANGE, DEFAULT_MAXDEG};
pub use closed_form::{
    annulus_kernel_series, annulus_laurent_norm, disk_kernel, disk_truncation_tail, ClosedFormKernel,
};
pub use kernel::{
    extremal_function, gram_matrix, kernel_from_gram, reproducing_residual, reproducing_residuals, ConditionReport,
    ExtremalFunction, KernelApproximation, CONDITION_THRESHOLD,
};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Anything that evaluates a reproducing kernel `K(z, w)`.
pub trait BergmanKernel<T: Real> {
    fn kernel(&self, z: Cplx<T>, w: Cplx<T>) -> Cplx<T>;

    /// `K(z, z)`, real for a Hermitian kernel.
    fn diagonal(&self, z: Cplx<T>) -> T {
        self.kernel(z, z).re
    }
}

/// `sqrt(1 - |K(z,w)| / sqrt(K(z,z) K(w,w)))`, in `[0, 1]`. Negative radicands
/// down to `-1e-12` are clamped to zero.
pub fn skwarczynski_distance<T: Real, K: BergmanKernel<T> + ?Sized>(kernel: &K, z: Cplx<T>, w: Cplx<T>) -> Result<T> {
    let kzz = kernel.diagonal(z);
    let kww = kernel.diagonal(w);
    for d in [kzz, kww] {
        if !(d > T::zero()) {
            return Err(Error::DegenerateKernel(d.as_f64()));
        }
    }
    let ratio = kernel.kernel(z, w).norm() / (kzz * kww).sqrt();
    let radicand = T::one() - ratio;
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
    if radicand < -tol {
        return Err(Error::Numeric(format!(
            "Skwarczynski radicand {radicand} is negative (|K(z,w)| exceeds the Cauchy-Schwarz bound)"
        )));
    }
    Ok(radicand.max(T::zero()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn distance_on_unit_disk() {
        let k = ClosedFormKernel::<f64>::unit_disk();
        let d = skwarczynski_distance(&k, c64(0.0, 0.0), c64(0.5, 0.0)).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        assert_eq!(skwarczynski_distance(&k, c64(0.3, 0.1), c64(0.3, 0.1)).unwrap(), 0.0);
    }

    struct Broken;
    impl BergmanKernel<f64> for Broken {
        fn kernel(&self, z: Cplx<f64>, w: Cplx<f64>) -> Cplx<f64> {
            if z == w {
                c64(1.0, 0.0)
            } else {
                c64(2.0, 0.0)
            }
        }
    }

    #[test]
    fn cauchy_schwarz_violation_is_an_error() {
        assert!(skwarczynski_distance(&Broken, c64(0.0, 0.0), c64(0.5, 0.0)).is_err());
    }
}
