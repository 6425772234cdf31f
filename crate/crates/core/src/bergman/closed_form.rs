use num_complex::Complex;

use crate::bergman::BergmanKernel;
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::scalar::{ComplexSum, Cplx, Real};
use crate::weights::Weight;

/// Unweighted kernel of the disk `|z - c| < r`: `r^2 / (pi (r^2 - (z-c) conj(w-c))^2)`.
pub fn disk_kernel<T: Real>(center: Cplx<T>, radius: T, z: Cplx<T>, w: Cplx<T>) -> Cplx<T> {
    let r2 = radius * radius;
    let d = Complex::new(r2, T::zero()) - (z - center) * (w - center).conj();
    Complex::new(r2 / T::PI(), T::zero()) / (d * d)
}

/// `||z^n||^2` on the annulus `r < |z| < R` with unit weight.
pub fn annulus_laurent_norm<T: Real>(inner: T, outer: T, n: i64) -> T {
    if n == -1 {
        T::TAU() * (outer / inner).ln()
    } else {
        let p = T::lit((2 * n + 2) as f64);
        T::PI() * (outer.powf(p) - inner.powf(p)) / T::lit((n + 1) as f64)
    }
}

/// Truncated orthogonal Laurent series `sum_{n=minexp}^{maxexp} z^n conj(w)^n / ||z^n||^2`
/// of the unweighted annulus kernel.
pub fn annulus_kernel_series<T: Real>(inner: T, outer: T, minexp: i64, maxexp: i64, z: Cplx<T>, w: Cplx<T>) -> Cplx<T> {
    let q = z * w.conj();
    let mut acc = ComplexSum::new();
    for n in minexp..=maxexp {
        acc.add(q.powi(n as i32) / annulus_laurent_norm(inner, outer, n));
    }
    acc.total()
}

/// Tail `sum_{n > maxdeg} (n+1)/(pi r^2) x^n` of the diagonal disk kernel at
/// `x = |z - c|^2 / r^2`, the error of the degree-`maxdeg` truncation.
pub fn disk_truncation_tail<T: Real>(radius: T, maxdeg: usize, offset: T) -> T {
    let x = (offset / radius).powi(2);
    let n = T::from_count(maxdeg);
    let one = T::one();
    let two = T::lit(2.0);
    x.powi(maxdeg as i32 + 1) * ((n + two) - (n + one) * x) / ((one - x) * (one - x)) / (T::PI() * radius * radius)
}

/// Reference kernels available in closed form.
#[derive(Clone, Debug, PartialEq)]
pub enum ClosedFormKernel<T> {
    Disk {
        center: Cplx<T>,
        radius: T,
    },
    AnnulusSeries {
        inner: T,
        outer: T,
        minexp: i64,
        maxexp: i64,
    },
    /// `K(z,w) / (mu(z) conj(mu(w)))` for a weight `|mu|^2` with `mu` holomorphic.
    Weighted {
        base: Box<ClosedFormKernel<T>>,
        weight: Weight<T>,
    },
}

impl<T: Real> ClosedFormKernel<T> {
    pub fn unit_disk() -> Self {
        Self::Disk {
            center: Complex::new(T::zero(), T::zero()),
            radius: T::one(),
        }
    }

    /// Unweighted kernel of a disk-family domain, or the truncated Laurent
    /// series (with `(minexp, maxexp)`) on an annulus.
    pub fn for_domain(domain: &Domain<T>, laurent: (i64, i64)) -> Result<Self> {
        if let Some((center, radius)) = domain.as_disk() {
            return Ok(Self::Disk { center, radius });
        }
        match domain {
            Domain::Annulus { inner, outer } => Ok(Self::AnnulusSeries {
                inner: *inner,
                outer: *outer,
                minexp: laurent.0,
                maxexp: laurent.1,
            }),
            _ => Err(Error::UnsupportedDomain(format!(
                "no closed-form kernel on {}",
                domain.kind().name()
            ))),
        }
    }

    /// Weighted kernel for a weight with a holomorphic factor.
    pub fn for_weight(weight: &Weight<T>, laurent: (i64, i64)) -> Result<Self> {
        let base = Self::for_domain(weight.domain(), laurent)?;
        if weight.is_constant() && weight.value(weight.domain().center()) == T::one() {
            return Ok(base);
        }
        if weight.holomorphic_factor(weight.domain().center()).is_none() {
            return Err(Error::Representation(
                "weighted closed form needs a holomorphic factor".into(),
            ));
        }
        Ok(Self::Weighted {
            base: Box::new(base),
            weight: weight.clone(),
        })
    }
}

impl<T: Real> BergmanKernel<T> for ClosedFormKernel<T> {
    fn kernel(&self, z: Cplx<T>, w: Cplx<T>) -> Cplx<T> {
        match self {
            Self::Disk { center, radius } => disk_kernel(*center, *radius, z, w),
            Self::AnnulusSeries {
                inner,
                outer,
                minexp,
                maxexp,
            } => annulus_kernel_series(*inner, *outer, *minexp, *maxexp, z, w),
            Self::Weighted { base, weight } => {
                let mz = weight
                    .holomorphic_factor(z)
                    .unwrap_or(Complex::new(T::one(), T::zero()));
                let mw = weight
                    .holomorphic_factor(w)
                    .unwrap_or(Complex::new(T::one(), T::zero()));
                base.kernel(z, w) / (mz * mw.conj())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;
    use std::f64::consts::PI;

    #[test]
    fn disk_values() {
        let k = disk_kernel(c64(0.0, 0.0), 1.0, c64(0.0, 0.0), c64(0.0, 0.0));
        assert!((k.re - 1.0 / PI).abs() < 1e-16);
        let k = disk_kernel(c64(1.0, 1.0), 2.0, c64(1.0, 1.0), c64(1.0, 1.0));
        assert!((k.re - 1.0 / (4.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn annulus_norms() {
        assert!((annulus_laurent_norm(0.5, 1.0, -1) - 2.0 * PI * 2f64.ln()).abs() < 1e-15);
        assert!((annulus_laurent_norm(0.5, 1.0, 0) - PI * 0.75).abs() < 1e-15);
    }

    #[test]
    fn truncation_tail_matches_sum() {
        let (r, n, off) = (1.0, 10, 0.6);
        let x: f64 = off * off;
        let direct: f64 = (11..400).map(|k| (k as f64 + 1.0) * x.powi(k)).sum::<f64>() / PI;
        assert!((disk_truncation_tail(r, n, off) - direct).abs() < 1e-14);
    }
}
