use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainKind};
use crate::scalar::{Cplx, Real};

pub const DEFAULT_MAXDEG: usize = 30;
pub const DEFAULT_LAURENT_RANGE: (i64, i64) = (-15, 15);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Monomials { maxdeg: usize },
    Laurent { minexp: i64, maxexp: i64 },
}

/// Powers `(z - c)^k` of the offset from the domain center `c`. Laurent
/// exponents are ordered `0, 1, -1, 2, -2, ...` so that truncating to a
/// prefix keeps a symmetric range.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSpec<T> {
    kind: BasisKind,
    domain: Domain<T>,
    exponents: Vec<i64>,
}

impl<T: Real> BasisSpec<T> {
    pub fn new(kind: BasisKind, domain: Domain<T>) -> Result<Self> {
        let exponents = match kind {
            BasisKind::Monomials { maxdeg } => {
                if !domain.is_simply_connected() {
                    return Err(Error::Parameter(
                        "monomial basis requires a simply connected domain".into(),
                    ));
                }
                (0..=maxdeg as i64).collect()
            }
            BasisKind::Laurent { minexp, maxexp } => {
                if domain.kind() != DomainKind::Annulus {
                    return Err(Error::Parameter("Laurent basis is only defined on the annulus".into()));
                }
                if minexp > 0 || maxexp < 0 {
                    return Err(Error::Parameter(format!(
                        "Laurent range [{minexp}, {maxexp}] must contain 0"
                    )));
                }
                let mut e = vec![0];
                for m in 1..=maxexp.max(-minexp) {
                    if m <= maxexp {
                        e.push(m);
                    }
                    if -m >= minexp {
                        e.push(-m);
                    }
                }
                e
            }
        };
        Ok(Self {
            kind,
            domain,
            exponents,
        })
    }

    pub fn monomials(maxdeg: usize, domain: Domain<T>) -> Result<Self> {
        Self::new(BasisKind::Monomials { maxdeg }, domain)
    }

    pub fn laurent(minexp: i64, maxexp: i64, domain: Domain<T>) -> Result<Self> {
        Self::new(BasisKind::Laurent { minexp, maxexp }, domain)
    }

    /// Monomials up to degree 30, or Laurent exponents in `[-15, 15]` on the annulus.
    pub fn default_for(domain: Domain<T>) -> Result<Self> {
        if domain.kind() == DomainKind::Annulus {
            let (lo, hi) = DEFAULT_LAURENT_RANGE;
            Self::laurent(lo, hi, domain)
        } else {
            Self::monomials(DEFAULT_MAXDEG, domain)
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Values of every basis element at `z`, in basis order.
    pub fn eval_all(&self, z: Cplx<T>) -> Vec<Cplx<T>> {
        let zeta = z - self.domain.center();
        let lo = self.exponents.iter().copied().min().unwrap_or(0);
        let hi = self.exponents.iter().copied().max().unwrap_or(0);
        let one = Complex::new(T::one(), T::zero());
        let mut pos = Vec::with_capacity(hi as usize + 1);
        let mut p = one;
        for _ in 0..=hi {
            pos.push(p);
            p = p * zeta;
        }
        let mut neg = Vec::with_capacity((-lo) as usize + 1);
        if lo < 0 {
            let inv = one / zeta;
            let mut p = one;
            for _ in 0..=(-lo) {
                neg.push(p);
                p = p * inv;
            }
        }
        self.exponents
            .iter()
            .map(|&k| if k >= 0 { pos[k as usize] } else { neg[(-k) as usize] })
            .collect()
    }

    /// `sum_k coeffs[k] e_k(z)`.
    pub fn combine(&self, coeffs: &[Cplx<T>], z: Cplx<T>) -> Cplx<T> {
        self.eval_all(z)
            .into_iter()
            .zip(coeffs)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (e, c)| acc + e * *c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn laurent_ordering() {
        let b = BasisSpec::<f64>::laurent(-2, 3, Domain::annulus(0.5, 1.0).unwrap()).unwrap();
        assert_eq!(b.exponents(), &[0, 1, -1, 2, -2, 3]);
        let v = b.eval_all(c64(0.0, 0.5));
        assert!((v[2] - c64(0.0, -2.0)).norm() < 1e-15);
        assert!((v[5] - c64(0.0, -0.125)).norm() < 1e-15);
    }

    #[test]
    fn basis_domain_compatibility() {
        assert!(BasisSpec::<f64>::laurent(-1, 1, Domain::unit_disk()).is_err());
        assert!(BasisSpec::<f64>::monomials(3, Domain::annulus(0.5, 1.0).unwrap()).is_err());
        assert!(BasisSpec::<f64>::laurent(1, 3, Domain::annulus(0.5, 1.0).unwrap()).is_err());
    }

    #[test]
    fn monomials_are_centered() {
        let d = Domain::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        let b = BasisSpec::<f64>::monomials(2, d).unwrap();
        let v = b.eval_all(c64(1.0, 0.5));
        assert!((v[2] - c64(0.25, 0.0)).norm() < 1e-15);
    }
}
