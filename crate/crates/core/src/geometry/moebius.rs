use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Disk automorphism `z -> e^{i theta} (z - a) / (1 - conj(a) z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap<T> {
    a: Cplx<T>,
    theta: T,
}

impl<T: Real> MoebiusMap<T> {
    pub fn new(a: Cplx<T>, theta: T) -> Result<Self> {
        if !(a.norm() < T::one()) || !theta.is_finite() {
            return Err(Error::Parameter(format!(
                "moebius map needs |a| < 1, got |a| = {}",
                a.norm()
            )));
        }
        Ok(Self { a, theta })
    }

    pub fn identity() -> Self {
        Self {
            a: Complex::new(T::zero(), T::zero()),
            theta: T::zero(),
        }
    }

    pub fn a(&self) -> Cplx<T> {
        self.a
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    fn rotation(&self) -> Cplx<T> {
        Complex::from_polar(T::one(), self.theta)
    }

    pub fn forward(&self, z: Cplx<T>) -> Cplx<T> {
        self.rotation() * (z - self.a) / (Complex::new(T::one(), T::zero()) - self.a.conj() * z)
    }

    pub fn inverse(&self, w: Cplx<T>) -> Cplx<T> {
        let u = w * self.rotation().conj();
        (u + self.a) / (Complex::new(T::one(), T::zero()) + self.a.conj() * u)
    }

    /// Derivative of the forward map.
    pub fn forward_derivative(&self, z: Cplx<T>) -> Cplx<T> {
        let one = Complex::new(T::one(), T::zero());
        let den = one - self.a.conj() * z;
        self.rotation() * (one - self.a.norm_sqr()) / (den * den)
    }

    /// Derivative of the inverse map.
    pub fn inverse_derivative(&self, w: Cplx<T>) -> Cplx<T> {
        let one = Complex::new(T::one(), T::zero());
        let rot = self.rotation().conj();
        let den = one + self.a.conj() * w * rot;
        rot * (one - self.a.norm_sqr()) / (den * den)
    }
}

fn check_closed_disk<T: Real>(z: Cplx<T>) -> Result<()> {
    if z.norm() > T::one() + T::lit(1e-12) {
        return Err(Error::Parameter(format!(
            "moebius argument must satisfy |z| <= 1, got {}",
            z.norm()
        )));
    }
    Ok(())
}

/// Evaluates `e^{i theta} (z - a) / (1 - conj(a) z)` on the closed unit disk.
pub fn moebius_map<T: Real>(a: Cplx<T>, theta: T, z: Cplx<T>) -> Result<Cplx<T>> {
    check_closed_disk(z)?;
    Ok(MoebiusMap::new(a, theta)?.forward(z))
}

/// Inverse of [`moebius_map`].
pub fn moebius_inverse<T: Real>(a: Cplx<T>, theta: T, w: Cplx<T>) -> Result<Cplx<T>> {
    check_closed_disk(w)?;
    Ok(MoebiusMap::new(a, theta)?.inverse(w))
}
