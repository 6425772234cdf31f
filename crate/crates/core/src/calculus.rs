//! Pointwise difference operators in the complex plane.

use num_complex::Complex;

use crate::scalar::{Cplx, Real};

/// Samples on a circle of this many points are used by the Wirtinger
/// estimators below.
pub const CIRCLE_POINTS: usize = 16;

/// Estimates `df/dz` at `z` by averaging `f(z + eps e^{it}) e^{-it} / eps`
/// over equispaced `t`. Exact (up to rounding) whenever `f` is a polynomial in
/// `z` and `conj(z)` of degree below [`CIRCLE_POINTS`] - 1 without terms
/// `z^{k+1} conj(z)^k`, `k >= 1`; in particular exact for holomorphic and
/// antiholomorphic polynomials.
pub fn circle_d_dz<T: Real, F: Fn(Cplx<T>) -> Cplx<T>>(f: F, z: Cplx<T>, eps: T) -> Cplx<T> {
    circle_average(f, z, eps, -1)
}

/// Counterpart of [`circle_d_dz`] for `df/dconj(z)`.
pub fn circle_d_dzbar<T: Real, F: Fn(Cplx<T>) -> Cplx<T>>(f: F, z: Cplx<T>, eps: T) -> Cplx<T> {
    circle_average(f, z, eps, 1)
}

fn circle_average<T: Real, F: Fn(Cplx<T>) -> Cplx<T>>(f: F, z: Cplx<T>, eps: T, mode: i32) -> Cplx<T> {
    let n = CIRCLE_POINTS;
    let tau = T::lit(std::f64::consts::TAU);
    let mut acc = Complex::new(T::zero(), T::zero());
    for k in 0..n {
        let t = tau * T::from_count(k) / T::from_count(n);
        let e = Complex::from_polar(T::one(), t);
        let twist = if mode < 0 { e.conj() } else { e };
        acc = acc + f(z + e * eps) * twist;
    }
    acc / (eps * T::from_count(n))
}

/// Five-point Laplacian `(f(z+h) + f(z-h) + f(z+ih) + f(z-ih) - 4 f(z)) / h^2`.
pub fn five_point_laplacian<T: Real, F: Fn(Cplx<T>) -> T>(f: F, z: Cplx<T>, h: T) -> T {
    let dx = Complex::new(h, T::zero());
    let dy = Complex::new(T::zero(), h);
    (f(z + dx) + f(z - dx) + f(z + dy) + f(z - dy) - T::lit(4.0) * f(z)) / (h * h)
}

/// `(4 L(h/2) - L(h)) / 3` for the five-point Laplacian `L`; the leading
/// `h^2` truncation term cancels.
pub fn richardson_laplacian<T: Real, F: Fn(Cplx<T>) -> T>(f: F, z: Cplx<T>, h: T) -> T {
    let coarse = five_point_laplacian(&f, z, h);
    let fine = five_point_laplacian(&f, z, h / T::lit(2.0));
    (T::lit(4.0) * fine - coarse) / T::lit(3.0)
}

/// The four stencil points used by [`five_point_laplacian`].
pub fn five_point_stencil<T: Real>(z: Cplx<T>, h: T) -> [Cplx<T>; 4] {
    let dx = Complex::new(h, T::zero());
    let dy = Complex::new(T::zero(), h);
    [z + dx, z - dx, z + dy, z - dy]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn circle_estimators_on_polynomials() {
        let z0 = c64::<f64>(0.3, -0.2);
        // f = z^3 + 2 conj(z)^2
        let f = |z: Cplx<f64>| z * z * z + z.conj() * z.conj() * 2.0;
        let dz = circle_d_dz(f, z0, 1e-3);
        let dzb = circle_d_dzbar(f, z0, 1e-3);
        assert!((dz - z0 * z0 * 3.0).norm() < 1e-12);
        assert!((dzb - z0.conj() * 4.0).norm() < 1e-12);
    }

    #[test]
    fn laplacian_of_modulus_squared() {
        let l = five_point_laplacian(|z: Cplx<f64>| z.norm_sqr(), c64(0.2, 0.1), 1e-3);
        assert!((l - 4.0).abs() < 1e-8);
    }
}
