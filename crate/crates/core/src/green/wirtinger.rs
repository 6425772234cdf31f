use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::scalar::{Cplx, Real};

/// Central-difference estimate of `d^2 f / dz dconj(w)`, using
/// `d/dz = (d_x - i d_y)/2` and `d/dconj(w) = (d_u + i d_v)/2` with
/// `z = x + iy`, `w = u + iv`. Each of the four mixed second partials takes
/// four evaluations (16 in total); the error is `O(step^2)`.
pub fn wirtinger_mixed<T: Real, F>(f: F, z: Cplx<T>, w: Cplx<T>, step: T) -> Cplx<T>
where
    F: Fn(Cplx<T>, Cplx<T>) -> Cplx<T>,
{
    let h = step;
    let dx = Complex::new(h, T::zero());
    let dy = Complex::new(T::zero(), h);
    let partial = |a: Cplx<T>, b: Cplx<T>| -> Cplx<T> {
        (f(z + a, w + b) - f(z + a, w - b) - f(z - a, w + b) + f(z - a, w - b)) / (T::lit(4.0) * h * h)
    };
    let i = Complex::new(T::zero(), T::one());
    let f_xu = partial(dx, dx);
    let f_xv = partial(dx, dy);
    let f_yu = partial(dy, dx);
    let f_yv = partial(dy, dy);
    (f_xu + i * f_xv - i * f_yu + f_yv) * T::lit(0.25)
}

/// Richardson combination `(4 D(step/2) - D(step)) / 3` of [`wirtinger_mixed`],
/// accurate to `O(step^4)`.
pub fn wirtinger_mixed_richardson<T: Real, F>(f: F, z: Cplx<T>, w: Cplx<T>, step: T) -> Cplx<T>
where
    F: Fn(Cplx<T>, Cplx<T>) -> Cplx<T>,
{
    let coarse = wirtinger_mixed(&f, z, w, step);
    let fine = wirtinger_mixed(&f, z, w, step / T::lit(2.0));
    (fine * T::lit(4.0) - coarse) / T::lit(3.0)
}

/// Fails with [`Error::Stencil`] on the first stencil point of
/// [`wirtinger_mixed`] at `(z, w, step)` outside `domain`.
pub fn check_stencil<T: Real>(domain: &Domain<T>, z: Cplx<T>, w: Cplx<T>, step: T) -> Result<()> {
    let offsets = [
        Complex::new(step, T::zero()),
        Complex::new(-step, T::zero()),
        Complex::new(T::zero(), step),
        Complex::new(T::zero(), -step),
    ];
    for base in [z, w] {
        for o in offsets {
            let p = base + o;
            if !domain.contains(p) {
                return Err(Error::Stencil {
                    re: p.re.as_f64(),
                    im: p.im.as_f64(),
                });
            }
        }
    }
    Ok(())
}
