use num_complex::Complex;

use crate::bergman::BergmanKernel;
use crate::error::{Error, Result};
use crate::green::{check_stencil, wirtinger_mixed, wirtinger_mixed_richardson, GreenFunction};
use crate::scalar::{Cplx, Real};
use crate::weights::{Gauge, Weight};

/// `G_rho(z, w) = g(z) conj(g(w)) G(z, w)` for an antiholomorphic gauge `g`.
#[derive(Clone, Debug)]
pub struct WeightedGreen<T> {
    base: GreenFunction<T>,
    gauge: Gauge<T>,
}

pub fn weighted_green<T: Real>(base: GreenFunction<T>, gauge: Gauge<T>) -> Result<WeightedGreen<T>> {
    if !base.domain().same_region(gauge.source_weight().domain()) {
        return Err(Error::Parameter(
            "Green's function and gauge live on different domains".into(),
        ));
    }
    Ok(WeightedGreen { base, gauge })
}

impl<T: Real> WeightedGreen<T> {
    pub fn base(&self) -> &GreenFunction<T> {
        &self.base
    }

    pub fn gauge(&self) -> &Gauge<T> {
        &self.gauge
    }

    pub fn eval(&self, z: Cplx<T>, w: Cplx<T>) -> Result<Cplx<T>> {
        let g = self.base.eval(z, w)?;
        Ok(self.gauge.eval(z) * self.gauge.eval(w).conj() * g)
    }

    /// `g(z) conj(g(w)) h(z, w)`, smooth across the diagonal. Its mixed
    /// derivative equals that of [`WeightedGreen::eval`]: `g(z) conj(g(w)) ln|z - w|`
    /// is annihilated by `d^2 / dz dconj(w)`.
    pub fn regular_part(&self, z: Cplx<T>, w: Cplx<T>) -> Result<Cplx<T>> {
        let h = self.base.harmonic_part(z, w)?;
        Ok(self.gauge.eval(z) * self.gauge.eval(w).conj() * h)
    }

    /// Analytic mixed derivative: `g` is antiholomorphic, so the gauge
    /// factors pass through `d/dz` and `d/dconj(w)` unchanged.
    pub fn mixed_derivative(&self, z: Cplx<T>, w: Cplx<T>) -> Option<Cplx<T>> {
        self.base
            .mixed_derivative(z, w)
            .map(|m| self.gauge.eval(z) * self.gauge.eval(w).conj() * m)
    }
}

/// How `d^2 G_rho / dz dconj(w)` is obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MixedPath<T> {
    Analytic,
    FiniteDifference(T),
    Richardson(T),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual<T> {
    pub kernel: Cplx<T>,
    /// `-2 / (pi rho(z) rho(w)) d^2 G_rho / dz dconj(w)`
    pub green_side: Cplx<T>,
    /// `|kernel - green_side| / max(1, |kernel|)`
    pub residual: T,
}

/// Relative residual of `K_rho(z,w) = -2/(pi rho(z) rho(w)) d^2 G_rho / dz dconj(w)`.
///
/// The finite-difference paths differentiate [`WeightedGreen::regular_part`],
/// so their truncation error does not blow up as `w` approaches `z`.
pub fn identity_residual<T: Real, K: BergmanKernel<T> + ?Sized>(
    kernel: &K,
    green: &WeightedGreen<T>,
    weight: &Weight<T>,
    z: Cplx<T>,
    w: Cplx<T>,
    path: MixedPath<T>,
) -> Result<IdentityResidual<T>> {
    if z == w {
        return Err(Error::Diagonal {
            re: z.re.as_f64(),
            im: z.im.as_f64(),
        });
    }
    let rho_z = weight.eval(z)?;
    let rho_w = weight.eval(w)?;
    let mixed = match path {
        MixedPath::Analytic => green
            .mixed_derivative(z, w)
            .ok_or_else(|| Error::Parameter("no analytic mixed derivative for this Green's function".into()))?,
        MixedPath::FiniteDifference(step) | MixedPath::Richardson(step) => {
            if let GreenFunction::GridBased(_) = green.base() {
                return Err(Error::Parameter(
                    "grid Green's functions need source-shifted solves for the w-derivative".into(),
                ));
            }
            check_stencil(&green.base().domain(), z, w, step)?;
            let f = |a: Cplx<T>, b: Cplx<T>| green.regular_part(a, b).unwrap_or(Complex::new(T::nan(), T::nan()));
            match path {
                MixedPath::Richardson(_) => wirtinger_mixed_richardson(f, z, w, step),
                _ => wirtinger_mixed(f, z, w, step),
            }
        }
    };
    let k = kernel.kernel(z, w);
    let green_side = mixed * (-T::lit(2.0) / (T::PI() * rho_z * rho_w));
    let residual = (k - green_side).norm() / T::one().max(k.norm());
    if !residual.is_finite() {
        return Err(Error::Numeric(format!(
            "non-finite identity residual at z = ({}, {}), w = ({}, {})",
            z.re, z.im, w.re, w.im
        )));
    }
    Ok(IdentityResidual {
        kernel: k,
        green_side,
        residual,
    })
}
