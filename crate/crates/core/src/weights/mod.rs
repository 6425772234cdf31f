//! Positive weights `rho` on a domain, admissibility evidence, the
//! log-harmonicity diagnostic and the antiholomorphic gauge solver.

mod admissible;
mod gauge;
mod harmonic;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

pub use admissible::{check_admissible, check_admissible_with_orders, AdmissibilityCertificate};
pub use gauge::{solve_gauge, Gauge, GaugeResiduals};
pub use harmonic::{check_log_harmonic, LogHarmonicCheck};

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::poly::Polynomial;
use crate::scalar::{Cplx, Real};

/// Roots of a holomorphic factor must stay at least this far outside the
/// closed domain.
pub const ROOT_MARGIN: f64 = 1e-9;

/// Evaluator returning `(rho, d rho/dx, d rho/dy)`.
pub type WeightFn<T> = dyn Fn(Cplx<T>) -> (T, T, T) + Send + Sync;

/// A `C^1` weight given by an evaluator with first partials. Equality is by
/// name and parameters.
#[derive(Clone)]
pub struct GenericWeight<T> {
    name: String,
    params: Vec<f64>,
    eval: Arc<WeightFn<T>>,
}

impl<T: Real> GenericWeight<T> {
    pub fn new(name: impl Into<String>, params: Vec<f64>, eval: Arc<WeightFn<T>>) -> Self {
        Self {
            name: name.into(),
            params,
            eval,
        }
    }

    /// `rho(z) = exp(scale |z|^2)`; `Delta ln rho = 4 scale`.
    pub fn exp_modulus_squared(scale: f64) -> Self {
        let s = T::lit(scale);
        Self::new(
            "exp_modulus_squared",
            vec![scale],
            Arc::new(move |z: Cplx<T>| {
                let rho = (s * z.norm_sqr()).exp();
                let two = T::lit(2.0);
                (rho, two * s * z.re * rho, two * s * z.im * rho)
            }),
        )
    }

    /// `rho(z) = |z|^2`, vanishing at the origin.
    pub fn modulus_squared() -> Self {
        Self::new(
            "modulus_squared",
            vec![],
            Arc::new(|z: Cplx<T>| {
                let two = T::lit(2.0);
                (z.norm_sqr(), two * z.re, two * z.im)
            }),
        )
    }

    /// Looks up a named preset (used by the JSON descriptions).
    pub fn preset(name: &str, params: &[f64]) -> Result<Self> {
        match name {
            "exp_modulus_squared" => Ok(Self::exp_modulus_squared(params.first().copied().unwrap_or(1.0))),
            "modulus_squared" => Ok(Self::modulus_squared()),
            other => Err(Error::Parameter(format!("unknown generic weight preset {other:?}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn evaluate(&self, z: Cplx<T>) -> (T, T, T) {
        (self.eval)(z)
    }
}

impl<T> fmt::Debug for GenericWeight<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericWeight")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

impl<T> PartialEq for GenericWeight<T> {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.params == other.params
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Representation<T> {
    /// `rho = |mu|^2` with `mu` a polynomial, zero-free on the closure.
    HoloModulusSquared(Polynomial<T>),
    /// `rho = |e^H|^2 = e^{2 Re H}`.
    LogHarmonic(Polynomial<T>),
    GenericC1(GenericWeight<T>),
}

impl<T> Representation<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Representation::HoloModulusSquared(_) => "holo_modulus_squared",
            Representation::LogHarmonic(_) => "log_harmonic",
            Representation::GenericC1(_) => "generic_c1",
        }
    }
}

/// A weight attached to a domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight<T> {
    repr: Representation<T>,
    domain: Domain<T>,
}

impl<T: Real> Weight<T> {
    /// `rho = 1`.
    pub fn constant(domain: Domain<T>) -> Self {
        Self {
            repr: Representation::HoloModulusSquared(Polynomial::one()),
            domain,
        }
    }

    /// `rho = |mu|^2`; fails if `mu` vanishes on (or within [`ROOT_MARGIN`] of)
    /// the closed domain.
    pub fn holo_modulus_squared(mu: Polynomial<T>, domain: Domain<T>) -> Result<Self> {
        if mu.is_zero() {
            return Err(Error::Representation("mu is identically zero".into()));
        }
        let margin = T::lit(ROOT_MARGIN);
        for root in mu.roots() {
            if domain.signed_distance(root) < margin {
                return Err(Error::Representation(format!(
                    "mu has a zero at ({}, {}) on the closed domain",
                    root.re, root.im
                )));
            }
        }
        Ok(Self {
            repr: Representation::HoloModulusSquared(mu),
            domain,
        })
    }

    pub fn log_harmonic(exponent: Polynomial<T>, domain: Domain<T>) -> Self {
        Self {
            repr: Representation::LogHarmonic(exponent),
            domain,
        }
    }

    pub fn generic(weight: GenericWeight<T>, domain: Domain<T>) -> Self {
        Self {
            repr: Representation::GenericC1(weight),
            domain,
        }
    }

    pub fn representation(&self) -> &Representation<T> {
        &self.repr
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    /// Same weight on another domain (used for exhaustion steps).
    pub fn restricted_to(&self, domain: Domain<T>) -> Self {
        Self {
            repr: self.repr.clone(),
            domain,
        }
    }

    pub fn is_constant(&self) -> bool {
        match &self.repr {
            Representation::HoloModulusSquared(mu) => mu.is_constant(),
            Representation::LogHarmonic(h) => h.is_constant(),
            Representation::GenericC1(_) => false,
        }
    }

    /// Holomorphic zero-free `mu` with `rho = |mu|^2`, when the representation
    /// provides one.
    pub fn holomorphic_factor(&self, z: Cplx<T>) -> Option<Cplx<T>> {
        match &self.repr {
            Representation::HoloModulusSquared(mu) => Some(mu.eval(z)),
            Representation::LogHarmonic(h) => Some(h.eval(z).exp()),
            Representation::GenericC1(_) => None,
        }
    }

    /// Unchecked weight value.
    pub fn value(&self, z: Cplx<T>) -> T {
        match &self.repr {
            Representation::HoloModulusSquared(mu) => mu.eval(z).norm_sqr(),
            Representation::LogHarmonic(h) => (T::lit(2.0) * h.eval(z).re).exp(),
            Representation::GenericC1(g) => g.evaluate(z).0,
        }
    }

    /// `rho(z)`, rejecting nonpositive or non-finite values.
    pub fn eval(&self, z: Cplx<T>) -> Result<T> {
        let v = self.value(z);
        if !(v > T::zero()) || !v.is_finite() {
            return Err(Error::Weight {
                re: z.re.as_f64(),
                im: z.im.as_f64(),
                value: v.as_f64(),
            });
        }
        Ok(v)
    }

    /// `d rho / d conj(z) = (rho_x + i rho_y) / 2`, analytic for every representation.
    pub fn d_dzbar(&self, z: Cplx<T>) -> Cplx<T> {
        match &self.repr {
            Representation::HoloModulusSquared(mu) => mu.eval(z) * mu.derivative().eval(z).conj(),
            Representation::LogHarmonic(h) => h.derivative().eval(z).conj() * self.value(z),
            Representation::GenericC1(g) => {
                let (_, rx, ry) = g.evaluate(z);
                Complex::new(rx, ry) / T::lit(2.0)
            }
        }
    }

    /// `d rho / dz`, the conjugate of [`Weight::d_dzbar`] since `rho` is real.
    pub fn d_dz(&self, z: Cplx<T>) -> Cplx<T> {
        self.d_dzbar(z).conj()
    }

    /// `(rho_x, rho_y)`.
    pub fn gradient(&self, z: Cplx<T>) -> (T, T) {
        let d = self.d_dzbar(z);
        let two = T::lit(2.0);
        (two * d.re, two * d.im)
    }
}

/// `rho(z)` for `w`, erroring on nonpositive values.
pub fn eval_weight<T: Real>(w: &Weight<T>, z: Cplx<T>) -> Result<T> {
    w.eval(z)
}
