use num_complex::Complex;
use serde::Serialize;

use crate::calculus::{circle_d_dz, circle_d_dzbar};
use crate::error::{Error, Result};
use crate::geometry::{build_quadrature, QuadratureRule};
use crate::poly::Polynomial;
use crate::scalar::{Cplx, Real};
use crate::weights::{check_log_harmonic, Representation, Weight};

/// Threshold on `max |Delta ln rho|` beyond which a generic weight is
/// reported as gauge-infeasible.
pub const LOG_HARMONIC_TOLERANCE: f64 = 1e-4;

/// Circle radius for the numerical Wirtinger derivatives in
/// [`Gauge::residuals`].
pub const RESIDUAL_RADIUS: f64 = 1e-3;

/// Antiholomorphic factor `g(w) = conj(P(w)) exp(conj(E(w)))` with `P`, `E`
/// holomorphic polynomials, together with `h = ln g - ln rho`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gauge<T> {
    factor: Polynomial<T>,
    exponent: Polynomial<T>,
    source_weight: Weight<T>,
}

/// Maxima over quadrature nodes of the residuals of the gauge system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaugeResiduals {
    /// `|(1/g) dg/dconj(w) - (1/rho) drho/dconj(w)|`
    pub log_derivative: f64,
    /// `|dg/dw|`
    pub antiholomorphic: f64,
    /// `||g|^2 - rho^2 e^{2 Re h}|`
    pub decomposition: f64,
    /// `|drho/dw + rho dh/dw|`
    pub constraint: f64,
    pub nodes: usize,
}

impl GaugeResiduals {
    pub fn max(&self) -> f64 {
        self.log_derivative
            .max(self.antiholomorphic)
            .max(self.decomposition)
            .max(self.constraint)
    }
}

impl<T: Real> Gauge<T> {
    /// `g(w) = conj(factor(w)) exp(conj(exponent(w)))`.
    pub fn new(factor: Polynomial<T>, exponent: Polynomial<T>, source_weight: Weight<T>) -> Self {
        Self {
            factor,
            exponent,
            source_weight,
        }
    }

    /// The trivial gauge `g = 1`.
    pub fn identity(source_weight: Weight<T>) -> Self {
        Self::new(Polynomial::one(), Polynomial::zero(), source_weight)
    }

    pub fn source_weight(&self) -> &Weight<T> {
        &self.source_weight
    }

    /// Coefficients `b_k` of the polynomial part `sum_k b_k conj(w)^k`.
    pub fn antiholomorphic_coefficients(&self) -> Vec<Cplx<T>> {
        self.factor.coeffs().iter().map(|c| c.conj()).collect()
    }

    /// Holomorphic exponent `E`; the gauge carries the factor `exp(conj(E))`.
    pub fn exponent_polynomial(&self) -> &Polynomial<T> {
        &self.exponent
    }

    pub fn is_identity(&self) -> bool {
        self.factor == Polynomial::one() && self.exponent.is_zero()
    }

    /// Multiplies `g` by `exp(conj(q))`.
    pub fn perturbed(&self, q: &Polynomial<T>) -> Self {
        Self::new(self.factor.clone(), self.exponent.add(q), self.source_weight.clone())
    }

    pub fn eval(&self, w: Cplx<T>) -> Cplx<T> {
        self.factor.eval(w).conj() * self.exponent.eval(w).conj().exp()
    }

    /// `ln g` on the principal branch of `ln P`.
    pub fn log_eval(&self, w: Cplx<T>) -> Cplx<T> {
        (self.factor.eval(w).ln() + self.exponent.eval(w)).conj()
    }

    /// `h(w) = ln g(w) - ln rho(w)`, so that `g = rho e^h`.
    pub fn exponent_h(&self, w: Cplx<T>) -> Cplx<T> {
        self.log_eval(w) - Complex::new(self.source_weight.value(w).ln(), T::zero())
    }

    /// `dg/dconj(w)`, analytic.
    pub fn d_dwbar(&self, w: Cplx<T>) -> Cplx<T> {
        let p = self.factor.eval(w);
        let dp = self.factor.derivative().eval(w);
        let de = self.exponent.derivative().eval(w);
        (dp + p * de).conj() * self.exponent.eval(w).conj().exp()
    }

    /// Residuals of the gauge system at the nodes of `rule`, with the
    /// derivatives of `g` and `h` estimated numerically and those of `rho`
    /// taken from the weight.
    pub fn residuals(&self, rule: &QuadratureRule<T>) -> Result<GaugeResiduals> {
        let eps = T::lit(RESIDUAL_RADIUS);
        let mut out = GaugeResiduals {
            log_derivative: 0.0,
            antiholomorphic: 0.0,
            decomposition: 0.0,
            constraint: 0.0,
            nodes: rule.len(),
        };
        let g_fn = |p: Cplx<T>| self.eval(p);
        for &w in &rule.nodes {
            let rho = self.source_weight.eval(w)?;
            let g = self.eval(w);
            let lg = circle_d_dzbar(g_fn, w, eps) / g - self.source_weight.d_dzbar(w) / rho;
            out.log_derivative = out.log_derivative.max(lg.norm().as_f64());
            out.antiholomorphic = out.antiholomorphic.max(circle_d_dz(g_fn, w, eps).norm().as_f64());

            let h = self.exponent_h(w);
            let dec = g.norm_sqr() - rho * rho * (T::lit(2.0) * h.re).exp();
            out.decomposition = out.decomposition.max(dec.abs().as_f64());

            // local branch of h around w, continuous on the sampling circle
            let g0 = g;
            let local_h =
                |p: Cplx<T>| (self.eval(p) / g0).ln() - Complex::new(self.source_weight.value(p).ln(), T::zero());
            let dh = circle_d_dz(local_h, w, eps);
            let c = self.source_weight.d_dz(w) + dh * rho;
            out.constraint = out.constraint.max(c.norm().as_f64());
        }
        Ok(out)
    }
}

/// Antiholomorphic gauge for a log-harmonic weight: `g = conj(mu)` for
/// `rho = |mu|^2` and `g = exp(conj(H))` for `rho = e^{2 Re H}`. A generic
/// weight with a nonvanishing `Delta ln rho` is gauge-infeasible; one that
/// passes the log-harmonicity check still lacks an explicit holomorphic factor
/// and is rejected as unsupported.
pub fn solve_gauge<T: Real>(w: &Weight<T>) -> Result<Gauge<T>> {
    match w.representation() {
        Representation::HoloModulusSquared(mu) => Ok(Gauge::new(mu.clone(), Polynomial::zero(), w.clone())),
        Representation::LogHarmonic(h) => Ok(Gauge::new(Polynomial::one(), h.clone(), w.clone())),
        Representation::GenericC1(g) => {
            let rule = build_quadrature(w.domain(), 8)?;
            let check = check_log_harmonic(w, &rule, T::lit(1e-3))?;
            let residual = check.max_abs_laplacian.as_f64();
            if !(residual <= LOG_HARMONIC_TOLERANCE) {
                return Err(Error::GaugeInfeasible { residual });
            }
            Err(Error::Representation(format!(
                "generic weight {:?} has no explicit holomorphic factor",
                g.name()
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;
    use crate::scalar::c64;
    use crate::weights::GenericWeight;

    fn rule() -> QuadratureRule<f64> {
        build_quadrature(&Domain::unit_disk(), 6).unwrap()
    }

    #[test]
    fn constant_weight_gives_trivial_gauge() {
        let w = Weight::<f64>::constant(Domain::unit_disk());
        let g = solve_gauge(&w).unwrap();
        assert!(g.is_identity());
        assert_eq!(g.eval(c64(0.3, 0.2)), c64(1.0, 0.0));
        assert_eq!(g.exponent_h(c64(0.3, 0.2)), c64(0.0, 0.0));
    }

    #[test]
    fn holomorphic_weight_gauge_is_conjugate() {
        let mu = Polynomial::new(vec![c64(2.0, 0.0), c64(1.0, 0.0)]);
        let w = Weight::holo_modulus_squared(mu.clone(), Domain::unit_disk()).unwrap();
        let g = solve_gauge(&w).unwrap();
        assert_eq!(g.antiholomorphic_coefficients(), vec![c64(2.0, 0.0), c64(1.0, 0.0)]);
        let z = c64(0.3, -0.6);
        assert!((g.eval(z) - (z.conj() + 2.0)).norm() < 1e-15);
        assert!((g.exponent_h(z) + mu.eval(z).ln()).norm() < 1e-14);
        let r = g.residuals(&rule()).unwrap();
        assert!(r.max() < 1e-10, "{r:?}");
        assert!(r.antiholomorphic < 1e-12);
    }

    #[test]
    fn log_harmonic_gauge() {
        let h = Polynomial::new(vec![c64(0.1, 0.2), c64(0.5, -0.3), c64(0.0, 0.4)]);
        let w = Weight::log_harmonic(h, Domain::unit_disk());
        let r = solve_gauge(&w).unwrap().residuals(&rule()).unwrap();
        assert!(r.max() < 1e-8, "{r:?}");
    }

    #[test]
    fn analytic_wbar_derivative() {
        let h = Polynomial::new(vec![c64(0.0, 0.0), c64(0.5, 0.5)]);
        let g = Gauge::new(
            Polynomial::new(vec![c64(1.0, 1.0), c64(0.2, 0.0)]),
            h,
            Weight::constant(Domain::unit_disk()),
        );
        let z = c64(0.1, 0.4);
        let num = circle_d_dzbar(|p| g.eval(p), z, 1e-3);
        assert!((num - g.d_dwbar(z)).norm() < 1e-12);
    }

    #[test]
    fn non_log_harmonic_weight_is_infeasible() {
        let w = Weight::generic(GenericWeight::<f64>::exp_modulus_squared(1.0), Domain::unit_disk());
        match solve_gauge(&w) {
            Err(Error::GaugeInfeasible { residual }) => assert!((residual - 4.0).abs() < 1e-3),
            other => panic!("{other:?}"),
        }
    }
}
