use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{build_quadrature, Domain};
use crate::scalar::{CompensatedSum, Real};
use crate::weights::Weight;

/// Relative agreement required between the coarse and fine estimates.
pub const REFINEMENT_AGREEMENT: f64 = 0.05;
pub const COARSE_ORDER: usize = 20;
pub const FINE_ORDER: usize = 40;

/// Numerical evidence that `rho^{-a}` is integrable on a compact step, which
/// makes `rho` an admissible weight there. `admissible` is a heuristic proxy:
/// the estimate must be finite and stable under quadrature refinement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityCertificate {
    pub admissible: bool,
    pub exponent_a: f64,
    pub integral_estimate: f64,
    pub coarse_estimate: f64,
    pub method: String,
}

fn integrate_negative_power<T: Real>(w: &Weight<T>, a: T, step: &Domain<T>, order: usize) -> Result<f64> {
    let rule = build_quadrature(step, order)?;
    let mut acc = CompensatedSum::new();
    for (&z, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let rho = w.value(z);
        if !(rho > T::zero()) || !rho.is_finite() {
            return Ok(f64::INFINITY);
        }
        acc.add(wt * rho.powf(-a));
    }
    Ok(acc.total().as_f64())
}

/// Integrates `rho^{-a}` over `step` at the default coarse and fine orders.
pub fn check_admissible<T: Real>(w: &Weight<T>, a: T, step: &Domain<T>) -> Result<AdmissibilityCertificate> {
    check_admissible_with_orders(w, a, step, COARSE_ORDER, FINE_ORDER)
}

pub fn check_admissible_with_orders<T: Real>(
    w: &Weight<T>,
    a: T,
    step: &Domain<T>,
    coarse: usize,
    fine: usize,
) -> Result<AdmissibilityCertificate> {
    if !(a > T::zero()) {
        return Err(Error::Parameter(format!(
            "admissibility exponent must be positive, got {a}"
        )));
    }
    let tol = T::lit(1e-12);
    if !step
        .boundary_points(256)
        .into_iter()
        .all(|p| w.domain().contains_closed(p, tol))
    {
        return Err(Error::Parameter(
            "admissibility step must lie inside the weight's domain".into(),
        ));
    }
    let coarse_estimate = integrate_negative_power(w, a, step, coarse)?;
    let integral_estimate = integrate_negative_power(w, a, step, fine)?;
    let admissible = integral_estimate.is_finite()
        && coarse_estimate.is_finite()
        && (integral_estimate - coarse_estimate).abs() <= REFINEMENT_AGREEMENT * integral_estimate.abs();
    Ok(AdmissibilityCertificate {
        admissible,
        exponent_a: a.as_f64(),
        integral_estimate,
        coarse_estimate,
        method: format!(
            "integral of rho^-a by area quadrature at orders {coarse} and {fine}; admissible when finite and within {}% under refinement",
            REFINEMENT_AGREEMENT * 100.0
        ),
    })
}
