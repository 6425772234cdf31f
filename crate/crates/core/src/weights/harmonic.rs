use serde::Serialize;

use crate::calculus::{five_point_stencil, richardson_laplacian};
use crate::error::Result;
use crate::geometry::QuadratureRule;
use crate::scalar::Real;
use crate::weights::Weight;

/// Outcome of the log-harmonicity diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogHarmonicCheck<T> {
    /// `max |Delta ln rho|` over the evaluated nodes.
    pub max_abs_laplacian: T,
    pub evaluated: usize,
    /// Nodes whose stencil leaves the rule's domain.
    pub skipped: usize,
}

/// Five-point Laplacian of `ln rho` at every quadrature node whose stencil
/// stays inside the rule's domain, Richardson-extrapolated from steps
/// `fd_step` and `fd_step / 2` so the truncation error is `O(fd_step^4)`.
pub fn check_log_harmonic<T: Real>(w: &Weight<T>, rule: &QuadratureRule<T>, fd_step: T) -> Result<LogHarmonicCheck<T>> {
    let mut worst = T::zero();
    let mut evaluated = 0;
    let mut skipped = 0;
    for &z in &rule.nodes {
        if !five_point_stencil(z, fd_step).iter().all(|&p| rule.domain.contains(p)) {
            skipped += 1;
            continue;
        }
        for p in five_point_stencil(z, fd_step) {
            w.eval(p)?;
        }
        let f = |p| w.value(p).ln();
        let lap = richardson_laplacian(f, z, fd_step);
        worst = worst.max(lap.abs());
        evaluated += 1;
    }
    Ok(LogHarmonicCheck {
        max_abs_laplacian: worst,
        evaluated,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_quadrature, Domain};
    use crate::poly::Polynomial;
    use crate::scalar::c64;
    use crate::weights::GenericWeight;

    fn rule() -> QuadratureRule<f64> {
        build_quadrature(&Domain::unit_disk(), 10).unwrap()
    }

    #[test]
    fn modulus_of_holomorphic_is_log_harmonic() {
        let w = Weight::holo_modulus_squared(Polynomial::new(vec![c64(2.0, 0.0), c64(1.0, 0.0)]), Domain::unit_disk())
            .unwrap();
        let c = check_log_harmonic(&w, &rule(), 1e-3).unwrap();
        assert!(c.max_abs_laplacian <= 1e-6, "{c:?}");
        assert!(c.evaluated > 0);
    }

    #[test]
    fn exponential_of_real_part() {
        let w = Weight::log_harmonic(Polynomial::new(vec![c64(0.0, 0.0), c64(1.0, 0.0)]), Domain::unit_disk());
        assert!(check_log_harmonic(&w, &rule(), 1e-3).unwrap().max_abs_laplacian <= 1e-6);
    }

    #[test]
    fn gaussian_weight_has_laplacian_four() {
        let w = Weight::generic(GenericWeight::exp_modulus_squared(1.0), Domain::unit_disk());
        let c = check_log_harmonic(&w, &rule(), 1e-3).unwrap();
        assert!((c.max_abs_laplacian - 4.0).abs() < 1e-5, "{c:?}");
    }

    #[test]
    fn nodes_near_boundary_are_skipped() {
        let w = Weight::<f64>::constant(Domain::unit_disk());
        let c = check_log_harmonic(&w, &rule(), 0.2).unwrap();
        assert!(c.skipped > 0);
        assert_eq!(c.skipped + c.evaluated, rule().len());
    }
}
