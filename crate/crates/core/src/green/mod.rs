//! Green's functions of the Laplacian (closed forms on disks, Moebius
//! transports, grid solutions), their harmonic parts, Wirtinger mixed
//! derivatives, weighted Green's functions and the kernel identity
//! `K_rho(z,w) = -2/(pi rho(z) rho(w)) d^2 G_rho / dz dconj(w)`.

mod identity;
mod wirtinger;

use std::sync::Arc;

use num_complex::Complex;

pub use identity::{identity_residual, weighted_green, IdentityResidual, MixedPath, WeightedGreen};
pub use wirtinger::{check_stencil, wirtinger_mixed, wirtinger_mixed_richardson};

use crate::error::{Error, Result};
use crate::geometry::{Domain, MoebiusMap};
use crate::pdegreen::DiscreteGreen;
use crate::scalar::{Cplx, Real};

/// Cells between the source and the sampling ring used for the grid
/// diagonal limit of the harmonic part (the second ring is twice as far).
pub const GRID_DIAGONAL_CELLS: usize = 4;

fn diagonal_error<T: Real>(z: Cplx<T>) -> Error {
    Error::Diagonal {
        re: z.re.as_f64(),
        im: z.im.as_f64(),
    }
}

/// `G(z,w) = ln|r^2 - zeta conj(omega)| - ln r - ln|zeta - omega|` with
/// `zeta = z - c`, `omega = w - c`.
pub fn green_disk<T: Real>(center: Cplx<T>, radius: T, z: Cplx<T>, w: Cplx<T>) -> Result<T> {
    if z == w {
        return Err(diagonal_error(z));
    }
    let (zeta, omega) = (z - center, w - center);
    let h = (Complex::new(radius * radius, T::zero()) - zeta * omega.conj())
        .norm()
        .ln()
        - radius.ln();
    Ok(h - (zeta - omega).norm().ln())
}

#[derive(Clone, Debug)]
pub enum GreenFunction<T> {
    DiskClosedForm {
        center: Cplx<T>,
        radius: T,
    },
    /// `G(z,w) = G_base(m^{-1}(z), m^{-1}(w))` for a unit-disk base.
    MoebiusTransported {
        base: Box<GreenFunction<T>>,
        map: MoebiusMap<T>,
    },
    /// Unweighted grid solution `G(., w)` for its source node `w`.
    GridBased(Arc<DiscreteGreen<T>>),
}

impl<T: Real> GreenFunction<T> {
    pub fn disk(center: Cplx<T>, radius: T) -> Result<Self> {
        Domain::disk(center, radius)?;
        Ok(Self::DiskClosedForm { center, radius })
    }

    pub fn unit_disk() -> Self {
        Self::DiskClosedForm {
            center: Complex::new(T::zero(), T::zero()),
            radius: T::one(),
        }
    }

    /// Closed form for a disk-family domain.
    pub fn for_domain(domain: &Domain<T>) -> Result<Self> {
        match domain {
            Domain::MoebiusDisk { a, theta } => moebius_transport(Self::unit_disk(), MoebiusMap::new(*a, *theta)?),
            _ => match domain.as_disk() {
                Some((c, r)) => Self::disk(c, r),
                None => Err(Error::UnsupportedDomain(format!(
                    "no closed-form Green's function on {}",
                    domain.kind().name()
                ))),
            },
        }
    }

    /// Wraps a grid solution of the unweighted problem.
    pub fn grid(green: Arc<DiscreteGreen<T>>) -> Result<Self> {
        if green.max_abs_imag() > T::lit(1e-8) {
            return Err(Error::Parameter(
                "grid Green's function must be real (solve with rho = 1)".into(),
            ));
        }
        Ok(Self::GridBased(green))
    }

    pub fn domain(&self) -> Domain<T> {
        match self {
            Self::DiskClosedForm { center, radius } => {
                if *center == Complex::new(T::zero(), T::zero()) && *radius == T::one() {
                    Domain::UnitDisk
                } else {
                    Domain::Disk {
                        center: *center,
                        radius: *radius,
                    }
                }
            }
            Self::MoebiusTransported { map, .. } => Domain::MoebiusDisk {
                a: map.a(),
                theta: map.theta(),
            },
            Self::GridBased(g) => g.grid().domain().clone(),
        }
    }

    fn grid_source_check(g: &DiscreteGreen<T>, w: Cplx<T>) -> Result<()> {
        let (h1, _) = g.grid().spacing();
        if (w - g.source()).norm() > h1 * T::lit(1e-6) {
            return Err(Error::Parameter(format!(
                "grid Green's function is only available for its source ({}, {})",
                g.source().re,
                g.source().im
            )));
        }
        Ok(())
    }

    /// `G(z, w)` for `z != w`.
    pub fn eval(&self, z: Cplx<T>, w: Cplx<T>) -> Result<T> {
        match self {
            Self::DiskClosedForm { center, radius } => green_disk(*center, *radius, z, w),
            Self::MoebiusTransported { base, map } => {
                if z == w {
                    return Err(diagonal_error(z));
                }
                base.eval(map.inverse(z), map.inverse(w))
            }
            Self::GridBased(g) => {
                Self::grid_source_check(g, w)?;
                if z == w {
                    return Err(diagonal_error(z));
                }
                Ok(g.interpolate(z)?.re)
            }
        }
    }

    /// Analytic `d^2 G / dz dconj(w)` off the diagonal, when available.
    pub fn mixed_derivative(&self, z: Cplx<T>, w: Cplx<T>) -> Option<Cplx<T>> {
        match self {
            Self::DiskClosedForm { center, radius } => {
                let r2 = Complex::new(*radius * *radius, T::zero());
                let d = r2 - (z - center) * (w - center).conj();
                Some(-r2 / (d * d * T::lit(2.0)))
            }
            Self::MoebiusTransported { base, map } => {
                let (u, v) = (map.inverse(z), map.inverse(w));
                base.mixed_derivative(u, v)
                    .map(|m| m * map.inverse_derivative(z) * map.inverse_derivative(w).conj())
            }
            Self::GridBased(_) => None,
        }
    }

    /// Harmonic part `h(z, w) = G(z, w) + ln|z - w|`, including the diagonal.
    pub fn harmonic_part(&self, z: Cplx<T>, w: Cplx<T>) -> Result<T> {
        match self {
            Self::DiskClosedForm { center, radius } => {
                let (zeta, omega) = (z - center, w - center);
                Ok((Complex::new(*radius * *radius, T::zero()) - zeta * omega.conj())
                    .norm()
                    .ln()
                    - radius.ln())
            }
            Self::MoebiusTransported { base, map } => {
                let (u, v) = (map.inverse(z), map.inverse(w));
                let hb = base.harmonic_part(u, v)?;
                if z == w {
                    Ok(hb - map.inverse_derivative(z).norm().ln())
                } else {
                    Ok(hb - (u - v).norm().ln() + (z - w).norm().ln())
                }
            }
            Self::GridBased(g) => {
                Self::grid_source_check(g, w)?;
                if z != w {
                    return Ok(g.interpolate(z)?.re + (z - w).norm().ln());
                }
                grid_diagonal_limit(g)
            }
        }
    }
}

/// Mean of `G + ln|p - w|` over the four axis neighbours `k` cells from the
/// source, extrapolated in `k^{-2}` from `k = 4` and `k = 8` to remove the
/// lattice correction of the discrete fundamental solution.
fn grid_diagonal_limit<T: Real>(g: &DiscreteGreen<T>) -> Result<T> {
    let (si, sj) = g.source_node();
    let grid = g.grid();
    let w = g.source();
    let k1 = GRID_DIAGONAL_CELLS;
    if grid.boundary_margin(si, sj) <= 2 * k1 {
        return Err(Error::Parameter(format!(
            "diagonal limit needs more than {} cells between source and boundary",
            2 * k1
        )));
    }
    let ring = |k: isize| -> T {
        let (i, j) = (si as isize, sj as isize);
        let mut acc = T::zero();
        for (di, dj) in [(k, 0), (-k, 0), (0, k), (0, -k)] {
            let p = grid.point(i + di, j + dj);
            acc = acc + g.value_at_node(i + di, j + dj).re + (p - w).norm().ln();
        }
        acc / T::lit(4.0)
    };
    let near = ring(k1 as isize);
    let far = ring(2 * k1 as isize);
    Ok((T::lit(4.0) * far - near) / T::lit(3.0))
}

/// Transports a unit-disk Green's function by a disk automorphism.
pub fn moebius_transport<T: Real>(base: GreenFunction<T>, map: MoebiusMap<T>) -> Result<GreenFunction<T>> {
    match base.domain().as_disk() {
        Some((c, r)) if c == Complex::new(T::zero(), T::zero()) && r == T::one() => {}
        _ => {
            return Err(Error::Parameter(
                "Moebius transport requires a Green's function of the unit disk".into(),
            ))
        }
    }
    if let GreenFunction::GridBased(_) = base {
        return Err(Error::Parameter("grid Green's functions cannot be transported".into()));
    }
    Ok(GreenFunction::MoebiusTransported {
        base: Box::new(base),
        map,
    })
}
