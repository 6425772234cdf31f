use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::scalar::{Cplx, Real};

/// Tensor grid of interior nodes.
///
/// Rectangle: `n1 x n2` nodes at `x0 + (i+1) hx`, `y0 + (j+1) hy` with
/// `hx = (x1-x0)/(n1+1)`; the boundary sits at `i = -1, n1` and `j = -1, n2`.
/// Annulus: `n1` radii `r + (i+1) hr` times `n2` periodic angles `j 2 pi / n2`.
/// Interior node `(i, j)` has natural index `j n1 + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec<T> {
    domain: Domain<T>,
    n1: usize,
    n2: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(domain: Domain<T>, n1: usize, n2: usize) -> Result<Self> {
        match domain {
            Domain::Rectangle { .. } => {}
            Domain::Annulus { .. } => {
                if !n2.is_multiple_of(2) || n2 < 16 {
                    return Err(Error::Parameter(format!(
                        "annulus angular count must be even and at least 16, got {n2}"
                    )));
                }
            }
            _ => {
                return Err(Error::UnsupportedDomain(format!(
                    "grid solver supports rectangle and annulus, not {}",
                    domain.kind().name()
                )))
            }
        }
        if n1 < 8 || n2 < 8 {
            return Err(Error::Parameter(format!(
                "grid resolution must be at least 8x8, got {n1}x{n2}"
            )));
        }
        Ok(Self { domain, n1, n2 })
    }

    /// Square resolution `n x n` on a rectangle, `n x 2n` on an annulus.
    pub fn with_resolution(domain: Domain<T>, n: usize) -> Result<Self> {
        match domain {
            Domain::Annulus { .. } => Self::new(domain, n, 2 * n),
            _ => Self::new(domain, n, n),
        }
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_polar(&self) -> bool {
        matches!(self.domain, Domain::Annulus { .. })
    }

    /// `(h1, h2)`: `(hx, hy)` on a rectangle, `(hr, htheta)` on an annulus.
    pub fn spacing(&self) -> (T, T) {
        match self.domain {
            Domain::Rectangle { x0, x1, y0, y1 } => (
                (x1 - x0) / T::from_count(self.n1 + 1),
                (y1 - y0) / T::from_count(self.n2 + 1),
            ),
            Domain::Annulus { inner, outer } => (
                (outer - inner) / T::from_count(self.n1 + 1),
                T::TAU() / T::from_count(self.n2),
            ),
            _ => unreachable!("validated in GridSpec::new"),
        }
    }

    /// First coordinate of node row `i` (x, or radius); `i = -1` and `i = n1`
    /// are boundary positions.
    pub fn coord1(&self, i: isize) -> T {
        let (h1, _) = self.spacing();
        let base = match self.domain {
            Domain::Rectangle { x0, .. } => x0,
            Domain::Annulus { inner, .. } => inner,
            _ => unreachable!(),
        };
        base + h1 * T::lit((i + 1) as f64)
    }

    /// Second coordinate (y, or angle).
    pub fn coord2(&self, j: isize) -> T {
        let (_, h2) = self.spacing();
        match self.domain {
            Domain::Rectangle { y0, .. } => y0 + h2 * T::lit((j + 1) as f64),
            _ => h2 * T::lit(j as f64),
        }
    }

    /// Position of node `(i, j)`, boundary indices allowed.
    pub fn point(&self, i: isize, j: isize) -> Cplx<T> {
        let (a, b) = (self.coord1(i), self.coord2(j));
        if self.is_polar() {
            Complex::from_polar(a, b)
        } else {
            Complex::new(a, b)
        }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n1 + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.n1, idx / self.n1)
    }

    /// Wraps an angular index on the annulus; `None` for a rectangle index
    /// outside `0..n2`.
    pub fn wrap2(&self, j: isize) -> Option<usize> {
        let n2 = self.n2 as isize;
        if self.is_polar() {
            Some(j.rem_euclid(n2) as usize)
        } else if (0..n2).contains(&j) {
            Some(j as usize)
        } else {
            None
        }
    }

    /// Natural index of `(i, j)` when it is an interior node.
    pub fn interior_index(&self, i: isize, j: isize) -> Option<usize> {
        if i < 0 || i >= self.n1 as isize {
            return None;
        }
        self.wrap2(j).map(|j| self.index(i as usize, j))
    }

    /// Area represented by node `(i, j)`.
    pub fn cell_area(&self, i: usize, _j: usize) -> T {
        let (h1, h2) = self.spacing();
        if self.is_polar() {
            self.coord1(i as isize) * h1 * h2
        } else {
            h1 * h2
        }
    }

    /// Grid coordinates `(s1, s2)` of `z` in units of nodes (fractional).
    pub fn fractional(&self, z: Cplx<T>) -> (T, T) {
        let (h1, h2) = self.spacing();
        let one = T::one();
        match self.domain {
            Domain::Rectangle { x0, y0, .. } => ((z.re - x0) / h1 - one, (z.im - y0) / h2 - one),
            Domain::Annulus { inner, .. } => {
                let th = z.im.atan2(z.re);
                let th = if th < T::zero() { th + T::TAU() } else { th };
                ((z.norm() - inner) / h1 - one, th / h2)
            }
            _ => unreachable!(),
        }
    }

    /// Interior node nearest to `z`.
    pub fn nearest_node(&self, z: Cplx<T>) -> Result<(usize, usize)> {
        let (s1, s2) = self.fractional(z);
        let i = s1.round().to_isize().unwrap_or(-1);
        let j = s2.round().to_isize().unwrap_or(-1);
        if i < 0 || i >= self.n1 as isize {
            return Err(Error::Parameter(format!(
                "point ({}, {}) is outside the grid",
                z.re, z.im
            )));
        }
        let j = self
            .wrap2(j)
            .ok_or_else(|| Error::Parameter(format!("point ({}, {}) is outside the grid", z.re, z.im)))?;
        Ok((i as usize, j))
    }

    /// Number of cells between node `(i, j)` and the nearest boundary line.
    pub fn boundary_margin(&self, i: usize, j: usize) -> usize {
        let m1 = (i + 1).min(self.n1 - i);
        if self.is_polar() {
            m1
        } else {
            m1.min((j + 1).min(self.n2 - j))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn rectangle_nodes() {
        let g = GridSpec::<f64>::new(Domain::rectangle(0.0, 1.0, 0.0, 1.0).unwrap(), 9, 9).unwrap();
        assert_eq!(g.spacing(), (0.1, 0.1));
        assert!((g.point(4, 4) - c64(0.5, 0.5)).norm() < 1e-15);
        assert_eq!(g.nearest_node(c64(0.52, 0.47)).unwrap(), (4, 4));
        assert_eq!(g.boundary_margin(0, 4), 1);
        assert!(g.interior_index(-1, 0).is_none());
    }

    #[test]
    fn annulus_wraps() {
        let g = GridSpec::<f64>::new(Domain::annulus(0.5, 1.0).unwrap(), 9, 16).unwrap();
        assert_eq!(g.wrap2(-1), Some(15));
        assert!((g.point(-1, 0) - c64(0.5, 0.0)).norm() < 1e-15);
        let (i, j) = g.nearest_node(c64(0.0, -0.75)).unwrap();
        assert_eq!((i, j), (4, 12));
        assert!(GridSpec::<f64>::new(Domain::annulus(0.5, 1.0).unwrap(), 9, 15).is_err());
        assert!(GridSpec::<f64>::new(Domain::unit_disk(), 9, 16).is_err());
    }
}
