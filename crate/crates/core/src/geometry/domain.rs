use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cplx, Cplx, Real};

/// Variant tag used by [`Domain::new`] and the JSON descriptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    UnitDisk,
    Disk,
    MoebiusDisk,
    Annulus,
    Rectangle,
}

impl DomainKind {
    pub fn name(self) -> &'static str {
        match self {
            DomainKind::UnitDisk => "unit_disk",
            DomainKind::Disk => "disk",
            DomainKind::MoebiusDisk => "moebius_disk",
            DomainKind::Annulus => "annulus",
            DomainKind::Rectangle => "rectangle",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "unit_disk" => DomainKind::UnitDisk,
            "disk" => DomainKind::Disk,
            "moebius_disk" => DomainKind::MoebiusDisk,
            "annulus" => DomainKind::Annulus,
            "rectangle" => DomainKind::Rectangle,
            _ => return None,
        })
    }
}

/// A planar model domain.
///
/// `MoebiusDisk` is the unit disk parametrized through the automorphism
/// `z -> e^{i theta} (z - a) / (1 - conj(a) z)`; as a point set it equals the
/// unit disk, the parameters only matter for transported Green's functions.
/// The annulus is centered at the origin.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain<T> {
    UnitDisk,
    Disk { center: Cplx<T>, radius: T },
    MoebiusDisk { a: Cplx<T>, theta: T },
    Annulus { inner: T, outer: T },
    Rectangle { x0: T, x1: T, y0: T, y1: T },
}

impl<T: Real> Domain<T> {
    /// Builds a domain from its kind and a flat parameter list:
    /// `unit_disk: []`, `disk: [cx, cy, r]`, `moebius_disk: [re a, im a, theta]`,
    /// `annulus: [r, R]`, `rectangle: [x0, x1, y0, y1]`.
    pub fn new(kind: DomainKind, params: &[T]) -> Result<Self> {
        let want = match kind {
            DomainKind::UnitDisk => 0,
            DomainKind::Disk | DomainKind::MoebiusDisk => 3,
            DomainKind::Annulus => 2,
            DomainKind::Rectangle => 4,
        };
        if params.len() != want {
            return Err(Error::Parameter(format!(
                "{} expects {want} parameters, got {}",
                kind.name(),
                params.len()
            )));
        }
        match kind {
            DomainKind::UnitDisk => Ok(Domain::UnitDisk),
            DomainKind::Disk => Self::disk(cplx(params[0], params[1]), params[2]),
            DomainKind::MoebiusDisk => Self::moebius_disk(cplx(params[0], params[1]), params[2]),
            DomainKind::Annulus => Self::annulus(params[0], params[1]),
            DomainKind::Rectangle => Self::rectangle(params[0], params[1], params[2], params[3]),
        }
    }

    pub fn unit_disk() -> Self {
        Domain::UnitDisk
    }

    pub fn disk(center: Cplx<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() || !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::Parameter(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Domain::Disk { center, radius })
    }

    pub fn moebius_disk(a: Cplx<T>, theta: T) -> Result<Self> {
        if !(a.norm() < T::one()) || !theta.is_finite() {
            return Err(Error::Parameter(format!(
                "moebius parameter needs |a| < 1, got |a| = {}",
                a.norm()
            )));
        }
        Ok(Domain::MoebiusDisk { a, theta })
    }

    pub fn annulus(inner: T, outer: T) -> Result<Self> {
        if !(inner > T::zero() && inner < outer) || !outer.is_finite() {
            return Err(Error::Parameter(format!(
                "annulus needs 0 < r < R, got r = {inner}, R = {outer}"
            )));
        }
        Ok(Domain::Annulus { inner, outer })
    }

    pub fn rectangle(x0: T, x1: T, y0: T, y1: T) -> Result<Self> {
        let finite = [x0, x1, y0, y1].iter().all(|v| v.is_finite());
        if !finite || !(x0 < x1) || !(y0 < y1) {
            return Err(Error::Parameter(format!(
                "rectangle needs x0 < x1 and y0 < y1, got [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Domain::Rectangle { x0, x1, y0, y1 })
    }

    pub fn kind(&self) -> DomainKind {
        match self {
            Domain::UnitDisk => DomainKind::UnitDisk,
            Domain::Disk { .. } => DomainKind::Disk,
            Domain::MoebiusDisk { .. } => DomainKind::MoebiusDisk,
            Domain::Annulus { .. } => DomainKind::Annulus,
            Domain::Rectangle { .. } => DomainKind::Rectangle,
        }
    }

    pub fn params(&self) -> Vec<T> {
        match *self {
            Domain::UnitDisk => vec![],
            Domain::Disk { center, radius } => vec![center.re, center.im, radius],
            Domain::MoebiusDisk { a, theta } => vec![a.re, a.im, theta],
            Domain::Annulus { inner, outer } => vec![inner, outer],
            Domain::Rectangle { x0, x1, y0, y1 } => vec![x0, x1, y0, y1],
        }
    }

    /// Center and radius for the disk family, `None` otherwise.
    pub fn as_disk(&self) -> Option<(Cplx<T>, T)> {
        match *self {
            Domain::UnitDisk | Domain::MoebiusDisk { .. } => Some((Complex::new(T::zero(), T::zero()), T::one())),
            Domain::Disk { center, radius } => Some((center, radius)),
            _ => None,
        }
    }

    pub fn is_disk_family(&self) -> bool {
        self.as_disk().is_some()
    }

    pub fn is_simply_connected(&self) -> bool {
        !matches!(self, Domain::Annulus { .. })
    }

    /// Natural expansion center (disk center, annulus center, rectangle midpoint).
    pub fn center(&self) -> Cplx<T> {
        match *self {
            Domain::Rectangle { x0, x1, y0, y1 } => {
                let two = T::lit(2.0);
                cplx((x0 + x1) / two, (y0 + y1) / two)
            }
            Domain::Annulus { .. } => cplx(T::zero(), T::zero()),
            _ => self.as_disk().map(|(c, _)| c).unwrap_or_default(),
        }
    }

    /// Signed distance to the boundary: negative inside, positive outside.
    pub fn signed_distance(&self, z: Cplx<T>) -> T {
        match *self {
            Domain::Annulus { inner, outer } => {
                let r = z.norm();
                (r - outer).max(inner - r)
            }
            Domain::Rectangle { x0, x1, y0, y1 } => {
                let dx = (x0 - z.re).max(z.re - x1);
                let dy = (y0 - z.im).max(z.im - y1);
                if dx <= T::zero() && dy <= T::zero() {
                    dx.max(dy)
                } else {
                    let ox = dx.max(T::zero());
                    let oy = dy.max(T::zero());
                    (ox * ox + oy * oy).sqrt()
                }
            }
            _ => {
                let (c, r) = self.as_disk().expect("disk family");
                (z - c).norm() - r
            }
        }
    }

    /// Strict interior membership.
    pub fn contains(&self, z: Cplx<T>) -> bool {
        self.signed_distance(z) < T::zero()
    }

    /// Membership in the closure, up to `tol`.
    pub fn contains_closed(&self, z: Cplx<T>, tol: T) -> bool {
        self.signed_distance(z) <= tol
    }

    pub fn area(&self) -> T {
        let pi = T::PI();
        match *self {
            Domain::Annulus { inner, outer } => pi * (outer * outer - inner * inner),
            Domain::Rectangle { x0, x1, y0, y1 } => (x1 - x0) * (y1 - y0),
            _ => {
                let (_, r) = self.as_disk().expect("disk family");
                pi * r * r
            }
        }
    }

    /// Radius of the largest disk centered at [`Domain::center`] inside the
    /// domain; for the annulus, half its width.
    pub fn inradius(&self) -> T {
        match *self {
            Domain::Annulus { inner, outer } => (outer - inner) / T::lit(2.0),
            Domain::Rectangle { x0, x1, y0, y1 } => ((x1 - x0).min(y1 - y0)) / T::lit(2.0),
            _ => self.as_disk().expect("disk family").1,
        }
    }

    /// `n` points spread along the boundary (every boundary component for the annulus).
    pub fn boundary_points(&self, n: usize) -> Vec<Cplx<T>> {
        let n = n.max(1);
        let tau = T::lit(std::f64::consts::TAU);
        let circle = |c: Cplx<T>, r: T, m: usize| -> Vec<Cplx<T>> {
            (0..m)
                .map(|k| c + Complex::from_polar(r, tau * T::from_count(k) / T::from_count(m)))
                .collect()
        };
        match *self {
            Domain::Annulus { inner, outer } => {
                let half = n.div_ceil(2);
                let mut pts = circle(cplx(T::zero(), T::zero()), outer, half);
                pts.extend(circle(cplx(T::zero(), T::zero()), inner, n - half.min(n)));
                if pts.len() < n {
                    pts.push(cplx(outer, T::zero()));
                }
                pts
            }
            Domain::Rectangle { x0, x1, y0, y1 } => {
                let per = n.div_ceil(4);
                let mut pts = Vec::with_capacity(4 * per);
                for k in 0..per {
                    let s = T::from_count(k) / T::from_count(per);
                    pts.push(cplx(x0 + (x1 - x0) * s, y0));
                    pts.push(cplx(x1, y0 + (y1 - y0) * s));
                    pts.push(cplx(x1 - (x1 - x0) * s, y1));
                    pts.push(cplx(x0, y1 - (y1 - y0) * s));
                }
                pts.truncate(n);
                pts
            }
            _ => {
                let (c, r) = self.as_disk().expect("disk family");
                circle(c, r, n)
            }
        }
    }

    /// Whether two domains describe the same point set (the unit disk, a
    /// `MoebiusDisk` and `Disk(0, 1)` coincide).
    pub fn same_region(&self, other: &Domain<T>) -> bool {
        match (self.as_disk(), other.as_disk()) {
            (Some((c1, r1)), Some((c2, r2))) => c1 == c2 && r1 == r2,
            (None, None) => self == other,
            _ => false,
        }
    }

    /// Whether the closure of `inner` lies inside `self` with at least
    /// `margin` to spare, judged on `samples` boundary points of `inner`.
    pub fn compactly_contains(&self, inner: &Domain<T>, samples: usize, margin: T) -> bool {
        inner
            .boundary_points(samples)
            .into_iter()
            .all(|p| self.signed_distance(p) < -margin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn unit_disk_membership() {
        let d = Domain::<f64>::unit_disk();
        assert!(d.contains(c64(0.0, 0.0)));
        assert!(!d.contains(c64(2.0, 0.0)));
        assert!(!d.contains(c64(1.0, 0.0)));
        assert!(d.contains_closed(c64(1.0, 0.0), 1e-12));
    }

    #[test]
    fn annulus_membership() {
        let a = Domain::<f64>::annulus(0.5, 1.0).unwrap();
        assert!(a.contains(c64(0.7, 0.0)));
        assert!(!a.contains(c64(0.3, 0.0)));
        assert!(!a.contains(c64(0.0, 1.2)));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(Domain::<f64>::annulus(1.0, 0.5), Err(Error::Parameter(_))));
        assert!(matches!(Domain::<f64>::annulus(1.0, 1.0), Err(Error::Parameter(_))));
        assert!(matches!(
            Domain::<f64>::disk(c64(0.0, 0.0), 0.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            Domain::<f64>::rectangle(1.0, 0.0, 0.0, 1.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            Domain::<f64>::moebius_disk(c64(1.0, 0.0), 0.0),
            Err(Error::Parameter(_))
        ));
        assert!(Domain::<f64>::new(DomainKind::Disk, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn rectangle_signed_distance() {
        let r = Domain::<f64>::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!((r.signed_distance(c64(0.5, 0.5)) + 0.5).abs() < 1e-15);
        assert!((r.signed_distance(c64(2.0, 0.5)) - 1.0).abs() < 1e-15);
        assert!((r.signed_distance(c64(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn moebius_disk_is_the_unit_disk() {
        let m = Domain::<f64>::moebius_disk(c64(0.5, 0.1), 0.3).unwrap();
        assert!(m.same_region(&Domain::UnitDisk));
        assert!(m.contains(c64(0.9, 0.0)));
    }

    #[test]
    fn boundary_points_lie_on_boundary() {
        for d in [
            Domain::<f64>::unit_disk(),
            Domain::annulus(0.4, 1.0).unwrap(),
            Domain::rectangle(-1.0, 2.0, 0.0, 0.5).unwrap(),
            Domain::disk(c64(1.0, -1.0), 0.25).unwrap(),
        ] {
            let pts = d.boundary_points(64);
            assert_eq!(pts.len(), 64);
            for p in pts {
                assert!(d.signed_distance(p).abs() < 1e-12, "{d:?} {p}");
            }
        }
    }
}
