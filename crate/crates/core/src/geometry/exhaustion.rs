use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::scalar::Real;

/// Increasing sequence of compactly nested subdomains of `parent`.
#[derive(Clone, Debug, PartialEq)]
pub struct Exhaustion<T> {
    pub steps: Vec<Domain<T>>,
    pub parent: Domain<T>,
}

/// Concentric exhaustion of a disk or annulus.
///
/// Disks of radius `R` get radii `R (1 - 2^-j)`. An annulus `(r, R)` gets
/// `(r_j, R_j)` with `r_j = min(r (1 + 2^-(j+1)), r + (R - r) 2^-(j+1))` and
/// `R_j = max(R (1 - 2^-(j+1)), R - (R - r) 2^-(j+1))`, which keeps every step a
/// valid annulus even when `r` is close to `R`.
pub fn exhaustion_sequence<T: Real>(parent: &Domain<T>, count: usize) -> Result<Exhaustion<T>> {
    if count == 0 {
        return Err(Error::Parameter("exhaustion needs at least one step".into()));
    }
    let half = T::lit(0.5);
    let mut steps = Vec::with_capacity(count);
    for j in 1..=count {
        let step = match *parent {
            Domain::UnitDisk | Domain::Disk { .. } => {
                let (c, r) = parent.as_disk().expect("disk family");
                let s = r * (T::one() - half.powi(j as i32));
                Domain::disk(c, s)?
            }
            Domain::Annulus { inner, outer } => {
                let f = half.powi(j as i32 + 1);
                let gap = outer - inner;
                let r_j = (inner * (T::one() + f)).min(inner + gap * f);
                let big_r_j = (outer * (T::one() - f)).max(outer - gap * f);
                Domain::annulus(r_j, big_r_j)?
            }
            _ => {
                return Err(Error::UnsupportedDomain(format!(
                    "exhaustion of {} is not implemented",
                    parent.kind().name()
                )))
            }
        };
        steps.push(step);
    }
    Ok(Exhaustion {
        steps,
        parent: parent.clone(),
    })
}

impl<T: Real> Exhaustion<T> {
    /// Checks `W_j` compactly inside `W_{j+1}` and every step inside the
    /// parent by boundary sampling.
    pub fn is_monotone(&self, samples: usize) -> bool {
        let margin = T::zero();
        let nested = self
            .steps
            .windows(2)
            .all(|w| w[1].compactly_contains(&w[0], samples, margin));
        let inside = self
            .steps
            .iter()
            .all(|s| self.parent.compactly_contains(s, samples, margin));
        nested && inside
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    fn radii(e: &Exhaustion<f64>) -> Vec<f64> {
        e.steps.iter().map(|d| d.as_disk().unwrap().1).collect()
    }

    #[test]
    fn unit_disk_radii() {
        let e = exhaustion_sequence(&Domain::<f64>::unit_disk(), 3).unwrap();
        assert_eq!(radii(&e), vec![0.5, 0.75, 0.875]);
        assert!(e.is_monotone(64));
    }

    #[test]
    fn scaled_disk() {
        let e = exhaustion_sequence(&Domain::disk(c64::<f64>(0.0, 0.0), 2.0).unwrap(), 1).unwrap();
        assert_eq!(radii(&e), vec![1.0]);
    }

    #[test]
    fn annulus_steps() {
        let e = exhaustion_sequence(&Domain::<f64>::annulus(0.4, 1.0).unwrap(), 2).unwrap();
        let expect = [(0.5, 0.85), (0.45, 0.925)];
        for (d, (r, big_r)) in e.steps.iter().zip(expect) {
            let Domain::Annulus { inner, outer } = *d else { panic!() };
            assert!((inner - r).abs() < 1e-15 && (outer - big_r).abs() < 1e-15, "{d:?}");
        }
        assert!(e.is_monotone(128));
    }

    #[test]
    fn thin_annulus_stays_valid() {
        let e = exhaustion_sequence(&Domain::<f64>::annulus(0.9, 1.0).unwrap(), 8).unwrap();
        assert!(e.is_monotone(128));
    }

    #[test]
    fn unsupported_parent() {
        let r = Domain::<f64>::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(exhaustion_sequence(&r, 2), Err(Error::UnsupportedDomain(_))));
        assert!(exhaustion_sequence(&Domain::<f64>::unit_disk(), 0).is_err());
    }
}
