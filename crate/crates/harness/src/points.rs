use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bergreen_core::{Complex64, Domain, Error, Result};

/// Core region points are drawn from: the domain shrunk towards its centre
/// (disks, rectangles) or towards its mid-circle (annuli) by `margin`.
pub fn sampling_region(domain: &Domain, margin: f64) -> Result<Domain> {
    if let Some((c, r)) = domain.as_disk() {
        return Domain::disk(c, margin * r);
    }
    match *domain {
        Domain::Annulus { inner, outer } => {
            let (mid, half) = ((inner + outer) / 2.0, (outer - inner) / 2.0);
            Domain::annulus(mid - margin * half, mid + margin * half)
        }
        Domain::Rectangle { x0, x1, y0, y1 } => {
            let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
            let (hx, hy) = (margin * (x1 - x0) / 2.0, margin * (y1 - y0) / 2.0);
            Domain::rectangle(cx - hx, cx + hx, cy - hy, cy + hy)
        }
        _ => Err(Error::UnsupportedDomain(format!(
            "no sampling region for {}",
            domain.kind().name()
        ))),
    }
}

fn bounding_box(d: &Domain) -> (f64, f64, f64, f64) {
    match *d {
        Domain::Rectangle { x0, x1, y0, y1 } => (x0, x1, y0, y1),
        Domain::Annulus { outer, .. } => (-outer, outer, -outer, outer),
        _ => {
            let (c, r) = d.as_disk().expect("disk family");
            (c.re - r, c.re + r, c.im - r, c.im + r)
        }
    }
}

/// Area-uniform point in `region` by rejection from its bounding box.
fn draw(rng: &mut ChaCha8Rng, region: &Domain) -> Complex64 {
    let (x0, x1, y0, y1) = bounding_box(region);
    loop {
        let p = Complex64::new(rng.random_range(x0..x1), rng.random_range(y0..y1));
        if region.contains(p) {
            return p;
        }
    }
}

/// `count` seeded pairs `(z, w)` with `|z - w| >= min_separation`, both drawn
/// uniformly from [`sampling_region`].
pub fn random_pairs(
    domain: &Domain,
    count: usize,
    seed: u64,
    margin: f64,
    min_separation: f64,
) -> Result<Vec<(Complex64, Complex64)>> {
    let region = sampling_region(domain, margin)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * count + 1000 {
            return Err(Error::Parameter(format!(
                "could not draw {count} pairs separated by {min_separation}"
            )));
        }
        let z = draw(&mut rng, &region);
        let w = draw(&mut rng, &region);
        if (z - w).norm() >= min_separation {
            out.push((z, w));
        }
    }
    Ok(out)
}

/// `count` seeded single points from [`sampling_region`].
pub fn random_points(domain: &Domain, count: usize, seed: u64, margin: f64) -> Result<Vec<Complex64>> {
    let region = sampling_region(domain, margin)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| draw(&mut rng, &region)).collect())
}
