use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::scalar::{cplx, is_finite, ComplexSum, Cplx, Real};

/// Area quadrature: `sum_k weights[k] f(nodes[k]) ~ int_W f dV`.
///
/// Disk family and annulus: `order + 1` Gauss-Legendre radii (weights carry the
/// polar Jacobian `r`) times `4 order` equispaced angles, so the rule has
/// `4 order (order + 1)` nodes. Rectangle: `(order + 1)^2` tensor Gauss-Legendre
/// nodes. Both integrate `z^m conj(z)^n` exactly for `m + n <= 2 order`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<Cplx<T>>,
    pub weights: Vec<T>,
    pub order: usize,
    pub domain: Domain<T>,
}

/// Legendre polynomial `P_n(t)` and its derivative.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, computed in `f64` by Newton
/// iteration on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, t);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        if n % 2 == 1 && i == n / 2 {
            t = 0.0;
        }
        let (_, dp) = legendre(n, t);
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
fn gl_interval<T: Real>(n: usize, a: T, b: T) -> Vec<(T, T)> {
    let (x, w) = gauss_legendre(n);
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    x.into_iter()
        .zip(w)
        .map(|(xi, wi)| (mid + half * T::lit(xi), half * T::lit(wi)))
        .collect()
}

pub fn build_quadrature<T: Real>(domain: &Domain<T>, order: usize) -> Result<QuadratureRule<T>> {
    if order == 0 {
        return Err(Error::Parameter("quadrature order must be at least 1".into()));
    }
    let tau = T::lit(std::f64::consts::TAU);
    let (nodes, weights) = match *domain {
        Domain::Rectangle { x0, x1, y0, y1 } => {
            let gx = gl_interval(order + 1, x0, x1);
            let gy = gl_interval(order + 1, y0, y1);
            let mut nodes = Vec::with_capacity(gx.len() * gy.len());
            let mut weights = Vec::with_capacity(gx.len() * gy.len());
            for &(x, wx) in &gx {
                for &(y, wy) in &gy {
                    nodes.push(cplx(x, y));
                    weights.push(wx * wy);
                }
            }
            (nodes, weights)
        }
        _ => {
            let (center, r_lo, r_hi) = match *domain {
                Domain::Annulus { inner, outer } => (cplx(T::zero(), T::zero()), inner, outer),
                _ => {
                    let (c, r) = domain.as_disk().expect("disk family");
                    (c, T::zero(), r)
                }
            };
            let radial = gl_interval(order + 1, r_lo, r_hi);
            let n_theta = 4 * order;
            let dtheta = tau / T::from_count(n_theta);
            let mut nodes = Vec::with_capacity(radial.len() * n_theta);
            let mut weights = Vec::with_capacity(radial.len() * n_theta);
            for &(r, wr) in &radial {
                for k in 0..n_theta {
                    let theta = dtheta * T::from_count(k);
                    nodes.push(center + Complex::from_polar(r, theta));
                    weights.push(wr * r * dtheta);
                }
            }
            (nodes, weights)
        }
    };
    Ok(QuadratureRule {
        nodes,
        weights,
        order,
        domain: domain.clone(),
    })
}

impl<T: Real> QuadratureRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> T {
        let mut s = crate::scalar::CompensatedSum::new();
        for &w in &self.weights {
            s.add(w);
        }
        s.total()
    }
}

/// `sum_k w_k f(z_k)` in node order with compensated summation.
pub fn integrate<T: Real, F>(rule: &QuadratureRule<T>, f: F) -> Result<Cplx<T>>
where
    F: Fn(Cplx<T>) -> Cplx<T>,
{
    let mut acc = ComplexSum::new();
    for (k, (&z, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let v = f(z);
        if !is_finite(v) {
            return Err(Error::NonFinite {
                index: k,
                re: z.re.as_f64(),
                im: z.im.as_f64(),
                value: format!("{v}"),
            });
        }
        acc.add(v * w);
    }
    Ok(acc.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn gauss_legendre_small_cases() {
        let (x, w) = gauss_legendre(1);
        assert_eq!((x[0], w[0]), (0.0, 2.0));
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(41);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // x^40 integrates to 2/41
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(40)).sum();
        assert!((m - 2.0 / 41.0).abs() < 1e-14);
    }

    #[test]
    fn unit_disk_area_and_second_moment() {
        let rule = build_quadrature(&Domain::<f64>::unit_disk(), 12).unwrap();
        assert!((rule.total_weight() - std::f64::consts::PI).abs() < 1e-12);
        let m2 = integrate(&rule, |z| c64(z.norm_sqr(), 0.0)).unwrap();
        assert!((m2.re - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        assert_eq!(rule.len(), 4 * 12 * 13);
    }

    #[test]
    fn small_disk_area() {
        let d = Domain::disk(c64::<f64>(0.0, 0.0), 0.5).unwrap();
        let rule = build_quadrature(&d, 4).unwrap();
        assert!((rule.total_weight() - std::f64::consts::PI * 0.25).abs() < 1e-13);
    }

    #[test]
    fn unit_square_area() {
        let r = Domain::<f64>::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
        let rule = build_quadrature(&r, 3).unwrap();
        assert!((rule.total_weight() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn nodes_strictly_inside_with_positive_weights() {
        for d in [
            Domain::<f64>::unit_disk(),
            Domain::annulus(0.5, 1.0).unwrap(),
            Domain::rectangle(0.0, 2.0, -1.0, 1.0).unwrap(),
        ] {
            let rule = build_quadrature(&d, 7).unwrap();
            assert!(rule.nodes.iter().all(|&z| d.contains(z)));
            assert!(rule.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn odd_and_shifted_integrands() {
        let rule = build_quadrature(&Domain::<f64>::unit_disk(), 10).unwrap();
        assert!(integrate(&rule, |z| z).unwrap().norm() < 1e-12);
        let v = integrate(&rule, |z| c64((z + c64(2.0, 0.0)).norm_sqr(), 0.0)).unwrap();
        // |z+2|^2 = |z|^2 + 4 Re z + 4 -> pi/2 + 0 + 4 pi
        assert!((v.re - 14.137_166_941_154_069).abs() < 1e-10);
    }

    #[test]
    fn non_finite_value_names_the_node() {
        let rule = build_quadrature(&Domain::<f64>::unit_disk(), 2).unwrap();
        let err = integrate(&rule, |z| if z.re > 0.5 { c64(f64::NAN, 0.0) } else { z }).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn single_precision_rule() {
        let rule = build_quadrature(&Domain::<f32>::unit_disk(), 8).unwrap();
        assert!((rule.total_weight() - std::f32::consts::PI).abs() < 1e-5);
    }
}
