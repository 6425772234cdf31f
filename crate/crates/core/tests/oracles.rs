//! Library results against formulas implemented independently here.

use std::f64::consts::PI;

use bergreen_core::bergman::{kernel_from_gram, BasisSpec, BergmanKernel, ClosedFormKernel};
use bergreen_core::geometry::{build_quadrature, Domain};
use bergreen_core::green::{green_disk, GreenFunction};
use bergreen_core::pdegreen::{rectangle_series_green, solve_green, GridSpec};
use bergreen_core::poly::Polynomial;
use bergreen_core::weights::Weight;
use bergreen_core::Complex64;

fn pt(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Green's function of the unit square for `-Delta G = 2 pi delta`, summed
/// over the `x` modes only; each `y` factor is the 1D Green's function of
/// `-d^2/dy^2 + (m pi)^2`, written with nonpositive exponents.
fn square_green_single_sum(z: Complex64, w: Complex64, terms: usize) -> f64 {
    let (ylo, yhi) = if z.im < w.im { (z.im, w.im) } else { (w.im, z.im) };
    let mut sum = 0.0;
    for m in 1..=terms {
        let k = m as f64 * PI;
        let a = k * (1.0 + ylo - yhi);
        let b = k * (ylo + yhi - 1.0);
        let ratio =
            ((a - k).exp() + (-a - k).exp() - (b - k).exp() - (-b - k).exp()) / (2.0 * (1.0 - (-2.0 * k).exp()));
        sum += 2.0 * (k * z.re).sin() * (k * w.re).sin() * ratio / k;
    }
    2.0 * PI * sum
}

fn disk_kernel_series(z: Complex64, w: Complex64, terms: usize) -> Complex64 {
    let t = z * w.conj();
    let mut p = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..terms {
        sum += p * ((n + 1) as f64 / PI);
        p *= t;
    }
    sum
}

fn annulus_kernel_oracle(r: f64, big_r: f64, z: Complex64, w: Complex64, range: i32) -> Complex64 {
    let t = z * w.conj();
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -range..=range {
        let norm = if n == -1 {
            2.0 * PI * (big_r / r).ln()
        } else {
            let e = 2 * n + 2;
            PI * (big_r.powi(e) - r.powi(e)) / (n + 1) as f64
        };
        sum += t.powi(n) / norm;
    }
    sum
}

#[test]
fn single_and_double_series_square_green_agree() {
    let pairs = [
        ((0.3, 0.4), (0.6, 0.7)),
        ((0.25, 0.25), (0.75, 0.75)),
        ((0.5, 0.2), (0.5, 0.8)),
    ];
    for ((a, b), (c, d)) in pairs {
        let (z, w) = (pt(a, b), pt(c, d));
        let single = square_green_single_sum(z, w, 80);
        let double = rectangle_series_green((0.0, 1.0, 0.0, 1.0), 200, z, w);
        assert!((single - double).abs() < 5e-3, "{single} {double}");
    }
}

#[test]
fn grid_green_matches_single_sum_oracle() {
    let sq = Domain::rectangle(0.0, 1.0, 0.0, 1.0).unwrap();
    let grid = GridSpec::new(sq.clone(), 64, 64).unwrap();
    let g = solve_green(&grid, &Weight::constant(sq), pt(0.5, 0.5)).unwrap();
    for (x, y) in [(0.25, 0.25), (0.75, 0.3), (0.4, 0.8)] {
        let (i, j) = grid.nearest_node(pt(x, y)).unwrap();
        let p = grid.point(i as isize, j as isize);
        let oracle = square_green_single_sum(p, g.source(), 200);
        assert!((g.value_near(p).unwrap().re - oracle).abs() < 2e-3);
    }
}

#[test]
fn disk_green_against_pseudo_hyperbolic_distance() {
    let (c, r): (Complex64, f64) = (pt(0.5, -0.25), 1.5);
    for (z, w) in [(pt(0.7, 0.1), pt(0.2, -0.9)), (pt(1.2, -0.5), pt(0.4, 0.4))] {
        let (a, b) = ((z - c) / r, (w - c) / r);
        let oracle = -((a - b) / (Complex64::new(1.0, 0.0) - a * b.conj())).norm().ln();
        assert!((green_disk(c, r, z, w).unwrap() - oracle).abs() < 1e-14);
    }
    let g = GreenFunction::unit_disk();
    let (z, w) = (pt(0.3, 0.0), pt(0.0, 0.3));
    let direct = (Complex64::new(1.0, 0.0) - z * w.conj()).norm().ln() - (z - w).norm().ln();
    assert!((g.eval(z, w).unwrap() - direct).abs() < 1e-15);
}

#[test]
fn gram_kernel_on_disk_matches_series() {
    let d = Domain::unit_disk();
    let k = kernel_from_gram(
        &BasisSpec::monomials(30, d.clone()).unwrap(),
        &Weight::constant(d.clone()),
        &build_quadrature(&d, 40).unwrap(),
    )
    .unwrap();
    for (z, w) in [
        (pt(0.3, 0.1), pt(-0.2, 0.4)),
        (pt(0.0, 0.0), pt(0.5, 0.5)),
        (pt(-0.6, 0.1), pt(0.1, -0.65)),
    ] {
        let oracle = disk_kernel_series(z, w, 400);
        assert!((k.eval(z, w) - oracle).norm() < 1e-6 * oracle.norm());
        assert!((ClosedFormKernel::unit_disk().kernel(z, w) - oracle).norm() < 1e-12 * oracle.norm());
    }
}

#[test]
fn annulus_kernels_match_laurent_oracle() {
    let d = Domain::annulus(0.5, 1.0).unwrap();
    let k = kernel_from_gram(
        &BasisSpec::laurent(-15, 15, d.clone()).unwrap(),
        &Weight::constant(d.clone()),
        &build_quadrature(&d, 40).unwrap(),
    )
    .unwrap();
    let closed = ClosedFormKernel::for_domain(&d, (-15, 15)).unwrap();
    for (z, w) in [(pt(0.75, 0.0), pt(0.0, 0.7)), (pt(-0.6, 0.3), pt(0.5, -0.55))] {
        let oracle = annulus_kernel_oracle(0.5, 1.0, z, w, 15);
        assert!((k.eval(z, w) - oracle).norm() < 1e-8 * oracle.norm());
        assert!((closed.kernel(z, w) - oracle).norm() < 1e-12 * oracle.norm());
    }
}

#[test]
fn weighted_gram_kernel_matches_transform_oracle() {
    let d = Domain::unit_disk();
    let mu = Polynomial::new(vec![pt(2.0, 0.0), pt(1.0, 0.0)]);
    let w = Weight::holo_modulus_squared(mu.clone(), d.clone()).unwrap();
    let k = kernel_from_gram(
        &BasisSpec::monomials(30, d.clone()).unwrap(),
        &w,
        &build_quadrature(&d, 40).unwrap(),
    )
    .unwrap();
    for (z, p) in [(pt(0.2, 0.0), pt(-0.1, 0.0)), (pt(0.5, -0.3), pt(-0.4, 0.45))] {
        let oracle = disk_kernel_series(z, p, 400) / (mu.eval(z) * mu.eval(p).conj());
        assert!((k.eval(z, p) - oracle).norm() < 1e-7 * oracle.norm());
    }
}

#[test]
fn f32_pipeline_runs() {
    let d = Domain::<f32>::unit_disk();
    let k = kernel_from_gram(
        &BasisSpec::monomials(8, d.clone()).unwrap(),
        &Weight::constant(d.clone()),
        &build_quadrature(&d, 10).unwrap(),
    )
    .unwrap();
    let z = bergreen_core::scalar::c64::<f32>(0.2, 0.1);
    let exact = 1.0 / (PI * (1.0 - z.norm_sqr() as f64).powi(2));
    assert!((k.diagonal(z) as f64 - exact).abs() < 1e-3 * exact);
    let g = GreenFunction::<f32>::unit_disk()
        .eval(
            bergreen_core::scalar::c64(0.5, 0.0),
            bergreen_core::scalar::c64(0.0, 0.0),
        )
        .unwrap();
    assert!((g - std::f32::consts::LN_2).abs() < 1e-6);
}
