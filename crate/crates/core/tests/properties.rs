use std::f64::consts::PI;
use std::sync::LazyLock;

use proptest::prelude::*;

use bergreen_core::bergman::{extremal_function, kernel_from_gram, BasisSpec, KernelApproximation};
use bergreen_core::calculus::richardson_laplacian;
use bergreen_core::geometry::{build_quadrature, exhaustion_sequence, integrate};
use bergreen_core::green::{weighted_green, wirtinger_mixed, wirtinger_mixed_richardson, GreenFunction};
use bergreen_core::linalg::hermitian_eigenvalues;
use bergreen_core::weights::{check_admissible, solve_gauge};
use bergreen_core::{Complex64, Domain, MoebiusMap, Polynomial, Weight};

fn pt(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mu() -> Polynomial {
    Polynomial::new(vec![pt(2.0, 0.0), pt(1.0, 0.0)])
}

static DISK_KERNEL: LazyLock<KernelApproximation<f64>> = LazyLock::new(|| {
    let d = Domain::unit_disk();
    kernel_from_gram(
        &BasisSpec::monomials(30, d.clone()).unwrap(),
        &Weight::constant(d.clone()),
        &build_quadrature(&d, 40).unwrap(),
    )
    .unwrap()
});

static WEIGHTED_KERNEL: LazyLock<KernelApproximation<f64>> = LazyLock::new(|| {
    let d = Domain::unit_disk();
    kernel_from_gram(
        &BasisSpec::monomials(30, d.clone()).unwrap(),
        &Weight::holo_modulus_squared(mu(), d.clone()).unwrap(),
        &build_quadrature(&d, 40).unwrap(),
    )
    .unwrap()
});

static ANNULUS_KERNEL: LazyLock<KernelApproximation<f64>> = LazyLock::new(|| {
    let d = Domain::annulus(0.5, 1.0).unwrap();
    kernel_from_gram(
        &BasisSpec::laurent(-15, 15, d.clone()).unwrap(),
        &Weight::constant(d.clone()),
        &build_quadrature(&d, 40).unwrap(),
    )
    .unwrap()
});

/// Points with `|z| <= rmax`.
fn disk_point(rmax: f64) -> impl Strategy<Value = Complex64> {
    (0.0..rmax, 0.0..2.0 * PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn distinct_pair(rmax: f64, sep: f64) -> impl Strategy<Value = (Complex64, Complex64)> {
    (disk_point(rmax), disk_point(rmax)).prop_filter("separated", move |(z, w)| (z - w).norm() >= sep)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn disk_quadrature_is_exact(m in 0u32..6, n in 0u32..6) {
        let rule = build_quadrature(&Domain::unit_disk(), 6).unwrap();
        let v = integrate(&rule, |z: Complex64| z.powu(m) * z.conj().powu(n)).unwrap();
        let exact = if m == n { PI / (m + 1) as f64 } else { 0.0 };
        prop_assert!((v - pt(exact, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn rectangle_quadrature_is_exact(a in 0i32..8, b in 0i32..8) {
        let rule = build_quadrature(&Domain::rectangle(-0.5, 1.0, 0.0, 2.0).unwrap(), 8).unwrap();
        let v = integrate(&rule, |z: Complex64| pt(z.re.powi(a) * z.im.powi(b), 0.0)).unwrap();
        let ix = (1.0f64.powi(a + 1) - (-0.5f64).powi(a + 1)) / (a + 1) as f64;
        let iy = 2.0f64.powi(b + 1) / (b + 1) as f64;
        prop_assert!((v.re - ix * iy).abs() < 1e-10 * (1.0 + (ix * iy).abs()));
    }

    #[test]
    fn exhaustions_are_nested(count in 1usize..8, r in 0.05..0.9f64) {
        prop_assert!(exhaustion_sequence(&Domain::unit_disk(), count).unwrap().is_monotone(64));
        prop_assert!(exhaustion_sequence(&Domain::annulus(r, 1.0).unwrap(), count).unwrap().is_monotone(64));
    }

    #[test]
    fn moebius_round_trip(a in disk_point(0.9), theta in 0.0..2.0 * PI, z in disk_point(1.0)) {
        let m = MoebiusMap::new(a, theta).unwrap();
        prop_assert!((m.inverse(m.forward(z)) - z).norm() < 1e-13);
    }

    #[test]
    fn holomorphic_weight_is_modulus_squared(re in -3.0..3.0f64, im in -3.0..3.0f64, z in disk_point(1.0)) {
        prop_assume!(pt(re, im).norm() > 1.1);
        let m = Polynomial::new(vec![pt(re, im), pt(1.0, 0.0)]);
        let w = Weight::holo_modulus_squared(m.clone(), Domain::unit_disk()).unwrap();
        prop_assert!((w.eval(z).unwrap() - m.eval(z).norm_sqr()).abs() < 1e-14 * m.eval(z).norm_sqr().max(1.0));
    }

    #[test]
    fn gauge_residuals_are_small(re in -3.0..3.0f64, im in -3.0..3.0f64, c1 in -0.5..0.5f64) {
        prop_assume!(pt(re, im).norm() > 1.2);
        let m = Polynomial::new(vec![pt(re, im), pt(1.0, c1)]);
        prop_assume!(m.roots().iter().all(|r| r.norm() > 1.2));
        let w = Weight::holo_modulus_squared(m, Domain::unit_disk()).unwrap();
        let rule = build_quadrature(&Domain::unit_disk(), 4).unwrap();
        let r = solve_gauge(&w).unwrap().residuals(&rule).unwrap();
        prop_assert!(r.log_derivative < 1e-8);
        prop_assert!(r.antiholomorphic < 1e-12);
        prop_assert!(r.decomposition < 1e-10);
    }

    #[test]
    fn admissibility_is_monotone(scale in 1.0..4.0f64, a in 0.2..1.5f64) {
        let d = Domain::unit_disk();
        let small = Weight::holo_modulus_squared(mu(), d.clone()).unwrap();
        let big = Weight::holo_modulus_squared(mu().scale(pt(scale, 0.0)), d.clone()).unwrap();
        let step = Domain::disk(pt(0.0, 0.0), 0.75).unwrap();
        if check_admissible(&small, a, &step).unwrap().admissible {
            prop_assert!(check_admissible(&big, a, &step).unwrap().admissible);
        }
    }

    #[test]
    fn kernel_is_hermitian((z, w) in distinct_pair(0.7, 0.0)) {
        for k in [&*DISK_KERNEL, &*WEIGHTED_KERNEL] {
            prop_assert!((k.eval(z, w) - k.eval(w, z).conj()).norm() < 1e-12 * k.eval(z, w).norm().max(1.0));
        }
    }

    #[test]
    fn kernel_matrix_is_psd(points in prop::collection::vec(disk_point(0.7), 6)) {
        for k in [&*DISK_KERNEL, &*WEIGHTED_KERNEL] {
            let eig = hermitian_eigenvalues(&k.matrix(&points));
            prop_assert!(eig[0] >= -1e-9, "{eig:?}");
        }
        let ring: Vec<Complex64> = points.iter().map(|p| Complex64::from_polar(0.6 + 0.3 * p.norm() / 0.7, p.arg())).collect();
        prop_assert!(hermitian_eigenvalues(&ANNULUS_KERNEL.matrix(&ring))[0] >= -1e-9);
    }

    #[test]
    fn truncated_diagonal_is_nondecreasing(z in disk_point(0.9)) {
        let k = &*WEIGHTED_KERNEL;
        let mut prev = 0.0;
        for n in 1..=k.order() {
            let v = k.eval_truncated(z, z, n).re;
            prop_assert!(v >= prev - 1e-12 * v.abs());
            prev = v;
        }
    }

    #[test]
    fn smaller_disk_has_larger_kernel(r1 in 0.3..1.0f64, dr in 0.0..1.0f64, t in 0.0..0.95f64, theta in 0.0..2.0 * PI) {
        let r2 = r1 + dr;
        let z = Complex64::from_polar(t * r1, theta);
        let k = |r: f64| r * r / (PI * (r * r - z.norm_sqr()).powi(2));
        let k1 = bergreen_core::bergman::disk_kernel(pt(0.0, 0.0), r1, z, z).re;
        let k2 = bergreen_core::bergman::disk_kernel(pt(0.0, 0.0), r2, z, z).re;
        prop_assert!((k1 - k(r1)).abs() <= 1e-12 * k1);
        prop_assert!(k1 >= k2);
    }

    #[test]
    fn weighted_kernel_transform((z, w) in distinct_pair(0.7, 0.0)) {
        let lhs = WEIGHTED_KERNEL.eval(z, w) * mu().eval(z) * mu().eval(w).conj();
        prop_assert!((lhs - DISK_KERNEL.eval(z, w)).norm() < 1e-6 * DISK_KERNEL.eval(z, w).norm());
    }

    #[test]
    fn extremal_norm_times_diagonal(t in disk_point(0.7), annulus in any::<bool>(), weighted in any::<bool>()) {
        let k = if annulus {
            &*ANNULUS_KERNEL
        } else if weighted {
            &*WEIGHTED_KERNEL
        } else {
            &*DISK_KERNEL
        };
        let t = if annulus { Complex64::from_polar(0.6 + 0.3 * t.norm() / 0.7, t.arg()) } else { t };
        let phi = extremal_function(k, t).unwrap();
        prop_assert!((phi.norm_sq * k.diag(t) - 1.0).abs() < 1e-8);
        prop_assert!((phi.value(t) - pt(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn green_vanishes_on_boundary(w in disk_point(0.9), cx in -1.0..1.0f64, r in 0.5..2.0f64) {
        let c = pt(cx, -0.5 * cx);
        let g = GreenFunction::disk(c, r).unwrap();
        let w = c + w * r;
        for zb in Domain::disk(c, r).unwrap().boundary_points(64) {
            prop_assert!(g.eval(zb, w).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn green_symmetric_and_positive((z, w) in distinct_pair(0.99, 1e-6), a in disk_point(0.8), theta in 0.0..2.0 * PI) {
        let t = bergreen_core::green::moebius_transport(GreenFunction::unit_disk(), MoebiusMap::new(a, theta).unwrap()).unwrap();
        for g in [GreenFunction::unit_disk(), t] {
            let (gzw, gwz) = (g.eval(z, w).unwrap(), g.eval(w, z).unwrap());
            prop_assert!((gzw - gwz).abs() < 1e-12 * gzw.abs().max(1.0));
            prop_assert!(gzw > 0.0);
        }
    }

    #[test]
    fn harmonic_part_is_harmonic(z in disk_point(0.7), w in disk_point(0.7)) {
        let g = GreenFunction::unit_disk();
        let in_z = richardson_laplacian(|p| g.harmonic_part(p, w).unwrap(), z, 1e-3);
        let in_w = richardson_laplacian(|p| g.harmonic_part(z, p).unwrap(), w, 1e-3);
        prop_assert!(in_z.abs() < 1e-6 && in_w.abs() < 1e-6, "{in_z} {in_w}");
        prop_assert!((g.harmonic_part(z, w).unwrap() - g.harmonic_part(w, z).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn mixed_derivative_of_green_equals_that_of_h((z, w) in distinct_pair(0.7, 0.2)) {
        let g = GreenFunction::unit_disk();
        let step = 1e-3;
        let dg = wirtinger_mixed_richardson(|a, b| pt(g.eval(a, b).unwrap(), 0.0), z, w, step);
        let dh = wirtinger_mixed_richardson(|a, b| pt(g.harmonic_part(a, b).unwrap(), 0.0), z, w, step);
        prop_assert!((dg - dh).norm() < 2.0 * step * step, "{}", (dg - dh).norm());
        prop_assert!((dh - g.mixed_derivative(z, w).unwrap()).norm() < 1e-6);
    }

    #[test]
    fn gauge_factors_out_of_mixed_derivative((z, w) in distinct_pair(0.7, 0.2)) {
        let weight = Weight::holo_modulus_squared(mu(), Domain::unit_disk()).unwrap();
        let gauge = solve_gauge(&weight).unwrap();
        let gr = weighted_green(GreenFunction::unit_disk(), gauge.clone()).unwrap();
        let g = GreenFunction::unit_disk();
        let step = 1e-3;
        let lhs = wirtinger_mixed(|a, b| gr.eval(a, b).unwrap(), z, w, step);
        let rhs = gauge.eval(z) * gauge.eval(w).conj() * wirtinger_mixed(|a, b| pt(g.eval(a, b).unwrap(), 0.0), z, w, step);
        prop_assert!((lhs - rhs).norm() < 1e-4 * rhs.norm(), "{}", (lhs - rhs).norm() / rhs.norm());
    }

    #[test]
    fn harnack_and_kernel_convergence(z in disk_point(0.4), w in disk_point(0.4)) {
        let ex = exhaustion_sequence(&Domain::unit_disk(), 6).unwrap();
        let mut prev_h = f64::NEG_INFINITY;
        let mut prev_err = f64::INFINITY;
        let k_limit = bergreen_core::bergman::disk_kernel(pt(0.0, 0.0), 1.0, z, w);
        for step in &ex.steps {
            let (c, r) = step.as_disk().unwrap();
            if z.norm().max(w.norm()) >= r {
                continue;
            }
            let h = GreenFunction::disk(c, r).unwrap().harmonic_part(z, w).unwrap();
            prop_assert!(h >= prev_h);
            prev_h = h;
            let err = (bergreen_core::bergman::disk_kernel(c, r, z, w) - k_limit).norm();
            prop_assert!(err <= prev_err);
            prev_err = err;
        }
        let h0 = GreenFunction::disk(pt(0.0, 0.0), 1.0 - 1.0 / 64.0).unwrap().harmonic_part(pt(0.0, 0.0), pt(0.0, 0.0)).unwrap();
        prop_assert!((h0 - (1.0f64 - 1.0 / 64.0).ln()).abs() < 1e-15);
    }
}
