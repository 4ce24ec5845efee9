use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::hho::FieldSpec;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn close(a: Point, b: Point, tol: f64) -> bool {
    (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol
}

#[test]
fn gauge_formulas() {
    let d = Rectangle::centered(4.0);
    let sym = gauge(Gauge::Sym, 1.0, d);
    assert_eq!((sym.field.a)([1.0, 0.0]), [0.0, 0.5]);
    assert!((sym.field.a_inf - 0.5 * 32f64.sqrt()).abs() < 1e-14);
    let lan = gauge(Gauge::Landau, 1.0, d);
    assert_eq!((lan.field.a)([0.3, 2.0]), [-2.0, 0.0]);
    assert!((lan.field.a_inf - 4.0).abs() < 1e-14);
    for g in Gauge::ALL {
        assert_eq!(g.name().parse::<Gauge>().unwrap(), g);
    }
    assert!("coulomb".parse::<Gauge>().is_err());
}

proptest! {
    #[test]
    fn gauges_differ_by_gradients(x in -4.0..4.0f64, y in -4.0..4.0f64, b in -3.0..3.0f64) {
        let p = [x, y];
        let sym = Gauge::Sym.potential(b, p);
        for g in Gauge::ALL {
            let a = g.potential(b, p);
            let gc = g.grad_chi(b, p);
            prop_assert!(close(a, [sym[0] + gc[0], sym[1] + gc[1]], 1e-14));
            // grad chi against a central difference of chi
            let h = 1e-6;
            let fd = [
                (g.chi(b, [x + h, y]) - g.chi(b, [x - h, y])) / (2.0 * h),
                (g.chi(b, [x, y + h]) - g.chi(b, [x, y - h])) / (2.0 * h),
            ];
            prop_assert!(close(gc, fd, 1e-8));
        }
        let lan = Gauge::Landau.potential(b, p);
        prop_assert!(close([lan[0] - sym[0], lan[1] - sym[1]], [-0.5 * b * y, -0.5 * b * x], 1e-14));
        let sm = Gauge::Smooth.potential(b, p);
        prop_assert!(close([sm[0] - sym[0], sm[1] - sym[1]], [0.1, 0.1], 1e-14));
    }
}

#[test]
fn fock_darwin_reference_values() {
    let s3 = 3f64.sqrt();
    assert!((fock_darwin_energy(0, 0, 1.0, 1.0) - s3).abs() < 1e-15);
    assert!((fock_darwin_energy(0, 1, 1.0, 1.0) - (2.0 * s3 - 1.0)).abs() < 1e-15);
    assert!((fock_darwin_energy(0, -1, 1.0, 1.0) - (2.0 * s3 + 1.0)).abs() < 1e-15);
    let c = FockDarwinConfig::default();
    assert_eq!(c.ground_energy(), s3);
    let e = c.lowest_energies(5);
    assert!((e[1] - (2.0 * s3 - 1.0)).abs() < 1e-14);
    assert!(e.windows(2).all(|w| w[0] <= w[1]));
    // the reference never reads A
    for g in Gauge::ALL {
        let f = c.field(g);
        assert_eq!(f.v_inf, 16.0);
        assert!((f.spectral_floor() + f.a_inf * f.a_inf + 16.0).abs() < 1e-12);
    }
}

#[test]
fn harmonic_potential_values() {
    let v = harmonic_potential(2.0);
    assert_eq!(v([0.0, 0.0]), 0.0);
    assert_eq!(v([1.0, 1.0]), 4.0);
    let sup = sup_on_grid(Rectangle::centered(3.0), |p| v(p).abs());
    assert!((sup - 4.0 * 9.0).abs() < 1e-12);
}

#[test]
fn ab_potential_values_and_guard() {
    let f = ab_vector_potential(PI, 0.5, 0.5);
    assert!(close((f.a)([1.0, 0.0]), [0.0, 0.5], 1e-16));
    assert!((f.a)([0.1, 0.1])[0].is_nan());
    assert!(matches!(ab_try_eval(PI, 0.5, [0.1, 0.0]), Err(Error::InsideSolenoid { .. })));
    assert!(ab_try_eval(PI, 0.5, [0.3, 0.0]).is_ok());
    assert!((f.a_inf - 1.0).abs() < 1e-15);
}

#[test]
fn ab_circulation_equals_flux() {
    for flux in [PI, -0.7, 2.5] {
        let f = ab_vector_potential(flux, 0.5, 0.5);
        let n = 1024;
        let mut circ = 0.0;
        for j in 0..n {
            let t = 2.0 * PI * j as f64 / n as f64;
            let a = (f.a)([t.cos(), t.sin()]);
            circ += (-a[0] * t.sin() + a[1] * t.cos()) * 2.0 * PI / n as f64;
        }
        assert!((circ - flux).abs() < 1e-10);
    }
}

#[test]
fn ab_potential_is_curl_and_divergence_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let flux = PI;
    for _ in 0..100 {
        let p = loop {
            let q: Point = [rng.random_range(-5.0..5.0), rng.random_range(-2.0..2.0)];
            if q[0].hypot(q[1]) > 0.5 {
                break q;
            }
        };
        let j = ab_jacobian(flux, p);
        assert!((j[1][0] - j[0][1]).abs() < 1e-12);
        assert!((j[0][0] + j[1][1]).abs() < 1e-12);
        let h = 1e-6;
        let a = |q: Point| ab_try_eval(flux, 0.5, q).unwrap();
        let fd = (a([p[0] + h, p[1]])[1] - a([p[0] - h, p[1]])[1]) / (2.0 * h);
        assert!((fd - j[1][0]).abs() < 1e-6);
    }
}

#[test]
fn gaussian_packet_properties() {
    let c = AbConfig::default();
    let psi = c.packet();
    assert!((psi([c.x0, 0.0]).norm() - 1.0).abs() < 1e-15);
    for t in [0.3, 1.1, 2.0] {
        let r = 0.7;
        let a = psi([c.x0 + r * f64::cos(t), r * f64::sin(t)]).norm();
        let b = psi([c.x0 + r, 0.0]).norm();
        assert!((a - b).abs() < 1e-14);
    }
    // |psi|^2 integrates to pi sigma^2 over the plane
    let n = 800;
    let half = 8.0 * c.sigma;
    let h = 2.0 * half / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = [c.x0 - half + (i as f64 + 0.5) * h, -half + (j as f64 + 0.5) * h];
            s += psi(p).norm_sqr() * h * h;
        }
    }
    assert!((s.sqrt() - c.sigma * PI.sqrt()).abs() < 1e-10);
}

/// `((-i grad - A)^2 + V) u` by central differences of the flux
/// `-i grad u - A u`, step `h`.
fn apply_operator_fd(case: &ManufacturedCase, p: Point, h: f64) -> C64 {
    let f = &case.field;
    let w = |q: Point, c: usize| covariant_gradient_exact((f.a)(q), (case.u)(q), (case.grad_u)(q))[c];
    let mut out = (f.v)(p) * (case.u)(p);
    for c in 0..2 {
        let mut qp = p;
        let mut qm = p;
        qp[c] += h;
        qm[c] -= h;
        out += -I * (w(qp, c) - w(qm, c)) / (2.0 * h) - (f.a)(p)[c] * w(p, c);
    }
    out
}

#[test]
fn manufactured_source_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let zero = ManufacturedCase::sine_product(FieldSpec::zero(), [0.0, 0.0]);
    let cst = 0.7;
    let shifted = ManufacturedCase::sine_product(
        FieldSpec::new(
            "const",
            std::sync::Arc::new(move |_| [cst, 0.0]),
            std::sync::Arc::new(|_| 0.0),
            std::sync::Arc::new(|_| 0.0),
            cst,
            0.0,
        ),
        [0.0, 0.0],
    );
    let (f0, f1) = (zero.source(), shifted.source());
    for _ in 0..50 {
        let p = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
        let u = (zero.u)(p);
        assert!((f0(p) - 2.0 * PI * PI * u).norm() < 1e-12);
        let ux = (zero.grad_u)(p)[0];
        let expect = 2.0 * PI * PI * u + 2.0 * I * cst * ux + cst * cst * u;
        assert!((f1(p) - expect).norm() < 1e-12);
    }
}

#[test]
fn manufactured_source_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in [ManufacturedCase::standard(), ManufacturedCase::polynomial()] {
        let f = case.source();
        for _ in 0..100 {
            let p = [rng.random_range(0.05..0.95), rng.random_range(0.05..0.95)];
            let fd = apply_operator_fd(&case, p, 1e-5);
            let exact = f(p);
            assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0), "{fd} vs {exact}");
            // the gradient closure against differences of u
            let h = 1e-6;
            let g = (case.grad_u)(p);
            let gx = ((case.u)([p[0] + h, p[1]]) - (case.u)([p[0] - h, p[1]])) / (2.0 * h);
            assert!((gx - g[0]).norm() < 1e-8);
        }
    }
}

#[test]
fn manufactured_solutions_vanish_on_the_boundary() {
    for case in [ManufacturedCase::standard(), ManufacturedCase::polynomial()] {
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            for p in [[t, 0.0], [t, 1.0], [0.0, t], [1.0, t]] {
                assert!((case.u)(p).norm() < 1e-15);
            }
        }
    }
}

#[test]
fn continuous_covariance_oracle() {
    // (-i grad - A - grad chi)(e^{i chi} u) = e^{i chi} (-i grad - A) u
    let case = ManufacturedCase::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for g in Gauge::ALL {
        for _ in 0..100 {
            let p = [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)];
            let (u, gu) = ((case.u)(p), (case.grad_u)(p));
            let a = Gauge::Sym.potential(1.0, p);
            let phase = C64::from_polar(1.0, g.chi(1.0, p));
            let gc = g.grad_chi(1.0, p);
            let u_chi = phase * u;
            let grad_u_chi = [phase * (gu[0] + I * gc[0] * u), phase * (gu[1] + I * gc[1] * u)];
            let lhs = covariant_gradient_exact(g.potential(1.0, p), u_chi, grad_u_chi);
            let rhs = covariant_gradient_exact(a, u, gu);
            for c in 0..2 {
                assert!((lhs[c] - phase * rhs[c]).norm() < 1e-12);
            }
        }
    }
}
