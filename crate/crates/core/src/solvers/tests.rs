use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::*;
use crate::assembly::{assemble, AssemblyOptions, HermitianSystem};
use crate::error::Error;
use crate::hho::FieldSpec;
use crate::mesh::{generate_cartesian, Point, Rectangle};

fn laplacian(n: usize, k: usize) -> HermitianSystem {
    let m = generate_cartesian(Rectangle::unit(), n, n).unwrap();
    assemble(&m, k, &FieldSpec::zero(), AssemblyOptions::default()).unwrap()
}

fn magnetic(n: usize, k: usize) -> HermitianSystem {
    let m = generate_cartesian(Rectangle::centered(1.0), n, n).unwrap();
    let f = FieldSpec::new(
        "sym",
        Arc::new(|p: Point| [-p[1], p[0]]),
        Arc::new(|_| 0.0),
        Arc::new(|p: Point| 0.5 * (p[0] * p[0] + p[1] * p[1])),
        2f64.sqrt(),
        1.0,
    );
    assemble(&m, k, &f, AssemblyOptions::default()).unwrap()
}

fn opts(method: EigenMethod, n_eig: usize) -> EigenOptions {
    EigenOptions {
        n_eig,
        method,
        ..EigenOptions::default()
    }
}

#[test]
fn shift_invert_matches_dense_oracle() {
    for sys in [laplacian(8, 1), magnetic(8, 1), magnetic(6, 2)] {
        let d = lowest_eigenpairs(&sys, &opts(EigenMethod::Dense, 6)).unwrap();
        let s = lowest_eigenpairs(&sys, &opts(EigenMethod::ShiftInvert, 6)).unwrap();
        assert_eq!(s.method, EigenMethod::ShiftInvert);
        for (a, b) in d.values.iter().zip(&s.values) {
            assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{a} vs {b}");
        }
        assert!(s.residuals.iter().chain(&d.residuals).all(|&r| r <= 1e-8));
        for v in &s.vectors {
            assert!((sys.l2_norm_cells(v) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn degenerate_pair_of_the_square_is_found() {
    let sys = laplacian(8, 1);
    let s = lowest_eigenpairs(&sys, &opts(EigenMethod::ShiftInvert, 4)).unwrap();
    let v = &s.values;
    assert!((v[1] - v[2]).abs() < 1e-8 * v[1], "{v:?}");
    assert!(v[3] > v[2] * 1.2);
    assert!((v[1] / v[0] - 2.5).abs() < 0.05);
    let g = sys.mass.form(&s.vectors[1], &s.vectors[2]);
    assert!(g.norm() < 1e-8);
}

#[test]
fn ground_state_of_the_unit_square() {
    let sys = laplacian(16, 1);
    let s = lowest_eigenpairs(&sys, &opts(EigenMethod::Auto, 1)).unwrap();
    assert_eq!(s.method, EigenMethod::ShiftInvert);
    assert!((s.values[0] / (2.0 * PI * PI) - 1.0).abs() < 1e-4, "{}", s.values[0]);
}

#[test]
fn invalid_eigen_options_are_rejected() {
    let sys = laplacian(2, 0);
    assert!(matches!(
        lowest_eigenpairs(&sys, &opts(EigenMethod::Dense, 0)),
        Err(Error::InvalidConfig(_))
    ));
    assert!(matches!(
        lowest_eigenpairs(&sys, &opts(EigenMethod::Dense, 5)),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn time_grid_divides_the_interval() {
    let g = TimeGrid::new(2.5e-3, 1.49).unwrap();
    assert_eq!(g.n_steps, 596);
    assert!((g.time(g.n_steps) - 1.49).abs() < 1e-13);
    let g = TimeGrid::new(0.3, 1.0).unwrap();
    assert_eq!(g.n_steps, 4);
    assert_eq!(g.dt, 0.25);
    assert!(TimeGrid::new(0.0, 1.0).is_err());
    assert_eq!(TimeGrid::new(0.1, 0.0).unwrap().n_steps, 0);
}

fn random_state(sys: &HermitianSystem, seed: u64) -> Vec<C64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<C64> = (0..sys.n_dof())
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    // project onto the range of the solution operator so face values are consistent
    let f = Factorization::new(&sys.stiffness).unwrap();
    f.solve(&sys.mass.matvec(&v)).unwrap()
}

#[test]
fn crank_nicolson_conserves_mass_and_energy() {
    let sys = magnetic(6, 1);
    let psi0 = random_state(&sys, 3);
    let m0 = sys.mass.form(&psi0, &psi0).re;
    let e0 = sys.stiffness.form(&psi0, &psi0).re;
    let grid = TimeGrid::new(0.01, 0.5).unwrap();
    let mut worst: f64 = 0.0;
    let psi = evolve(&sys, &psi0, grid, None, |_, _, p| {
        worst = worst.max((sys.mass.form(p, p).re / m0 - 1.0).abs());
        Ok(())
    })
    .unwrap();
    assert!(worst < 1e-12, "{worst}");
    let e1 = sys.stiffness.form(&psi, &psi).re;
    assert!((e1 / e0 - 1.0).abs() < 1e-11);
}

#[test]
fn crank_nicolson_is_time_reversible() {
    let sys = magnetic(5, 1);
    let psi0 = random_state(&sys, 4);
    let fwd = CrankNicolson::new(&sys, 0.02).unwrap();
    let bwd = CrankNicolson::new(&sys, -0.02).unwrap();
    let mut psi = psi0.clone();
    for _ in 0..10 {
        psi = fwd.step(&psi, None).unwrap();
    }
    for _ in 0..10 {
        psi = bwd.step(&psi, None).unwrap();
    }
    let scale = psi0.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (a, b) in psi.iter().zip(&psi0) {
        assert!((a - b).norm() < 1e-11 * scale);
    }
}

#[test]
fn eigenvector_acquires_the_discrete_phase() {
    let sys = magnetic(4, 1);
    let e = lowest_eigenpairs(&sys, &opts(EigenMethod::Dense, 2)).unwrap();
    let (lambda, v) = (e.values[1], &e.vectors[1]);
    let dt = 0.05;
    let grid = TimeGrid::new(dt, 1.0).unwrap();
    let psi = evolve(&sys, v, grid, None, |_, _, _| Ok(())).unwrap();
    let i = C64::new(0.0, 1.0);
    let g = (i / dt + lambda / 2.0) / (i / dt - lambda / 2.0);
    let factor = g.powu(grid.n_steps as u32);
    for (a, b) in psi.iter().zip(v) {
        assert!((a - factor * b).norm() < 1e-10);
    }
    // compare with the exact phase exp(-i lambda t)
    let exact = (-i * lambda).exp();
    assert!((factor - exact).norm() < lambda.powi(3) * dt * dt);
}

#[test]
fn source_term_converges_at_second_order() {
    // psi(t) = sin(t) v solves i M psi' = K psi - F with F = (lambda sin t - i cos t) M v
    let sys = magnetic(4, 1);
    let e = lowest_eigenpairs(&sys, &opts(EigenMethod::Dense, 1)).unwrap();
    let (lambda, v) = (e.values[0], e.vectors[0].clone());
    let mv = sys.mass.matvec(&v);
    let source = move |t: f64| -> Vec<C64> {
        let c = C64::new(lambda * t.sin(), -t.cos());
        mv.iter().map(|z| c * z).collect()
    };
    let t_end = 1.0;
    let err = |dt: f64| {
        let zero = vec![C64::new(0.0, 0.0); sys.n_dof()];
        let grid = TimeGrid::new(dt, t_end).unwrap();
        let psi = evolve(&sys, &zero, grid, Some(&source), |_, _, _| Ok(())).unwrap();
        let d: Vec<C64> = psi.iter().zip(&v).map(|(a, b)| a - b * t_end.sin()).collect();
        sys.l2_norm_cells(&d)
    };
    let (e1, e2) = (err(0.1), err(0.05));
    let rate = (e1 / e2).log2();
    assert!((rate - 2.0).abs() < 0.1, "rate {rate} ({e1}, {e2})");
}

#[test]
fn non_finite_source_is_reported_with_the_step() {
    let sys = laplacian(2, 0);
    let n = sys.n_dof();
    let source = move |t: f64| -> Vec<C64> { vec![C64::new(if t > 0.2 { f64::NAN } else { 0.0 }, 0.0); n] };
    let psi0 = vec![C64::new(1.0, 0.0); n];
    let r = evolve(&sys, &psi0, TimeGrid::new(0.1, 1.0).unwrap(), Some(&source), |_, _, _| Ok(()));
    assert!(matches!(r, Err(Error::NonFinite { step: 3 })), "{r:?}");
}
