use maghho::assembly::{assemble, AssemblyOptions};
use maghho::experiments::operator_exactness;
use maghho::functional::{quadrature_polygon, Polynomial};
use maghho::mesh::{
    generate_punctured, random_polygon, signed_area, single_cell_mesh, validate, PuncturedOptions, Rectangle,
    ValidateOptions,
};
use maghho::physics::{AbConfig, FockDarwinConfig, Gauge};
use maghho::solvers::{CrankNicolson, TimeGrid};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn punctured(cx: f64, cy: f64, r: f64, n: usize) -> PuncturedOptions {
    let mut o = PuncturedOptions::new(Rectangle::centered(1.0), n, n, [cx, cy], r);
    o.hole_segments = 12;
    o
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn polygon_quadrature_is_exact_to_its_order(seed in any::<u64>(), n in 3usize..9, order in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let poly = random_polygon(&mut rng, n);
        let area = signed_area(&poly);
        let center = poly.iter().fold([0.0, 0.0], |c, p| [c[0] + p[0] / n as f64, c[1] + p[1] / n as f64]);
        let scale = poly.iter().map(|p| (p[0] - center[0]).hypot(p[1] - center[1])).fold(0.0, f64::max);
        let f = Polynomial::random(&mut rng, order, center, scale);
        let lo = quadrature_polygon(&poly, center, order);
        let hi = quadrature_polygon(&poly, center, order + 6);
        // cancellation in both area formulas grows with the distance from the origin
        let reach = scale * (scale + center[0].hypot(center[1]));
        prop_assert!((lo.measure() - area).abs() <= 1e-13 * reach, "{} vs {area}", lo.measure());
        let (a, b): (C64, C64) = (lo.integrate(|p| f.eval(p)), hi.integrate(|p| f.eval(p)));
        let size: f64 = hi.integrate(|p| f.eval(p).norm());
        prop_assert!((a - b).norm() <= 1e-12 * size, "{a} vs {b}");
    }

    #[test]
    fn local_operators_are_exact_on_polynomials(seed in any::<u64>(), n in 3usize..11, k in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = single_cell_mesh(random_polygon(&mut rng, n)).unwrap();
        let d = operator_exactness(&mesh, 0, k, seed).unwrap();
        prop_assert!(d.max() <= 1e-10, "{d:?}");
    }

    #[test]
    fn punctured_meshes_are_admissible(cx in -0.3..0.3f64, cy in -0.3..0.3f64, r in 0.15..0.6f64, n in 4usize..16) {
        // grids too coarse for the hole are rejected by design
        prop_assume!(2.0 / n as f64 <= r);
        let opts = punctured(cx, cy, r, n);
        let mesh = generate_punctured(&opts).unwrap();
        prop_assert!(validate(&mesh, &ValidateOptions::default()).is_valid());
        let hole = signed_area(&opts.hole_polygon());
        prop_assert!((mesh.total_measure() - (4.0 - hole)).abs() <= 1e-12);
    }

    #[test]
    fn stiffness_is_hermitian_and_bounded_below(
        cx in -0.3..0.3f64, cy in -0.3..0.3f64, r in 0.2..0.6f64, k in 0usize..3, flux in -4.0..4.0f64, seed in any::<u64>()
    ) {
        // hole at the origin, where the potential is singular
        let mut opts = punctured(0.0, 0.0, r, 10);
        opts.bounds = Rectangle::new([-1.0 - cx, -1.0 - cy], [1.0 - cx, 1.0 - cy]);
        let mesh = generate_punctured(&opts).unwrap();
        let ab = AbConfig { flux, solenoid_radius: r, hole_segments: 12, ..Default::default() };
        let sys = assemble(&mesh, k, &ab.field(), AssemblyOptions::default()).unwrap();
        prop_assert!(sys.stiffness.hermitian_defect() <= 1e-14 * sys.stiffness.max_abs());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            prop_assert!(sys.rayleigh_quotient(&random_vector(&mut rng, sys.n_dof())) >= sys.spectral_floor);
        }
    }

    #[test]
    fn crank_nicolson_preserves_the_mass_norm(seed in any::<u64>(), dt in -0.5..0.5f64, k in 0usize..3) {
        prop_assume!(dt.abs() > 1e-3);
        let fd = FockDarwinConfig::default();
        let mesh = maghho::mesh::generate_cartesian(fd.domain(), 4, 4).unwrap();
        let sys = assemble(&mesh, k, &fd.field(Gauge::Landau), AssemblyOptions::default()).unwrap();
        let cn = CrankNicolson::new(&sys, dt).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut psi = random_vector(&mut rng, sys.n_dof());
        let m0 = sys.l2_norm_cells(&psi);
        for _ in 0..10 {
            psi = cn.step(&psi, None).unwrap();
        }
        prop_assert!((sys.l2_norm_cells(&psi) - m0).abs() <= 1e-12 * m0);
    }

    #[test]
    fn time_grid_lands_on_the_final_time(dt in 1e-4..1.0f64, t_end in 0.0..10.0f64) {
        let g = TimeGrid::new(dt, t_end).unwrap();
        prop_assert!(g.dt <= dt * (1.0 + 1e-12));
        prop_assert!((g.time(g.n_steps) - t_end).abs() <= 1e-12 * t_end.max(1.0));
    }
}
