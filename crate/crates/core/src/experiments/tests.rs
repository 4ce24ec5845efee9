use super::*;
use crate::mesh::{random_polygon, single_cell_mesh};
use rand::SeedableRng;

#[test]
fn rates_are_log_ratios() {
    let h = [0.5, 0.25, 0.125];
    let e = [1.0, 0.25, 0.0625];
    let r = rates(&h, &e);
    assert!(r[0].is_nan());
    assert!((r[1] - 2.0).abs() < 1e-14 && (r[2] - 2.0).abs() < 1e-14);
}

#[test]
fn floats_carry_seventeen_digits() {
    let x = 0.1f64 + 0.2;
    let s = fmt_float(x);
    assert_eq!(s.parse::<f64>().unwrap(), x);
    assert_eq!(s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count(), 17);
    assert_eq!(fmt_float(f64::NAN), "nan");
}

#[test]
fn mesh_source_parsing() {
    assert_eq!(MeshSource::parse("cartesian", &[2, 4]), MeshSource::Cartesian { levels: vec![2, 4] });
    match MeshSource::parse("a.mesh,b.mesh", &[]) {
        MeshSource::Files { paths } => assert_eq!(paths.len(), 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn peaks_of_a_two_hump_profile() {
    let ys: Vec<f64> = (0..101).map(|i| -1.0 + 0.02 * i as f64).collect();
    let v: Vec<f64> = ys
        .iter()
        .map(|y| (-(y - 0.5f64).powi(2) * 50.0).exp() + 0.8 * (-(y + 0.5f64).powi(2) * 50.0).exp())
        .collect();
    let p = find_peaks(&ys, &v);
    assert_eq!(p.len(), 2);
    assert!((p[0].0 - 0.5).abs() < 1e-12 && (p[1].0 + 0.5).abs() < 1e-12);
    assert!(find_peaks(&ys[..2], &v[..2]).is_empty());
}

#[test]
fn vtk_round_trip() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mesh = single_cell_mesh(random_polygon(&mut rng, 7)).unwrap();
    let dens = [0.123456789012345678];
    let mut buf = Vec::new();
    write_vtk(&mesh, &[("density", &dens)], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let (n, fields) = read_vtk_cell_data(&text).unwrap();
    assert_eq!(n, 1);
    assert_eq!(fields["density"], vec![dens[0]]);
    assert!(write_vtk(&mesh, &[("density", &[1.0, 2.0])], Vec::new()).is_err());

    let grid = crate::mesh::generate_cartesian(Rectangle::unit(), 3, 2).unwrap();
    let vals: Vec<f64> = (0..6).map(|i| i as f64 / 7.0).collect();
    let mut buf = Vec::new();
    write_vtk(&grid, &[("a", &vals), ("b", &vals)], &mut buf).unwrap();
    let (n, fields) = read_vtk_cell_data(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(n, 6);
    assert_eq!(fields["a"], vals);
    assert_eq!(fields["b"], vals);
}

#[test]
fn gauge_deviation_of_a_spectrum_with_itself_is_zero() {
    let l = [1.0, 2.5, 3.1, 4.0, 4.4];
    assert_eq!(dev_error(&l, &l), 0.0);
    assert_eq!(dev_error(&l, &[1.0, 2.5, 3.0, 4.0, 4.4]), 0.1f64.max((3.1f64 - 3.0).abs()));
}

#[test]
fn degree_above_three_is_rejected() {
    let cfg = ConvergeConfig {
        common: CommonOptions { k: 4, ..Default::default() },
        ..Default::default()
    };
    assert!(matches!(cmd_converge(&cfg), Err(crate::Error::InvalidConfig(_))));
}

#[test]
fn polynomial_solution_is_reproduced_at_degree_three() {
    let cfg = ConvergeConfig {
        common: CommonOptions { k: 3, ..Default::default() },
        mesh: MeshSource::Cartesian { levels: vec![2, 3] },
        case: ManufacturedKind::Polynomial,
    };
    let r = cmd_converge(&cfg).unwrap();
    for row in &r.rows {
        assert!(row.err_1h < 1e-11 && row.err_l2 < 1e-12, "{row:?}");
    }
}

#[test]
fn convergence_csv_layout() {
    let cfg = ConvergeConfig {
        common: CommonOptions { k: 0, ..Default::default() },
        mesh: MeshSource::Cartesian { levels: vec![2, 4] },
        case: ManufacturedKind::Standard,
    };
    let r = cmd_converge(&cfg).unwrap();
    let csv = r.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "h,ndof,err1h,rate1h,errL2,rateL2,seconds");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].split(',').nth(3) == Some("nan"));
}

#[test]
fn check_passes_on_small_cartesian_meshes() {
    for k in 0..=3 {
        let cfg = CheckConfig {
            common: CommonOptions { k, ..Default::default() },
            mesh: MeshSource::Cartesian { levels: vec![2, 4] },
            ..Default::default()
        };
        let r = cmd_check(&cfg).unwrap_or_else(|e| panic!("k={k}: {e}"));
        for i in &r.items {
            assert!(i.passed, "k={k}: {i:?}");
        }
    }
}

#[test]
fn flux_parsing() {
    use std::f64::consts::PI;
    assert_eq!(parse_flux("pi").unwrap(), PI);
    assert_eq!(parse_flux("-pi").unwrap(), -PI);
    assert_eq!(parse_flux("0.5pi").unwrap(), 0.5 * PI);
    assert_eq!(parse_flux("2*pi").unwrap(), 2.0 * PI);
    assert_eq!(parse_flux(" 1.25 ").unwrap(), 1.25);
    assert!(parse_flux("tau").is_err());
    assert_eq!(flux_label(PI), "flux_1pi");
    assert_eq!(flux_label(0.0), "flux_0pi");
}
