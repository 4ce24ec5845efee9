mod common;

use common::{maghho, parse_coo, read};

#[test]
fn converge_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = maghho(&["converge", "--k", "1", "--levels", "2,4", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path().join("convergence.csv"));
    assert_eq!(csv.lines().next(), Some("h,ndof,err1h,rate1h,errL2,rateL2,seconds"));
    assert_eq!(csv.lines().count(), 3);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), csv);
    let json: serde_json::Value = serde_json::from_str(&read(dir.path().join("convergence.json"))).unwrap();
    assert_eq!(json["k"], 1);
    assert!(json["rows"][0]["rate_1h"].is_null());
    assert!(json["rows"][1]["rate_1h"].as_f64().unwrap() > 1.0);
}

#[test]
fn invalid_mesh_file_fails_loudly() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mesh");
    // clockwise cell
    std::fs::write(&bad, "dim 2\nvertices 3\n0 0\n0 1\n1 0\ncells 1\n3 0 1 2\n").unwrap();
    let o = maghho(&["converge", "--mesh", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("error:"), "{err}");

    let missing = dir.path().join("missing.mesh");
    let o = maghho(&["eigen", "--mesh", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    std::fs::write(&bad, "dim 2\nvertices two\n").unwrap();
    let o = maghho(&["check", "--mesh", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn out_of_range_degree_is_rejected() {
    let o = maghho(&["converge", "--k", "4", "--levels", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dump_system_writes_zero_based_coo() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = maghho(&["converge", "--k", "0", "--levels", "3", "--dump-system", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let k = parse_coo(&read(dir.path().join("K_level0.coo")));
    let m = parse_coo(&read(dir.path().join("M_level0.coo")));
    // 9 cells and 12 interior faces at k = 0
    let n = 9 + 12;
    assert_eq!(k.iter().map(|e| e.0.min(e.1)).min(), Some(0));
    assert_eq!(k.iter().map(|e| e.0.max(e.1)).max(), Some(n - 1));
    assert!(m.iter().all(|e| e.0 < 9 && e.1 < 9 && e.3 == 0.0));
    let get = |i: usize, j: usize| k.iter().find(|e| e.0 == i && e.1 == j).map(|e| (e.2, e.3));
    for &(i, j, re, im) in &k {
        let (re_t, im_t) = get(j, i).expect("symmetric pattern");
        assert!((re - re_t).abs() <= 1e-12 * re.abs().max(1.0) && (im + im_t).abs() <= 1e-12 * im.abs().max(1.0));
    }
}

#[test]
fn eigen_and_gauge_dev_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = maghho(&["eigen", "--levels", "4,6", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path().join("eigen.csv"));
    assert_eq!(csv.lines().next(), Some("h,ndof,lambda0,lambda1,lambda2,lambda3,lambda4,rel_err,rate"));
    let o = maghho(&["gauge-dev", "--k", "0", "--levels", "4,6", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path().join("gauge_dev.csv"));
    assert_eq!(csv.lines().next(), Some("h,dev_smooth,rate_smooth,dev_landau,rate_landau"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn check_reports_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = maghho(&["check", "--k", "2", "--levels", "2,3", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.lines().all(|l| l.starts_with("PASS")));
    let json: serde_json::Value = serde_json::from_str(&read(dir.path().join("check.json"))).unwrap();
    assert!(!json["items"].as_array().unwrap().is_empty());
}

#[test]
fn ab_small_run_writes_screen_and_frames() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = maghho(&[
        "ab", "--levels", "30,12", "--flux", "0.5pi", "--dt", "0.01", "--t-end", "0.05", "--out", out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let screen = read(dir.path().join("screen_flux_0.5pi.csv"));
    assert_eq!(screen.lines().next(), Some("y,intensity"));
    assert_eq!(screen.lines().count(), 401);
    assert!(dir.path().join("density_flux_0.5pi_t0.vtk").exists());
    assert!(dir.path().join("ab.json").exists());
    let o = maghho(&["ab", "--levels", "30"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_accepts_a_punctured_mesh_file() {
    use maghho::mesh::{generate_punctured, write_mesh, PuncturedOptions, Rectangle};
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("punctured.mesh");
    let opts = PuncturedOptions::new(Rectangle::new([-2.0, -1.0], [2.0, 1.0]), 16, 8, [0.0, 0.0], 0.5);
    write_mesh(&generate_punctured(&opts).unwrap(), std::fs::File::create(&path).unwrap()).unwrap();
    let o = maghho(&["check", "--k", "1", "--mesh", path.to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout.contains("mesh_face_ratio"));
}
