use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosserat"))
        .args(args)
        .env_remove("COSSERAT_THREADS")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn interval_for_the_square() {
    let s = stdout(&["interval", "--omega", "90deg"]);
    assert_eq!(s, "lo=0.1816901138 hi=0.8183098862\nbeta_upper=0.4262512\n");
    let rad = stdout(&["interval", "--omega", "1.5707963267948966rad"]);
    assert_eq!(s, rad);
}

#[test]
fn interval_json_for_a_polygon() {
    let s = stdout(&["interval", "--polygon", "90,90,90,90", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    let iv = &v["intervals"][0];
    assert!((iv[0].as_f64().unwrap() - (0.5 - 1.0 / std::f64::consts::PI)).abs() < 1e-15);
    assert_eq!(v["includes_one"], true);
    assert_eq!(v["intervals"].as_array().unwrap().len(), 1);
}

#[test]
fn validation_errors_exit_with_two() {
    for args in [
        &["interval", "--omega", "90"][..],
        &["interval", "--omega", "0deg"],
        &["scan2d", "--sigma-range", "0:1.5"],
        &["cone", "--omega-grid", "10deg:180deg:3"],
        &["fem", "--a", "0"],
        &["fem", "--a", "0.2", "--deg-u", "2", "--deg-p", "2"],
        &["bounds", "--a-grid", "0,0.5"],
        &["fem", "--a", "0.2", "--mesh", "cells:4"],
    ] {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn non_convergence_exits_with_three() {
    let out = run(&[
        "fem",
        "--a",
        "0.2",
        "--mesh",
        "level:3",
        "--method",
        "lanczos",
        "--max-iter",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn single_element_report() {
    let s = stdout(&["fem", "--a", "1", "--mesh", "uniform:1", "--num-eigs", "2"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["kernel_dim"], 2);
    assert_eq!(v["spaces"]["ndof_p"], 4);
    for e in v["eigs"].as_array().unwrap() {
        assert!((e["sigma"].as_f64().unwrap() - 5.0 / 12.0).abs() < 1e-12);
    }
    assert!(v["timings"].is_null());
}

#[test]
fn fem_csv_is_deterministic() {
    let args = [
        "fem",
        "--a",
        "0.2",
        "--mesh",
        "level:2",
        "--format",
        "csv",
        "--num-eigs",
        "3",
    ];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("a,level,deg_u,deg_p,j,sigma"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&first[..5], &["0.2", "2", "2", "1", "1"]);
    assert!((first[5].parse::<f64>().unwrap() - 0.0313746).abs() < 1e-6);
}

#[test]
fn fem_levels_study() {
    let s = stdout(&["fem", "--a", "0.5", "--levels", "1,2,3", "--num-eigs", "1"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 3);
    assert_eq!(v["trends"][0]["j"], 1);
}

#[test]
fn field_export_has_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("field.csv");
    stdout(&[
        "fem",
        "--a",
        "0.5",
        "--mesh",
        "level:2",
        "--field-out",
        path_str(&f),
        "--field-samples",
        "5x3",
        "--num-eigs",
        "1",
    ]);
    let text = std::fs::read_to_string(&f).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,p,ux,uy"));
    assert_eq!(lines.count(), 15);
}

#[test]
fn scan2d_header_and_row_count() {
    let s = stdout(&[
        "scan2d",
        "--omega-range",
        "90deg:270deg",
        "--sigma-range",
        "0.1:0.9",
        "--steps",
        "3x2",
    ]);
    let mut lines = s.lines();
    assert_eq!(
        lines.next(),
        Some("omega_rad,sigma,branch,kind,root_re,root_im,status")
    );
    assert!(lines.count() >= 12);
}

#[test]
fn scan2d_json_matches_csv_count() {
    let csv = stdout(&["scan2d", "--steps", "3"]);
    let json = stdout(&["scan2d", "--steps", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v.as_array().unwrap().len(), csv.lines().count() - 1);
}

#[test]
fn cone_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("cone.csv");
    stdout(&[
        "cone",
        "--m",
        "0,1",
        "--omega-grid",
        "60deg:150deg:4",
        "--sigma-grid",
        "0:1:11",
        "--out",
        path_str(&f),
    ]);
    let text = std::fs::read_to_string(&f).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("m,omega_deg,sigma,in_region,num_roots,min_abs_det,first_root_t")
    );
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    assert_eq!(rows.len(), 2 * 4 * 11);
    assert!(rows
        .iter()
        .any(|r| r[0] == "0" && r[1] == "150.0" && r[2] == "0.7" && r[3] == "true"));
}

#[test]
fn bounds_table_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("bounds.svg");
    let s = stdout(&["bounds", "--a-grid", "0.1:0.5:5", "--svg", path_str(&svg)]);
    let mut lines = s.lines();
    assert_eq!(
        lines.next(),
        Some("a,lower_hp,upper_rect,upper_co,upper_cuboid,upper_dobrowolski,beta_lower,beta_upper")
    );
    assert_eq!(lines.count(), 5);
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert!(doc.starts_with("<svg"));
    assert_eq!(doc.matches("<polyline").count(), 3);
    for name in ["lower_hp", "upper_rect", "upper_co"] {
        assert!(doc.contains(&format!("data-name=\"{name}\"")));
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["scan2d", "--steps", "4"];
    let one = Command::new(env!("CARGO_BIN_EXE_cosserat"))
        .args(["--threads", "1"])
        .args(args)
        .output()
        .unwrap();
    let two = Command::new(env!("CARGO_BIN_EXE_cosserat"))
        .args(["--threads", "2"])
        .args(args)
        .output()
        .unwrap();
    assert!(one.status.success() && two.status.success());
    assert_eq!(one.stdout, two.stdout);
}
