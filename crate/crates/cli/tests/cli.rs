use std::process::{Command, Output};

fn polcoul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polcoul")).args(args).output().expect("spawn polcoul")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = polcoul(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

#[test]
fn regimes_canonical_is_regime_one_with_one_finite_interval() {
    let v = json(&["regimes"]);
    assert_eq!(v["regime"], "I");
    let intervals = v["motion_intervals"].as_array().unwrap();
    assert_eq!(intervals.len(), 1);
    assert_eq!(intervals[0]["finite"], true);
    assert_eq!(v["turning_points"].as_array().unwrap().len(), 2);
}

#[test]
fn convention_flag_switches_r2_coefficient() {
    let shifted = json(&["regimes", "--convention", "section2"]);
    let bare = json(&["regimes", "--convention", "section4"]);
    assert_eq!(shifted["coefficients"][2].as_f64().unwrap(), 1.0);
    assert_eq!(bare["coefficients"][2].as_f64().unwrap(), 0.0);
    assert_eq!(bare["convention"], "bare");
}

#[test]
fn validation_errors_exit_one() {
    let out = polcoul(&["regimes", "--j", "-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-negative"));
    assert_eq!(polcoul(&["regimes", "--mass", "0"]).status.code(), Some(1));
    assert_eq!(polcoul(&["regimes", "--bogus"]).status.code(), Some(1));
    assert_eq!(polcoul(&["variational", "--kappa-range", "2", "1"]).status.code(), Some(1));
}

#[test]
fn degenerate_inputs_exit_two() {
    assert_eq!(polcoul(&["regimes", "--epsilon", "1"]).status.code(), Some(2));
    assert_eq!(polcoul(&["heun", "--alpha", "0"]).status.code(), Some(2));
}

#[test]
fn bifurcation_defaults() {
    let v = json(&["bifurcation"]);
    assert!((v["e_min"].as_f64().unwrap() - 0.614659).abs() < 1e-5);
    for key in ["r0", "a", "b2"] {
        assert!(v[key].is_f64(), "{key}");
    }
}

#[test]
fn bifurcation_repulsive_core_exits_three() {
    let out = polcoul(&["bifurcation", "--sigma", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no bifurcation in (-1,1)"));
}

#[test]
fn bifurcation_scan_csv() {
    let out = polcoul(&["bifurcation", "--scan", "0", "0.99", "25"]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["e", "residual"]);
    assert_eq!(rows.len(), 25);
    let es: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(es.windows(2).all(|w| w[1] > w[0]));
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["found"], true);
}

#[test]
fn variational_defaults_and_formats() {
    let v = json(&["variational", "--alpha", "1"]);
    assert!((v["e_star"].as_f64().unwrap() - 0.749279).abs() < 1e-4);
    assert!((v["kappa_star"].as_f64().unwrap() - 0.625342).abs() < 1e-4);
    let (header, rows) = csv_rows(&polcoul(&["variational", "--format", "csv"]));
    assert_eq!(header, ["key", "value"]);
    assert!(rows.iter().any(|r| r[0] == "e_star"));
}

#[test]
fn variational_curves_have_one_cell_per_root() {
    let (header, rows) = csv_rows(&polcoul(&["variational", "--curves", "--samples", "50"]));
    assert_eq!(header, ["kappa", "eps1", "eps2"]);
    assert_eq!(rows.len(), 50);
    for r in &rows {
        assert_eq!(r.len(), 3);
        if !r[1].is_empty() {
            assert!(r[1].parse::<f64>().unwrap() <= r[2].parse::<f64>().unwrap());
        }
    }
}

#[test]
fn variational_wavefunction_profile() {
    let (header, rows) = csv_rows(&polcoul(&["variational", "--wavefunction", "--samples", "100"]));
    assert_eq!(header, ["r", "C", "p_squared"]);
    assert_eq!(rows.len(), 100);
    let c: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let peak = c.iter().cloned().fold(0.0, f64::max);
    assert!(peak > 0.0 && c[0] < peak && c[99] < peak);
}

#[test]
fn heun_report() {
    let plus = json(&["heun"]);
    assert!(plus["constraint_residual"].as_f64().unwrap() < 1e-12);
    let mu = plus["mu"].as_array().unwrap();
    assert!((mu[0].as_f64().unwrap() - 6.506304).abs() < 1e-5);
    assert!((plus["gamma"][0].as_f64().unwrap() - 14.75488).abs() < 1e-4);
    let minus = json(&["heun", "--sign", "-"]);
    assert_eq!(minus["mu"][0].as_f64().unwrap(), -mu[0].as_f64().unwrap());
    assert_eq!(minus["mu"][1].as_f64().unwrap(), -mu[1].as_f64().unwrap());
}

#[test]
fn wavefunction_csv() {
    let out = polcoul(&["wavefunction", "--samples", "120"]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["r", "f", "C", "p_squared"]);
    assert_eq!(rows.len(), 120);
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    let e = report["e"].as_f64().unwrap();
    assert!(e > 0.614659 && e < 1.0);
    let rs: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(rs.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn wavefunction_without_binding_exits_three() {
    assert_eq!(polcoul(&["wavefunction", "--alpha", "0", "--match-r", "1"]).status.code(), Some(3));
    let out = polcoul(&["wavefunction", "--bracket", "0.65", "0.7"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reconstruct_csv_has_all_components() {
    let (header, rows) = csv_rows(&polcoul(&["reconstruct", "--samples", "40", "--sign", "-"]));
    assert_eq!(header.len(), 31);
    assert_eq!(header[1], "C_re");
    assert_eq!(header[30], "H3_im");
    assert_eq!(rows.len(), 40);
    let e1 = header.iter().position(|h| h == "E1_re").unwrap();
    assert!(rows.iter().all(|r| r[e1].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn output_is_deterministic_and_can_go_to_file() {
    let a = polcoul(&["regimes", "--epsilon", "0.9", "--j", "2"]);
    let b = polcoul(&["regimes", "--epsilon", "0.9", "--j", "2"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = std::env::temp_dir().join(format!("polcoul-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("v.json");
    let out = polcoul(&["variational", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"e_star\": 7.49278"));
    std::fs::remove_dir_all(&dir).unwrap();
}
