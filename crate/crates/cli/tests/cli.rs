use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn linecurve(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_linecurve"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn linecurve")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn f(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn schema_errors_exit_2() {
    for name in ["malformed.json", "unknown_field.json"] {
        let out = linecurve(&["surface-info", &f(name)], &[]);
        assert_eq!(code(&out), 2, "{name}");
        assert!(!out.stderr.is_empty());
    }
    let out = linecurve(&["surface-info", &f("triaxial.json"), "--grid", "10"], &[]);
    assert_eq!(code(&out), 2);
    let out = linecurve(
        &["surface-info", &f("triaxial.json")],
        &[("LINECURVE_TOL_CORRECTOR", "fast")],
    );
    assert_eq!(code(&out), 2);
    let out = linecurve(
        &[
            "intersect",
            &f("sphere_up.json"),
            &f("sphere_down.json"),
            "--seed",
            "1,2,3",
        ],
        &[],
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn non_convex_exits_3() {
    let out = linecurve(&["surface-info", &f("harmonic_nonconvex.json")], &[]);
    assert_eq!(code(&out), 3);
    let out = linecurve(&["intersect", &f("harmonic_nonconvex.json"), &f("sphere_up.json")], &[]);
    assert_eq!(code(&out), 3);
}

#[test]
fn disjoint_and_touching_surfaces() {
    let out = linecurve(&["intersect", &f("sphere_up.json"), &f("sphere_far.json")], &[]);
    assert_eq!(code(&out), 4);
    let out = linecurve(&["intersect", &f("sphere_up.json"), &f("sphere_touch.json")], &[]);
    assert_eq!(code(&out), 5);
}

#[test]
fn missing_file_exits_6() {
    let out = linecurve(&["surface-info", "/nonexistent/config.json"], &[]);
    assert_eq!(code(&out), 6);
}

#[test]
fn sphere_census_is_degenerate() {
    let out = linecurve(&["surface-info", &f("sphere_up.json")], &[]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["degenerate_census"], true);
    assert!(report["foliation"]["surfaces"][0]["note"]
        .as_str()
        .unwrap()
        .contains("totally umbilic"));
}

#[test]
fn triaxial_census_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = linecurve(
        &[
            "surface-info",
            &f("triaxial.json"),
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.path().join("umbilics.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("xi_re,xi_im,index,residual"));
    assert_eq!(lines.count(), 4);
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["summary"]["umbilic_count"], 4);
    assert_eq!(report["summary"]["total_index"], 2.0);
}

#[test]
fn intersect_outputs_and_tolerance_echo() {
    let dir = tempfile::tempdir().unwrap();
    let out = linecurve(
        &[
            "intersect",
            &f("spheroid_a.json"),
            &f("spheroid_b.json"),
            "--step",
            "0.02",
            "--out",
            dir.path().to_str().unwrap(),
        ],
        &[("LINECURVE_TOL_CONSTANT_ANGLE", "1e-9")],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "u,s,x,y,z,xi1_re,xi1_im,xi2_re,xi2_im,alpha,A1,A2,beta,phi1,phi2,tau_g1,tau_g2,defect_final,defect_sigma_kappa"
    );
    assert!(!csv.contains('\r'));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["tolerances"]["step"], 0.02);
    assert_eq!(report["tolerances"]["constant_angle"], 1e-9);
    assert_eq!(report["verification"]["parity_verdict"], "ConsistentBothOrientable");
    assert_eq!(report["configs"].as_array().unwrap().len(), 2);
}

#[test]
fn generic_pair_is_not_applicable_but_succeeds() {
    let out = linecurve(&["intersect", &f("triaxial.json"), &f("sphere_offset.json")], &[]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["verification"]["parity_verdict"]["NotApplicable"].is_string());
    assert_eq!(report["verification"]["constant_angle"], false);
}

#[test]
fn explicit_seed_traces_the_same_curve() {
    // a point of the circle z = 0 on both spheres of radius 1 centred at z = +-0.5:
    // (sqrt(3)/2, 0, 0) with normals (sqrt 3/2, 0, -1/2) and (sqrt 3/2, 0, 1/2)
    let xi1 = 3f64.sqrt() / 2.0 / (1.0 - 0.5);
    let xi2 = 3f64.sqrt() / 2.0 / (1.0 + 0.5);
    let seed = format!("{xi1},0,{xi2},0");
    let out = linecurve(
        &[
            "intersect",
            &f("sphere_up.json"),
            &f("sphere_down.json"),
            "--seed",
            &seed,
        ],
        &[],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let length = report["summary"]["length"].as_f64().unwrap();
    assert!((length - std::f64::consts::PI * 3f64.sqrt()).abs() < 1e-6);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = linecurve(&["intersect", &f("harmonic.json"), &f("sphere_offset.json")], &[]);
    let b = linecurve(&["intersect", &f("harmonic.json"), &f("sphere_offset.json")], &[]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}
