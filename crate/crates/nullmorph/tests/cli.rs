//! Exit-code, determinism and file-format contracts of the `nullmorph`
//! binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nullmorph"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout should be JSON")
}

#[test]
fn missing_file_exits_1_with_diagnostic() {
    let out = run(&["kappa", "--curve", "/nonexistent/curve.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_error_exits_1() {
    let out = run(&["map-sd", "--map", "x.json"]); // missing target group
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_suite_exits_1() {
    let out = run(&["verify", "--suite", "no-such-suite", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn passing_suite_exits_0_and_failing_tolerance_exits_3() {
    let out = run(&["verify", "--suite", "roundtrip", "--trials", "20", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = run(&[
        "verify", "--suite", "roundtrip", "--trials", "10", "--seed", "7", "--tol", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_reports_are_deterministic_across_runs_and_threads() {
    let args = |threads: &str| {
        vec![
            "verify".to_string(),
            "--suite".into(),
            "causal-two-path".into(),
            "--trials".into(),
            "40".into(),
            "--seed".into(),
            "11".into(),
            "--json".into(),
            "--threads".into(),
            threads.to_string(),
        ]
    };
    let strip = |out: &Output| {
        let mut v = stdout_json(out);
        v.as_object_mut().unwrap().remove("wall_time_s");
        v
    };
    let a = bin().args(args("1")).output().unwrap();
    let b = bin().args(args("1")).output().unwrap();
    let c = bin().args(args("4")).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(strip(&a), strip(&b), "same config must give identical reports");
    assert_eq!(strip(&a), strip(&c), "thread count must not affect the report");
}

#[test]
fn identities_battery_passes() {
    let out = run(&["identities", "--trials", "200", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["pass_count"], v["trials"]);
}

#[test]
fn nonlocality_demo_reports_separation() {
    let out = run(&["nonlocality-demo", "--seed", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["degree2_tangent_distance"].as_f64().unwrap() > 1e-3);
    assert!(v["degree1_tangent_distance"].as_f64().unwrap() < 1e-10);
}

#[test]
fn curve_pipeline_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.json");
    let csv = dir.path().join("curve.csv");
    let out = run(&[
        "gen-curve", "--seed", "3", "--degree", "2",
        "--out", curve.to_str().unwrap(),
        "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    // serialized curve re-parses to the identical object
    let text = std::fs::read_to_string(&curve).unwrap();
    let parsed: nullmorph::io::CurveJson = serde_json::from_str(&text).unwrap();
    let reparsed = serde_json::to_string(&parsed).unwrap();
    let again: nullmorph::io::CurveJson = serde_json::from_str(&reparsed).unwrap();
    assert_eq!(parsed.to_curve().unwrap(), again.to_curve().unwrap());

    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("s_re,s_im,m00_re"));
    assert_eq!(csv_text.lines().count(), 33); // header + 32 samples

    let jet = dir.path().join("jet.json");
    let out = run(&[
        "kappa", "--curve", curve.to_str().unwrap(), "--at", "0.2,0.1",
        "--out", jet.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let jet_json: nullmorph::io::TwistorJetJson =
        serde_json::from_str(&std::fs::read_to_string(&jet).unwrap()).unwrap();
    assert_eq!(jet_json.order, 2);
}

fn write_identity_map(path: &Path) {
    let mut matrix = [[[0.0f64; 2]; 4]; 4];
    for (k, row) in matrix.iter_mut().enumerate() {
        row[k][0] = 1.0;
    }
    let value = serde_json::json!({ "kind": "degree1", "matrix": matrix });
    std::fs::write(path, serde_json::to_string(&value).unwrap()).unwrap();
}

#[test]
fn identity_map_reproduces_curve_samples() {
    let dir = tempfile::tempdir().unwrap();
    let curve_path = dir.path().join("curve.json");
    let map_path = dir.path().join("id.json");
    let out_path = dir.path().join("image.json");
    assert_eq!(
        run(&["gen-curve", "--seed", "9", "--out", curve_path.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    write_identity_map(&map_path);
    let out = run(&[
        "map-sd",
        "--map", map_path.to_str().unwrap(),
        "--curve", curve_path.to_str().unwrap(),
        "--samples", "6",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let image: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let curve = serde_json::from_str::<nullmorph::io::CurveJson>(
        &std::fs::read_to_string(&curve_path).unwrap(),
    )
    .unwrap()
    .to_curve()
    .unwrap();
    for sample in image["samples"].as_array().unwrap() {
        let s = sample["s"].as_array().unwrap();
        let s = nullmorph::C64::new(s[0].as_f64().unwrap(), s[1].as_f64().unwrap());
        let xi = &sample["xi"];
        let expected = curve.chi_value(s);
        for a in 0..2 {
            for b in 0..2 {
                let re = xi[a][b][0].as_f64().unwrap();
                let im = xi[a][b][1].as_f64().unwrap();
                let diff = (nullmorph::C64::new(re, im) - expected.m[a][b]).norm();
                assert!(diff <= 1e-12 * expected.m[a][b].norm().max(1.0));
            }
        }
    }
}

#[test]
fn sd_point_mode_reports_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let map_path = dir.path().join("map.json");
    assert_eq!(
        run(&["gen-map", "--kind", "degree2", "--seed", "2", "--out", map_path.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let point_path = dir.path().join("p.json");
    std::fs::write(
        &point_path,
        serde_json::to_string(&serde_json::json!({
            "x": [[[0.4, -0.1], [1.2, 0.3]], [[-0.7, 0.6], [0.9, 0.2]]],
            "pi": [[1.0, 0.0], [0.3, -0.8]],
        }))
        .unwrap(),
    )
    .unwrap();
    let out = run(&["map-sd", "--map", map_path.to_str().unwrap(), "--point", point_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v["residuals"]["pipeline_vs_closed_form"].as_f64().unwrap() < 1e-10);
    assert!(v["residuals"]["image_incidence"].as_f64().unwrap() < 1e-12);
}

#[test]
fn causal_point_mode_and_singular_input() {
    let dir = tempfile::tempdir().unwrap();
    let map_path = dir.path().join("causal.json");
    assert_eq!(
        run(&["gen-map", "--kind", "invariant", "--seed", "4", "--out", map_path.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );

    // a healthy null-direction point
    let gpoint = dir.path().join("g.json");
    std::fs::write(
        &gpoint,
        serde_json::to_string(&serde_json::json!({
            "x": [[[1.0, 0.2], [0.3, -0.1]], [[-0.4, 0.5], [1.1, 0.0]]],
            "v": [[[1.0, 0.0], [0.5, 0.5]], [[0.2, -0.3], [0.25, 0.1]]],
        }))
        .unwrap(),
    )
    .unwrap();
    // fix v to an exact rank-1 matrix: outer of (1, 0.2-0.3i) and (1, 0.5+0.5i)
    let mu = [nullmorph::C64::new(1.0, 0.0), nullmorph::C64::new(0.2, -0.3)];
    let pi = [nullmorph::C64::new(1.0, 0.0), nullmorph::C64::new(0.5, 0.5)];
    let v = nullmorph::SpacetimePoint::from_outer(mu, pi);
    let x = [[[1.0, 0.2], [0.3, -0.1]], [[-0.4, 0.5], [1.1, 0.0]]];
    std::fs::write(
        &gpoint,
        serde_json::to_string(&serde_json::json!({
            "x": x,
            "v": [
                [[v.m[0][0].re, v.m[0][0].im], [v.m[0][1].re, v.m[0][1].im]],
                [[v.m[1][0].re, v.m[1][0].im], [v.m[1][1].re, v.m[1][1].im]],
            ],
        }))
        .unwrap(),
    )
    .unwrap();
    let out = run(&[
        "map-causal",
        "--map", map_path.to_str().unwrap(),
        "--gpoint", gpoint.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v["residuals"]["two_path"].as_f64().unwrap() < 1e-9);

    // a singular base point (det x = 0) must exit 2
    let singular = dir.path().join("singular.json");
    std::fs::write(
        &singular,
        serde_json::to_string(&serde_json::json!({
            "x": [[[1.0, 0.0], [2.0, 0.0]], [[2.0, 0.0], [4.0, 0.0]]],
            "v": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
        }))
        .unwrap(),
    )
    .unwrap();
    let out = run(&[
        "map-causal",
        "--map", map_path.to_str().unwrap(),
        "--gpoint", singular.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}
