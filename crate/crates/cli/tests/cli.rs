//! End-to-end tests that drive the `remag` binary and check its exit codes,
//! console output, and file output against known values.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn remag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_remag"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_json(path: &PathBuf) -> Value {
    let text = std::fs::read_to_string(path).expect("output file should exist");
    serde_json::from_str(&text).expect("output should be valid JSON")
}

fn csv_rows(path: &PathBuf) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .expect("output file should exist")
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn magic_reports_single_qubit_value_on_console() {
    let out = remag(&["magic", "--state", "T"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("value: 0.342496"), "got: {text}");
    assert!(text.contains("method: analytic"), "got: {text}");
    assert!(text.contains("closest:"), "got: {text}");
}

#[test]
fn magic_two_qubit_json_matches_known_values() {
    let path = tmp("magic_tt.json");
    let out = remag(&["magic", "--state", "T*T", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = read_json(&path);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "magic");
    assert_eq!(doc["qubits"], 2);
    assert_eq!(doc["method"], "optimizer");
    let value = doc["value"].as_f64().unwrap();
    assert!((value - 0.6849938737683026).abs() < 3e-3, "value {value}");
    assert!(doc["gap"].as_f64().unwrap() <= 1e-6);
    assert!(doc["iterations"].as_u64().unwrap() > 0);

    let path2 = tmp("magic_psi2q.json");
    let out2 = remag(&[
        "magic",
        "--state",
        "psi2q",
        "--out",
        path2.to_str().unwrap(),
    ]);
    assert!(out2.status.success());
    let doc2 = read_json(&path2);
    let value2 = doc2["value"].as_f64().unwrap();
    assert!((value2 - 0.6780719051136704).abs() < 3e-3, "value {value2}");
}

#[test]
fn magic_rejects_unknown_state_with_usage_code() {
    let out = remag(&["magic", "--state", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn magic_rejects_csv_format() {
    let out = remag(&["magic", "--state", "T", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn heatmap_grid_has_expected_shape_and_peak() {
    let path = tmp("heatmap.csv");
    let out = remag(&[
        "heatmap",
        "--resolution",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // With 9 subdivisions the barycentric grid contains the exact center
    // of the positive facet at index (3,3,3), which is the global max.
    let notes = stdout(&out);
    assert!(notes.contains("at index (3,3,3)"), "got: {notes}");
    assert!(notes.contains("max value 0.342496"), "got: {notes}");

    let rows = csv_rows(&path);
    assert_eq!(
        rows[0],
        vec![
            "i",
            "j",
            "k",
            "x1",
            "x2",
            "x3",
            "value",
            "closest_x1",
            "closest_x2",
            "closest_x3"
        ]
    );
    assert_eq!(rows.len() - 1, 55, "triangular grid of side 10");
    for row in &rows[1..] {
        let value: f64 = row[6].parse().unwrap();
        assert!((0.0..=0.35).contains(&value));
    }
}

#[test]
fn heatmap_output_is_byte_identical_across_runs() {
    let a = tmp("heatmap_a.csv");
    let b = tmp("heatmap_b.csv");
    for path in [&a, &b] {
        let out = remag(&[
            "heatmap",
            "--resolution",
            "8",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
}

#[test]
fn rays_facet_includes_straight_centroid_ray() {
    let path = tmp("rays_facet.csv");
    let out = remag(&[
        "rays",
        "--face",
        "+++",
        "--resolution",
        "3",
        "--steps",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&path);
    assert_eq!(
        rows[0],
        vec![
            "ray",
            "kind",
            "face",
            "c",
            "sigma_x",
            "sigma_y",
            "sigma_z",
            "t_max",
            "t_max_alt",
            "t",
            "x1",
            "x2",
            "x3"
        ]
    );
    let ray0: Vec<_> = rows[1..].iter().filter(|r| r[0] == "0").collect();
    assert_eq!(ray0.len(), 5);
    for row in &ray0 {
        assert_eq!(row[1], "facet");
        assert_eq!(row[4], "0.3333333333333333");
        assert!(row[7].starts_with("1.0352761804100832"), "t_max {}", row[7]);
        assert!(
            row[8].is_empty(),
            "alternate endpoint column off by default"
        );
        // the center ray points along the symmetry axis, so all three
        // components stay equal along it
        assert_eq!(row[10], row[11]);
        assert_eq!(row[11], row[12]);
    }
    let last = ray0.last().unwrap();
    assert!(
        last[10].starts_with("0.5773502691896"),
        "endpoint {}",
        last[10]
    );
}

#[test]
fn rays_edge_alternate_endpoint_column() {
    let path = tmp("rays_edge.csv");
    let out = remag(&[
        "rays",
        "--face",
        "s1-s3",
        "--c",
        "0",
        "--resolution",
        "2",
        "--steps",
        "2",
        "--alternate-t",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&path);
    assert_eq!(rows.len() - 1, 2, "one ray of two points");
    let row = &rows[1];
    assert_eq!(row[1], "edge");
    assert_eq!(row[5], "0", "midpoint of an x-z edge has no y component");
    assert!(row[7].starts_with("1.0146118723545763"), "t_max {}", row[7]);
    assert!(!row[8].is_empty(), "alternate endpoint requested");
    assert!(row[8].starts_with("1.01461187"), "alt {}", row[8]);
}

#[test]
fn rays_rejects_vertex_face() {
    let out = remag(&["rays", "--face", "s1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_reports_violation_for_displaced_facet_pair() {
    let path = tmp("witness_violation.json");
    let out = remag(&[
        "witness",
        "--a",
        "facet:0.5,0.3,0.2",
        "--b",
        "facet:0.2,0.5,0.3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = read_json(&path);
    assert_eq!(doc["verdict"], "violation");
    let trace = doc["trace_value"].as_f64().unwrap();
    assert!(trace < -1e-9, "trace {trace}");
    assert!(doc["beta1"].is_f64(), "displacement parameter recorded");
    assert_eq!(doc["validation"]["valid"], false);
    assert_eq!(doc["gammas"].as_array().unwrap().len(), 2);
    assert_eq!(doc["components"].as_array().unwrap().len(), 2);
    let notes = stdout(&out);
    assert!(notes.contains("verdict: violation"), "got: {notes}");
}

#[test]
fn witness_confirms_none_found_for_product_of_centroid_rays() {
    let path = tmp("witness_none.json");
    let out = remag(&[
        "witness",
        "--a",
        "T",
        "--b",
        "T",
        "--confirm",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = read_json(&path);
    assert_eq!(doc["verdict"], "none-found");
    let trace = doc["trace_value"].as_f64().unwrap();
    assert!(trace > -1e-9, "trace {trace}");
    let gap = doc["optimizer_gap"].as_f64().unwrap();
    assert!(gap.abs() <= 1e-4, "gap {gap}");
    assert_eq!(doc["validation"]["valid"], true);
}

#[test]
fn witness_edge_pair_runs_parameter_scan() {
    let path = tmp("witness_edges.json");
    let out = remag(&[
        "witness",
        "--a",
        "edge:s1-s3:0.5:0.3",
        "--b",
        "edge:s1-s3:0.5:0.3",
        "--resolution",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = read_json(&path);
    let scan = &doc["edge_scan"];
    assert_eq!(scan["cells_scanned"], 16);
    assert_eq!(scan["cells_skipped"], 9);
    assert_eq!(scan["all_negative"], true);
    let best = scan["best_min_trace"].as_f64().unwrap();
    assert!(best < -1e-9, "best {best}");
}

#[test]
fn angle_sweep_starts_at_zero_and_grows() {
    let path = tmp("angle.csv");
    let out = remag(&["angle", "--samples", "12", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows = csv_rows(&path);
    assert_eq!(rows[0], vec!["r", "distance", "alpha"]);
    assert_eq!(rows.len() - 1, 12);
    assert_eq!(rows[1][2], "0", "tilt vanishes at the inscribed radius");
    let alphas: Vec<f64> = rows[1..].iter().map(|r| r[2].parse().unwrap()).collect();
    for pair in alphas.windows(2) {
        assert!(pair[1] > pair[0], "tilt grows with radius: {alphas:?}");
    }
    let notes = stdout(&out);
    assert!(notes.contains("fit: slope"), "got: {notes}");
}

#[test]
fn enumerate_counts_match_and_echo_seed() {
    let out = remag(&["enumerate", "--n", "2", "--seed", "7"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["count"], 60);
    assert_eq!(doc["expected"], 60);
    assert_eq!(doc["seed"], 7);
    assert!(doc["states"].is_null());

    let full = remag(&["enumerate", "--n", "1", "--full"]);
    assert!(full.status.success());
    let doc: Value = serde_json::from_str(&stdout(&full)).unwrap();
    assert_eq!(doc["count"], 6);
    let states = doc["states"].as_array().unwrap();
    assert_eq!(states.len(), 6);
    assert!(states[0]["label"].is_u64());
    assert_eq!(states[0]["matrix"].as_array().unwrap().len(), 2);
}

#[test]
fn enumerate_rejects_unsupported_width() {
    let out = remag(&["enumerate", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_path_exits_with_io_code() {
    let out = remag(&[
        "magic",
        "--state",
        "T",
        "--out",
        "/nonexistent-dir-for-test/x.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}
