use bergreen::config::StudyParameter;
use bergreen::{run, ExperimentConfig, RunError, RunOutput};

fn run_json(json: &str) -> RunOutput {
    run(&ExperimentConfig::from_json(json).unwrap()).unwrap()
}

fn study(json: &str) -> (RunOutput, bergreen::convergence::ConvergenceTable) {
    let out = run_json(json);
    let t = out.report.convergence.last().cloned().expect("convergence table");
    (out, t)
}

#[test]
fn fd_step_study_has_order_two() {
    let (out, t) = study(
        r#"{"experiment": "green", "domain": {"kind": "unit_disk"},
            "points": {"kind": "random", "count": 10, "seed": 4}, "min_separation": 0.2,
            "study": {"parameter": "fd_step", "values": [8e-3, 4e-3, 2e-3, 1e-3]}}"#,
    );
    assert_eq!(t.parameter, StudyParameter::FdStep);
    assert!((t.fitted_order - 2.0).abs() < 0.3, "order {}", t.fitted_order);
    assert!(out.passed());
    assert!(out.table("study_fd_step.csv").is_some());
}

#[test]
fn basis_order_study_decreases_geometrically() {
    let (out, t) = study(
        r#"{"experiment": "kernel", "domain": {"kind": "unit_disk"}, "margin": 0.5,
            "points": {"kind": "random", "count": 10, "seed": 4},
            "study": {"parameter": "basis_order", "values": [10, 20, 30]}}"#,
    );
    assert!(t.decreasing());
    let q = t.geometric_rate.unwrap();
    assert!(q < 1.0, "rate {q}");
    assert!(out.passed());
}

#[test]
fn grid_resolution_study_order() {
    let (out, t) = study(
        r#"{"experiment": "pde-green", "domain": {"kind": "rectangle", "params": [0, 1, 0, 1]}, "grid_resolution": 64,
            "points": {"kind": "explicit", "pairs": [[[0.5, 0.5], [0.3, 0.62]], [[0.4, 0.4], [0.6, 0.57]]]},
            "study": {"parameter": "grid_resolution", "values": [16, 32, 64]}}"#,
    );
    assert!(t.fitted_order >= 1.5, "order {}", t.fitted_order);
    assert!(out.passed());
}

#[test]
fn diagonal_pair_is_noted_and_skipped() {
    let out = run_json(
        r#"{"experiment": "verify-identity", "domain": {"kind": "unit_disk"},
            "points": {"kind": "explicit", "pairs": [[[0.1, 0.2], [0.1, 0.2]], [[0.3, 0.1], [-0.2, 0.4]]]}}"#,
    );
    assert!(out.passed());
    assert_eq!(out.table("identity.csv").unwrap().len(), 1);
    let note = out
        .report
        .records
        .iter()
        .find(|r| r.index == 0)
        .and_then(|r| r.note.clone())
        .unwrap();
    assert!(note.contains("diagonal"), "{note}");
}

#[test]
fn exhaustion_table_matches_scaled_disks() {
    let out = run_json(
        r#"{"experiment": "exhaust", "domain": {"kind": "unit_disk"}, "exhaustion_steps": 6,
            "tolerances": {"generic": 0.011},
            "points": {"kind": "explicit", "pairs": [[[0, 0], [0, 0]]]}}"#,
    );
    assert!(out.passed());
    assert_eq!(out.table("exhaust.csv").unwrap().len(), 6);
}

#[test]
fn annulus_exhaustion_kernel_gap_shrinks() {
    let out = run_json(
        r#"{"experiment": "exhaust", "domain": {"kind": "annulus", "params": [0.4, 1]}, "exhaustion_steps": 6,
            "tolerances": {"generic": 0.1},
            "points": {"kind": "explicit", "pairs": [[[0.7, 0], [0.7, 0]], [[0.6, 0.2], [0.5, -0.4]]]}}"#,
    );
    assert!(out.passed(), "{:?}", out.report.checks);
}

#[test]
fn distance_and_green_experiments_pass() {
    for exp in ["distance", "green"] {
        let out = run_json(&format!(
            r#"{{"experiment": "{exp}", "domain": {{"kind": "disk", "params": [0.5, -0.5, 2]}},
                "points": {{"kind": "random", "count": 8, "seed": 2}}}}"#
        ));
        assert!(out.passed(), "{exp}: {:?}", out.report.checks);
    }
}

#[test]
fn moebius_disk_identity() {
    let out = run_json(
        r#"{"experiment": "verify-identity", "domain": {"kind": "moebius_disk", "params": [0.3, 0.2, 0.5]},
            "points": {"kind": "random", "count": 8, "seed": 2}}"#,
    );
    assert!(out.passed(), "{:?}", out.report.checks);
}

#[test]
fn log_harmonic_weight_identity_and_gauge() {
    let weight = r#""weight": {"representation": "log_harmonic", "coefficients": [[0, 0], [0.5, 0.25]], "domain": {"kind": "unit_disk"}}"#;
    for exp in ["verify-identity", "gauge-experiment"] {
        let out = run_json(&format!(
            r#"{{"experiment": "{exp}", "domain": {{"kind": "unit_disk"}}, {weight},
                "points": {{"kind": "random", "count": 8, "seed": 3}}}}"#
        ));
        assert!(out.passed(), "{exp}: {:?}", out.report.checks);
    }
}

#[test]
fn grid_paths_reject_disks() {
    let cfg = ExperimentConfig::from_json(r#"{"experiment": "pde-green", "domain": {"kind": "unit_disk"}, "points": {"kind": "random", "count": 2, "seed": 1}}"#).unwrap();
    assert!(matches!(run(&cfg), Err(RunError::Config(_))));
}

#[test]
fn report_json_lists_csv_columns_and_assumptions() {
    let out = run_json(
        r#"{"experiment": "verify-identity", "domain": {"kind": "unit_disk"}, "points": {"kind": "random", "count": 3, "seed": 1}}"#,
    );
    let dir = tempfile::tempdir().unwrap();
    out.write_to(dir.path()).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert!(report["csv_columns"]["identity.csv"].as_array().unwrap().len() > 4);
    assert!(!report["assumptions"].as_array().unwrap().is_empty());
    for check in report["checks"].as_array().unwrap() {
        assert!(check["tolerance"].is_number());
    }
}
