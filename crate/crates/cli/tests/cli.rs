//! End-to-end tests driving the compiled `symres` binary.

use std::path::Path;
use std::process::{Command, Output};

fn symres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1) // column header
        .map(|l| l.split(',').map(|s| s.to_string()).collect())
        .collect()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn shots_convergence_default_config() {
    let output = symres(&["--experiment", "shots-convergence", "--seed", "42"]);
    assert!(output.status.success());
    let text = stdout(&output);
    // header embeds the resolved config and seed
    assert!(text.contains("# experiment = \"shots-convergence\""));
    assert!(text.contains("# seed = 42"));
    assert!(text.contains("N_e,estimate,exact,errbar"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 10); // 2^4 .. 2^13
    for row in &rows {
        // exact column constant at 70/256
        let exact: f64 = row[2].parse().unwrap();
        assert!((exact - 70.0 / 256.0).abs() < 1e-12);
        let n: f64 = row[0].parse().unwrap();
        let errbar: f64 = row[3].parse().unwrap();
        assert!((errbar - 1.0 / n.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn single_shot_estimates_are_plus_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "single.toml",
        "experiment = \"shots-convergence\"\nseed = 5\nshot_schedule = [1, 1, 1, 1]\n",
    );
    let output = symres(&["--config", &config]);
    assert!(output.status.success());
    for row in data_rows(&stdout(&output)) {
        let estimate: f64 = row[1].parse().unwrap();
        assert!(estimate == 1.0 || estimate == -1.0, "got {estimate}");
    }
}

#[test]
fn outputs_are_byte_identical_for_identical_config_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out in [&out_a, &out_b] {
        let output = symres(&[
            "--experiment",
            "shots-convergence",
            "--seed",
            "123",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success());
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn phase_scan_grid_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let output = symres(&[
        "--experiment",
        "phase-scan",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());

    let text = std::fs::read_to_string(&out).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 64 * 64);
    // the (0, 0) corner is the degenerate phi = mu point with value g + b = 1
    let corner = &rows[0];
    assert_eq!(corner[3], "true");
    let value: f64 = corner[2].parse().unwrap();
    assert!((value - 1.0).abs() < 1e-12);

    let sidecar = std::fs::read_to_string(dir.path().join("scan.points.csv")).unwrap();
    let points = data_rows(&sidecar);
    assert_eq!(points.len(), 3);
    let labelled: Vec<(&str, f64)> = points
        .iter()
        .map(|row| (row[0].as_str(), row[3].parse().unwrap()))
        .collect();
    assert_eq!(labelled[0].0, "good-weight");
    assert!((labelled[0].1 - 70.0 / 256.0).abs() < 1e-12);
    assert_eq!(labelled[1].0, "bad-weight");
    assert!((labelled[1].1 - 186.0 / 256.0).abs() < 1e-12);
    assert_eq!(labelled[2].0, "grover");
    assert!((labelled[2].1 - 116.0 / 256.0).abs() < 1e-12);
}

#[test]
fn sector_decomposition_number_weights() {
    let output = symres(&["--experiment", "sector-decomposition"]);
    assert!(output.status.success());
    let rows = data_rows(&stdout(&output));
    assert_eq!(rows.len(), 9);
    let binomials = [1.0, 8.0, 28.0, 56.0, 70.0, 56.0, 28.0, 8.0, 1.0];
    let mut total = 0.0;
    for (row, expected) in rows.iter().zip(binomials) {
        let lcu: f64 = row[1].parse().unwrap();
        let exact: f64 = row[2].parse().unwrap();
        assert!((lcu - expected / 256.0).abs() < 1e-10);
        assert!((exact - expected / 256.0).abs() < 1e-12);
        total += exact;
    }
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn sector_decomposition_spin_exact_mode() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "spin.toml",
        "experiment = \"sector-decomposition\"\nsymmetry = \"spin\"\ntrotter_steps = 0\n",
    );
    let output = symres(&["--config", &config]);
    assert!(output.status.success());
    let rows = data_rows(&stdout(&output));
    assert_eq!(rows.len(), 5); // S = 0..4 on 8 qubits
    for row in &rows {
        let lcu: f64 = row[1].parse().unwrap();
        let exact: f64 = row[2].parse().unwrap();
        assert!((lcu - exact).abs() < 1e-10, "S={} lcu={lcu} exact={exact}", row[0]);
    }
    // the S = 4 weight is 1/70 for this state
    let top: f64 = rows[4][2].parse().unwrap();
    assert!((top - 1.0 / 70.0).abs() < 1e-12);
}

#[test]
fn qvap_small_model_curve() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "qvap.toml",
        "experiment = \"qvap\"\nseed = 11\nn_levels = 4\npairs = 2\ng_values = [0.0, 0.4]\n",
    );
    let output = symres(&["--config", &config]);
    assert!(output.status.success());
    let rows = data_rows(&stdout(&output));
    assert_eq!(rows.len(), 2);
    // g = 0: the product state is exact
    let gap0: f64 = rows[0][3].parse().unwrap();
    assert!(gap0.abs() < 1e-6);
    for row in &rows {
        let energy: f64 = row[1].parse().unwrap();
        let exact: f64 = row[2].parse().unwrap();
        let gap: f64 = row[3].parse().unwrap();
        assert!((energy - exact - gap).abs() < 1e-12);
        assert!(gap >= -1e-9, "variational bound violated");
        assert!(gap.abs() / exact.abs() < 0.01);
    }
}

#[test]
fn json_format_embeds_config_and_rows() {
    let output = symres(&[
        "--experiment",
        "sector-decomposition",
        "--format",
        "json",
    ]);
    assert!(output.status.success());
    let document: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(document["config"]["experiment"], "sector-decomposition");
    assert_eq!(document["rows"].as_array().unwrap().len(), 9);
    let first = &document["rows"][0];
    assert!((first["weight_exact"].as_f64().unwrap() - 1.0 / 256.0).abs() < 1e-12);
}

#[test]
fn empty_sector_exits_nonzero_with_typed_name() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bad.toml",
        "experiment = \"qvap\"\nseed = 1\nn_levels = 4\npairs = 5\ng_values = [0.1]\n",
    );
    let output = symres(&["--config", &config]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("EMPTY_SECTOR"), "stderr: {stderr}");
}

#[test]
fn missing_seed_is_a_typed_error() {
    let output = symres(&["--experiment", "qvap"]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("MISSING_SEED"), "stderr: {stderr}");
}

#[test]
fn invalid_schedule_is_a_typed_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sched.toml",
        "experiment = \"shots-convergence\"\nseed = 3\nshot_schedule = []\n",
    );
    let output = symres(&["--config", &config]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("INVALID_SCHEDULE"), "stderr: {stderr}");
}

#[test]
fn unknown_experiment_is_rejected() {
    let output = symres(&["--experiment", "florble"]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("CONFIG"), "stderr: {stderr}");
}

#[test]
fn degenerate_oracle_phases_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "degen.toml",
        "experiment = \"shots-convergence\"\nseed = 3\nphi = 1.0\nmu = 1.0\n",
    );
    let output = symres(&["--config", &config]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("DEGENERATE_ORACLE"), "stderr: {stderr}");
}
