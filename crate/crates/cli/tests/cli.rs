use std::path::Path;
use std::process::Command;

use phased_dicke_cli::config::SystemSpec;
use phased_dicke_cli::experiments::execute;
use phased_dicke_cli::{sidecar_path, Experiment, Grid, RunConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phased-dicke"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run_ok(args: &[&str]) {
    let out = bin().args(args).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn couplings_example_row() {
    let mut cfg = RunConfig::new(Experiment::Couplings);
    cfg.system.r12_over_lambda = 0.5;
    cfg.grids.r12_over_lambda = Some(Grid::Values(vec![0.5]));
    let t = execute(&cfg).unwrap();
    assert_eq!(t.rows.len(), 1);
    let row = &t.rows[0];
    assert_eq!(row[0], 0.5);
    assert!(row[2].abs() < 1e-15);
    assert!((row[3] - 0.3183).abs() < 1e-4);
}

#[test]
fn csv_has_comment_header_and_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    run_ok(&["--experiment", "couplings", "--out", out.to_str().unwrap()]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().next().unwrap().starts_with("# phased-dicke"));
    assert!(text.contains("# column 3: gamma12 [gamma]"));
    let lines = data_lines(&text);
    assert_eq!(lines[0], "r12_over_lambda,zeta_over_pi,gamma12,omega12,phi");
    assert_eq!(lines.len(), 1 + 226);
    for cell in lines[1].split(',') {
        let mantissa = cell.split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "{cell}");
        let _: f64 = cell.parse().unwrap();
    }
}

#[test]
fn identical_configs_give_identical_bytes_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.json",
        r#"{"experiment": "spectrum",
            "system": {"r12_over_lambda": 0.125, "rabi_g": 0.1},
            "grids": {"zeta_over_pi": [0.0, 0.25, 0.5], "detuning": {"start": -3, "stop": 3, "points": 121}}}"#,
    );
    let mut outputs = Vec::new();
    for threads in ["1", "4", "4"] {
        let out = dir.path().join(format!("s{}.csv", outputs.len()));
        run_ok(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", threads]);
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
    assert_eq!(data_lines(std::str::from_utf8(&outputs[0]).unwrap()).len(), 1 + 3 * 121);
}

#[test]
fn sidecar_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "p.json",
        r#"{"experiment": "scan-population",
            "system": {"zeta_over_pi": 0.0},
            "grids": {"rabi_g": {"start": 0.05, "stop": 1.0, "points": 12}},
            "metadata": {"note": "ignored"}}"#,
    );
    let first = dir.path().join("first.csv");
    run_ok(&["--config", cfg.to_str().unwrap(), "--out", first.to_str().unwrap(), "--seed", "5"]);
    let meta_path = sidecar_path(&first);
    let meta = RunConfig::load(&meta_path).unwrap();
    assert!(meta.metadata.is_some());
    assert_eq!(meta.grids.zeta_over_pi, Some(Grid::Values(vec![0.0])));

    let second = dir.path().join("second.csv");
    run_ok(&["--config", meta_path.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    let meta_text = std::fs::read_to_string(&meta_path).unwrap();
    assert!(meta_text.contains("\"seed\": 5"));
    assert!(meta_text.contains("\"tolerances\""));
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    run_ok(&[
        "--experiment",
        "steady",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["experiment"], "steady");
    assert_eq!(v["columns"][0]["name"], "zeta_over_pi");
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn stdout_when_no_output_path() {
    let out = bin().args(["--experiment", "couplings"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# phased-dicke"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"experiment": "spectrum", "sytem": {}}"#,
        r#"{"experiment": "fourier"}"#,
        "{\n  \"experiment\": \"steady\",\n  \"system\": {\"rabi_g\": \"x\"}\n}",
        r#"{"experiment": "evolve", "grids": {"time": [0.0, 2.0, 1.0]}}"#,
        r#"{"experiment": "evolve", "grids": {"time": []}}"#,
        r#"{"experiment": "steady", "system": {"zeta_over_pi": 1.5}}"#,
        r#"{"experiment": "spectrum", "system": {"rabi_g": 0.0}}"#,
        r#"{"experiment": "scan-correlation", "grids": {"r12_over_lambda": [0.0, 0.1]}}"#,
    ];
    for (k, body) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("bad{k}.json"), body);
        let out = bin().args(["--config", cfg.to_str().unwrap()]).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{body}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("config error"), "{err}");
    }
    let cfg = write_config(dir.path(), "line.json", cases[2]);
    let out = bin().args(["--config", cfg.to_str().unwrap()]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "n.json",
        r#"{"experiment": "steady", "system": {"r12_over_lambda": 1e-9}}"#,
    );
    let out = bin().args(["--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dynamics"));
}

#[test]
fn io_failure_exits_with_four() {
    let out = bin()
        .args(["--experiment", "couplings", "--out", "/nonexistent-dir/x.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = bin().args(["--config", "/nonexistent-dir/c.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn evolve_starts_in_the_requested_state() {
    let mut cfg = RunConfig::new(Experiment::Evolve);
    cfg.system = SystemSpec {
        rabi_g: 0.0,
        zeta_over_pi: 0.0,
        ..SystemSpec::default()
    };
    cfg.grids.time = Some(Grid::range(0.0, 1.0, 11));
    let t = execute(&cfg).unwrap();
    let ss = t.column("rho_ss").unwrap();
    assert!((ss[0] - 1.0).abs() < 1e-12);
    assert!(ss.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(t.rows.len(), 11);
}

#[test]
fn scans_cover_every_grid_point_in_order() {
    let mut cfg = RunConfig::new(Experiment::ScanCorrelation);
    cfg.grids.r12_over_lambda = Some(Grid::range(0.1, 0.3, 5));
    cfg.grids.zeta_over_pi = Some(Grid::Values(vec![0.125, 0.5, 1.0]));
    let t = execute(&cfg).unwrap();
    assert_eq!(t.rows.len(), 15);
    assert_eq!(t.rows[0][0], 0.1);
    assert_eq!(t.rows[0][1], 0.125);
    assert_eq!(t.rows[2][1], 1.0);

    let mut cfg = RunConfig::new(Experiment::ScanCoherence);
    cfg.grids.rabi_g = Some(Grid::Values(vec![0.0, 0.5]));
    let t = execute(&cfg).unwrap();
    let abs = t.column("abs_rho_as").unwrap();
    assert_eq!(abs[0], 0.0);
}

#[test]
fn undriven_correlation_is_reported_as_nan() {
    let mut cfg = RunConfig::new(Experiment::Steady);
    cfg.system.rabi_g = 0.0;
    let t = execute(&cfg).unwrap();
    assert!(t.column("gamma_12_corr").unwrap()[0].is_nan());
}
