use std::process::Command as Process;

use icdof_cli::{load_spec, run, to_config_string, Command, ExperimentSpec, CSV_HEADER};

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("icdof")
        .chain(args.iter().copied())
        .map(String::from)
        .collect()
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_icdof"))
}

#[test]
fn tail_writes_one_row_per_snr_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let code = run(argv(&[
        "tail",
        "--law",
        "z_siso",
        "--k",
        "3",
        "--z",
        "0.5",
        "--snr-db",
        "20,30,40",
        "--trials",
        "1000000",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER.join(","));
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("20,0.5,"));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(summary["checks"][0]["analytic"], 1.0);
    assert_eq!(summary["spec"]["active"], 3);
    assert!(summary["results"]["fitted_exponents"][0].as_f64().is_some());
}

#[test]
fn bounds_prints_lower_and_upper() {
    let out = bin()
        .args(["bounds", "--xi", "2", "--k", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lb=1\n"), "{text}");
    assert!(text.contains("ub=3\n"), "{text}");
}

#[test]
fn single_snr_point_is_a_config_error() {
    let out = bin()
        .args(["tail", "--z", "0.5", "--snr-db", "20"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("need ≥ 2 SNR points"));
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(run(argv(&["tail", "--bogus"])), 2);
    assert_eq!(run(argv(&["teleport"])), 2);
    assert_eq!(
        run(argv(&["tail", "--config", "/nonexistent/spec.toml"])),
        2
    );
    assert_eq!(run(argv(&["bounds", "--xi", "1", "--threads", "0"])), 2);
    let code = run(argv(&[
        "tail",
        "--z",
        "0.5",
        "--trials",
        "1000",
        "--out",
        "/nonexistent/dir/t.csv",
    ]));
    assert_eq!(code, 2);
    assert_eq!(run(argv(&["--help"])), 0);
}

#[test]
fn malformed_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "command = \"tail\"\ntrials = \"many\"\n").unwrap();
    let out = bin()
        .args(["tail", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("trials"), "{err}");
}

#[test]
fn spec_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.toml");
    let spec = ExperimentSpec {
        command: Command::Wishart,
        thresholds: vec![0.5, 1.0],
        p: 2,
        q: 3,
        seed: 77,
        ..Default::default()
    };
    std::fs::write(&path, to_config_string(&spec).unwrap()).unwrap();
    assert_eq!(load_spec(&path).unwrap(), spec);
}

#[test]
fn minimal_file_is_populated_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("min.toml");
    std::fs::write(&path, "command = \"tail\"\nthresholds = [0.25]\n").unwrap();
    let spec = load_spec(&path).unwrap();
    assert_eq!(spec.trials, ExperimentSpec::default().trials);
    std::fs::write(&path, "command = \"rate\"\nusers = 2\nactive = 3\n").unwrap();
    let err = load_spec(&path).unwrap_err().to_string();
    assert!(err.contains("k:"), "{err}");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.toml");
    std::fs::write(
        &cfg,
        "thresholds = [0.1]\ntrials = 1000\nsnr_db = [10.0, 20.0]\nseed = 5\n",
    )
    .unwrap();
    let out = dir.path().join("o.csv");
    let code = run(argv(&[
        "tail",
        "--config",
        cfg.to_str().unwrap(),
        "--snr-db",
        "10,20,30",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(
        summary["spec"]["snr_db"],
        serde_json::json!([10.0, 20.0, 30.0])
    );
    assert_eq!(summary["spec"]["seed"], 5);
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 4);
}

#[test]
fn scaling_echoes_network_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let code = run(argv(&[
        "scaling",
        "--xi",
        "1",
        "--k",
        "2",
        "--snr-db",
        "10,20",
        "--trials",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(
        text.contains(",n=10,") && text.contains(",n=100,"),
        "{text}"
    );
}

#[test]
fn thread_env_default_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = [
        "wishart", "--r", "0.5,1.5", "--snr-db", "20,30", "--trials", "5000",
    ];
    let status = bin()
        .args(args)
        .args(["--out", a.to_str().unwrap()])
        .env("ICDOF_THREADS", "1")
        .status()
        .unwrap();
    assert!(status.success());
    let status = bin()
        .args(args)
        .args(["--out", b.to_str().unwrap()])
        .env("ICDOF_THREADS", "4")
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    let bad = bin()
        .args(["bounds"])
        .env("ICDOF_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
