use std::process::Command;

fn twistlab() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_twistlab"));
    c.env_remove("TWISTLAB_SEED");
    c
}

#[test]
fn list_suites_names_all_nine() {
    let out = twistlab().arg("list-suites").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.contains("hidden_symmetry"));
}

#[test]
fn run_writes_report_and_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = twistlab()
        .args(["run", "--suite", "weighted", "--dims", "16,64", "--samples", "20", "--seed", "7", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("PASS defect_om10"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["suite"], "weighted");
    assert_eq!(report["passed"], true);
    let csv = std::fs::read_to_string(dir.path().join("curves.csv")).unwrap();
    assert!(csv.starts_with("dim,check,value"));
}

#[test]
fn env_seed_is_the_fallback() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = twistlab();
        c.args(["run", "--suite", "selector", "--dims", "4", "--samples", "5", "--out", "-"]);
        if let Some(s) = env {
            c.env("TWISTLAB_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    let from_env = run(Some("9"), None);
    assert!(from_env.contains("\"seed\": 9"));
    assert_eq!(from_env, run(None, Some("9")));
    assert!(run(Some("9"), Some("3")).contains("\"seed\": 3"));
}

#[test]
fn config_file_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"suite": "diagrams", "dims": [4], "samples": 5, "seed": 1, "tolerances": {}}"#,
    )
    .unwrap();
    let ok = twistlab().args(["run", "--out", "-", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));

    // an unattainable bound turns a passing check into a failing one
    std::fs::write(
        &cfg,
        r#"{"suite": "orlicz_criterion", "seed": 1, "tolerances": {"f_to_square_B2": 1.0}}"#,
    )
    .unwrap();
    let failing = twistlab().args(["run", "--out", "-", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(failing.status.code(), Some(1));

    std::fs::write(&cfg, r#"{"suite": "nope"}"#).unwrap();
    let bad = twistlab().args(["run", "--out", "-", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));

    let unknown = twistlab().args(["run", "--suite", "nope"]).output().unwrap();
    assert!(!unknown.status.success());
}
