use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(cache: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_whittaker"));
    cmd.args(args).env_remove("WHITTAKER_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("WHITTAKER_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn warm_cache_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("verma_sl2_lambda2.json");
    let args = ["certify", "--config", cfg.to_str().unwrap()];
    let cold = run(None, &args);
    let first = run(Some(dir.path()), &args);
    let warm = run(Some(dir.path()), &args);
    assert!(cold.status.success());
    assert_eq!(cold.stdout, first.stdout);
    assert_eq!(first.stdout, warm.stdout);

    let stats = run(Some(dir.path()), &["cache", "stats"]);
    assert!(stats.status.success());
    let files: serde_json::Value = serde_json::from_slice(&stats.stdout).unwrap();
    assert_eq!(files[0]["file"], "pbw-A1.json");
    assert_eq!(files[0]["fresh"], true);
    assert!(files[0]["entries"].as_u64().unwrap() > 0);

    assert!(run(Some(dir.path()), &["cache", "clear"]).status.success());
    let stats = run(Some(dir.path()), &["cache", "stats"]);
    assert_eq!(stats.stdout, b"[]\n");
}

#[test]
fn cache_commands_need_a_directory() {
    assert_eq!(run(None, &["cache", "stats"]).status.code(), Some(2));
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"schema_version": 2}"#, "schema_version"),
        (r#"{"schema_version": 1, "psi": ["0"]}"#, "system"),
        (
            r#"{"schema_version": 1, "system": {"type": "A", "rank": 1}, "psi": ["1"], "module": {"family": "universal_sl2", "casimir": "x"}, "truncation": {"depth": 2, "factor": 2}}"#,
            "module.casimir",
        ),
        (
            r#"{"schema_version": 1, "system": {"type": "A", "rank": 2}, "psi": ["1"], "module": {"family": "verma", "lambda": ["0", "0"]}, "truncation": {"depth": 2, "factor": 2}}"#,
            "psi",
        ),
        (
            r#"{"schema_version": 1, "system": {"type": "A", "rank": 1}, "psi": ["0"], "module": {"family": "verma", "lambda": ["0"]}}"#,
            "truncation.depth",
        ),
    ];
    for (text, field) in cases {
        let path = write_config(dir.path(), text);
        let out = run(None, &["certify", "--config", &path]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{field} not in {err}");
    }
}

#[test]
fn out_flag_routes_summary_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/report.json");
    let cfg = config("universal_sl2.json");
    let out = run(None, &["certify", "--config", cfg.to_str().unwrap(), "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("SIMPLE_UPTO dim=1"));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(doc["verdict"], "SIMPLE_UPTO");
}

#[test]
fn command_line_bounds_override_the_config() {
    let cfg = config("verma_sl2_lambda2.json");
    let out = run(None, &["certify", "--config", cfg.to_str().unwrap(), "--depth", "5", "--factor-deg", "5"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["truncation"]["depth"], 5);
    assert_eq!(doc["truncation"]["factor"], 5);
    assert_eq!(doc["dim_lower_bound"], 2);
}
