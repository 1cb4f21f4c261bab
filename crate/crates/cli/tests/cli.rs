//! End-to-end smoke tests for the `strand-id` binary: exit codes, seed
//! precedence, and the self-check subcommand.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_strand-id");

/// Small grid that finishes in well under a second per run.
const SMOKE_CONFIG: &str = "n = 4\nN = 4\np = 0.2\nbeta = th\ntrials = 4\nbase_seed = 7\n";

/// Per-test scratch directory (tests share one process, so the pid alone
/// would collide).
fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("strand-id-cli-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("sweep.cfg");
    std::fs::write(&path, text).expect("write config");
    path
}

/// Runs `simulate` with optional `--seed` and optional `STRAND_ID_SEED`,
/// returning the process output and the bytes of `simulate.csv`.
fn simulate(
    config: &Path,
    out: &Path,
    seed: Option<&str>,
    env_seed: Option<&str>,
) -> (Output, Vec<u8>) {
    let mut cmd = Command::new(BIN);
    cmd.arg("simulate").arg("--config").arg(config).arg("--out").arg(out).args(["--jobs", "1"]);
    match env_seed {
        Some(v) => {
            cmd.env("STRAND_ID_SEED", v);
        }
        None => {
            cmd.env_remove("STRAND_ID_SEED");
        }
    }
    if let Some(s) = seed {
        cmd.args(["--seed", s]);
    }
    let output = cmd.output().expect("binary runs");
    let bytes = std::fs::read(out.join("simulate.csv")).unwrap_or_default();
    (output, bytes)
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let output = Command::new(BIN).output().expect("binary runs");
    assert_eq!(output.status.code(), Some(2), "usage errors exit with 2");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("Usage"), "stderr shows usage, got: {stderr}");
}

#[test]
fn unreadable_config_exits_2() {
    let tmp = scratch("no-config");
    let (output, _) = simulate(&tmp.join("absent.cfg"), &tmp.join("out"), None, None);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.starts_with("error:"), "got: {stderr}");
    std::fs::remove_dir_all(&tmp).ok();
}

#[test]
fn invalid_config_exits_2() {
    let tmp = scratch("bad-config");
    for (tag, text) in [
        ("value", "n = banana\nN = 4\np = 0.2\nbeta = th\ntrials = 4\n"),
        ("key", "frobnicate = 1\n"),
        ("range", "n = 4\nN = 4\np = 1.5\nbeta = th\ntrials = 4\n"),
    ] {
        let config = write_config(&tmp, text);
        let (output, _) = simulate(&config, &tmp.join(format!("out-{tag}")), None, None);
        assert_eq!(output.status.code(), Some(2), "{tag} config must exit 2");
        let stderr = String::from_utf8_lossy(&output.stderr);
        assert!(stderr.starts_with("error:"), "{tag} config, got: {stderr}");
    }
    std::fs::remove_dir_all(&tmp).ok();
}

#[test]
fn bad_env_seed_exits_2() {
    let tmp = scratch("bad-env-seed");
    let config = write_config(&tmp, SMOKE_CONFIG);
    let (output, _) = simulate(&config, &tmp.join("out"), None, Some("not-a-number"));
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("STRAND_ID_SEED"), "got: {stderr}");
    std::fs::remove_dir_all(&tmp).ok();
}

#[test]
fn seed_flag_beats_env_beats_config() {
    let tmp = scratch("seed-precedence");
    let config = write_config(&tmp, SMOKE_CONFIG);

    let (out_flag, flag99) = simulate(&config, &tmp.join("flag"), Some("99"), None);
    let (out_env, env99) = simulate(&config, &tmp.join("env"), None, Some("99"));
    let (out_both, both) = simulate(&config, &tmp.join("both"), Some("99"), Some("55"));
    let (out_other, env55) = simulate(&config, &tmp.join("other"), None, Some("55"));
    let (out_none, base7) = simulate(&config, &tmp.join("none"), None, None);

    for o in [&out_flag, &out_env, &out_both, &out_other, &out_none] {
        assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(flag99, env99, "env seed must act exactly like --seed");
    assert_eq!(flag99, both, "--seed must win over the env seed");
    assert_ne!(flag99, env55, "different seeds must differ");
    assert_ne!(env55, base7, "env seed must override the config's base_seed");
    std::fs::remove_dir_all(&tmp).ok();
}

#[test]
fn verify_passes_and_writes_its_table() {
    let tmp = scratch("verify");
    let config = write_config(&tmp, SMOKE_CONFIG);
    let out_dir = tmp.join("out");
    let output = Command::new(BIN)
        .arg("verify")
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .expect("binary runs");
    assert!(
        output.status.success(),
        "verify must exit 0, stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8_lossy(&output.stdout);
    let passes = stdout.lines().filter(|l| l.starts_with("PASS ")).count();
    assert_eq!(passes, 4, "four suites reported, got:\n{stdout}");
    assert!(!stdout.contains("FAIL"), "got:\n{stdout}");

    let table = std::fs::read_to_string(out_dir.join("verify.csv")).expect("verify.csv exists");
    assert_eq!(table.lines().count(), 5, "header plus one row per suite:\n{table}");
    assert!(table.lines().skip(1).all(|l| l.ends_with(",pass")), "got:\n{table}");
    std::fs::remove_dir_all(&tmp).ok();
}
