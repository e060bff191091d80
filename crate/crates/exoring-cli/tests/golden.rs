//! End-to-end tests of the binary: exit-status contract, report formats,
//! and byte-level determinism of JSON output.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exoring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn verify_domain_s1_exits_zero() {
    let cfg = fixture("s1_verify_domain.json");
    let out = run_cli(&["verify-domain", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] defining-relation"));
}

#[test]
fn fingerprint_s1_reports_collapse() {
    let cfg = fixture("s1_fingerprint.json");
    let out = run_cli(&[
        "fingerprint",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("valid JSON report");
    let detail = report["checks"][0]["detail"].as_str().unwrap();
    assert!(detail.contains("total steps 5"));
    assert!(detail.contains("distinct members 4"));
    assert!(detail.contains("2=3, 3=4"));
}

#[test]
fn compare_mixed_families_is_non_isomorphic_but_exits_zero() {
    let cfg = fixture("compare_s1_russell3.json");
    let out = run_cli(&["compare", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("necessarily non-isomorphic"), "{text}");
    assert!(text.contains("russell-condition"));
}

#[test]
fn oracle_audit_passes_on_adequate_box() {
    let cfg = fixture("s1_oracle_audit.json");
    let out = run_cli(&["oracle-audit", "--config", cfg.to_str().unwrap()]);
    assert_eq!(
        exit_code(&out),
        0,
        "stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn failing_check_exits_one_with_nonempty_report() {
    let cfg = fixture("oracle_tiny_bounds.json");
    let out = run_cli(&["oracle-audit", "--config", cfg.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[FAIL]"), "{text}");
}

#[test]
fn config_errors_exit_two() {
    let out = run_cli(&[
        "verify-domain",
        "--config",
        fixture("bad_syntax.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);

    let out = run_cli(&[
        "verify-domain",
        "--config",
        fixture("bad_params.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);

    let out = run_cli(&[
        "no-such-command",
        "--config",
        fixture("s1_verify_domain.json").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);

    let out = run_cli(&["verify-domain", "--config", "/nonexistent/config.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let cfg = fixture("s1_fingerprint.json");
    let dir = std::env::temp_dir();
    let out_a = dir.join("exoring_golden_a.json");
    let out_b = dir.join("exoring_golden_b.json");
    for path in [&out_a, &out_b] {
        let out = run_cli(&[
            "fingerprint",
            "--config",
            cfg.to_str().unwrap(),
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0);
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let _ = std::fs::remove_file(out_a);
    let _ = std::fs::remove_file(out_b);
}

#[test]
fn text_report_names_the_fact_per_check() {
    let cfg = fixture("s1_verify_domain.json");
    let out = run_cli(&["verify-domain", "--config", cfg.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("(defining-relation-identity)"));
    assert!(text.contains("(generator-bottom-slices)"));
}
