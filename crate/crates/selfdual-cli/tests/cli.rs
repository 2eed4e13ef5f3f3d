//! End-to-end runs of the binary: the classify -> spectrum -> molien
//! pipeline, determinism of artifacts, the verify matrix, and the error
//! paths.

use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfdual"))
        .arg("--out")
        .arg(dir)
        .args(args)
        .env_remove("SELFDUAL_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_spectrum_molien_pipeline() {
    let dir = tempdir("pipeline");
    for len in ["2", "4", "6", "8", "10", "12"] {
        let out = run(&dir, &["classify", "--type", "2eI", "--length", len]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let out = run(&dir, &["classify", "--type", "2eI", "--length", "12"]);
    assert!(stdout(&out).contains("3 classes"));

    let out = run(&dir, &["spectrum", "--type", "2eI", "--length", "12"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("eigenspace dims 1 1 1"));

    for len in ["2", "4", "6", "8", "10"] {
        let out = run(&dir, &["spectrum", "--type", "2eI", "--length", len]);
        assert!(out.status.success());
    }

    let out = run(&dir, &["molien", "--type", "2eI", "--lengths", "2..12", "--m-max", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    // cumulative dims at N = 12: 2 3 3 3
    let row: Vec<&str> =
        text.lines().find(|l| l.trim_start().starts_with("12 |")).unwrap().split_whitespace().collect();
    assert_eq!(&row[2..], &["2", "3", "3", "3"]);
}

#[test]
fn artifacts_are_deterministic() {
    let a = tempdir("det-a");
    let b = tempdir("det-b");
    for (dir, threads) in [(&a, "1"), (&b, "4")] {
        let args = ["--threads", threads, "classify", "--type", "2eI", "--length", "10"];
        assert!(run(dir, &args).status.success());
        let args = ["--threads", threads, "spectrum", "--type", "2eI", "--length", "10"];
        assert!(run(dir, &args).status.success());
    }
    for file in ["classes-2eI-N10.json", "spectrum-2eI-N10.json"] {
        let x = std::fs::read(a.join(file)).unwrap();
        let y = std::fs::read(b.join(file)).unwrap();
        assert_eq!(x, y, "{file} must be byte-identical across runs and thread counts");
    }
}

#[test]
fn spectrum_reports_depth_k_relation() {
    let dir = tempdir("depthk");
    assert!(run(&dir, &["classify", "--type", "2eI", "--length", "12"]).status.success());
    let out = run(&dir, &["spectrum", "--type", "2eI", "--length", "12", "--k", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("T_2"));
    let text = std::fs::read_to_string(dir.join("spectrum-2eI-N12.json")).unwrap();
    assert!(text.contains("\"depth_k\""));
}

#[test]
fn verify_matrix_passes_on_small_family() {
    let dir = tempdir("verify");
    let out = run(
        &dir,
        &["verify", "--type", "qE:q=3", "--length", "8", "--verify-mass", "--samples", "10"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("PASS classes-canonical"));
    assert!(text.contains("PASS neighbor-sum-constancy"));
    assert!(text.contains("PASS mass-identity"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn cwe_renders_small_genus() {
    let dir = tempdir("cwe");
    assert!(run(&dir, &["classify", "--type", "2eII", "--length", "8"]).status.success());
    let out = run(&dir, &["cwe", "--type", "2eII", "--length", "8", "--genus", "1"]);
    assert!(out.status.success());
    // x0^8 + 14 x0^4 x1^4 + x1^8
    let text = stdout(&out);
    assert!(text.contains("x0^8"), "{text}");
    assert!(text.contains("14x0^4x1^4"), "{text}");
}

#[test]
fn error_paths() {
    let dir = tempdir("errors");
    // unknown family
    let out = run(&dir, &["classify", "--type", "bogus", "--length", "8"]);
    assert!(!out.status.success());

    // incompatible length fails before any computation
    let out = run(&dir, &["classify", "--type", "2eII", "--length", "12"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("divisible by 8"));

    // cap guard without --force
    let out = run(&dir, &["classify", "--type", "2eI", "--length", "26"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));

    // spectrum without a classification
    let out = run(&dir, &["spectrum", "--type", "2eI", "--length", "8"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("classify"));
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("selfdual-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
