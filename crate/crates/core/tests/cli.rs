use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use logfol::cli::{ReportFile, SpecFile, Verdict};
use logfol::schemes::CheckStatus;

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn spec(name: &str) -> String {
    specs_dir().join(name).to_string_lossy().into_owned()
}

fn logfol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logfol")).args(args).output().unwrap()
}

fn machine_report(args: &[&str]) -> (i32, ReportFile) {
    let mut full = args.to_vec();
    full.extend(["--format", "machine"]);
    let out = logfol(&full);
    let report = ReportFile::from_json(&String::from_utf8_lossy(&out.stdout)).unwrap();
    (out.status.code().unwrap(), report)
}

#[test]
fn bundled_specs_have_documented_exit_codes() {
    let cases = [
        ("coordinate-lines.json", 0),
        ("coordinate-planes.json", 0),
        ("generic-conics.json", 0),
        ("planes-q2.json", 0),
        ("point-in-p3.json", 0),
        ("concurrent-lines.json", 2),
        ("collinear-residues.json", 2),
    ];
    for (name, code) in cases {
        let out = logfol(&["verify", &spec(name)]);
        assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn waiver_exposes_the_counterexamples() {
    let (code, report) = machine_report(&["verify", &spec("collinear-residues.json"), "--waive-preconditions"]);
    assert_eq!(code, 3);
    assert_eq!(report.verdict, Verdict::Failed);
    let decomposition = report.checks.iter().find(|c| c.name == "decomposition").unwrap();
    let formula = decomposition.parts.iter().find(|p| p.name == "kupka-formula").unwrap();
    assert_eq!(formula.status, CheckStatus::Fail);
    assert!(!report.validation.waived.is_empty());

    let (code, report) = machine_report(&["verify", &spec("concurrent-lines.json"), "--waive-preconditions"]);
    assert_eq!(code, 3);
    let lemma = report.checks.iter().find(|c| c.name == "lemma").unwrap();
    assert!(lemma.notes.iter().any(|n| n.contains("precondition violated")));
}

#[test]
fn check_never_waives() {
    let out = logfol(&["check", &spec("concurrent-lines.json"), "--waive-preconditions"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("snc at {1,2,3}"));
}

#[test]
fn compute_selects_ideals() {
    let (code, report) = machine_report(&["compute", &spec("coordinate-lines.json"), "--which", "kupka"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["kupka"]);
    let k = &report.checks[0].generators["K"];
    assert_eq!(k.len(), 3);
}

#[test]
fn level_flag_overrides_the_spec() {
    let out = logfol(&["check", &spec("concurrent-lines.json"), "--level", "basic"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_file_matches_stdout_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let path_str = path.to_string_lossy().into_owned();
    let (_, printed) = machine_report(&["verify", &spec("point-in-p3.json"), "--output", &path_str]);
    let written = ReportFile::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written.without_timings(), printed.without_timings());
    assert_eq!(written.spec, SpecFile::from_json(&std::fs::read_to_string(spec("point-in-p3.json")).unwrap()).unwrap());
}

#[test]
fn batch_over_directory_writes_reports_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    let output = dir.path().join("out");
    std::fs::create_dir(&input).unwrap();
    for name in ["coordinate-lines.json", "concurrent-lines.json"] {
        std::fs::copy(spec(name), input.join(name)).unwrap();
    }
    let out = logfol(&[
        "batch",
        &input.to_string_lossy(),
        "--output",
        &output.to_string_lossy(),
        "--level",
        "full-snc",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(output.join("coordinate-lines.report.json").exists());
    assert!(output.join("concurrent-lines.report.json").exists());
    let summary = std::fs::read_to_string(output.join("summary.json")).unwrap();
    assert!(summary.contains("coordinate-lines") && summary.contains("invalid"));
}

#[test]
fn random_batch_is_reproducible_across_worker_counts() {
    let run = |workers: &str| {
        logfol(&["batch", "--random", "4", "--seed", "5", "--workers", workers, "--format", "machine"]).stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(logfol(&[]).status.code(), Some(1));
    assert_eq!(logfol(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(logfol(&["verify", "/nonexistent/spec.json"]).status.code(), Some(1));
    assert_eq!(logfol(&["--help"]).status.code(), Some(0));
}
