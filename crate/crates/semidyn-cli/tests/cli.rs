//! End-to-end tests of the installed binary: argument handling, both
//! output panes, config files, and the exit-code contract.

use std::io::Write;
use std::process::{Command, Output};

fn semidyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semidyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

#[test]
fn list_prints_the_registry() {
    let out = semidyn(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10, "{text}");
    assert!(lines[0].starts_with("tent"));
    assert!(lines.iter().any(|l| l.starts_with("rotation")));
    assert!(lines.iter().all(|l| l.split_whitespace().count() >= 2));
}

#[test]
fn inline_analyze_prints_both_panes() {
    let out = semidyn(&["analyze", "builtin:rotation", "--horizon", "300"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("== rotation"), "{text}");
    assert!(text.contains("system\trotation"));
    assert!(text.ends_with("end\trotation\n"));
}

#[test]
fn machine_only_suppresses_the_human_pane() {
    let out = semidyn(&[
        "analyze",
        "builtin:rotation",
        "--horizon",
        "300",
        "--machine-only",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("system\trotation\n"), "{text}");
    assert!(!text.contains("=="), "{text}");
    assert!(text.ends_with("end\trotation\n"));
    // every record line is tab-keyed
    assert!(text.lines().all(|l| l.contains('\t')));
}

#[test]
fn overrides_in_the_spec_beat_the_flags() {
    let out = semidyn(&[
        "analyze",
        "builtin:identity seed=7 horizon=50",
        "--seed",
        "1",
        "--machine-only",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("seed\t7"));
}

#[test]
fn unknown_builtin_exits_one() {
    let out = semidyn(&["analyze", "builtin:nope"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.starts_with("error:"), "{err}");
    assert!(err.contains("nope"), "{err}");
}

#[test]
fn malformed_spec_exits_one() {
    let out = semidyn(&["analyze", "rotation"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("builtin:"), "{}", stderr(&out));
}

#[test]
fn exhausted_budget_exits_three() {
    let out = semidyn(&["analyze", "builtin:doubling", "--max-evals", "100"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let out = semidyn(&["analyze"]);
    assert_eq!(out.status.code(), Some(1));

    let out = semidyn(&["analyze", "builtin:tent", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));

    let out = semidyn(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("analyze"));

    let out = semidyn(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_file_runs_sections_in_name_order() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("runs.conf");
    let mut f = std::fs::File::create(&path).expect("create config");
    writeln!(f, "# two quick systems").unwrap();
    writeln!(f, "[slow]").unwrap();
    writeln!(f, "kind = builtin:rotation").unwrap();
    writeln!(f, "alpha = 0.25").unwrap();
    writeln!(f, "horizon = 200").unwrap();
    writeln!(f).unwrap();
    writeln!(f, "[fast]").unwrap();
    writeln!(f, "kind = builtin:identity").unwrap();
    writeln!(f, "horizon = 100").unwrap();
    drop(f);

    let out = semidyn(&["analyze", path.to_str().unwrap(), "--machine-only"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let fast = text.find("system\tfast").expect("fast pane");
    let slow = text.find("system\tslow").expect("slow pane");
    assert!(fast < slow, "panes sorted by section name");
    assert!(text.contains("end\tfast\n") && text.ends_with("end\tslow\n"));
}

#[test]
fn sft_files_analyze_exactly() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("golden.sft");
    std::fs::write(&path, "2\n1 1\n1 0\n").expect("write matrix");

    let spec = format!("sft:{}", path.display());
    let out = semidyn(&["analyze", &spec, "--machine-only"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("system\tgolden\n"), "{text}");
    assert!(text.contains("TT\tProven"));
    assert!(text.contains("sensitivity\tProven\t0.5\t1\t"));
}

#[test]
fn map_specs_run_with_the_default_name() {
    let out = semidyn(&[
        "analyze",
        "map:mod1(x+0.25) horizon=200",
        "--machine-only",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("system\tmap\n"), "{text}");
    assert!(text.contains("polish=false"));
}

#[test]
fn missing_config_file_is_treated_as_a_spec_and_rejected() {
    let out = semidyn(&["analyze", "/no/such/file.conf"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("builtin:"), "{}", stderr(&out));
}
