//! End-to-end runs of the `vcoh` binary.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;
use vertex_cohomology::specfile::{dump_loaded, parse_spec};

const CUBIC: &str = "\
# Q[x]/(x^3), everything in weight zero
WEIGHTS
min 0
cutoff 0
tier exact
BASIS
0: one x x2
VACUUM
one
MODES
one -1 one -> one
one -1 x -> x
one -1 x2 -> x2
x -1 one -> x
x2 -1 one -> x2
x -1 x -> x2
";

struct Run {
    status: i32,
    stdout: String,
    stderr: String,
}

fn vcoh(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_vcoh"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        status: out.status.code().expect("exited"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).expect("json report")
}

#[test]
fn check_presets_pass() {
    for p in ["trivial", "dual-numbers", "split-pair", "graded-nilpotent"] {
        let r = vcoh(&["check", "--preset", p]);
        assert_eq!(r.status, 0, "{p}: {}{}", r.stdout, r.stderr);
        assert!(r.stdout.contains("verdict: pass"), "{p}");
    }
}

#[test]
fn check_spec_file_passes() {
    let dir = TempDir::new().unwrap();
    let spec = file(&dir, "cubic.spec", CUBIC);
    let r = vcoh(&["--json", "check", s(&spec)]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    let j = json(&r);
    assert_eq!(j["verdict"], "pass");
    assert_eq!(j["command"], "check");
}

#[test]
fn broken_associativity_is_reported_with_the_instance() {
    // x·x² = x²·x = 1 keeps commutativity but (x·x)·x² ≠ x·(x·x²)
    let dir = TempDir::new().unwrap();
    let text = format!("{CUBIC}x -1 x2 -> one\nx2 -1 x -> one\n");
    let spec = file(&dir, "bad.spec", &text);
    let r = vcoh(&["check", s(&spec)]);
    assert_eq!(r.status, 1, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("verdict: fail"));
    assert!(r.stdout.contains("FAIL jacobi u="), "{}", r.stdout);
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad_mode = file(&dir, "a.spec", &format!("{CUBIC}x -1 -> x2\n"));
    let r = vcoh(&["check", s(&bad_mode)]);
    assert_eq!(r.status, 2);
    assert!(r.stderr.contains("line"), "{}", r.stderr);

    let unknown = file(&dir, "b.spec", &format!("{CUBIC}x -1 y -> x2\n"));
    assert_eq!(vcoh(&["check", s(&unknown)]).status, 2);

    let missing = dir.path().join("nope.spec");
    assert_eq!(vcoh(&["check", s(&missing)]).status, 2);

    let both = vcoh(&["check", s(&bad_mode), "--preset", "trivial"]);
    assert_eq!(both.status, 2);

    // clap usage errors are input errors too
    assert_eq!(vcoh(&["frobnicate"]).status, 2);
}

#[test]
fn cutoff_below_the_top_weight_is_rejected() {
    let dir = TempDir::new().unwrap();
    let r = vcoh(&["dump-preset", "graded-nilpotent"]);
    let spec = file(&dir, "g.spec", &r.stdout);
    assert_eq!(vcoh(&["check", s(&spec), "--cutoff", "0"]).status, 2);
    assert_eq!(vcoh(&["check", s(&spec)]).status, 0);
}

#[test]
fn h1_and_h2_of_dual_numbers() {
    let j = json(&vcoh(&["--json", "h1", "--preset", "dual-numbers"]));
    assert_eq!(j["h1"]["h_dim"], 1);
    let j = json(&vcoh(&["--json", "h2", "--preset", "dual-numbers"]));
    let h2 = &j["h2"];
    assert_eq!(h2["cocycle_dim"], 2);
    assert_eq!(h2["coboundary_dim"], 1);
    assert_eq!(h2["h_dim"], 1);
    assert!(h2["window"].is_null());
    let j = json(&vcoh(&["--json", "h2", "--preset", "split-pair"]));
    assert_eq!(j["h2"]["h_dim"], 0);
}

#[test]
fn extend_emits_a_checkable_algebra() {
    let dir = TempDir::new().unwrap();
    let psi = file(&dir, "psi", "PSI\neps -1 eps -> one\n");
    let out = dir.path().join("ext.spec");
    let r = vcoh(&["extend", "--preset", "dual-numbers", "--psi", s(&psi), "--emit", s(&out)]);
    assert_eq!(r.status, 0, "{}{}", r.stdout, r.stderr);
    let emitted = std::fs::read_to_string(&out).unwrap();
    // the total space is 4-dimensional
    assert_eq!(parse_spec(&emitted).unwrap().build(None).unwrap().algebra.space().dim(), 4);
    assert_eq!(vcoh(&["check", s(&out)]).status, 0);
}

#[test]
fn extend_by_a_non_cocycle_fails_without_emitting() {
    let dir = TempDir::new().unwrap();
    let spec = file(&dir, "cubic.spec", CUBIC);
    let psi = file(&dir, "psi", "PSI\nx -1 x2 -> one\nx2 -1 x -> one\n");
    let out = dir.path().join("ext.spec");
    let r = vcoh(&["extend", s(&spec), "--psi", s(&psi), "--emit", s(&out)]);
    assert_eq!(r.status, 1, "{}{}", r.stdout, r.stderr);
    assert!(!out.exists());
}

#[test]
fn deform_and_equiv() {
    let dir = TempDir::new().unwrap();
    let zero = file(&dir, "zero", "PSI\n");
    let cob = file(&dir, "cob", "PSI\neps -1 eps -> 2*eps\n");
    let class = file(&dir, "class", "PSI\neps -1 eps -> one\n");

    assert_eq!(vcoh(&["deform", "--preset", "dual-numbers", "--psi", s(&class)]).status, 0);

    for kind in ["extension", "deformation"] {
        let r = vcoh(&["--json", "equiv", "--kind", kind, s(&cob), s(&zero), "--preset", "dual-numbers"]);
        assert_eq!(r.status, 0, "{kind}: {}{}", r.stdout, r.stderr);
        assert_eq!(json(&r)["equivalent"], true);

        let r = vcoh(&["--json", "equiv", "--kind", kind, s(&class), s(&zero), "--preset", "dual-numbers"]);
        assert_eq!(r.status, 1, "{kind}");
        let j = json(&r);
        assert_eq!(j["equivalent"], false);
        assert_eq!(j["obstruction"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn dump_preset_round_trips() {
    let dir = TempDir::new().unwrap();
    for p in ["trivial", "dual-numbers", "split-pair", "graded-nilpotent"] {
        let r = vcoh(&["dump-preset", p]);
        assert_eq!(r.status, 0);
        let loaded = parse_spec(&r.stdout).unwrap().build(None).unwrap();
        assert_eq!(dump_loaded(&loaded), r.stdout, "{p}");

        // same canonical input, same digest
        let spec = file(&dir, p, &r.stdout);
        let a = json(&vcoh(&["--json", "check", s(&spec)]));
        let b = json(&vcoh(&["--json", "check", "--preset", p]));
        assert_eq!(a["input"]["sha256"], b["input"]["sha256"], "{p}");
    }
}

#[test]
fn reports_are_deterministic_and_can_go_to_a_file() {
    let a = vcoh(&["--json", "h2", "--preset", "graded-nilpotent"]);
    let b = vcoh(&["--json", "h2", "--preset", "graded-nilpotent"]);
    assert_eq!(a.stdout, b.stdout);

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let r = vcoh(&["--json", "--out", s(&out), "h2", "--preset", "graded-nilpotent"]);
    assert_eq!(r.status, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap().trim_end(), a.stdout.trim_end());
}

#[test]
fn truncated_boson_reports_its_window() {
    let j = json(&vcoh(&["--json", "check", "--preset", "free-boson", "--cutoff", "2"]));
    assert_eq!(j["verdict"], "pass-within-window");
    assert!(!j["algebra"]["skipped"].as_array().unwrap().is_empty());
}
