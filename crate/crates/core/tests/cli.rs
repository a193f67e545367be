use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "algebras", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobhecke")).args(args).output().expect("binary runs")
}

/// Runs and returns trimmed stdout, asserting the exit code.
fn ok_with(args: &[&str], code: i32) -> String {
    let out = run(args);
    let stdout = String::from_utf8_lossy(&out.stdout).trim().to_string();
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}\nstdout: {stdout}\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout
}

fn ok(args: &[&str]) -> String {
    ok_with(args, 0)
}

fn stderr(args: &[&str], code: i32) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn algebra_validate_builtins_and_files() {
    for name in ["ground", "clifford_even", "clifford_odd", "grassmann", "cyclic2", "cyclic3"] {
        let out = ok(&["algebra", "validate", name]);
        assert!(out.starts_with(&format!("{name}: valid")), "{out}");
        let from_file = ok(&["algebra", "validate", &fixture(&format!("{name}.json"))]);
        assert_eq!(out, from_file);
    }
    let out = ok(&["--algebra", "clifford_odd", "algebra", "validate"]);
    assert!(out.contains("trace parity 1"));
}

#[test]
fn algebra_validate_rejects_bad_files() {
    let err = stderr(&["algebra", "validate", &fixture("corrupted_mult.json")], 1);
    assert!(err.contains("frobenius.NotAssociative"), "{err}");
    let err = stderr(&["algebra", "validate", &fixture("malformed.json")], 2);
    assert!(err.contains("cli.InputError"), "{err}");
    stderr(&["algebra", "validate", "no_such_file.json"], 2);
}

#[test]
fn algebra_dual_and_nakayama() {
    assert_eq!(ok(&["algebra", "dual", "clifford_odd"]), "1^v = 1*c\nc^v = 1*1");
    assert_eq!(ok(&["algebra", "dual", "cyclic2"]), "e^v = 1*e\ng1^v = 1*g1");
    let nak = ok(&["algebra", "nakayama", "grassmann"]);
    assert!(nak.ends_with("symmetric true") || nak.ends_with("symmetric false"), "{nak}");
    assert!(ok(&["algebra", "nakayama", "cyclic3"]).contains("psi(g1) = 1*g1"));
}

#[test]
fn algebra_change_trace() {
    let out = ok(&["algebra", "change-trace", "clifford_even", "--trace", "0,1"]);
    assert_eq!(out, "u = 1*c\nu^-1 = 1*c\ntrace parity 1");
    stderr(&["algebra", "change-trace", "clifford_even", "--trace", "1"], 2);
}

#[test]
fn pol_commands() {
    assert_eq!(ok(&["pol", "mul", "x1", "x1^2"]), "1*(1) x1^3");
    assert_eq!(ok(&["pol", "demazure", "--i", "1", "x1^2"]), "1*(1|1) x2 + 1*(1|1) x1");
    assert_eq!(ok(&["--algebra", "clifford_odd", "pol", "teleporter", "--i", "1", "--j", "2"]), "1*(1|c) - 1*(c|1)");
    assert_eq!(ok(&["--quantum", "pol", "delta", "--i", "1", "X1"]), "-1*(1|1) X2");
    let prod = ok(&["--algebra", "clifford_even", "pol", "mul", "1*(c|1) x1", "1*(1|c)"]);
    assert_eq!(prod, "1*(c|c) x1");
}

#[test]
fn pol_errors() {
    let err = stderr(&["--algebra", "clifford_even", "pol", "mul", "1*(q)", "1*(1)"], 2);
    assert!(err.contains("cli.UnknownLabel"), "{err}");
    let err = stderr(&["pol", "mul", "1*(1) x1 +", "x1"], 2);
    assert!(err.contains("cli.SyntaxError"), "{err}");
    stderr(&["pol", "demazure", "--i", "0", "x1"], 2);
    stderr(&["pol", "delta", "--i", "1", "x1"], 2);
}

#[test]
fn wreath_commands() {
    assert_eq!(ok(&["wreath", "mul", "s1", "x1"]), "-1*(1|1) + 1*(1|1) x2 s1");
    assert_eq!(ok(&["wreath", "center", "x1 + x2"]), "central true");
    assert_eq!(ok(&["--n", "2", "wreath", "center", "x1"]), "central false");
    assert_eq!(ok(&["--quantum", "--z", "2", "wreath", "center", "X1 X2"]), "central true");
    assert_eq!(ok(&["--Q", "x^2", "wreath", "cyclo", "x1^3"]), "0");
    assert_eq!(ok(&["--Q", "x", "wreath", "cyclo", "x2"]), "1*(1|1) s1");
    let dim = ok(&["--Q", "x^2", "--d", "2", "wreath", "dim-oracle"]);
    assert!(dim.starts_with("dimension 8 "), "{dim}");
    let dim = ok(&["--algebra", "clifford_even", "--Q", "x", "wreath", "dim-oracle"]);
    assert!(dim.starts_with("dimension 2 "), "{dim}");
}

#[test]
fn wreath_quantum_reduction_over_cyclic2() {
    let args = ["--algebra", "cyclic2", "--quantum", "--z", "1/2", "--Q", "X-1", "wreath"];
    let r = ok(&[&args[..], &["cyclo", "1*(g1|e) X2"]].concat());
    assert_eq!(r, "1/2*(e|g1) T1 + 1*(g1|e) + 1/2*(g1|e) T1");
    let dim = ok(&[&args[..], &["--d", "2", "dim-oracle"]].concat());
    assert!(dim.starts_with("dimension 8 "), "{dim}");
}

#[test]
fn quantum_needs_symmetric_even_trace() {
    let err = stderr(&["--algebra", "clifford_odd", "--quantum", "wreath", "mul", "T1", "T1"], 2);
    assert!(err.contains("polyalg.WrongVariant"), "{err}");
    stderr(&["--algebra", "clifford_even", "--quantum", "verify"], 2);
}

#[test]
fn cat_shuffles() {
    assert_eq!(ok(&["--Q", "x", "--d", "2", "cat", "shuffles"]), "[. . Q1]\n[. Q1 .]\n[Q1 . .]");
    assert_eq!(ok(&["--Q", "x,x^2+1", "cat", "shuffles"]), "[. Q1 Q2]\n[Q1 . Q2]\n[Q1 Q2 .]");
    assert_eq!(ok(&["--Q", "x", "--Q", "x^2+1", "cat", "shuffles"]), "[. Q1 Q2]\n[Q1 . Q2]\n[Q1 Q2 .]");
}

#[test]
fn cat_diagram_commands() {
    let dbl = ["--Q", "x", "cat", "normalize", "--src", "[. Q1]", "xRB@1; xBR@1"];
    assert_eq!(ok(&dbl), "[. Q1] -> [. Q1] : 1*(1) x1");
    assert_eq!(ok(&["--Q", "x", "cat", "phi", "--src", "[. Q1]", "xRB@1; xBR@1"]), "1*(1) x1");
    assert_eq!(ok(&["--Q", "x", "cat", "compose", "--src", "[. Q1]", "xRB@1", "xBR@1"]), "[. Q1] -> [. Q1] : 1*(1) x1");
    assert_eq!(ok(&["--Q", "x", "--d", "2", "cat", "normalize", "--src", "[. . Q1]", "s@1; s@1"]), "[. . Q1] -> [. . Q1] : 1*(1|1)");
    let quantum = ok(&["--quantum", "--z", "2", "--Q", "X-1", "--d", "2", "cat", "normalize", "--src", "[. . Q1]", "s+@1; s+@1"]);
    assert_eq!(quantum, "[. . Q1] -> [. . Q1] : 1*(1|1) + 2*(1|1) T1");
    let err = stderr(&["--Q", "x", "cat", "normalize", "--src", "[. Q1]", "xBR@1"], 2);
    assert!(err.contains("category.IllTypedWord"), "{err}");
}

#[test]
fn cat_path_mul() {
    let out = ok(&["--Q", "x", "cat", "path-mul", "[. Q1]: xRB@1", "[Q1 .]: xBR@1 | [Q1 .]:"]);
    assert_eq!(out, "[Q1 .] -> [Q1 .] : 1*(1) x1");
    assert_eq!(ok(&["--Q", "x", "cat", "path-mul", "[. Q1]:", "[Q1 .]:"]), "0");
}

#[test]
fn cat_cyclo_iso_and_center() {
    let out = ok(&["--Q", "x^2", "cat", "cyclo-iso"]);
    assert!(out.contains("corner dimension 2") && out.contains("quotient dimension 2"), "{out}");
    let err = stderr(&["--Q", "x,x", "cat", "cyclo-iso"], 2);
    assert!(err.contains("category.LevelNotOne"), "{err}");
    assert_eq!(ok(&["--Q", "x", "--d", "2", "cat", "center", "x1 + x2"]), "central true");
    assert_eq!(ok(&["--Q", "x", "--d", "2", "cat", "center", "x1"]), "central false");
}

#[test]
fn cat_requires_pin_labels() {
    let err = stderr(&["cat", "shuffles"], 2);
    assert!(err.contains("cli.InputError"), "{err}");
    let err = stderr(&["--algebra", "clifford_even", "--Q", "x", "cat", "shuffles"], 2);
    assert!(err.contains("polyalg.NotPinLabel"), "{err}");
}

#[test]
fn verify_clifford_even_with_x() {
    let out = ok(&["verify", "--algebra", &fixture("clifford_even.json"), "--d", "2", "--Q", "x"]);
    assert!(out.ends_with("result PASS"), "{out}");
    assert!(out.contains("level-zero checks only"), "{out}");
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn verify_quantum_ground() {
    let out = ok(&["verify", "--quantum", "--z", "1/2", "--d", "2", "--Q", "X-1"]);
    assert!(out.ends_with("result PASS"), "{out}");
}

#[test]
fn verify_reports_are_deterministic() {
    let args = ["--format", "json", "verify", "--algebra", "grassmann", "--seed", "11"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let v: serde_json::Value = serde_json::from_str(&a).expect("json");
    assert_eq!(v["seed"], 11);
    assert_eq!(v["generator"], "ChaCha8");
    assert_eq!(v["passed"], true);
    assert_eq!(v["config_hash"].as_str().map(str::len), Some(16));
    let other = ok(&["--format", "json", "verify", "--algebra", "grassmann", "--seed", "12"]);
    let w: serde_json::Value = serde_json::from_str(&other).expect("json");
    assert_ne!(v["config_hash"], w["config_hash"]);
}

#[test]
fn verify_fails_on_corrupted_algebra() {
    let err = stderr(&["verify", "--algebra", &fixture("corrupted_mult.json")], 1);
    assert!(err.contains("frobenius.NotAssociative"), "{err}");
    stderr(&["verify", "--algebra", &fixture("malformed.json")], 2);
}

#[test]
fn json_output() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["--format", "json", "pol", "mul", "x1", "x1"])).expect("json");
    assert_eq!(v["result"], "1*(1) x1^2");
    let out = ok_with(&["--format", "json", "algebra", "validate", &fixture("corrupted_mult.json")], 1);
    let v: serde_json::Value = serde_json::from_str(&out).expect("json");
    assert_eq!(v["error"], "frobenius.NotAssociative");
}

#[test]
fn bad_flags_are_input_errors() {
    stderr(&["--z", "abc", "--quantum", "wreath", "mul", "T1", "T1"], 2);
    stderr(&["nonsense"], 2);
    stderr(&["--format", "yaml", "verify"], 2);
}
