mod common;

use std::process::Command;

use common::fixture;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("termalg").chain(args.iter().copied());
    let code = termalg::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn catalog_path() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/data/catalog.alg").to_string()
}

#[test]
fn verify_t3_01() {
    let (code, out, _) = run(&["verify", &fixture("t3_01.alg")]);
    assert_eq!(code, 0);
    assert!(out.contains("T3_01: terminal: yes; nilpotent: yes; one-generated: yes"), "{out}");
}

#[test]
fn verify_corrupted_reports_witness() {
    let (code, out, _) = run(&["verify", &fixture("corrupted.alg")]);
    assert_eq!(code, 1);
    assert!(out.contains("terminal: no (witness (e"), "{out}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_termalg");
    let ok = Command::new(bin).args(["verify", &fixture("t3_01.alg")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["verify", &fixture("corrupted.alg")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let usage = Command::new(bin).args(["verify"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    assert!(!usage.stderr.is_empty());
}

#[test]
fn h2_t3_02_at_zero() {
    let (code, out, _) = run(&["h2", &fixture("t3_02.alg"), "--param", "lambda=0"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("Z2=6 B2=2 H2=4"));
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn h2_t3_02_generic() {
    for l in ["1", "2", "-1", "1/2", "7"] {
        let (code, out, _) = run(&["h2", &fixture("t3_02.alg"), "--param", &format!("lambda={l}")]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("Z2=5 B2=2 H2=3"), "lambda={l}");
    }
}

#[test]
fn h2_with_preferred_nablas() {
    let f = fixture("t3_01.alg");
    let (code, out, _) = run(&["h2", &f, "--nabla", "(1,3,1)", "--nabla", "(2,1,1)", "--nabla", "(2,2,1) (3,1,-3)"]);
    assert_eq!(code, 0);
    assert!(out.contains("(2,2,1) (3,1,-3)"), "{out}");
    // dependent classes
    let (code, _, err) = run(&["h2", &f, "--nabla", "(1,3,1)", "--nabla", "(1,3,2)", "--nabla", "(2,1,1)"]);
    assert_ne!(code, 0);
    assert!(!err.is_empty());
}

#[test]
fn z2_and_b2_counts() {
    let (_, z, _) = run(&["z2", &fixture("t3_01.alg")]);
    let (_, b, _) = run(&["b2", &fixture("t3_01.alg")]);
    assert_eq!(z.lines().count(), 6);
    assert_eq!(b.lines().count(), 3);
}

#[test]
fn missing_parameter_is_usage_error() {
    let (code, _, err) = run(&["h2", &fixture("t3_02.alg")]);
    assert_eq!(code, 2);
    assert!(err.contains("lambda"), "{err}");
}

#[test]
fn unknown_file_is_usage_error() {
    let (code, _, err) = run(&["verify", &fixture("absent.alg")]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
}

#[test]
fn zero_jobs_rejected() {
    let (code, _, _) = run(&["--jobs", "0", "verify", &fixture("t3_01.alg")]);
    assert_eq!(code, 2);
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, err) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
    assert!(err.is_empty());
}

#[test]
fn extend_prints_table() {
    let (code, out, _) = run(&["extend", &fixture("t3_01.alg"), "--cocycle", "(1,3,1)", "--name", "T4_03"]);
    assert_eq!(code, 0);
    assert_eq!(out, "algebra T4_03 dim=4\n  e1 e1 = e2\n  e1 e2 = e3\n  e1 e3 = e4\n");
}

#[test]
fn extend_rejects_non_cocycle() {
    let (code, _, err) = run(&["extend", &fixture("t3_01.alg"), "--cocycle", "(2,2,1)"]);
    assert_eq!(code, 1);
    assert!(err.contains("(2,2,1)") || err.contains("fails"), "{err}");
}

#[test]
fn act_matches_action_formula() {
    // x = 2, y = 1, z = 0: (x^4 a1, x^2 (x a2 - 2 y a3), x^4 a3) at a = (1, 1, 1)
    let (code, out, _) = run(&[
        "act",
        &fixture("t3_01.alg"),
        "--aut",
        "2,0,0;1,4,0;0,2,8",
        "--class",
        "1,1,1",
        "--nabla",
        "(1,3,1)",
        "--nabla",
        "(2,1,1)",
        "--nabla",
        "(2,2,1) (3,1,-3)",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(16, 0, 16)");
}

#[test]
fn act_rejects_non_automorphism() {
    let (code, _, err) = run(&["act", &fixture("t3_01.alg"), "--aut", "1,0,0;0,2,0;0,0,1", "--class", "1,1,1"]);
    assert_eq!(code, 1);
    assert!(err.contains("automorphism"), "{err}");
}

#[test]
fn iso_reports_profiles() {
    let c = catalog_path();
    let (code, out, _) = run(&["iso", &c, &c, "--entry-a", "T4_03", "--entry-b", "T4_04"]);
    assert_eq!(code, 0);
    assert!(out.contains("none found"));
    assert!(out.contains("profiles: distinguished by dim A^i A^j"), "{out}");
}

#[test]
fn iso_finds_certificate() {
    let c = catalog_path();
    let (code, out, _) = run(&[
        "iso", &c, &c, "--entry-a", "T5_73", "--entry-b", "T5_75", "--param", "alpha=3", "--param", "beta=0",
        "--param-b", "alpha=3",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("certificate:"), "{out}");
}

#[test]
fn literal_readings_fail() {
    for f in ["t4_06_literal.alg", "t5_13_literal.alg", "t5_46_literal.alg", "t5_73_literal.alg"] {
        let (code, out, _) = run(&["verify", &fixture(f)]);
        assert_eq!(code, 1, "{f}");
        assert!(out.contains("terminal: no"), "{f}: {out}");
    }
}

#[test]
fn verify_with_samples_and_seed() {
    let f = fixture("t3_02.alg");
    let (code, out, _) = run(&["verify", &f, "--samples", "3", "--seed", "9"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("seed: 9\n"));
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn verify_all_is_deterministic() {
    let args = ["catalog", "verify-all", "--samples", "1", "--seed", "5"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&["--jobs", "2", "catalog", "verify-all", "--samples", "1", "--seed", "5"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.lines().next().unwrap().contains("\"seed\":5"));
}

#[test]
fn verify_all_writes_report_file() {
    let dir = std::env::temp_dir().join(format!("termalg-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.jsonl");
    let (code, out, _) = run(&["catalog", "verify-all", "--samples", "1", "--report", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("fail: 0"), "{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().count() > 100);
    std::fs::remove_dir_all(&dir).unwrap();
}
