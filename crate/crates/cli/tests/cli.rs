use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clustermult"))
        .args(args)
        .env_remove("CLUSTERMULT_PRIMES")
        .env_remove("CLUSTERMULT_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_counts() {
    for (file, n) in [("a2.quiver", 3), ("a3.quiver", 6)] {
        let o = run(&["catalog", &fixture(file)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(&format!("indecomposables = {n}\n")));
        assert_eq!(stdout(&o).matches("[module]").count(), n);
    }
}

#[test]
fn malformed_file_exits_2() {
    let o = run(&["catalog", &fixture("malformed.quiver")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn characters_on_a2() {
    let a2 = fixture("a2.quiver");
    let o = run(&["char", &a2, "S1"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "x1^-1 + x1^-1*x2\n"));
    let o = run(&["char", &a2, "shift P1"]);
    assert_eq!(stdout(&o), "x1\n");
    assert_eq!(run(&["char", &a2, "Q7"]).status.code(), Some(5));
}

#[test]
fn declared_module_resolves() {
    let o = run(&["char", &fixture("a2_module.quiver")]);
    assert_eq!(o.status.code(), Some(0));
    // M = P1 and the summand shift P1: X_P1 * x1
    assert_eq!(stdout(&o), "x2^-1 + 1 + x1*x2^-1\n");
}

#[test]
fn verify_s1_s2() {
    let o = run(&["verify", &fixture("a2.quiver"), "S1", "S2", "--strata", "--witness"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["pass = true", "strata_lm = P1:1", "strata_ml = 0:1", "star_star_ok = true", "coindex_violations = 0", "fiber_failures = 0", "duality_mismatches = 0"] {
        assert!(out.contains(line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn verify_exit_codes() {
    let a2 = fixture("a2.quiver");
    assert_eq!(run(&["verify", &a2, "S1 + S2", "S1 + S2"]).status.code(), Some(6));
    let o = run(&["verify", &a2, "P1", "P1", "--strata"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("[stratum]"));
}

#[test]
fn frobenius_commands() {
    let setup = fixture("preprojective_a2.setup");
    let o = run(&["char", "--frobenius", &setup, "S2"]);
    assert_eq!(stdout(&o), "x1^-1*x3 + x1^-1*x2\n");
    let o = run(&["verify", "--fk", &setup, "S1", "S2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lhs = x3 + x2\nrhs = x3 + x2\n"));
    assert_eq!(run(&["char", "--frobenius", &fixture("a2.quiver"), "S1"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["verify", &fixture("a3.quiver"), "S1", "S2", "--strata", "--witness"].map(String::from);
    let args: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn env_overrides_primes() {
    let o = Command::new(env!("CARGO_BIN_EXE_clustermult"))
        .args(["verify", &fixture("a2.quiver"), "S1", "S2"])
        .env("CLUSTERMULT_PRIMES", "2")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("primes = 5,7,11,13,17\n"));
}
