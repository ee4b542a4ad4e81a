//! End-to-end tests of the command-line front end: report shape, the
//! exit-code contract, and byte-level determinism.

use clap::Parser;
use extmodular::cli::{run, RunConfig};
use std::path::PathBuf;

fn write_spec(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("extmodular-test-{name}-{}.spec", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn invoke(args: &[&str]) -> (String, i32) {
    let mut argv = vec!["extmodular"];
    argv.extend(args);
    run(RunConfig::parse_from(argv))
}

#[test]
fn verify_passes_on_valid_spec() {
    let spec = write_spec("binf", "block BINF\nmode cyclic\n");
    let (report, code) = invoke(&["verify", "--spec", spec.to_str().unwrap(), "--window", "50"]);
    assert_eq!(code, 0, "{report}");
    assert!(report.ends_with("RESULT verify PASS\n"));
}

#[test]
fn verify_fails_on_flipped_delta() {
    // A one-index block with delta = -1 parses but breaks the chain
    // identity globally: verification failure, not an input error.
    let spec = write_spec("flipped", "block CUSTOM iota=0 delta=-\nmode cyclic\n");
    let (report, code) = invoke(&["verify", "--spec", spec.to_str().unwrap(), "--window", "10"]);
    assert_eq!(code, 1, "{report}");
    assert!(report.contains("index 0"), "{report}");
    assert!(report.ends_with("RESULT verify FAIL\n"));
}

#[test]
fn input_errors_exit_2() {
    let spec = write_spec("sbb", "block B2\nblock B3\nblock BINF\nmode cyclic\n");
    let (_, code) = invoke(&["verify", "--spec", "/nonexistent/alpha.spec", "--window", "5"]);
    assert_eq!(code, 2);
    let bad = write_spec("bad", "block B5\n");
    let (_, code) = invoke(&["verify", "--spec", bad.to_str().unwrap(), "--window", "5"]);
    assert_eq!(code, 2);
    let (_, code) = invoke(&["rewrite", "--spec", spec.to_str().unwrap(), "--word", "xyz"]);
    assert_eq!(code, 2);
    let (_, code) = invoke(&["reach", "--spec", spec.to_str().unwrap(), "--target", "a/b"]);
    assert_eq!(code, 2);
}

#[test]
fn rewrite_matches_documented_example() {
    let spec = write_spec("sbb2", "block B2\nblock B3\nblock BINF\nmode cyclic\n");
    let (report, code) = invoke(&["rewrite", "--spec", spec.to_str().unwrap(), "--word", "w"]);
    assert_eq!(code, 0);
    assert!(report.contains("sigma word: S0"), "{report}");
    assert!(report.contains("node: (1, 0)"), "{report}");
}

#[test]
fn reach_hits_target() {
    let spec = write_spec("binf2", "block BINF\nmode cyclic\n");
    for target in ["0", "3/7", "-5/9", "inf"] {
        let (report, code) =
            invoke(&["reach", "--spec", spec.to_str().unwrap(), "--target", target]);
        assert_eq!(code, 0, "{report}");
    }
}

#[test]
fn scan_subcommands() {
    let spec = write_spec("binf3", "block BINF\nmode cyclic\n");
    let path = spec.to_str().unwrap();
    for check in ["freeness", "anisotropy", "maximality"] {
        let (report, code) = invoke(&["scan", "--spec", path, "--check", check]);
        assert_eq!(code, 0, "{check}: {report}");
        assert!(report.ends_with("RESULT scan PASS\n"));
    }
}

#[test]
fn graph_stages_and_dot() {
    let spec = write_spec("binf4", "block BINF\nmode cyclic\n");
    let path = spec.to_str().unwrap();
    let dot = std::env::temp_dir().join(format!("extmodular-test-{}.dot", std::process::id()));
    for stage in ["gamma", "bar", "tilde", "bar0", "tilde0"] {
        let (report, code) = invoke(&[
            "graph", "--spec", path, "--window", "8", "--stage", stage,
            "--dot", dot.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{stage}: {report}");
    }
    // Gamma DOT contains the documented B-edge and is byte-stable.
    let run_once = || {
        invoke(&["graph", "--spec", path, "--window", "2", "--stage", "gamma",
                 "--dot", dot.to_str().unwrap()]);
        std::fs::read(&dot).unwrap()
    };
    let first = run_once();
    assert!(String::from_utf8_lossy(&first).contains("\"0_0\" -> \"0_1\" [style=solid];"));
    assert_eq!(first, run_once(), "DOT export must be byte-identical");
}

#[test]
fn reports_are_deterministic() {
    let spec = write_spec("binf5", "block BINF\nmode cyclic\n");
    let path = spec.to_str().unwrap();
    for args in [
        vec!["verify", "--spec", path, "--window", "30"],
        vec!["structure", "--spec", path],
        vec!["sigma", "--spec", path, "--n", "-3"],
        vec!["scan", "--spec", path, "--check", "anisotropy", "--max-len", "4"],
        vec!["fixture"],
    ] {
        let (a, ca) = invoke(&args);
        let (b, cb) = invoke(&args);
        assert_eq!(a, b, "report differs for {args:?}");
        assert_eq!(ca, cb);
    }
}
