//! Acceptance: manifest determinism. Re-running an invocation with
//! identical inputs and seed must reproduce identical verdict and witness
//! fields, byte for byte, at parallel widths 1 and 4.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_partreg")
}

/// Runs the CLI in `dir`, returns (exit code, verdict line, witness line).
fn run(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let manifest_dir = dir.join(format!("runs-{}", args.join("_").len()));
    let output = Command::new(bin())
        .current_dir(dir)
        .args(args)
        .arg("--manifest-dir")
        .arg(&manifest_dir)
        .output()
        .expect("binary runs");
    let code = output.status.code().expect("exit code");
    let stdout = String::from_utf8_lossy(&output.stdout);
    let manifest_path = stdout
        .lines()
        .find_map(|l| l.strip_prefix("manifest: "))
        .unwrap_or_else(|| panic!("no manifest line in output:\n{stdout}"));
    let manifest = fs::read_to_string(dir.join(manifest_path))
        .unwrap_or_else(|_| fs::read_to_string(manifest_path).expect("manifest readable"));
    let field = |name: &str| {
        manifest
            .lines()
            .find(|l| l.starts_with(name))
            .unwrap_or_else(|| panic!("manifest missing {name}:\n{manifest}"))
            .to_string()
    };
    // wall-ms is the only line allowed to vary
    (code, field("verdict: "), field("witness: "))
}

#[test]
fn manifest_determinism_across_reruns_and_widths() {
    let dir = std::env::temp_dir().join(format!("partreg-accept-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    fs::write(dir.join("w9.alg"), "kind: semiring\nbuilder: nat-window(9)\n").unwrap();
    let coloring: String = (0..9)
        .map(|i| if i % 3 == 0 { "0\n" } else { "1\n" })
        .collect();
    fs::write(dir.join("c9.col"), coloring).unwrap();

    // search avoid at parallel widths 1 and 4, twice each
    let mut seen: Option<(i32, String, String)> = None;
    for width in ["1", "4"] {
        for rerun in 0..2 {
            let got = run(
                &dir,
                &[
                    "search",
                    "avoid",
                    "--pattern",
                    "{x, y, x+y}",
                    "--not-distinct",
                    "--colors",
                    "3",
                    "--window",
                    "1..9",
                    "--seed",
                    "7",
                    "--parallel-width",
                    width,
                ],
            );
            match &seen {
                None => seen = Some(got),
                Some(first) => assert_eq!(
                    first, &got,
                    "search avoid diverged (width {width}, rerun {rerun})"
                ),
            }
        }
    }
    let (code, verdict, _) = seen.unwrap();
    assert_eq!(code, 0);
    assert!(verdict.contains("avoiding-found") || verdict.contains("none-exact"));

    // pattern find at widths 1 and 4, twice each
    let mut seen: Option<(i32, String, String)> = None;
    for width in ["1", "4"] {
        for rerun in 0..2 {
            let got = run(
                &dir,
                &[
                    "pattern",
                    "find",
                    "--structure",
                    "w9.alg",
                    "--coloring",
                    "c9.col",
                    "--pattern",
                    "{x, y, x+y}",
                    "--seed",
                    "7",
                    "--parallel-width",
                    width,
                ],
            );
            match &seen {
                None => seen = Some(got),
                Some(first) => assert_eq!(
                    first, &got,
                    "pattern find diverged (width {width}, rerun {rerun})"
                ),
            }
        }
    }
    let (code, verdict, witness) = seen.unwrap();
    assert_eq!(code, 0);
    assert!(verdict.contains("found"), "{verdict}");
    assert!(!witness.is_empty());

    println!("[acceptance] manifest-determinism: PASS");
}

#[test]
fn threshold_run_matches_spec_example() {
    let dir = std::env::temp_dir().join(format!("partreg-accept-th-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let (code, verdict, witness) = run(
        &dir,
        &[
            "search",
            "threshold",
            "--pattern",
            "{x, y, x+y}",
            "--not-distinct",
            "--colors",
            "2",
            "--window",
            "1..12",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(verdict, "verdict: threshold 5");
    assert!(witness.starts_with("witness: window 4:"));
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = std::env::temp_dir().join(format!("partreg-accept-ec-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    fs::write(dir.join("z6.alg"), "kind: semiring\nbuilder: zmod(6)\n").unwrap();
    fs::write(dir.join("one.sub"), "1\n").unwrap();

    // verdict produced: axiom validation passes on zmod(6)
    let (code, verdict, _) = run(&dir, &["algebra", "validate", "z6.alg"]);
    assert_eq!(code, 0);
    assert_eq!(verdict, "verdict: axioms-pass");

    // input error: unparseable pattern
    let output = Command::new(bin())
        .current_dir(&dir)
        .args(["pattern", "find", "--structure", "z6.alg", "--coloring", "missing.col", "--pattern", "{x,"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));

    // precondition failure: {1} is not multiplicatively syndetic in zmod(6)
    let output = Command::new(bin())
        .current_dir(&dir)
        .args([
            "construct",
            "thick-syndetic",
            "--structure",
            "z6.alg",
            "--subset",
            "one.sub",
            "--n",
            "2",
            "--k",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(
        output.status.code(),
        Some(1),
        "stdout: {}",
        String::from_utf8_lossy(&output.stdout)
    );

    // budget exhaustion: inconclusive largeness verdict under a tiny budget
    fs::write(dir.join("w30.alg"), "kind: semiring\nbuilder: nat-window(30)\n").unwrap();
    let sixes: String = (0..30)
        .filter(|i| (i + 1) % 6 == 0)
        .map(|i| format!("{i}\n"))
        .collect();
    fs::write(dir.join("six.sub"), sixes).unwrap();
    let output = Command::new(bin())
        .current_dir(&dir)
        .args([
            "largeness",
            "check",
            "--structure",
            "w30.alg",
            "--subset",
            "six.sub",
            "--property",
            "thick",
            "--op",
            "mul",
        ])
        .output()
        .unwrap();
    assert_eq!(
        output.status.code(),
        Some(2),
        "stdout: {}",
        String::from_utf8_lossy(&output.stdout)
    );
}
