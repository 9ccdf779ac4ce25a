//! End-to-end tests of the `commsat` binary: flag parsing, exit codes, file
//! layout, batch resumability, and the external-solver protocol with stub
//! executables.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_commsat"));
    // Keep the ambient environment from steering output locations.
    cmd.env_remove("COMMSAT_OUT_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn default_generate_produces_the_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["generate", "--seed", "5", "--out", dir.path().to_str().unwrap(), "--name", "default"]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let cnf = std::fs::read_to_string(dir.path().join("default.cnf")).unwrap();
    assert!(cnf.contains("p cnf 500 2250"), "defaults are n=500, r=4.5");
    assert!(!cnf.contains("c solution"), "solution comment is opt-in");
    assert!(dir.path().join("default.json").exists());
    assert!(stdout_of(&out).contains("modularity"));
}

#[test]
fn beta_flag_resolves_to_the_midpoint_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "generate", "--n", "30", "--c", "3", "--beta", "0.5", "--seed", "1",
        "--out", dir.path().to_str().unwrap(), "--name", "mid",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("mid.json")).unwrap())
            .unwrap();
    assert_eq!(meta["params"]["p1"].as_f64().unwrap(), 0.625);
    assert_eq!(meta["params"]["p2"].as_f64().unwrap(), 0.25);
}

#[test]
fn invalid_parameters_exit_with_usage_code_and_a_reason() {
    let out = run(&["generate", "--c", "2", "--p", "0.5"]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr_of(&out).contains("c >= 3") || stderr_of(&out).to_lowercase().contains("communities"),
        "stderr should name the violated constraint: {}",
        stderr_of(&out)
    );

    let out = run(&["generate", "--beta", "0.2"]);
    assert_eq!(code(&out), 1, "beta below 1/3 is impossible");

    let out = run(&["no-such-command"]);
    assert_eq!(code(&out), 1);

    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("generate"));
}

#[test]
fn conflicting_distribution_flags_are_rejected() {
    let out = run(&["generate", "--beta", "0.5", "--q", "1.0"]);
    assert_eq!(code(&out), 1);
    assert!(stderr_of(&out).contains("at most one"));
    // --p1 without --p2 is incomplete.
    let out = run(&["generate", "--p1", "0.5"]);
    assert_eq!(code(&out), 1);
}

fn generate_small(dir: &Path, extra: &[&str]) -> (PathBuf, PathBuf) {
    let mut args = vec![
        "generate", "--n", "24", "--c", "3", "--p", "0.5", "--r", "3.0", "--seed", "9",
        "--out", dir.to_str().unwrap(), "--name", "small",
    ];
    args.extend_from_slice(extra);
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    (dir.join("small.cnf"), dir.join("small.json"))
}

#[test]
fn verify_passes_fresh_instances_and_catches_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let (cnf, meta) = generate_small(dir.path(), &[]);

    let out = run(&["verify", cnf.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout_of(&out));
    assert!(stdout_of(&out).contains("PASS"));
    assert!(stdout_of(&out).contains("t0 0"));

    // Replace the first clause with one falsified by the recorded solution:
    // each literal is the negation of the solution's value for vars 1..3.
    let meta_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&meta).unwrap()).unwrap();
    let bits = meta_json["solution"].as_str().unwrap();
    let falsified: Vec<String> = bits
        .chars()
        .take(3)
        .enumerate()
        .map(|(i, bit)| if bit == '1' { format!("-{}", i + 1) } else { format!("{}", i + 1) })
        .collect();
    let text = std::fs::read_to_string(&cnf).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let first_clause = lines.iter().position(|l| l.starts_with("p cnf")).unwrap() + 1;
    lines[first_clause] = format!("{} 0", falsified.join(" "));
    std::fs::write(&cnf, lines.join("\n") + "\n").unwrap();

    let out = run(&["verify", cnf.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let text = stdout_of(&out);
    assert!(text.contains("FAIL") && text.contains("clause 1"), "{text}");
}

#[test]
fn verify_without_recorded_solution_is_not_verifiable() {
    let dir = tempfile::tempdir().unwrap();
    let (cnf, _) = generate_small(dir.path(), &["--no-solution-metadata"]);
    let out = run(&["verify", cnf.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout_of(&out).contains("NOT VERIFIABLE"));
}

#[test]
fn solve_exit_codes_distinguish_sat_unsat_and_limits() {
    let dir = tempfile::tempdir().unwrap();
    let sat = dir.path().join("sat.cnf");
    std::fs::write(&sat, "p cnf 3 1\n1 2 3 0\n").unwrap();
    let unsat = dir.path().join("unsat.cnf");
    std::fs::write(&unsat, "p cnf 1 2\n1 0\n-1 0\n").unwrap();

    let out = run(&["solve", sat.to_str().unwrap(), "--solver", "dpll", "--print-model"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("s SATISFIABLE"));
    assert!(stdout_of(&out).contains("v "));

    let out = run(&["solve", unsat.to_str().unwrap(), "--solver", "dpll"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("s UNSATISFIABLE"));

    let out = run(&["solve", unsat.to_str().unwrap(), "--solver", "walksat", "--max-flips", "5"]);
    assert_eq!(code(&out), 3);
    assert!(stdout_of(&out).contains("limit"));

    let csv = dir.path().join("runs.csv");
    let out = run(&["solve", sat.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("file,solver,status,"), "header row first: {rows}");
    assert!(rows.contains(",dpll,sat,"));
}

#[test]
fn env_var_provides_the_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("COMMSAT_OUT_DIR", dir.path())
        .args(["generate", "--n", "24", "--c", "3", "--seed", "2", "--name", "enved"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    assert!(dir.path().join("enved.cnf").exists());
    assert!(dir.path().join("enved.json").exists());
}

/// name -> (bytes, mtime) for every file in a directory.
fn snapshot(dir: &Path) -> BTreeMap<String, (Vec<u8>, std::time::SystemTime)> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|entry| {
            let entry = entry.unwrap();
            let meta = entry.metadata().unwrap();
            (
                entry.file_name().to_string_lossy().into_owned(),
                (std::fs::read(entry.path()).unwrap(), meta.modified().unwrap()),
            )
        })
        .collect()
}

#[test]
fn batch_reruns_are_resumable_and_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "batch", "--n", "30", "--c", "3", "--p", "0.2,0.8", "--count", "2",
        "--master-seed", "5", "--out", dir.path().to_str().unwrap(),
    ];
    let first = run(&args);
    assert_eq!(code(&first), 0, "{}", stderr_of(&first));
    assert!(stdout_of(&first).contains("2 settings x 2 instances = 4"));
    assert!(stdout_of(&first).contains("written 4"));
    let before = snapshot(dir.path());
    assert_eq!(before.len(), 4 * 2 + 2, "4 pairs + 2 CSVs");

    let second = run(&args);
    assert_eq!(code(&second), 0);
    assert!(stdout_of(&second).contains("skipped (already present) 4"));
    let after = snapshot(dir.path());
    // Instance files are untouched (same bytes, same mtime); the CSVs are
    // rewritten but identical.
    for (name, (bytes, mtime)) in &before {
        let (bytes2, mtime2) = &after[name];
        assert_eq!(bytes, bytes2, "{name} changed across reruns");
        if name.ends_with(".cnf") || name.ends_with(".json") {
            assert_eq!(mtime, mtime2, "{name} was rewritten");
        }
    }
}

#[test]
fn batch_dry_run_only_prints_the_plan() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "batch", "--p", "0:0.5:1", "--count", "3", "--dry-run",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("3 settings x 3 instances = 9"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "dry run writes nothing");
}

#[test]
fn analyze_reports_even_without_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("plain.cnf");
    std::fs::write(&cnf, "p cnf 4 2\n1 -2 3 0\n2 3 -4 0\n").unwrap();
    let out = run(&["analyze", cnf.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("community statistics unavailable"), "{text}");
    assert!(text.contains("n 4  m 2"));
}

#[test]
fn golden_instance_is_reproduced_byte_for_byte() {
    // Pinned output of `generate --n 12 --c 3 --p 0.5 --alpha 0.8 --r 2.0
    // --seed 7 --solution-comment`. A diff here means the generator's
    // sampling order, the RNG, or a file format changed — all of which
    // silently invalidate previously published instances. If the change is
    // intentional, regenerate the fixtures with the command above.
    // (The metadata records the crate version, so version bumps also land
    // here; that is the point of a golden file.)
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "generate", "--n", "12", "--c", "3", "--p", "0.5", "--alpha", "0.8", "--r", "2.0",
        "--seed", "7", "--solution-comment", "--out", dir.path().to_str().unwrap(),
        "--name", "regen",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    for (fresh, golden) in [("regen.cnf", "golden_n12.cnf"), ("regen.json", "golden_n12.json")] {
        let fresh = std::fs::read(dir.path().join(fresh)).unwrap();
        let golden = std::fs::read(fixtures.join(golden)).unwrap();
        assert_eq!(fresh, golden, "{golden:?} drifted");
    }
}

#[cfg(unix)]
mod external {
    use super::*;
    use std::os::unix::fs::PermissionsExt;

    fn write_stub(dir: &Path, name: &str, body: &str) -> PathBuf {
        let path = dir.join(name);
        std::fs::write(&path, format!("#!/bin/sh\n{body}")).unwrap();
        std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
        path
    }

    #[test]
    fn run_ext_classifies_stub_solvers() {
        let dir = tempfile::tempdir().unwrap();
        let cnf = dir.path().join("tiny.cnf");
        std::fs::write(&cnf, "p cnf 3 2\n1 2 3 0\n-1 2 3 0\n").unwrap();
        let cnf = cnf.to_str().unwrap();

        let good = write_stub(
            dir.path(),
            "good.sh",
            "echo 'c solved'\necho 's SATISFIABLE'\necho 'v -1 2 -3 0'\nexit 10\n",
        );
        let out = run(&["run-ext", good.to_str().unwrap(), cnf]);
        assert_eq!(code(&out), 0, "{}", stdout_of(&out));
        assert!(stdout_of(&out).contains("SAT: model verified"));

        let unsat = write_stub(dir.path(), "unsat.sh", "echo 's UNSATISFIABLE'\nexit 20\n");
        let out = run(&["run-ext", unsat.to_str().unwrap(), cnf]);
        assert_eq!(code(&out), 0);
        assert!(stdout_of(&out).contains("UNSAT"));

        let liar = write_stub(
            dir.path(),
            "liar.sh",
            "echo 's SATISFIABLE'\necho 'v 1 -2 -3 0'\nexit 10\n",
        );
        let out = run(&["run-ext", liar.to_str().unwrap(), cnf]);
        assert_eq!(code(&out), 2);
        assert!(stdout_of(&out).contains("falsifies clause"));

        let sleeper = write_stub(dir.path(), "sleeper.sh", "sleep 30\n");
        let out = run(&["run-ext", sleeper.to_str().unwrap(), cnf, "--timeout", "0.3"]);
        assert_eq!(code(&out), 3);
        assert!(stdout_of(&out).contains("TIMEOUT"));

        let silent = write_stub(dir.path(), "silent.sh", "exit 1\n");
        let out = run(&["run-ext", silent.to_str().unwrap(), cnf]);
        assert_eq!(code(&out), 2);
        assert!(stdout_of(&out).contains("CRASH"));

        let out = run(&["run-ext", dir.path().join("missing.sh").to_str().unwrap(), cnf]);
        assert_eq!(code(&out), 1, "missing executable is a usage error");
    }
}
