//! Driving external SAT solvers: spawn with a timeout, parse the standard
//! competition output (`s SATISFIABLE` / `s UNSATISFIABLE`, `v` model
//! lines), and verify claimed models against the formula.
//!
//! Exit codes are recorded but do not decide the outcome: conventional
//! solvers exit 10/20 for SAT/UNSAT, so the `s` line is authoritative and
//! output that lacks one is a crash regardless of the code.

use crate::model::{evaluate, Assignment, Evaluation, Formula};
use std::io::Read;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

/// Canonical verdict line of a solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverVerdict {
    Satisfiable,
    Unsatisfiable,
    /// An `s` line that is neither of the above (e.g. `s UNKNOWN`).
    Unknown,
}

/// Raw facts extracted from solver output, before any policy is applied.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedOutput {
    /// First `s` line, if any.
    pub verdict: Option<SolverVerdict>,
    /// Literals from `v` lines, up to (not including) the terminating 0.
    pub model_literals: Vec<i32>,
    /// Whether the model was terminated by a 0.
    pub model_terminated: bool,
}

/// Parses SAT-competition style output. Never fails: unrecognized lines are
/// ignored, and absence of a verdict is visible in the result.
pub fn parse_solver_output(text: &str) -> ParsedOutput {
    let mut out = ParsedOutput::default();
    for line in text.lines() {
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("s") if out.verdict.is_none() => {
                out.verdict = Some(match tokens.next() {
                    Some("SATISFIABLE") => SolverVerdict::Satisfiable,
                    Some("UNSATISFIABLE") => SolverVerdict::Unsatisfiable,
                    _ => SolverVerdict::Unknown,
                });
            }
            Some("v") if !out.model_terminated => {
                for token in tokens {
                    match token.parse::<i32>() {
                        Ok(0) => {
                            out.model_terminated = true;
                            break;
                        }
                        Ok(code) => out.model_literals.push(code),
                        Err(_) => {} // stray token inside a v-line; skip it
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// Final classification of an external solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExternalStatus {
    /// Solver said SAT and its model checked out.
    Satisfiable,
    Unsatisfiable,
    /// Killed at the timeout.
    TimedOut,
    /// Anything untrustworthy: spawn failure, no verdict, or a model that
    /// does not satisfy the formula.
    Crashed,
}

#[derive(Debug, Clone)]
pub struct ExternalReport {
    pub status: ExternalStatus,
    /// Human-readable explanation, most useful for crashes.
    pub detail: String,
    pub elapsed: Duration,
    /// Verified model (present iff status is `Satisfiable`).
    pub model: Option<Assignment>,
    pub exit_code: Option<i32>,
}

impl ExternalReport {
    fn crashed(detail: String, elapsed: Duration, exit_code: Option<i32>) -> Self {
        ExternalReport { status: ExternalStatus::Crashed, detail, elapsed, model: None, exit_code }
    }
}

/// Turns claimed model literals into a total assignment over `1..=n`.
/// Literals above `n` are ignored; missing or contradicted variables fail.
fn assemble_model(literals: &[i32], n: usize) -> Result<Assignment, String> {
    let mut values: Vec<Option<bool>> = vec![None; n];
    for &code in literals {
        let var = code.unsigned_abs() as usize;
        if code == 0 || var > n {
            continue;
        }
        let value = code > 0;
        match values[var - 1] {
            Some(prev) if prev != value => {
                return Err(format!("model asserts both {var} and -{var}"));
            }
            _ => values[var - 1] = Some(value),
        }
    }
    if let Some(missing) = values.iter().position(|v| v.is_none()) {
        return Err(format!("model leaves variable {} unassigned", missing + 1));
    }
    Ok(Assignment::from_values(values.into_iter().map(|v| v.unwrap()).collect()))
}

fn drain<R: Read + Send + 'static>(stream: Option<R>) -> std::thread::JoinHandle<Vec<u8>> {
    std::thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut stream) = stream {
            let _ = stream.read_to_end(&mut buf);
        }
        buf
    })
}

/// Runs `solver <cnf_path>`, enforcing `timeout`, and checks any claimed
/// model against `formula`.
pub fn run_external_solver(
    solver: &Path,
    cnf_path: &Path,
    formula: &Formula,
    timeout: Duration,
) -> ExternalReport {
    let start = Instant::now();
    let mut child = match Command::new(solver)
        .arg(cnf_path)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(child) => child,
        Err(e) => {
            return ExternalReport::crashed(
                format!("failed to start {}: {e}", solver.display()),
                start.elapsed(),
                None,
            )
        }
    };
    let stdout = drain(child.stdout.take());
    let stderr = drain(child.stderr.take());

    let deadline = start + timeout;
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) => {
                if Instant::now() >= deadline {
                    let _ = child.kill();
                    let _ = child.wait();
                    break None;
                }
                std::thread::sleep(Duration::from_millis(5));
            }
            Err(e) => {
                let _ = child.kill();
                let _ = child.wait();
                return ExternalReport::crashed(
                    format!("could not wait on solver: {e}"),
                    start.elapsed(),
                    None,
                );
            }
        }
    };
    let elapsed = start.elapsed();
    let stdout = stdout.join().unwrap_or_default();
    let _ = stderr.join();

    let Some(status) = status else {
        return ExternalReport {
            status: ExternalStatus::TimedOut,
            detail: format!("killed after {:.1}s", timeout.as_secs_f64()),
            elapsed,
            model: None,
            exit_code: None,
        };
    };
    let exit_code = status.code();

    let text = String::from_utf8_lossy(&stdout);
    let parsed = parse_solver_output(&text);
    match parsed.verdict {
        Some(SolverVerdict::Satisfiable) => {
            let model = match assemble_model(&parsed.model_literals, formula.num_vars()) {
                Ok(model) => model,
                Err(why) => {
                    return ExternalReport::crashed(
                        format!("solver claimed SATISFIABLE but {why}"),
                        elapsed,
                        exit_code,
                    )
                }
            };
            match evaluate(formula, &model) {
                Ok(Evaluation::Satisfied) => ExternalReport {
                    status: ExternalStatus::Satisfiable,
                    detail: "model verified".into(),
                    elapsed,
                    model: Some(model),
                    exit_code,
                },
                Ok(Evaluation::Falsified { clause_index }) => ExternalReport::crashed(
                    format!(
                        "solver claimed SATISFIABLE but its model falsifies clause {}",
                        clause_index + 1
                    ),
                    elapsed,
                    exit_code,
                ),
                Err(e) => {
                    ExternalReport::crashed(format!("model check failed: {e}"), elapsed, exit_code)
                }
            }
        }
        Some(SolverVerdict::Unsatisfiable) => ExternalReport {
            status: ExternalStatus::Unsatisfiable,
            detail: "solver reported UNSATISFIABLE".into(),
            elapsed,
            model: None,
            exit_code,
        },
        Some(SolverVerdict::Unknown) => ExternalReport::crashed(
            "solver reported neither SATISFIABLE nor UNSATISFIABLE".into(),
            elapsed,
            exit_code,
        ),
        None => ExternalReport::crashed(
            format!(
                "no verdict line in solver output (exit {})",
                exit_code.map_or("by signal".into(), |c| c.to_string())
            ),
            elapsed,
            exit_code,
        ),
    }
}
