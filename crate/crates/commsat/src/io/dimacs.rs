//! DIMACS CNF reading and writing.
//!
//! The writer produces a stable byte layout (fixed comment header, `\n`
//! endings, trailing newline), so identical instances serialize to identical
//! files. The reader accepts the common liberties found in the wild:
//! comments anywhere, clauses split across lines, blank lines, and a `%`
//! end-of-data marker; structural problems are hard errors with line
//! numbers, while unusual-but-usable content (non-three-literal clauses)
//! is reported as warnings.

use crate::generator::GeneratedInstance;
use crate::model::{Clause, Formula, Literal};
use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// A parsed CNF file.
#[derive(Debug, Clone, PartialEq)]
pub struct DimacsDocument {
    pub formula: Formula,
    /// Comment lines in file order, `c ` prefix stripped.
    pub comments: Vec<String>,
    /// Non-fatal oddities (e.g. clauses that are not three distinct vars).
    pub warnings: Vec<String>,
}

/// Renders `f` as DIMACS with the given comment lines (written verbatim
/// after `c `).
pub fn dimacs_to_string(f: &Formula, comments: &[String]) -> String {
    let mut out = String::new();
    for line in comments {
        if line.is_empty() {
            out.push_str("c\n");
        } else {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses());
    for clause in f.clauses() {
        for lit in clause.iter() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

fn format_float(x: f64) -> String {
    format!("{x:.6}")
}

/// Renders a generated instance: parameter header comments, optionally the
/// planted solution, then the formula.
pub fn instance_to_dimacs(inst: &GeneratedInstance, include_solution: bool) -> String {
    let p = &inst.params;
    let mut comments = vec![
        format!("seed {}", p.seed),
        format!(
            "n {} m {} communities {} p {} alpha {} p1 {} p2 {} p3 {} r {}",
            p.n,
            inst.formula.num_clauses(),
            p.c,
            format_float(p.p),
            format_float(p.alpha),
            format_float(p.dist.p1()),
            format_float(p.dist.p2()),
            format_float(p.dist.p3()),
            format_float(p.r),
        ),
    ];
    if include_solution {
        let mut line = String::from("solution");
        for (i, &value) in inst.solution.values().iter().enumerate() {
            let _ = write!(line, " {}", if value { i as i64 + 1 } else { -(i as i64 + 1) });
        }
        line.push_str(" 0");
        comments.push(line);
    }
    dimacs_to_string(&inst.formula, &comments)
}

/// Writes [`instance_to_dimacs`] to `path`.
pub fn write_dimacs(path: &Path, inst: &GeneratedInstance, include_solution: bool) -> Result<()> {
    std::fs::write(path, instance_to_dimacs(inst, include_solution))?;
    Ok(())
}

/// Parses DIMACS CNF text.
pub fn read_dimacs(input: &str) -> Result<DimacsDocument> {
    let mut comments = Vec::new();
    let mut warnings = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0usize;

    let err = |line: usize, msg: String| Error::DimacsParse { line, msg };

    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                comments.push(rest.trim_start().to_string());
                continue;
            }
            return Err(err(line_no, format!("unrecognized line {line:?}")));
        }
        if line.starts_with('%') {
            // SATLIB-style end-of-data marker; ignore everything after it.
            break;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate problem line".into()));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(err(line_no, format!("malformed problem line {line:?}")));
            }
            let n = fields[1]
                .parse::<usize>()
                .map_err(|e| err(line_no, format!("bad variable count {:?}: {e}", fields[1])))?;
            let m = fields[2]
                .parse::<usize>()
                .map_err(|e| err(line_no, format!("bad clause count {:?}: {e}", fields[2])))?;
            header = Some((n, m));
            continue;
        }

        let (n, m) = header.ok_or_else(|| {
            err(line_no, format!("clause data before the problem line: {line:?}"))
        })?;
        for token in line.split_whitespace() {
            let code = token
                .parse::<i32>()
                .map_err(|e| err(line_no, format!("bad literal {token:?}: {e}")))?;
            match Literal::from_dimacs(code) {
                None => {
                    if clauses.len() == m {
                        return Err(err(
                            line_no,
                            format!("more than the declared {m} clauses"),
                        ));
                    }
                    let clause = Clause::new(std::mem::take(&mut pending));
                    if !clause.is_three_distinct() {
                        warnings.push(format!(
                            "clause {} (line {line_no}) does not have three distinct \
                             variables (width {})",
                            clauses.len() + 1,
                            clause.len()
                        ));
                    }
                    clauses.push(clause);
                }
                Some(lit) => {
                    if lit.var() as usize > n {
                        return Err(err(
                            line_no,
                            format!("literal {code} exceeds the declared {n} variables"),
                        ));
                    }
                    if pending.is_empty() {
                        pending_line = line_no;
                    }
                    pending.push(lit);
                }
            }
        }
    }

    let (n, m) = header.ok_or_else(|| err(input.lines().count(), "no problem line".into()))?;
    if !pending.is_empty() {
        return Err(err(
            pending_line,
            format!("clause starting here is not terminated by 0 ({} literals)", pending.len()),
        ));
    }
    if clauses.len() != m {
        return Err(err(
            input.lines().count(),
            format!("declared {m} clauses but found {}", clauses.len()),
        ));
    }
    let formula = Formula::new(n, clauses)?;
    Ok(DimacsDocument { formula, comments, warnings })
}

/// Reads and parses a CNF file.
pub fn read_dimacs_file(path: &Path) -> Result<DimacsDocument> {
    read_dimacs(&std::fs::read_to_string(path)?)
}
