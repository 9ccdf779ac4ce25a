//! Command-line surface: `generate`, `batch`, `verify`, `analyze`, `solve`,
//! and `run-ext`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure
//! (a recorded solution or claimed model does not satisfy the formula, or a
//! run crashed), 3 solver limit reached (decision/flip budget or timeout).

use crate::analysis::{build_vig, instance_stats, InstanceStats};
use crate::batch::{
    run_batch, BatchOptions, ExperimentGrid, InstanceRow, INSTANCES_CSV, SETTINGS_CSV,
};
use crate::distribution::ClauseDistribution;
use crate::error::Error;
use crate::generator::{generate_formula, GeneratedInstance, GeneratorParams, SolutionSpec};
use crate::io::{
    instance_to_dimacs, read_dimacs_file, read_metadata_file, write_metadata, DimacsDocument,
    InstanceMetadata,
};
use crate::model::{clause_type, evaluate, Assignment, Evaluation, Formula};
use crate::runner::{run_external_solver, ExternalStatus};
use crate::solvers::{dpll_solve, walksat_probe, DpllLimits, SolveStatus, WalksatParams};
use crate::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Duration;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Environment variable consulted when `--out` is not given.
pub const OUT_DIR_ENV: &str = "COMMSAT_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "commsat",
    version,
    about = "Generate, analyze, and solve 3-SAT instances with planted solutions and community structure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one instance (a CNF file plus a JSON metadata sidecar)
    Generate(GenerateArgs),
    /// Generate a cartesian grid of instances with per-instance and
    /// per-setting CSV summaries
    Batch(BatchArgs),
    /// Check that the solution recorded in the metadata satisfies the CNF
    Verify(PairArgs),
    /// Print instance statistics (clause types, community structure, VIG
    /// modularity)
    Analyze(AnalyzeArgs),
    /// Run the built-in DPLL or WalkSAT solver on a CNF
    Solve(SolveArgs),
    /// Run an external solver binary on a CNF under a wallclock timeout
    RunExt(RunExtArgs),
}

/// Ways to pick the clause-type distribution. At most one may be given;
/// the default is `--beta 0.5`.
#[derive(Args, Debug, Default)]
struct DistArgs {
    /// Expected fraction of literals agreeing with the planted solution
    #[arg(long)]
    beta: Option<f64>,
    /// Probability of a type-1 clause (requires --p2)
    #[arg(long, requires = "p2")]
    p1: Option<f64>,
    /// Probability of a type-2 clause (requires --p1)
    #[arg(long, requires = "p1")]
    p2: Option<f64>,
    /// Bias of the q-hidden family (q=1 matches one-hidden)
    #[arg(long)]
    q: Option<f64>,
    /// Classic one-hidden distribution (3/7, 3/7, 1/7)
    #[arg(long)]
    one_hidden: bool,
    /// Two-hidden distribution (1/2, 1/2, 0); plants the complement too
    #[arg(long)]
    two_hidden: bool,
}

impl DistArgs {
    fn resolve(&self) -> Result<ClauseDistribution> {
        let picked = [
            self.beta.is_some(),
            self.p1.is_some() || self.p2.is_some(),
            self.q.is_some(),
            self.one_hidden,
            self.two_hidden,
        ]
        .into_iter()
        .filter(|&b| b)
        .count();
        if picked > 1 {
            return Err(Error::InvalidParameters(
                "choose at most one of --beta, --p1/--p2, --q, --one-hidden, --two-hidden".into(),
            ));
        }
        if let Some(beta) = self.beta {
            ClauseDistribution::from_beta(beta)
        } else if let (Some(p1), Some(p2)) = (self.p1, self.p2) {
            ClauseDistribution::new(p1, p2)
        } else if let Some(q) = self.q {
            ClauseDistribution::from_q(q)
        } else if self.one_hidden {
            Ok(ClauseDistribution::one_hidden())
        } else if self.two_hidden {
            Ok(ClauseDistribution::two_hidden())
        } else {
            ClauseDistribution::from_beta(0.5)
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Number of variables
    #[arg(long, default_value_t = 500)]
    n: usize,
    /// Number of communities
    #[arg(long, default_value_t = 20)]
    c: usize,
    /// Probability that a clause is drawn inside one community
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Fraction of each community's variables kept intra-community
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Clause-to-variable ratio; the instance gets round(r*n) clauses
    #[arg(long, default_value_t = 4.5)]
    r: f64,
    #[command(flatten)]
    dist: DistArgs,
    /// RNG seed; a fresh random seed is drawn (and printed) if omitted
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: $COMMSAT_OUT_DIR or the current directory)
    #[arg(long)]
    out: Option<PathBuf>,
    /// File-name stem; defaults to a name derived from the parameters
    #[arg(long)]
    name: Option<String>,
    /// Embed the planted solution as a comment in the CNF
    #[arg(long)]
    solution_comment: bool,
    /// Omit the planted solution from the JSON metadata
    #[arg(long)]
    no_solution_metadata: bool,
    /// Resample clauses that duplicate an earlier clause
    #[arg(long)]
    no_duplicate_clauses: bool,
}

#[derive(Args, Debug)]
struct BatchArgs {
    /// Values for n: comma list and/or start:step:end ranges
    #[arg(long, default_value = "500")]
    n: String,
    /// Values for c
    #[arg(long, default_value = "20")]
    c: String,
    /// Values for p, e.g. "0:0.1:1"
    #[arg(long, default_value = "0.3")]
    p: String,
    /// Values for alpha
    #[arg(long, default_value = "1.0")]
    alpha: String,
    /// Values for beta
    #[arg(long, default_value = "0.5")]
    beta: String,
    /// Values for r
    #[arg(long, default_value = "4.5")]
    r: String,
    /// Instances per setting
    #[arg(long, default_value_t = 50)]
    count: usize,
    /// Master seed; per-instance seeds derive from it and the setting
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    /// Output directory (default: $COMMSAT_OUT_DIR or ./batch)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Embed the planted solution as a comment in each CNF
    #[arg(long)]
    solution_comment: bool,
    /// Omit the planted solution from the JSON metadata
    #[arg(long)]
    no_solution_metadata: bool,
    /// Resample clauses that duplicate an earlier clause
    #[arg(long)]
    no_duplicate_clauses: bool,
    /// Rewrite files that already exist instead of skipping them
    #[arg(long)]
    overwrite: bool,
    /// Print the plan (settings, instance count) without generating
    #[arg(long)]
    dry_run: bool,
    /// Worker threads for generation (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// CNF file
    cnf: PathBuf,
    /// Metadata file (default: the CNF path with a .json extension)
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// CNF file
    cnf: PathBuf,
    /// Metadata file (default: the CNF path with a .json extension, if present)
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Append the statistics as one CSV row (header written if the file is new)
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SolverKind {
    Dpll,
    Walksat,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// CNF file
    cnf: PathBuf,
    #[arg(long, value_enum, default_value_t = SolverKind::Dpll)]
    solver: SolverKind,
    /// Decision budget for dpll
    #[arg(long)]
    max_decisions: Option<u64>,
    /// Time budget in seconds for dpll
    #[arg(long)]
    max_seconds: Option<f64>,
    /// Flip budget for walksat
    #[arg(long, default_value_t = 1_000_000)]
    max_flips: u64,
    /// Random-walk probability for walksat
    #[arg(long, default_value_t = 0.5)]
    noise: f64,
    /// Seed for walksat's starting assignment and walk
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print any model found as `v` lines
    #[arg(long)]
    print_model: bool,
    /// Append the outcome as one CSV row (header written if the file is new)
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunExtArgs {
    /// Solver executable
    solver: PathBuf,
    /// CNF file, passed to the solver as its single argument
    cnf: PathBuf,
    /// Wallclock timeout in seconds
    #[arg(long, default_value_t = 1800.0)]
    timeout: f64,
}

/// Parses the process arguments, runs the selected command, and returns the
/// process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Batch(args) => cmd_batch(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Solve(args) => cmd_solve(args),
        Command::RunExt(args) => cmd_run_ext(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Output directory resolution: explicit flag, then the environment
/// variable, then the command's own fallback.
fn resolve_out_dir(explicit: Option<PathBuf>, env_value: Option<OsString>, fallback: &str) -> PathBuf {
    explicit
        .or_else(|| env_value.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(fallback))
}

fn out_dir(explicit: Option<PathBuf>, fallback: &str) -> PathBuf {
    resolve_out_dir(explicit, std::env::var_os(OUT_DIR_ENV), fallback)
}

fn print_stats(stats: &InstanceStats) {
    println!(
        "clause types  t1 {}  t2 {}  t3 {}  (beta {:.4})",
        stats.type_counts[0], stats.type_counts[1], stats.type_counts[2], stats.empirical_beta
    );
    println!(
        "intra-community clauses {} ({:.4} of m), intra-community variables {}",
        stats.intra_clauses, stats.intra_clause_fraction, stats.intra_variables
    );
    println!(
        "modularity {:.4}  degree mean {:.2}  degree cv {:.4}  duplicate clauses {}",
        stats.modularity, stats.degree_mean, stats.degree_cv, stats.duplicate_clauses
    );
}

fn cmd_generate(args: GenerateArgs) -> Result<i32> {
    let dist = args.dist.resolve()?;
    let seed = args.seed.unwrap_or_else(rand::random);
    let params = GeneratorParams {
        n: args.n,
        c: args.c,
        p: args.p,
        alpha: args.alpha,
        dist,
        r: args.r,
        seed,
        solution: SolutionSpec::Random,
        reject_duplicate_clauses: args.no_duplicate_clauses,
    };
    params.validate()?;
    let instance = generate_formula(&params)?;

    let dir = out_dir(args.out, ".");
    std::fs::create_dir_all(&dir)?;
    let stem = args.name.unwrap_or_else(|| {
        format!(
            "n{}_c{}_p{:.3}_a{:.3}_b{:.3}_r{:.3}_s{}",
            args.n,
            args.c,
            args.p,
            args.alpha,
            dist.beta(),
            args.r,
            seed
        )
    });
    let cnf_path = dir.join(format!("{stem}.cnf"));
    let meta_path = dir.join(format!("{stem}.json"));
    std::fs::write(&cnf_path, instance_to_dimacs(&instance, args.solution_comment))?;
    let meta = InstanceMetadata::from_instance(&instance, None, !args.no_solution_metadata);
    write_metadata(&meta_path, &meta)?;

    println!("wrote {}", cnf_path.display());
    println!("wrote {}", meta_path.display());
    println!(
        "seed {}  n {}  m {}  communities {}",
        seed,
        instance.formula.num_vars(),
        instance.formula.num_clauses(),
        args.c
    );
    print_stats(&instance_stats(&instance));
    Ok(EXIT_OK)
}

fn cmd_batch(args: BatchArgs) -> Result<i32> {
    let grid = ExperimentGrid {
        n: parse_usize_list(&args.n)?,
        c: parse_usize_list(&args.c)?,
        p: parse_f64_list(&args.p)?,
        alpha: parse_f64_list(&args.alpha)?,
        beta: parse_f64_list(&args.beta)?,
        r: parse_f64_list(&args.r)?,
        instances_per_setting: args.count,
        master_seed: args.master_seed,
        reject_duplicate_clauses: args.no_duplicate_clauses,
    };
    grid.validate()?;
    let dir = out_dir(args.out, "batch");
    println!(
        "grid: {} settings x {} instances = {} instances into {}",
        grid.num_points(),
        grid.instances_per_setting,
        grid.total_instances(),
        dir.display()
    );
    if args.dry_run {
        for point in grid.points() {
            println!("  {}", point.file_stem());
        }
        return Ok(EXIT_OK);
    }
    if let Some(workers) = args.workers {
        // Ignore the error: the global pool can only be configured once per
        // process, which is fine for a CLI.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }

    let options = BatchOptions {
        out_dir: dir.clone(),
        solution_comment: args.solution_comment,
        solution_in_metadata: !args.no_solution_metadata,
        overwrite: args.overwrite,
    };
    let summary = run_batch(&grid, &options)?;
    println!(
        "written {}  skipped (already present) {}  failed {}",
        summary.written, summary.skipped, summary.failed
    );
    println!("wrote {}", dir.join(INSTANCES_CSV).display());
    println!("wrote {}", dir.join(SETTINGS_CSV).display());
    if summary.failed > 0 {
        for row in summary.rows.iter().filter(|row| !row.is_ok()).take(5) {
            eprintln!("failed {}: {}", row.file, row.error);
        }
        if summary.failed > 5 {
            eprintln!("... and {} more failed rows (see {})", summary.failed - 5, INSTANCES_CSV);
        }
        return Ok(EXIT_USAGE);
    }
    Ok(EXIT_OK)
}

fn meta_path_for(cnf: &Path, meta: Option<PathBuf>) -> PathBuf {
    meta.unwrap_or_else(|| cnf.with_extension("json"))
}

/// Rebuilds a [`GeneratedInstance`] from a CNF/metadata pair so the same
/// statistics code serves files and freshly generated instances. When the
/// metadata omits the solution an all-true stand-in is used; statistics do
/// not consult it, and verification refuses separately.
fn instance_from_files(doc: &DimacsDocument, meta: &InstanceMetadata) -> Result<GeneratedInstance> {
    let formula = doc.formula.clone();
    if meta.params.n != formula.num_vars() {
        return Err(Error::Metadata(format!(
            "metadata says n={} but the CNF declares {} variables",
            meta.params.n,
            formula.num_vars()
        )));
    }
    if meta.provenance.len() != formula.num_clauses() {
        return Err(Error::Metadata(format!(
            "metadata records {} clause origins but the CNF has {} clauses",
            meta.provenance.len(),
            formula.num_clauses()
        )));
    }
    let partition = meta.community_partition()?;
    let solution = meta
        .solution_assignment()?
        .unwrap_or_else(|| Assignment::all_true(formula.num_vars()));
    let params = GeneratorParams {
        n: meta.params.n,
        c: meta.params.c,
        p: meta.params.p,
        alpha: meta.params.alpha,
        dist: meta.clause_distribution()?,
        r: meta.params.r,
        seed: meta.seed,
        solution: SolutionSpec::Random,
        reject_duplicate_clauses: meta.params.reject_duplicate_clauses,
    };
    Ok(GeneratedInstance { formula, solution, partition, params, provenance: meta.provenance.clone() })
}

fn cmd_verify(args: PairArgs) -> Result<i32> {
    let doc = read_dimacs_file(&args.cnf)?;
    let meta = read_metadata_file(&meta_path_for(&args.cnf, args.meta))?;
    for warning in &doc.warnings {
        eprintln!("warning: {warning}");
    }
    let instance = instance_from_files(&doc, &meta)?;

    let Some(solution) = meta.solution_assignment()? else {
        println!("NOT VERIFIABLE: metadata records no solution");
        return Ok(EXIT_USAGE);
    };

    // Histogram of agreement counts under the recorded solution; bucket 0
    // is exactly the falsified clauses and must stay empty.
    let mut histogram = vec![0usize; 4];
    let mut first_falsified = None;
    let mut provenance_mismatches = 0usize;
    for (i, clause) in doc.formula.clauses().iter().enumerate() {
        let t = clause_type(clause, &solution)?;
        *histogram.get_mut(t.min(3)).unwrap() += 1;
        if t == 0 && first_falsified.is_none() {
            first_falsified = Some(i);
        }
        if t != meta.provenance[i].clause_type as usize {
            provenance_mismatches += 1;
        }
    }
    println!(
        "clause types under recorded solution  t0 {}  t1 {}  t2 {}  t3 {}",
        histogram[0], histogram[1], histogram[2], histogram[3]
    );

    match evaluate(&doc.formula, &solution)? {
        Evaluation::Satisfied if provenance_mismatches == 0 => {
            println!("PASS: recorded solution satisfies all {} clauses", doc.formula.num_clauses());
            let _ = instance; // consistency checks already ran in instance_from_files
            Ok(EXIT_OK)
        }
        Evaluation::Satisfied => {
            println!(
                "FAIL: solution satisfies the formula but {provenance_mismatches} recorded clause types disagree with it"
            );
            Ok(EXIT_VERIFY_FAILED)
        }
        Evaluation::Falsified { clause_index } => {
            let shown = first_falsified.unwrap_or(clause_index);
            println!(
                "FAIL: clause {} is falsified by the recorded solution: {}",
                shown + 1,
                doc.formula.clauses()[shown]
            );
            Ok(EXIT_VERIFY_FAILED)
        }
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32> {
    let doc = read_dimacs_file(&args.cnf)?;
    for warning in &doc.warnings {
        eprintln!("warning: {warning}");
    }
    let meta_path = meta_path_for(&args.cnf, args.meta.clone());
    let meta = if meta_path.exists() || args.meta.is_some() {
        Some(read_metadata_file(&meta_path)?)
    } else {
        None
    };

    println!(
        "{}: n {}  m {}",
        args.cnf.display(),
        doc.formula.num_vars(),
        doc.formula.num_clauses()
    );
    match meta {
        Some(meta) => {
            let instance = instance_from_files(&doc, &meta)?;
            let stats = instance_stats(&instance);
            println!(
                "params  c {}  p {}  alpha {}  p1 {:.4}  p2 {:.4}  p3 {:.4}  r {}  seed {}",
                meta.params.c,
                meta.params.p,
                meta.params.alpha,
                meta.params.p1,
                meta.params.p2,
                meta.params.p3,
                meta.params.r,
                meta.seed
            );
            print_stats(&stats);
            if let Some(csv) = args.csv {
                let dist = meta.clause_distribution()?;
                let row = InstanceRow {
                    file: args.cnf.display().to_string(),
                    n: meta.params.n,
                    c: meta.params.c,
                    p: meta.params.p,
                    alpha: meta.params.alpha,
                    beta: dist.beta(),
                    r: meta.params.r,
                    index: meta.index.unwrap_or(0),
                    seed: meta.seed,
                    m: stats.num_clauses,
                    type1: stats.type_counts[0],
                    type2: stats.type_counts[1],
                    type3: stats.type_counts[2],
                    empirical_beta: stats.empirical_beta,
                    intra_clauses: stats.intra_clauses,
                    intra_clause_fraction: stats.intra_clause_fraction,
                    intra_variables: stats.intra_variables,
                    modularity: stats.modularity,
                    degree_mean: stats.degree_mean,
                    degree_cv: stats.degree_cv,
                    duplicate_clauses: stats.duplicate_clauses,
                    error: String::new(),
                };
                append_csv_row(&csv, &row)?;
                println!("appended row to {}", csv.display());
            }
        }
        None => {
            // Without metadata there is no partition, so only formula-level
            // statistics are available.
            let g = build_vig(&doc.formula);
            let degrees = g.degrees();
            let mean = degrees.iter().sum::<f64>() / degrees.len().max(1) as f64;
            println!(
                "no metadata found at {}; community statistics unavailable",
                meta_path.display()
            );
            println!(
                "vig edges {}  total weight {:.2}  degree mean {:.2}",
                g.num_edges(),
                g.total_weight(),
                mean
            );
            println!("duplicate clauses {}", doc.formula.duplicate_clause_count());
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SolveCsvRow<'a> {
    file: &'a str,
    solver: &'a str,
    status: &'a str,
    decisions: u64,
    propagations: u64,
    flips: u64,
    elapsed_secs: f64,
    seed: u64,
    noise: f64,
}

fn append_csv_row<T: Serialize>(path: &Path, row: &T) -> Result<()> {
    let fresh = !path.exists();
    let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut writer = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    writer.serialize(row)?;
    writer.flush()?;
    Ok(())
}

fn print_model(model: &Assignment) {
    let mut tokens: Vec<String> = model
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| if v { format!("{}", i + 1) } else { format!("-{}", i + 1) })
        .collect();
    tokens.push("0".into());
    for chunk in tokens.chunks(15) {
        println!("v {}", chunk.join(" "));
    }
}

fn status_exit(formula: &Formula, status: &SolveStatus, print: bool) -> Result<i32> {
    match status {
        SolveStatus::Satisfiable(model) => {
            match evaluate(formula, model)? {
                Evaluation::Satisfied => println!("s SATISFIABLE (model verified)"),
                Evaluation::Falsified { clause_index } => {
                    // Defensive: the solvers check their own models.
                    println!("s SATISFIABLE but model falsifies clause {}", clause_index + 1);
                    return Ok(EXIT_VERIFY_FAILED);
                }
            }
            if print {
                print_model(model);
            }
            Ok(EXIT_OK)
        }
        SolveStatus::Unsatisfiable => {
            println!("s UNSATISFIABLE");
            Ok(EXIT_OK)
        }
        SolveStatus::LimitReached => {
            println!("s UNKNOWN (limit reached)");
            Ok(EXIT_LIMIT)
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let doc = read_dimacs_file(&args.cnf)?;
    for warning in &doc.warnings {
        eprintln!("warning: {warning}");
    }
    let file = args.cnf.display().to_string();
    match args.solver {
        SolverKind::Dpll => {
            let limits =
                DpllLimits { max_decisions: args.max_decisions, max_seconds: args.max_seconds };
            let report = dpll_solve(&doc.formula, &limits)?;
            println!(
                "dpll: decisions {}  propagations {}  elapsed {:.3}s",
                report.decisions,
                report.propagations,
                report.elapsed.as_secs_f64()
            );
            let code = status_exit(&doc.formula, &report.status, args.print_model)?;
            if let Some(csv) = args.csv {
                append_csv_row(
                    &csv,
                    &SolveCsvRow {
                        file: &file,
                        solver: "dpll",
                        status: status_name(&report.status),
                        decisions: report.decisions,
                        propagations: report.propagations,
                        flips: 0,
                        elapsed_secs: report.elapsed.as_secs_f64(),
                        seed: 0,
                        noise: 0.0,
                    },
                )?;
            }
            Ok(code)
        }
        SolverKind::Walksat => {
            let params =
                WalksatParams { noise: args.noise, max_flips: args.max_flips, seed: args.seed };
            let report = walksat_probe(&doc.formula, &params)?;
            println!(
                "walksat: flips {}  elapsed {:.3}s",
                report.flips,
                report.elapsed.as_secs_f64()
            );
            let code = status_exit(&doc.formula, &report.status, args.print_model)?;
            if let Some(csv) = args.csv {
                append_csv_row(
                    &csv,
                    &SolveCsvRow {
                        file: &file,
                        solver: "walksat",
                        status: status_name(&report.status),
                        decisions: 0,
                        propagations: 0,
                        flips: report.flips,
                        elapsed_secs: report.elapsed.as_secs_f64(),
                        seed: args.seed,
                        noise: args.noise,
                    },
                )?;
            }
            Ok(code)
        }
    }
}

fn status_name(status: &SolveStatus) -> &'static str {
    match status {
        SolveStatus::Satisfiable(_) => "sat",
        SolveStatus::Unsatisfiable => "unsat",
        SolveStatus::LimitReached => "limit",
    }
}

fn cmd_run_ext(args: RunExtArgs) -> Result<i32> {
    if !args.solver.exists() {
        return Err(Error::InvalidParameters(format!(
            "solver executable {} does not exist",
            args.solver.display()
        )));
    }
    if !(args.timeout.is_finite() && args.timeout > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "timeout must be a positive number of seconds, got {}",
            args.timeout
        )));
    }
    let doc = read_dimacs_file(&args.cnf)?;
    let report = run_external_solver(
        &args.solver,
        &args.cnf,
        &doc.formula,
        Duration::from_secs_f64(args.timeout),
    );
    let label = match report.status {
        ExternalStatus::Satisfiable => "SAT",
        ExternalStatus::Unsatisfiable => "UNSAT",
        ExternalStatus::TimedOut => "TIMEOUT",
        ExternalStatus::Crashed => "CRASH",
    };
    println!(
        "{label}: {}  elapsed {:.3}s  exit {}",
        report.detail,
        report.elapsed.as_secs_f64(),
        report.exit_code.map_or("none".into(), |c| c.to_string())
    );
    Ok(match report.status {
        ExternalStatus::Satisfiable | ExternalStatus::Unsatisfiable => EXIT_OK,
        ExternalStatus::TimedOut => EXIT_LIMIT,
        ExternalStatus::Crashed => EXIT_VERIFY_FAILED,
    })
}

/// Parses "0.3", "0.1,0.2,0.5", or "0:0.1:1" (inclusive range), and any
/// comma-separated mix of the three.
fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [single] => out.push(parse_f64(single)?),
            [start, step, end] => {
                let (start, step, end) = (parse_f64(start)?, parse_f64(step)?, parse_f64(end)?);
                if step <= 0.0 {
                    return Err(Error::InvalidParameters(format!(
                        "range step must be positive in {part:?}"
                    )));
                }
                let mut k = 0u64;
                loop {
                    let value = start + k as f64 * step;
                    if value > end + step * 1e-9 {
                        break;
                    }
                    // Snap away accumulated binary dust (0.30000000000000004).
                    out.push((value * 1e9).round() / 1e9);
                    k += 1;
                }
            }
            _ => {
                return Err(Error::InvalidParameters(format!(
                    "expected a value or start:step:end, got {part:?}"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidParameters(format!("no values in list {text:?}")));
    }
    Ok(out)
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameters(format!("{s:?} is not a number")))
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [single] => out.push(parse_usize(single)?),
            [start, step, end] => {
                let (start, step, end) =
                    (parse_usize(start)?, parse_usize(step)?, parse_usize(end)?);
                if step == 0 {
                    return Err(Error::InvalidParameters(format!(
                        "range step must be positive in {part:?}"
                    )));
                }
                let mut value = start;
                while value <= end {
                    out.push(value);
                    value += step;
                }
            }
            _ => {
                return Err(Error::InvalidParameters(format!(
                    "expected a value or start:step:end, got {part:?}"
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidParameters(format!("no values in list {text:?}")));
    }
    Ok(out)
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameters(format!("{s:?} is not a non-negative integer")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_lists_accept_values_and_ranges() {
        assert_eq!(parse_f64_list("0.3").unwrap(), vec![0.3]);
        assert_eq!(parse_f64_list("0.1, 0.5,0.9").unwrap(), vec![0.1, 0.5, 0.9]);
        let swept = parse_f64_list("0:0.1:1").unwrap();
        assert_eq!(swept.len(), 11);
        assert_eq!(swept[0], 0.0);
        assert_eq!(swept[3], 0.3); // exactly, thanks to snapping
        assert_eq!(swept[10], 1.0);
        assert_eq!(parse_f64_list("0.25,2:1:4").unwrap(), vec![0.25, 2.0, 3.0, 4.0]);
        assert!(parse_f64_list("1:0:2").is_err());
        assert!(parse_f64_list("a").is_err());
        assert!(parse_f64_list("1:2").is_err());
        assert!(parse_f64_list("").is_err());
    }

    #[test]
    fn integer_lists_accept_values_and_ranges() {
        assert_eq!(parse_usize_list("500").unwrap(), vec![500]);
        assert_eq!(parse_usize_list("100:200:700").unwrap(), vec![100, 300, 500, 700]);
        assert_eq!(parse_usize_list("10,20").unwrap(), vec![10, 20]);
        assert!(parse_usize_list("5:0:9").is_err());
        assert!(parse_usize_list("-3").is_err());
    }

    #[test]
    fn distribution_flags_are_mutually_exclusive() {
        let args = DistArgs { beta: Some(0.5), q: Some(1.0), ..DistArgs::default() };
        assert!(args.resolve().is_err());
        let args = DistArgs { one_hidden: true, two_hidden: true, ..DistArgs::default() };
        assert!(args.resolve().is_err());
    }

    #[test]
    fn distribution_default_is_beta_half() {
        let dist = DistArgs::default().resolve().unwrap();
        assert!((dist.p1() - 0.625).abs() < 1e-12);
        assert!((dist.p2() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn distribution_presets_resolve() {
        let one = DistArgs { one_hidden: true, ..DistArgs::default() }.resolve().unwrap();
        assert!((one.p1() - 3.0 / 7.0).abs() < 1e-12);
        let two = DistArgs { two_hidden: true, ..DistArgs::default() }.resolve().unwrap();
        assert!((two.p3()).abs() < 1e-12);
        let q = DistArgs { q: Some(1.0), ..DistArgs::default() }.resolve().unwrap();
        assert!((q.p1() - one.p1()).abs() < 1e-12);
    }

    #[test]
    fn out_dir_prefers_flag_then_env_then_fallback() {
        assert_eq!(
            resolve_out_dir(Some(PathBuf::from("cli")), Some("env".into()), "fb"),
            PathBuf::from("cli")
        );
        assert_eq!(resolve_out_dir(None, Some("env".into()), "fb"), PathBuf::from("env"));
        assert_eq!(resolve_out_dir(None, None, "fb"), PathBuf::from("fb"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
