//! Parameter grids for experiments: deterministic enumeration of settings,
//! stable file names and per-instance seeds, parallel generation with
//! per-instance error capture, and CSV summaries.
//!
//! Determinism contract: an instance's bytes depend only on its grid point,
//! its index within the setting, and the master seed — not on the rest of
//! the grid. Re-running a batch into the same directory skips files that
//! already exist (and flags them if their bytes disagree), so interrupted
//! runs can be resumed.

use crate::analysis::instance_stats;
use crate::distribution::ClauseDistribution;
use crate::error::Error;
use crate::generator::{derive_seed, generate_formula, GeneratorParams, SolutionSpec};
use crate::io::{instance_to_dimacs, metadata_to_string, InstanceMetadata};
use crate::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// File holding one row per generated instance.
pub const INSTANCES_CSV: &str = "instances.csv";
/// File holding one aggregated row per grid point.
pub const SETTINGS_CSV: &str = "settings.csv";

/// Cartesian product of parameter axes. Empty axes are invalid; a single
/// value per axis reduces the grid to one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid {
    pub n: Vec<usize>,
    pub c: Vec<usize>,
    pub p: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub r: Vec<f64>,
    pub instances_per_setting: usize,
    pub master_seed: u64,
    pub reject_duplicate_clauses: bool,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        ExperimentGrid {
            n: vec![500],
            c: vec![20],
            p: vec![0.3],
            alpha: vec![1.0],
            beta: vec![0.5],
            r: vec![4.5],
            instances_per_setting: 50,
            master_seed: 0,
            reject_duplicate_clauses: false,
        }
    }
}

/// One setting of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub n: usize,
    pub c: usize,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
}

impl ExperimentGrid {
    pub fn validate(&self) -> Result<()> {
        for (name, empty) in [
            ("n", self.n.is_empty()),
            ("c", self.c.is_empty()),
            ("p", self.p.is_empty()),
            ("alpha", self.alpha.is_empty()),
            ("beta", self.beta.is_empty()),
            ("r", self.r.is_empty()),
        ] {
            if empty {
                return Err(Error::InvalidParameters(format!("grid axis {name} is empty")));
            }
        }
        if self.instances_per_setting == 0 {
            return Err(Error::InvalidParameters(
                "instances_per_setting must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// All grid points, in a fixed documented order: p varies slowest, then
    /// alpha, beta, r, n, and c fastest.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut points = Vec::with_capacity(self.num_points());
        for &p in &self.p {
            for &alpha in &self.alpha {
                for &beta in &self.beta {
                    for &r in &self.r {
                        for &n in &self.n {
                            for &c in &self.c {
                                points.push(GridPoint { n, c, p, alpha, beta, r });
                            }
                        }
                    }
                }
            }
        }
        points
    }

    pub fn num_points(&self) -> usize {
        self.p.len() * self.alpha.len() * self.beta.len() * self.r.len() * self.n.len() * self.c.len()
    }

    pub fn total_instances(&self) -> usize {
        self.num_points() * self.instances_per_setting
    }
}

/// FNV-1a, used to hash a setting's stem into its seed stream. Stable by
/// definition, unlike `DefaultHasher`.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

impl GridPoint {
    /// Canonical file-name stem for this setting, e.g.
    /// `n500_c20_p0.300_a1.000_b0.500_r4.500`. Three decimals suffice for
    /// the grids we sweep; two settings closer than 0.001 on an axis would
    /// collide and should be disambiguated by separate output directories.
    pub fn file_stem(&self) -> String {
        format!(
            "n{}_c{}_p{:.3}_a{:.3}_b{:.3}_r{:.3}",
            self.n, self.c, self.p, self.alpha, self.beta, self.r
        )
    }

    /// Seed for instance `index` of this setting. Mixing the stem keeps a
    /// setting's seed stream independent of its position in the grid, so
    /// editing other axes never changes existing instances.
    pub fn instance_seed(&self, master_seed: u64, index: u64) -> u64 {
        derive_seed(master_seed ^ fnv1a64(self.file_stem().as_bytes()), index)
    }

    pub fn to_params(&self, seed: u64, reject_duplicate_clauses: bool) -> Result<GeneratorParams> {
        let params = GeneratorParams {
            n: self.n,
            c: self.c,
            p: self.p,
            alpha: self.alpha,
            dist: ClauseDistribution::from_beta(self.beta)?,
            r: self.r,
            seed,
            solution: SolutionSpec::Random,
            reject_duplicate_clauses,
        };
        params.validate()?;
        Ok(params)
    }
}

/// How a batch writes its files.
#[derive(Debug, Clone)]
pub struct BatchOptions {
    pub out_dir: PathBuf,
    /// Embed the planted solution as a DIMACS comment.
    pub solution_comment: bool,
    /// Record the planted solution in the JSON metadata.
    pub solution_in_metadata: bool,
    /// Rewrite files that already exist instead of skipping them.
    pub overwrite: bool,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            out_dir: PathBuf::from("batch"),
            solution_comment: false,
            solution_in_metadata: true,
            overwrite: false,
        }
    }
}

/// One CSV row per instance. `error` is empty for successful rows; failed
/// rows keep their identity columns and zero out the statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRow {
    pub file: String,
    pub n: usize,
    pub c: usize,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub index: u64,
    pub seed: u64,
    pub m: usize,
    pub type1: usize,
    pub type2: usize,
    pub type3: usize,
    pub empirical_beta: f64,
    pub intra_clauses: usize,
    pub intra_clause_fraction: f64,
    pub intra_variables: usize,
    pub modularity: f64,
    pub degree_mean: f64,
    pub degree_cv: f64,
    pub duplicate_clauses: usize,
    pub error: String,
}

impl InstanceRow {
    pub fn is_ok(&self) -> bool {
        self.error.is_empty()
    }

    /// Group key shared by all instances of one setting.
    pub fn setting_stem(&self) -> String {
        GridPoint {
            n: self.n,
            c: self.c,
            p: self.p,
            alpha: self.alpha,
            beta: self.beta,
            r: self.r,
        }
        .file_stem()
    }
}

/// One aggregated CSV row per grid point. Standard deviations are sample
/// standard deviations (zero when fewer than two successful rows).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingRow {
    pub setting: String,
    pub n: usize,
    pub c: usize,
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub instances: usize,
    pub failures: usize,
    pub mean_modularity: f64,
    pub std_modularity: f64,
    pub mean_intra_clause_fraction: f64,
    pub mean_empirical_beta: f64,
    pub mean_degree_mean: f64,
    pub mean_degree_cv: f64,
}

/// What `run_batch` did.
#[derive(Debug, Clone)]
pub struct BatchSummary {
    pub rows: Vec<InstanceRow>,
    pub written: usize,
    pub skipped: usize,
    pub failed: usize,
}

fn failed_row(point: &GridPoint, index: u64, seed: u64, file: String, error: String) -> InstanceRow {
    InstanceRow {
        file,
        n: point.n,
        c: point.c,
        p: point.p,
        alpha: point.alpha,
        beta: point.beta,
        r: point.r,
        index,
        seed,
        m: 0,
        type1: 0,
        type2: 0,
        type3: 0,
        empirical_beta: 0.0,
        intra_clauses: 0,
        intra_clause_fraction: 0.0,
        intra_variables: 0,
        modularity: 0.0,
        degree_mean: 0.0,
        degree_cv: 0.0,
        duplicate_clauses: 0,
        error,
    }
}

/// Writes a file only if it is absent or `overwrite` is set. An existing
/// file with different contents is reported as an error so that silent
/// corruption (or a clashing foreign file) cannot hide in a resumed batch.
/// Returns whether the file was (re)written.
fn write_or_check(path: &Path, contents: &str, overwrite: bool) -> std::result::Result<bool, String> {
    if !overwrite && path.exists() {
        let existing = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
        if existing == contents.as_bytes() {
            return Ok(false);
        }
        return Err(format!(
            "{} already exists with different contents; use overwrite to replace it",
            path.display()
        ));
    }
    std::fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(true)
}

/// Generates every instance of the grid into `options.out_dir` and returns
/// the per-instance rows in grid order. Individual failures (invalid
/// settings, infeasible rejection sampling, I/O trouble) are recorded in
/// their row and do not abort the rest of the batch.
pub fn run_batch(grid: &ExperimentGrid, options: &BatchOptions) -> Result<BatchSummary> {
    grid.validate()?;
    std::fs::create_dir_all(&options.out_dir)?;

    let mut jobs = Vec::with_capacity(grid.total_instances());
    for point in grid.points() {
        for index in 0..grid.instances_per_setting as u64 {
            jobs.push((point, index));
        }
    }

    let rows: Vec<(InstanceRow, bool)> = jobs
        .par_iter()
        .map(|&(point, index)| run_job(grid, options, &point, index))
        .collect();

    let written = rows.iter().filter(|(row, wrote)| *wrote && row.is_ok()).count();
    let skipped = rows.iter().filter(|(row, wrote)| !*wrote && row.is_ok()).count();
    let rows: Vec<InstanceRow> = rows.into_iter().map(|(row, _)| row).collect();
    let failed = rows.iter().filter(|row| !row.is_ok()).count();

    write_instance_csv(&options.out_dir.join(INSTANCES_CSV), &rows)?;
    let settings = aggregate_rows(&rows);
    write_setting_csv(&options.out_dir.join(SETTINGS_CSV), &settings)?;

    Ok(BatchSummary { rows, written, skipped, failed })
}

/// Generates (or re-derives) one instance and writes its pair of files.
/// The boolean reports whether any file was written this run.
fn run_job(
    grid: &ExperimentGrid,
    options: &BatchOptions,
    point: &GridPoint,
    index: u64,
) -> (InstanceRow, bool) {
    let seed = point.instance_seed(grid.master_seed, index);
    let stem = format!("{}_i{index:04}", point.file_stem());
    let cnf_name = format!("{stem}.cnf");

    let params = match point.to_params(seed, grid.reject_duplicate_clauses) {
        Ok(params) => params,
        Err(e) => return (failed_row(point, index, seed, cnf_name, e.to_string()), false),
    };
    let instance = match generate_formula(&params) {
        Ok(instance) => instance,
        Err(e) => return (failed_row(point, index, seed, cnf_name, e.to_string()), false),
    };
    let stats = instance_stats(&instance);

    let cnf = instance_to_dimacs(&instance, options.solution_comment);
    let metadata = InstanceMetadata::from_instance(
        &instance,
        Some((grid.master_seed, index)),
        options.solution_in_metadata,
    );
    let meta_text = match metadata_to_string(&metadata) {
        Ok(text) => text,
        Err(e) => return (failed_row(point, index, seed, cnf_name, e.to_string()), false),
    };

    let mut wrote = false;
    for (name, contents) in [(cnf_name.clone(), cnf), (format!("{stem}.json"), meta_text)] {
        match write_or_check(&options.out_dir.join(&name), &contents, options.overwrite) {
            Ok(wrote_this) => wrote |= wrote_this,
            Err(msg) => return (failed_row(point, index, seed, cnf_name, msg), wrote),
        }
    }

    let row = InstanceRow {
        file: cnf_name,
        n: point.n,
        c: point.c,
        p: point.p,
        alpha: point.alpha,
        beta: point.beta,
        r: point.r,
        index,
        seed,
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
    (row, wrote)
}

pub fn write_instance_csv(path: &Path, rows: &[InstanceRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_instance_csv(path: &Path) -> Result<Vec<InstanceRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

pub fn write_setting_csv(path: &Path, rows: &[SettingRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

fn mean_and_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

/// Collapses instance rows into one row per setting, preserving the order
/// in which settings first appear. Failed rows count toward `failures` and
/// are excluded from the means.
pub fn aggregate_rows(rows: &[InstanceRow]) -> Vec<SettingRow> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: std::collections::HashMap<String, Vec<&InstanceRow>> =
        std::collections::HashMap::new();
    for row in rows {
        let stem = row.setting_stem();
        groups.entry(stem.clone()).or_insert_with(|| {
            order.push(stem);
            Vec::new()
        });
        groups.get_mut(&row.setting_stem()).unwrap().push(row);
    }

    order
        .into_iter()
        .map(|stem| {
            let group = &groups[&stem];
            let first = group[0];
            let ok: Vec<&&InstanceRow> = group.iter().filter(|row| row.is_ok()).collect();
            let collect = |f: fn(&InstanceRow) -> f64| -> Vec<f64> {
                ok.iter().map(|row| f(row)).collect()
            };
            let (mean_modularity, std_modularity) = mean_and_std(&collect(|r| r.modularity));
            let (mean_intra, _) = mean_and_std(&collect(|r| r.intra_clause_fraction));
            let (mean_beta, _) = mean_and_std(&collect(|r| r.empirical_beta));
            let (mean_degree, _) = mean_and_std(&collect(|r| r.degree_mean));
            let (mean_cv, _) = mean_and_std(&collect(|r| r.degree_cv));
            SettingRow {
                setting: stem,
                n: first.n,
                c: first.c,
                p: first.p,
                alpha: first.alpha,
                beta: first.beta,
                r: first.r,
                instances: group.len(),
                failures: group.len() - ok.len(),
                mean_modularity,
                std_modularity,
                mean_intra_clause_fraction: mean_intra,
                mean_empirical_beta: mean_beta,
                mean_degree_mean: mean_degree,
                mean_degree_cv: mean_cv,
            }
        })
        .collect()
}
