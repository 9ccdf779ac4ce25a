//! JSON sidecar carrying what the CNF cannot: generation parameters, the
//! community partition, the planted solution (optional), and per-clause
//! provenance. A schema version gates incompatible readers.

use crate::distribution::ClauseDistribution;
use crate::generator::{ClauseOrigin, GeneratedInstance};
use crate::model::Assignment;
use crate::partition::CommunityPartition;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Generation parameters as recorded on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub n: usize,
    pub c: usize,
    pub p: f64,
    pub alpha: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub r: f64,
    pub m: usize,
    pub reject_duplicate_clauses: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRecord {
    /// `home[i]` is the home community of variable `i + 1`.
    pub home: Vec<u32>,
    /// Extra community joined by inter-community variables.
    pub second: Vec<Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMetadata {
    pub schema_version: u32,
    pub generator: String,
    /// Seed this instance was generated from.
    pub seed: u64,
    /// Batch bookkeeping, when the instance came from one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    pub params: ParamsRecord,
    pub partition: PartitionRecord,
    /// Planted solution as a `0`/`1` string, variable `i + 1` at position
    /// `i`; absent when the instance was written without its solution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
    /// One record per clause, e.g. `"i2"`: drawn intra-community, type 2.
    pub provenance: Vec<ClauseOrigin>,
}

impl InstanceMetadata {
    pub fn from_instance(
        inst: &GeneratedInstance,
        batch: Option<(u64, u64)>,
        include_solution: bool,
    ) -> Self {
        let p = &inst.params;
        InstanceMetadata {
            schema_version: SCHEMA_VERSION,
            generator: format!("commsat {}", env!("CARGO_PKG_VERSION")),
            seed: p.seed,
            master_seed: batch.map(|(master, _)| master),
            index: batch.map(|(_, index)| index),
            params: ParamsRecord {
                n: p.n,
                c: p.c,
                p: p.p,
                alpha: p.alpha,
                p1: p.dist.p1(),
                p2: p.dist.p2(),
                p3: p.dist.p3(),
                r: p.r,
                m: inst.formula.num_clauses(),
                reject_duplicate_clauses: p.reject_duplicate_clauses,
            },
            partition: PartitionRecord {
                home: inst.partition.home_map().to_vec(),
                second: inst.partition.second_map().to_vec(),
            },
            solution: include_solution.then(|| {
                inst.solution.values().iter().map(|&v| if v { '1' } else { '0' }).collect()
            }),
            provenance: inst.provenance.clone(),
        }
    }

    /// Rebuilds the community partition, validating it.
    pub fn community_partition(&self) -> Result<CommunityPartition> {
        CommunityPartition::from_parts(
            self.params.n,
            self.params.c,
            self.partition.home.clone(),
            self.partition.second.clone(),
        )
    }

    /// Decodes the planted solution, if recorded.
    pub fn solution_assignment(&self) -> Result<Option<Assignment>> {
        let Some(bits) = &self.solution else {
            return Ok(None);
        };
        let mut values = Vec::with_capacity(bits.len());
        for (i, ch) in bits.chars().enumerate() {
            match ch {
                '0' => values.push(false),
                '1' => values.push(true),
                other => {
                    return Err(Error::Metadata(format!(
                        "solution bit {i} is {other:?}, expected '0' or '1'"
                    )))
                }
            }
        }
        Ok(Some(Assignment::from_values(values)))
    }

    pub fn clause_distribution(&self) -> Result<ClauseDistribution> {
        ClauseDistribution::new(self.params.p1, self.params.p2)
    }
}

/// Serializes metadata as pretty JSON with a trailing newline.
pub fn metadata_to_string(meta: &InstanceMetadata) -> Result<String> {
    let mut text = serde_json::to_string_pretty(meta)?;
    text.push('\n');
    Ok(text)
}

pub fn write_metadata(path: &Path, meta: &InstanceMetadata) -> Result<()> {
    std::fs::write(path, metadata_to_string(meta)?)?;
    Ok(())
}

/// Parses and structurally validates metadata JSON.
pub fn read_metadata(input: &str) -> Result<InstanceMetadata> {
    let meta: InstanceMetadata = serde_json::from_str(input)?;
    if meta.schema_version != SCHEMA_VERSION {
        return Err(Error::Metadata(format!(
            "schema version {} not supported (this build reads {SCHEMA_VERSION})",
            meta.schema_version
        )));
    }
    let n = meta.params.n;
    if meta.partition.home.len() != n || meta.partition.second.len() != n {
        return Err(Error::Metadata(format!(
            "partition maps cover {}/{} variables, expected {n}",
            meta.partition.home.len(),
            meta.partition.second.len()
        )));
    }
    if let Some(bits) = &meta.solution {
        if bits.chars().count() != n {
            return Err(Error::Metadata(format!(
                "solution string has {} bits, expected {n}",
                bits.chars().count()
            )));
        }
    }
    if meta.provenance.len() != meta.params.m {
        return Err(Error::Metadata(format!(
            "provenance lists {} clauses, header says {}",
            meta.provenance.len(),
            meta.params.m
        )));
    }
    Ok(meta)
}

pub fn read_metadata_file(path: &Path) -> Result<InstanceMetadata> {
    read_metadata(&std::fs::read_to_string(path)?)
}
