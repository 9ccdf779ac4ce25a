//! Serialization: DIMACS CNF for the formulas, JSON sidecars for everything
//! DIMACS cannot carry (planted solution, partition, provenance, parameters).

mod dimacs;
mod metadata;

pub use dimacs::{
    dimacs_to_string, instance_to_dimacs, read_dimacs, read_dimacs_file, write_dimacs,
    DimacsDocument,
};
pub use metadata::{
    metadata_to_string, read_metadata, read_metadata_file, write_metadata, InstanceMetadata,
    ParamsRecord, PartitionRecord, SCHEMA_VERSION,
};
