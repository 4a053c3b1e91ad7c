//! CPS model: lifecycle record, VDI 2206 structure, VDI 3682 processes,
//! DIN EN 61360 data elements, behavior models and SOSA observations.

mod builder;
mod manifest;

use thiserror::Error;

pub use builder::{
    CpsGraphBuilder, DataElementSpec, InstanceDescriptionSpec, Level, OperatorSpec, ProcessSpec, StateKind,
    StateSpec, StructureSpec,
};
pub use manifest::{
    check_manifest, compile_manifest, CpsManifest, DataElementEntry, EquationEntry, EquationSource,
    InstanceDescriptionEntry, LifecycleRecordEntry, ManifestError, ManifestIssue, ObservationEntry, OperatorEntry,
    ProcessEntry, StateEntry, StructureEntry,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CpsError {
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("structure node {0} contains itself")]
    CyclicStructure(String),
    #[error("{child} cannot be part of {parent}: level inversion")]
    LevelInversion { parent: String, child: String },
    #[error("unresolved reference: {0}")]
    UnresolvedReference(String),
    #[error("data element {0} has no type description")]
    MissingTypeDescription(String),
    #[error("{0} is not a process operator")]
    NotAnOperator(String),
    #[error("{0} is not an om:Object")]
    NotAnObject(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("invalid timestamp {0}")]
    InvalidTimestamp(String),
}
