use crate::structures::{ValidationReport, VertexId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),
    #[error("map domain does not match the structure's vertex set")]
    DomainMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("structure fails validation: {0}")]
    InvalidStructure(ValidationReport),
    #[error("extension is not a valid one-point extension: {0}")]
    InvalidExtension(String),
    #[error("constraint is not admissible over the host poset")]
    InadmissibleConstraint,
    #[error("type is not admissible over the host graph")]
    InadmissibleType,
    #[error("incomparability is not an equivalence relation: {0}")]
    NotMultipartite(String),
    #[error("parity property violated: {0}")]
    ParityViolation(String),
    #[error("automorphism image undefined at vertex {0}")]
    PhiUndefined(VertexId),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("map is not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("conjugation equation fails at vertex {0}")]
    ConjugationMismatch(VertexId),
    #[error("inverse image violates the order axioms: {0}")]
    NotAShuffle(String),
    #[error("construction invariant violated: {0}")]
    ConstructionInvariant(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
