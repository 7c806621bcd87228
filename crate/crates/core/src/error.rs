use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("multiplicity 0 at line {line}")]
    ZeroMultiplicity { line: usize },
    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },
    #[error("parallel edge at line {line}")]
    ParallelEdge { line: usize },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph has no Eulerian trail: {0}")]
    Infeasible(String),
    #[error("start node {requested} conflicts with forced source {forced}")]
    StartConflict { requested: String, forced: String },
    #[error("start node {0} has no incident edges")]
    StartIsolated(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("graph is not simple (self-loop or parallel edge present)")]
    NotSimple,
    #[error("instance too large for brute force: {what} is {actual}, cap is {cap}")]
    CapExceeded { what: &'static str, actual: u64, cap: u64 },
    #[error("number of requested trails must be positive")]
    ZeroTrails,
    #[error("{0}")]
    Usage(String),
    #[error("generator gave up after {0} attempts")]
    GenerationFailed(usize),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}
