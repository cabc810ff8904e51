use crate::lattice::Elem;
use thiserror::Error;

/// Which binary operation failed to have a unique bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundOp {
    Join,
    Meet,
}

impl std::fmt::Display for BoundOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundOp::Join => write!(f, "join"),
            BoundOp::Meet => write!(f, "meet"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cover relation is not a partial order: cycle through {u} and {v}")]
    NotAPoset { u: usize, v: usize },
    #[error("not a lattice: pair ({a}, {b}) has no unique {op}")]
    NotALattice { a: usize, b: usize, op: BoundOp },
    #[error("size cap exceeded: {requested} elements requested, cap is {cap}")]
    SizeCapExceeded { requested: u128, cap: usize },
    #[error("sweep cap exceeded: {requested} checks requested, cap is {cap}")]
    SweepCapExceeded { requested: u128, cap: u64 },
    #[error("maps live on different lattices")]
    LatticeMismatch,
    #[error("not a graph: {0}")]
    NotAGraph(GraphViolation),
    #[error("lattice is not a power set")]
    NotAPowerSet,
    #[error("lattice is not a frame (not distributive)")]
    NotAFrame,
    #[error("lattice is not a Boolean algebra")]
    NotBoolean,
    #[error("graph is not fixed-point-free: {witness} is a non-bottom fixed point")]
    NotFixedPointFree { witness: Elem },
    #[error("not a bi-topology: {0}")]
    NotABitopology(String),
    #[error("orbit ends in a cycle of length {}: {cycle:?}", cycle.len())]
    PeriodicTail { cycle: Vec<Elem> },
    #[error("boundary violation: a_0 = {found}, expected {expected}")]
    BoundaryViolation { found: Elem, expected: Elem },
    #[error("chain violation at index {index}")]
    ChainViolation { index: usize },
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
    #[error("dependency fails: violating triple (x, y, s) = ({}, {}, {})", .witness.0, .witness.1, .witness.2)]
    DependencyFails { witness: (Elem, Elem, Elem) },
    #[error("transpose is not asymptotically meet-nilpotent; hypodox has fixed points {fixed:?}")]
    TransposeNotNilpotent { hypodox: Vec<Elem>, fixed: Vec<Elem> },
    #[error("{t} is not a fixed-point-free set")]
    NotFpfSet { t: Elem },
    #[error("step {step} violated by pair ({x}, {y})")]
    StepViolation { step: usize, x: Elem, y: Elem },
    #[error("interaction graph has a cycle: {cycle:?}")]
    NotAcyclic { cycle: Vec<usize> },
    #[error("not a feedback vertex set; remaining cycle {cycle:?}")]
    NotAnFvs { cycle: Vec<usize> },
    #[error("map is not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("unknown gallery name: {0}")]
    UnknownName(String),
    #[error("internal consistency failure: {what}; instance: {dump}")]
    Internal { what: String, dump: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Witness for a failed graph test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphViolation {
    /// f(bottom) is not bottom.
    Bottom(Elem),
    /// f(x ∨ y) differs from f(x) ∨ f(y).
    Pair(Elem, Elem),
}

impl std::fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphViolation::Bottom(v) => write!(f, "bottom is sent to {v}"),
            GraphViolation::Pair(x, y) => write!(f, "binary join ({x}, {y}) not preserved"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            SizeCapExceeded { .. } | SweepCapExceeded { .. } => 3,
            Internal { .. } => 4,
            InvalidInput(_) | NotAPoset { .. } | NotALattice { .. } | LatticeMismatch
            | NotAPowerSet | NotAFrame | NotBoolean | UnknownName(_) | Json(_) | Io(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn internal(what: impl Into<String>, dump: impl Into<String>) -> Self {
        Error::Internal { what: what.into(), dump: dump.into() }
    }
}
