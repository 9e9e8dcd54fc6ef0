use thiserror::Error;

/// Errors surfaced by the simulation library.
#[derive(Debug, Error)]
pub enum ApsError {
    #[error("register of {requested} qubits exceeds the {cap}-qubit cap")]
    DimensionCap { requested: u32, cap: u32 },

    #[error("at least one work qubit is required")]
    NoWorkQubits,

    #[error("phase table has {got} entries, expected {expected}")]
    TableLength { expected: usize, got: usize },

    #[error("operation requires at least {required} ancilla qubits, layout has {got}")]
    AncillaRequired { required: u32, got: u32 },

    #[error("phase map parameter must be nonzero")]
    ZeroPhaseParam,

    #[error("non-finite phase at index {index}")]
    NonFinitePhase { index: usize },

    #[error("marked set is empty")]
    EmptyMarkedSet,

    #[error("marked state {state} out of range for {n_work} work qubits")]
    MarkedOutOfRange { state: u64, n_work: u32 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid problem instance: {0}")]
    InvalidInstance(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("phase table contains no pi entry")]
    NoPiEntry,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ApsError>;
