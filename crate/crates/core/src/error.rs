use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("system must have at least one site")]
    NoSites,

    #[error("bond ({i}, {j}) references a site outside 0..{n_sites}")]
    BondOutOfRange { i: usize, j: usize, n_sites: usize },

    #[error("bond ({i}, {j}) is a self-loop")]
    SelfLoop { i: usize, j: usize },

    #[error("bond ({i}, {j}) appears more than once")]
    DuplicateBond { i: usize, j: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("unknown preset `{0}` (expected chain3, triangle3 or lagos7)")]
    UnknownPreset(String),

    #[error("{n} sites exceeds the simulation cap of {cap}")]
    TooManySites { n: usize, cap: usize },

    #[error("forest product formula requires zero field, got h = {0}")]
    NonzeroField(f64),

    #[error("gate {index} touches qubit {qubit} but the circuit has {n_qubits} qubits")]
    GateOutOfRange {
        index: usize,
        qubit: usize,
        n_qubits: usize,
    },

    #[error("CNOT with control equal to target ({0})")]
    CnotSameQubit(usize),

    #[error("invalid probability {0} for {1}")]
    InvalidProbability(f64, &'static str),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("need at least 3 sweep records, got {0}")]
    TooFewRecords(usize),

    #[error("record {0} has no shot estimate")]
    MissingEstimate(usize),

    #[error("invalid bracket ({0}, {1})")]
    InvalidBracket(f64, f64),

    #[error("qasm parse error on line {line}: {msg}")]
    Qasm { line: usize, msg: String },

    #[error("invalid angle expression `{0}`")]
    Angle(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
