//! Error type shared by all dqc-core modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Text-format parse failure; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The circuit contains a gate the target format cannot express.
    #[error("not representable: {0}")]
    NotRepresentable(String),

    /// A gate or circuit violates a structural invariant.
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    /// Decomposition failed for the gate at `index`.
    #[error("cannot decompose gate {index}: {msg}")]
    Decompose { index: usize, msg: String },

    /// An operation received a gate outside the basic library (CNOT + single-qubit).
    #[error("gate {index} is not in the basic gate library")]
    NonBasic { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Configuration bitstring length does not match the number of global gates.
    #[error("configuration has {got} bits but the circuit has {expected} global gates")]
    ConfigLength { expected: usize, got: usize },

    /// A search was refused because the instance exceeds its size cap.
    #[error("{what} = {value} exceeds the cap of {cap}: {hint}")]
    OverCap {
        what: &'static str,
        value: usize,
        cap: usize,
        hint: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
