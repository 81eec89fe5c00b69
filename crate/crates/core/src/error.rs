use alloc::string::String;
use core::fmt;

/// Errors reported by the core library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A qubit operand is not below the register size.
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    /// A two-qubit gate was given the same qubit twice.
    DuplicateQubit(usize),
    /// The register exceeds [`crate::MAX_QUBITS`] or 64 classical bits.
    TooManyQubits { requested: usize, max: usize },
    /// A bitstring, table or parameter vector has the wrong length.
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    /// A non-binary character in a bitstring literal.
    InvalidBit(char),
    /// Instance data violates a structural invariant.
    InvalidInstance(String),
    /// Exhaustive enumeration would exceed the configured budget.
    TooLarge { evaluations: u128, limit: u128 },
    /// A circuit with phase-separator gates was run without its diagonal table.
    MissingDiagonal,
    /// A circuit with phase-separator gates was costed without its QUBO.
    MissingQubo,
    /// Layer count must be at least one.
    ZeroLayers,
    /// A parameter slot is out of range or never referenced by a gate.
    BadParameterSlot { slot: usize, n_params: usize },
    /// The optimizer produced a non-finite loss or gradient.
    NonFinite {
        iteration: usize,
        what: &'static str,
    },
    /// A configuration value is outside its admissible range.
    InvalidConfig(&'static str),
    /// Success probability needs at least one optimal bitstring.
    EmptyOptimalSet,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::QubitOutOfRange { qubit, n_qubits } => {
                write!(f, "qubit {qubit} out of range for {n_qubits}-qubit register")
            }
            Error::DuplicateQubit(q) => write!(f, "two-qubit gate uses qubit {q} twice"),
            Error::TooManyQubits { requested, max } => {
                write!(f, "{requested} qubits requested, at most {max} supported")
            }
            Error::LengthMismatch { what, expected, found } => {
                write!(f, "{what}: expected length {expected}, found {found}")
            }
            Error::InvalidBit(c) => write!(f, "invalid bit character {c:?}"),
            Error::InvalidInstance(msg) => write!(f, "invalid instance: {msg}"),
            Error::TooLarge { evaluations, limit } => write!(
                f,
                "instance too large for exhaustive search: {evaluations} evaluations exceed limit {limit}"
            ),
            Error::MissingDiagonal => write!(f, "circuit contains phase-separator gates but no diagonal table was given"),
            Error::MissingQubo => write!(f, "circuit contains phase-separator gates but no QUBO was given"),
            Error::ZeroLayers => write!(f, "layer count p must be at least 1"),
            Error::BadParameterSlot { slot, n_params } => {
                write!(f, "parameter slot {slot} invalid for circuit with {n_params} parameters")
            }
            Error::NonFinite { iteration, what } => {
                write!(f, "non-finite {what} at iteration {iteration}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::EmptyOptimalSet => write!(f, "optimal bitstring set is empty"),
        }
    }
}

impl core::error::Error for Error {}
