use thiserror::Error;

/// Errors produced by circuit construction, simulation and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bitstring `{0}` is not a string of 0/1 of length {1}")]
    MalformedBitString(String, usize),

    #[error("qubit index {index} out of range for width {width}")]
    QubitOutOfRange { index: usize, width: usize },

    #[error("duplicate qubit index {0} in operand list")]
    DuplicateQubit(usize),

    #[error("oracle target set is empty")]
    EmptyTargetSet,

    #[error("diffusion subset is empty")]
    EmptySubset,

    #[error("multi-controlled gate needs at least one control")]
    MissingControls,

    #[error("gate `{0}` is not allowed here: circuit must be lowered to 1q + CNOT first")]
    NotLowered(String),

    #[error("lowering needs {needed} ancilla(s) but only {available} available")]
    InsufficientAncillas { needed: usize, available: usize },

    #[error("state has {state} qubits but circuit expects {circuit}")]
    WidthMismatch { state: usize, circuit: usize },

    #[error("{requested} qubits exceeds the simulator cap of {cap} (set LOCALSEARCH_MAX_QUBITS to raise it)")]
    QubitCapExceeded { requested: usize, cap: usize },

    #[error("ancilla qubits did not return to |0>: residual weight {0:.3e}")]
    AncillaNotRestored(f64),

    #[error("partition size m={m} must satisfy 1 <= m < n={n}")]
    InvalidPartition { m: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probability {name}={value} outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("shots must be >= 1")]
    ZeroShots,

    #[error("coupling map is not connected")]
    DisconnectedCoupling,

    #[error("circuit needs {needed} qubits but the coupling map has {available}")]
    InsufficientPhysicalQubits { needed: usize, available: usize },

    #[error("layout is not an injective map into the physical qubits: {0}")]
    InvalidLayout(String),

    #[error("equivalence check limited to {cap} total qubits, got {width}")]
    VerificationTooWide { width: usize, cap: usize },

    #[error("probability is zero at every iteration count up to {0}")]
    ZeroProbability(u64),

    #[error("malformed circuit JSON: {0}")]
    MalformedCircuit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
