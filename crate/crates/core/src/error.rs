use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),

    #[error("gates within a layer overlap on qubit {0}")]
    LayerOverlap(usize),

    #[error("gate {0} does not conserve the excitation number")]
    NonConserving(String),

    #[error("register size mismatch: expected {expected} qubits, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("{0} qubits exceed the statevector limit of {1}")]
    TooManyQubits(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quasienergy gap at ε = {epsilon} is closed (distance {distance:e})")]
    GapClosed { epsilon: f64, distance: f64 },

    #[error("winding integral {raw} is not quantized (residual {residual:.3e})")]
    NotQuantized { raw: f64, residual: f64 },

    #[error("singular angle: {0}")]
    SingularAngle(String),

    #[error("no normalizable edge state at quasienergy {0}")]
    NoEdgeState(f64),

    #[error("excitation reached the chain ends (probability {0:e}); use a longer chain")]
    BoundaryReached(f64),

    #[error("readout confusion matrix for qubit {0} is singular")]
    SingularConfusion(usize),

    #[error("circuit contains an unexpanded composite gate")]
    UnexpandedMacro,

    #[error("line {line}, column {column}: unsupported statement `{statement}`")]
    UnsupportedStatement {
        line: usize,
        column: usize,
        statement: String,
    },

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}
