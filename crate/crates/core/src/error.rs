use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Error)]
pub enum QfError {
    #[error("index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("functions live on different groups (n = {left} vs n = {right})")]
    ConfigMismatch { left: usize, right: usize },

    #[error("residue {0} is not in 0..5")]
    InvalidResidue(i64),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("evaluation needs {cost:.3e} inner-loop steps, budget is {budget:.3e}")]
    BudgetExceeded { cost: f64, budget: f64 },

    #[error("{what} is limited to {limit}, got {got}")]
    TooLarge { what: &'static str, limit: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function is not 1-bounded (max |f| = {max_abs})")]
    Unbounded { max_abs: f64 },

    #[error("negative value {value} at index {index}")]
    NegativeValue { index: usize, value: f64 },

    #[error(
        "inverse theorem violated: U^3 norm {u3_norm} >= {delta} but best quadratic correlation {best} is below the floor {floor}"
    )]
    InverseTheoremViolated { u3_norm: f64, delta: f64, best: f64, floor: f64 },

    #[error("iteration cap {cap} exceeded (energy history {energy_history:?})")]
    IterationCap { cap: usize, energy_history: Vec<f64> },

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = QfError> = std::result::Result<T, E>;
