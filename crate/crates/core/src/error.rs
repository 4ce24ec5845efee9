use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh parameters: {0}")]
    InvalidMeshParameters(String),

    #[error("degenerate cell {cell}: {reason}")]
    DegenerateCell { cell: usize, reason: String },

    #[error("mesh parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("mesh validation failed for cell {cell}: {message}")]
    InvalidCell { cell: usize, message: String },

    #[error("mesh validation failed for face ({v0}, {v1}): {message}")]
    InvalidFace {
        v0: usize,
        v1: usize,
        message: String,
    },

    #[error("singular {what} on cell {cell}")]
    SingularLocalMatrix { what: &'static str, cell: usize },

    #[error("singular cell block on cell {cell}; the source problem is not well-posed on this mesh")]
    SingularCellBlock { cell: usize },

    #[error("sparse factorization failed: {0}")]
    Factorization(String),

    #[error("eigensolver did not converge after {iterations} iterations (ritz residuals {residuals:?})")]
    EigenNotConverged {
        iterations: usize,
        residuals: Vec<f64>,
    },

    #[error("non-finite value detected in time step {step}")]
    NonFinite { step: usize },

    #[error("vector potential evaluated inside the solenoid at ({x}, {y})")]
    InsideSolenoid { x: f64, y: f64 },

    #[error("non-finite {what} at quadrature point ({x}, {y}) of cell {cell}")]
    NonFiniteField {
        what: &'static str,
        cell: usize,
        x: f64,
        y: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
