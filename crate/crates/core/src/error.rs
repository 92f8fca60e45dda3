use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("input shape mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("focal point at s = {s}: parallel family degenerates for base curvature {curvature}")]
    Focal { s: f64, curvature: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("frame index {index} out of range for dimension {n}")]
    Index { index: usize, n: usize },

    #[error("degenerate plane: sectional curvature needs two distinct directions, got ({0}, {0})")]
    DegeneratePlane(usize),

    #[error("branch precondition violated: {0}")]
    Precondition(String),

    #[error("no real solution: {0}")]
    NoRealSolution(String),
}
