use thiserror::Error;

/// Every failure mode exposed by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("loop at vertex {vertex} (edge {edge})")]
    Loop { edge: usize, vertex: usize },

    #[error("vertex index {index} out of range for {vertex_count} vertices")]
    Index { index: usize, vertex_count: usize },

    #[error("invalid parameters: {0}")]
    Param(String),

    #[error("enumeration size {size} exceeds cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("graph is not Eulerian: vertex {vertex} has odd degree {degree}")]
    NotEulerian { vertex: usize, degree: usize },

    #[error("frontier state count exceeded bound {bound}")]
    StateBlowup { bound: usize },

    #[error("weight vector for vertex {vertex} has length {got}, expected {expected}")]
    Shape {
        vertex: usize,
        expected: usize,
        got: usize,
    },

    #[error("degree {0} is odd")]
    Parity(usize),

    #[error("graph is not {expected}-regular (vertex {vertex} has degree {degree})")]
    Regularity {
        expected: usize,
        vertex: usize,
        degree: usize,
    },

    #[error(
        "root iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    Convergence { iterations: usize, residual: f64 },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("ball has {size} vertices, limit is {limit}")]
    Size { size: usize, limit: usize },

    #[error("profiles have different radii ({0} vs {1})")]
    RadiusMismatch(usize, usize),

    #[error("gauge pair on edge {edge} does not satisfy G_uv^T G_vu = Id")]
    GaugeInvalid { edge: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used in JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Loop { .. } => "LoopError",
            Error::Index { .. } => "IndexError",
            Error::Param(_) => "ParamError",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NotEulerian { .. } => "EulerError",
            Error::StateBlowup { .. } => "StateBlowup",
            Error::Shape { .. } => "ShapeError",
            Error::Parity(_) => "ParityError",
            Error::Regularity { .. } => "RegularityError",
            Error::Convergence { .. } => "ConvergenceFailure",
            Error::Domain(_) => "DomainError",
            Error::Size { .. } => "SizeError",
            Error::RadiusMismatch(..) => "RadiusMismatch",
            Error::GaugeInvalid { .. } => "GaugeInvalid",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
