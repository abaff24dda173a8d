use thiserror::Error;

/// Errors raised by walk construction, evolution and the scrambling diagnostics.
#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("outside the dispersion domain: k = {k}, theta = {theta} gives radicand {radicand}")]
    Domain { k: f64, theta: f64, radicand: f64 },

    #[error("numerical degeneracy at Krylov index {index}: squared norm {norm_sq:e} is negative beyond tolerance")]
    Degenerate { index: usize, norm_sq: f64 },

    #[error("dense oracle refused L = {sites} (limit {limit}); set the override to force it")]
    OracleTooLarge { sites: usize, limit: usize },

    #[error("realization {index} (seed {seed:#018x}) failed: {source}")]
    Realization {
        index: usize,
        seed: u64,
        #[source]
        source: Box<WalkError>,
    },
}

impl WalkError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        WalkError::InvalidParameter { name, reason: reason.into() }
    }

    /// True when the error reflects a numerical breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            WalkError::Degenerate { .. } => true,
            WalkError::Realization { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, WalkError>;
