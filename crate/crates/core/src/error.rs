use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("gram matrix is not positive definite: leading minor {index} is {minor}")]
    NotPositiveDefinite { index: usize, minor: String },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("polyhedron is unbounded along direction {direction:?}")]
    Unbounded { direction: Vec<String> },

    #[error("cone is not pointed")]
    NotPointed,

    #[error("the zero parity class has no nontrivial minimum")]
    ZeroParityClass,

    #[error("homothety ratio {0} is outside the open interval (0, 1/2)")]
    RatioOutOfRange(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("face-to-face violation: {0}")]
    FaceToFace(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by bad user input rather than by a failed
    /// verification or a bug.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::NotSymmetric { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::ParseRational(_)
                | Error::ZeroParityClass
                | Error::RatioOutOfRange(_)
                | Error::InvalidInput(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
