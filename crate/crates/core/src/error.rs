use thiserror::Error;

use crate::exactla::QMatrix;

pub type Result<T> = std::result::Result<T, CentraError>;

#[derive(Debug, Error)]
pub enum CentraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("bracket closure exceeded cap {cap} (partial basis has {} elements)", partial.len())]
    ClosureCapExceeded { cap: usize, partial: Vec<QMatrix> },

    #[error("closed family exceeded cap {cap}; the centralizer may be infinite dimensional")]
    FamilyCapExceeded { cap: usize },

    #[error("closed family needs fields of degree above the bound {bound}")]
    DegreeBoundExceeded { bound: u32 },

    #[error("field {index} is not equivariant under the algebra")]
    NotEquivariant { index: usize },

    #[error("witness polynomial is constant")]
    ConstantWitness,

    #[error("witness polynomial is not an invariant")]
    NotInvariant,

    #[error("graded basis is not certified finite")]
    NotFiniteCertified,

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("spectrum is not rational: a factor of degree {residual_degree} has no rational roots")]
    IrrationalSpectrum { residual_degree: usize },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CentraError {
    pub fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(CentraError::DimensionMismatch { expected, found })
        }
    }
}
