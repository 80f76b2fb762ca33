use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("subset size {size} out of range for n = {n} (need 2 <= |I| <= n-2)")]
    SubsetSizeOutOfRange { n: u8, size: u8 },
    #[error("subset element {element} out of range for n = {n}")]
    SubsetElementOutOfRange { n: u8, element: u8 },
    #[error("invalid weight datum: {0}")]
    InvalidWeights(String),
    #[error("n = {n} out of supported range {min}..={max}")]
    AmbientOutOfRange { n: u8, min: u8, max: u8 },
    #[error("ambient size mismatch: {left} vs {right}")]
    AmbientMismatch { left: u8, right: u8 },
    #[error("weight data mismatch between operands")]
    WeightsMismatch,
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { n: u8, index: u8 },
    #[error("label {0} is not a nodal boundary for these weights")]
    NotNodal(String),
    #[error("subset {0} is not maximal among subsets of weight <= 1")]
    NotMaximal(String),
    #[error("subset {0} has weight sum > 1")]
    Overweight(String),
    #[error("label {0} is not a boundary divisor for these weights (it is contracted)")]
    ContractedLabel(String),
    #[error("nodal part is not a uniform multiple of the total nodal boundary")]
    UnsupportedNodalPart,
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
}

pub type Result<T> = std::result::Result<T, Error>;
