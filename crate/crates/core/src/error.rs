use thiserror::Error;

/// Errors raised by np-region operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: p has {p} items, q has {q}")]
    LengthMismatch { p: usize, q: usize },

    #[error("empty support")]
    Empty,

    #[error("non-finite mass at index {idx}: {value}")]
    NonFinite { idx: usize, value: f64 },

    #[error("negative mass at index {idx}: {value}")]
    NegativeMass { idx: usize, value: f64 },

    #[error("{which} is not normalized: sum = {sum}")]
    NotNormalized { which: &'static str, sum: f64 },

    #[error("item {idx} has zero mass under both p and q")]
    DeadItem { idx: usize },

    #[error("label count {labels} does not match support size {support}")]
    LabelMismatch { labels: usize, support: usize },

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(&'static str),

    #[error("size limit exceeded: {size} > {limit}")]
    BlowupLimit { size: f64, limit: usize },

    #[error("exponent {0} outside (0, 1)")]
    ExponentOutOfRange(f64),

    #[error("argument {value} outside {domain}")]
    DomainError { value: f64, domain: &'static str },

    #[error("negative divergence value {0}")]
    NegativeDivergence(f64),

    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    #[error("value {value} out of range for {what}")]
    ValueOutOfRange { what: &'static str, value: f64 },

    #[error("parameter {name} = {value} out of range")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("degenerate target: {0}")]
    DegenerateTarget(&'static str),

    #[error("polyline is not convex at vertex {0}")]
    NonConvexInput(usize),

    #[error("polyline is not monotone at vertex {0}")]
    NonMonotoneInput(usize),

    #[error("boundary is not invertible: {0}")]
    NonInvertibleBoundary(&'static str),

    #[error("slope {0} is not negative")]
    NonNegativeSlope(f64),

    #[error("target ({alpha}, {beta}) lies outside the region")]
    TargetOutsideRegion { alpha: f64, beta: f64 },

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

impl Error {
    /// Variant name, used by front ends to report which check failed.
    pub fn name(&self) -> &'static str {
        match self {
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::Empty => "Empty",
            Error::NonFinite { .. } => "NonFinite",
            Error::NegativeMass { .. } => "NegativeMass",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::DeadItem { .. } => "DeadItem",
            Error::LabelMismatch { .. } => "LabelMismatch",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::DegenerateGrid(_) => "DegenerateGrid",
            Error::BlowupLimit { .. } => "BlowupLimit",
            Error::ExponentOutOfRange(_) => "ExponentOutOfRange",
            Error::DomainError { .. } => "DomainError",
            Error::NegativeDivergence(_) => "NegativeDivergence",
            Error::KindMismatch(_) => "KindMismatch",
            Error::ValueOutOfRange { .. } => "ValueOutOfRange",
            Error::ParamOutOfRange { .. } => "ParamOutOfRange",
            Error::DegenerateTarget(_) => "DegenerateTarget",
            Error::NonConvexInput(_) => "NonConvexInput",
            Error::NonMonotoneInput(_) => "NonMonotoneInput",
            Error::NonInvertibleBoundary(_) => "NonInvertibleBoundary",
            Error::NonNegativeSlope(_) => "NonNegativeSlope",
            Error::TargetOutsideRegion { .. } => "TargetOutsideRegion",
            Error::Parse { .. } => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
