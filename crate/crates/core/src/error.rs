use thiserror::Error;

pub type Result<T, E = MvbError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MvbError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {k} outside supported range 1..={max}")]
    DimensionOutOfRange { k: usize, max: usize },

    #[error("dimension {k} exceeds the default cap of {cap}; pass the large-k override to allow up to {max}")]
    DimensionAboveSoftCap { k: usize, cap: usize, max: usize },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate distribution: natural parameters undefined")]
    Degenerate,

    #[error("conditioning on null event")]
    NullConditioning,

    #[error("groups must be nonempty and disjoint")]
    OverlappingGroups,

    #[error("not pairwise-representable: natural parameter for {subset} is {value}")]
    NotPairwise { subset: String, value: f64 },

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("complete separation suspected: coefficient magnitude {magnitude} exceeds {bound}")]
    Separation { magnitude: f64, bound: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl MvbError {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            MvbError::Degenerate
                | MvbError::NullConditioning
                | MvbError::Divergence(_)
                | MvbError::Separation { .. }
        )
    }

    /// Short machine-readable tag for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            MvbError::DimensionMismatch { .. } => "dimension",
            MvbError::DimensionOutOfRange { .. } | MvbError::DimensionAboveSoftCap { .. } => {
                "dimension"
            }
            MvbError::InvalidSubset(_) => "subset",
            MvbError::InvalidProbabilities(_) => "probabilities",
            MvbError::InvalidParameter(_) => "parameter",
            MvbError::Degenerate => "degenerate",
            MvbError::NullConditioning => "null-event",
            MvbError::OverlappingGroups => "groups",
            MvbError::NotPairwise { .. } => "not-pairwise",
            MvbError::Divergence(_) => "divergence",
            MvbError::Separation { .. } => "separation",
            MvbError::Parse(_) => "parse",
        }
    }
}
