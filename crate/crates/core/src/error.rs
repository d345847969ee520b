use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into two groups: domain errors (bad or out-of-scope input,
/// exit code 1 at the command line) and internal failures (a construction or
/// consistency check that should never fail, exit code 2).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0} is not representable")]
    NotRepresentable(i128),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("isometry does not act trivially on the discriminant group")]
    NotStable,
    #[error("extension is not integral")]
    NotIntegral,
    #[error("reflection vector is isotropic")]
    IsotropicVector,
    #[error("reflection is not integral on the lattice")]
    NonIntegralReflection,
    #[error("moduli space is empty: {0}")]
    EmptyModuli(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("construction not covered: {0}")]
    ConstructionNotCovered(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::ConstructionFailed(_) | Error::Internal(_))
    }

    /// Stable snake_case tag used in JSON diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateLattice(_) => "degenerate_lattice",
            Error::BadParams(_) => "bad_params",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::NotRepresentable(_) => "not_representable",
            Error::NotFound(_) => "not_found",
            Error::NotStable => "not_stable",
            Error::NotIntegral => "not_integral",
            Error::IsotropicVector => "isotropic_vector",
            Error::NonIntegralReflection => "non_integral_reflection",
            Error::EmptyModuli(_) => "empty_moduli",
            Error::NotApplicable(_) => "not_applicable",
            Error::ConstructionNotCovered(_) => "construction_not_covered",
            Error::BudgetExhausted(_) => "budget_exhausted",
            Error::Parse(_) => "parse",
            Error::ConstructionFailed(_) => "construction_failed",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
