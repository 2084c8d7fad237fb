use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch { context: String, expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parameter b lies outside dom F (the feasible set is empty)")]
    ParameterOutsideDomain,

    #[error("point is not feasible for the given parameter: {0}")]
    InfeasiblePoint(String),

    #[error("point is not an optimal solution for the given parameter")]
    PointNotOptimal,

    #[error("argmin mapping has empty domain: -c is not in the cone generated by the rows")]
    DualInfeasible,

    #[error("optimal set is empty")]
    EmptyOptimalSet,

    #[error("enumeration cap exceeded: {what} is {found}, limit {limit}")]
    EnumerationCapExceeded { what: &'static str, limit: usize, found: usize },
}

impl Error {
    pub(crate) fn dimension(context: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { context: context.into(), expected, found }
    }

    /// Process exit code used by the command line tool and mirrored by the C status codes:
    /// 2 for input errors, 3 for domain/feasibility errors, 4 for enumeration caps.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionMismatch { .. } | Error::Parse(_) | Error::InvalidArgument(_) => 2,
            Error::ParameterOutsideDomain
            | Error::InfeasiblePoint(_)
            | Error::PointNotOptimal
            | Error::DualInfeasible
            | Error::EmptyOptimalSet => 3,
            Error::EnumerationCapExceeded { .. } => 4,
        }
    }
}
