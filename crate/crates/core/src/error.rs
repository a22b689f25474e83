use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An index or argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pole: {0}")]
    Pole(String),

    /// The Padé linear system is singular. `max_solvable_m` is the largest
    /// denominator degree below the requested one that yields a regular system.
    #[error("degenerate Padé system for [{l}/{m}]; largest solvable denominator degree is {max_solvable_m}")]
    Degeneracy { l: usize, m: usize, max_solvable_m: usize },

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("integration failure: {0}")]
    Integration(String),

    #[error("pole of the Padé denominator inside (0, 1) near u = {0}")]
    PoleInDomain(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("dimension mismatch: expected at most {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("transform matrix has no companion inverse")]
    MissingCompanion,

    #[error("remainder estimate undefined: term {0} is zero")]
    Estimate(usize),

    #[error("did not converge: {0}")]
    Convergence(String),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// Whether the failure is numerical (pole, degeneracy, instability, ...)
    /// rather than a malformed request.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Pole(_)
                | Error::Degeneracy { .. }
                | Error::Instability(_)
                | Error::Integration(_)
                | Error::PoleInDomain(_)
                | Error::Integrity(_)
                | Error::Estimate(_)
                | Error::Convergence(_)
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::InvalidInput(_) => "invalid_input",
            Error::Pole(_) => "pole",
            Error::Degeneracy { .. } => "degeneracy",
            Error::Instability(_) => "instability",
            Error::Integration(_) => "integration",
            Error::PoleInDomain(_) => "pole_in_domain",
            Error::Integrity(_) => "integrity",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::MissingCompanion => "missing_companion",
            Error::Estimate(_) => "estimate",
            Error::Convergence(_) => "convergence",
            Error::Format(_) => "format",
        }
    }
}
