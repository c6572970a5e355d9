use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which analytic hypothesis failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisKind {
    /// More than one eigenvalue of `B` attains the spectral radius.
    NonUniqueDominant,
    /// The dominant eigenvalue is not a positive real number.
    ComplexDominant,
    /// `rho(B)` does not exceed the certified joint-spectral-radius upper bound.
    RhoNotAboveJsr,
    /// Every bracket of the non-vanishing condition is zero.
    DegenerateIndex,
}

impl HypothesisKind {
    pub fn code(self) -> &'static str {
        match self {
            HypothesisKind::NonUniqueDominant => "non-unique-dominant-eigenvalue",
            HypothesisKind::ComplexDominant => "non-real-dominant-eigenvalue",
            HypothesisKind::RhoNotAboveJsr => "rho-not-above-jsr",
            HypothesisKind::DegenerateIndex => "degenerate-nonvanishing-index",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            HypothesisKind::NonUniqueDominant => "non-unique dominant eigenvalue",
            HypothesisKind::ComplexDominant => "dominant eigenvalue is not a positive real",
            HypothesisKind::RhoNotAboveJsr => "spectral radius not certified above joint spectral radius",
            HypothesisKind::DegenerateIndex => "non-vanishing condition fails for every power of Z",
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid base {0}: the base must be at least 2")]
    InvalidBase(u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("unknown builtin {0:?}")]
    UnknownBuiltin(String),
    #[error("{what} exceeds the size guard ({limit})")]
    SizeGuard { what: &'static str, limit: u64 },
    #[error("degenerate normalisation: Sigma_{component}({level}) = 0")]
    DegenerateNormalisation { level: u32, component: usize },
    #[error("Sigma_1 vanishes at level {level}")]
    VanishingSum { level: u32 },
    #[error("hypothesis violation: {}", kind.description())]
    Hypothesis { kind: HypothesisKind, detail: String },
    #[error("numerical failure: no convergence (last delta {last_delta:e})")]
    NumericalFailure { last_delta: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn hypothesis(kind: HypothesisKind, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            kind,
            detail: detail.into(),
        }
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
