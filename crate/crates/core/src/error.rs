use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported-algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("degenerate-form: {0}")]
    DegenerateForm(String),
    #[error("singular-form: {0}")]
    SingularForm(String),
    #[error("group-too-large: {0} elements")]
    GroupTooLarge(usize),
    #[error("mixed-polarization: {0}")]
    MixedPolarization(String),
    #[error("degenerate-subspace: {0}")]
    DegenerateSubspace(String),
    #[error("subspace-not-stable: {0}")]
    SubspaceNotStable(String),
    #[error("not-in-subalgebra: {0}")]
    NotInSubalgebra(String),
    #[error("not-dominant: {0}")]
    NotDominant(String),
    #[error("polytope-overflow: more than {0} weights")]
    PolytopeOverflow(usize),
    #[error("weight-not-reachable: {0}")]
    WeightNotReachable(String),
    #[error("closure-overflow: more than {0} vectors")]
    ClosureOverflow(usize),
    #[error("odd-dimensional-p: {0}")]
    OddDimensionalP(String),
    #[error("verification-failure: {0}")]
    VerificationFailure(String),
    #[error("not-isotropic: {0}")]
    NotIsotropic(String),
    #[error("not-self-commuting: {0}")]
    NotSelfCommuting(String),
    #[error("square-mismatch: {0}")]
    SquareMismatch(String),
    #[error("kernel-not-weight-diagonal: {0}")]
    KernelNotWeightDiagonal(String),
    #[error("kernel-infinite: {0}")]
    KernelInfinite(String),
    #[error("schema-error: {0}")]
    SchemaError(String),
}

impl Error {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedAlgebra(_) => "unsupported-algebra",
            Error::DegenerateForm(_) => "degenerate-form",
            Error::SingularForm(_) => "singular-form",
            Error::GroupTooLarge(_) => "group-too-large",
            Error::MixedPolarization(_) => "mixed-polarization",
            Error::DegenerateSubspace(_) => "degenerate-subspace",
            Error::SubspaceNotStable(_) => "subspace-not-stable",
            Error::NotInSubalgebra(_) => "not-in-subalgebra",
            Error::NotDominant(_) => "not-dominant",
            Error::PolytopeOverflow(_) => "polytope-overflow",
            Error::WeightNotReachable(_) => "weight-not-reachable",
            Error::ClosureOverflow(_) => "closure-overflow",
            Error::OddDimensionalP(_) => "odd-dimensional-p",
            Error::VerificationFailure(_) => "verification-failure",
            Error::NotIsotropic(_) => "not-isotropic",
            Error::NotSelfCommuting(_) => "not-self-commuting",
            Error::SquareMismatch(_) => "square-mismatch",
            Error::KernelNotWeightDiagonal(_) => "kernel-not-weight-diagonal",
            Error::KernelInfinite(_) => "kernel-infinite",
            Error::SchemaError(_) => "schema-error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
