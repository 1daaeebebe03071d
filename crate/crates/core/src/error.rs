use thiserror::Error;

/// Error cases shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The pair (A, B) has zero discriminant.
    #[error("singular curve: discriminant is zero")]
    SingularCurve,

    /// Some prime q has q^4 | A and q^6 | B.
    #[error("non-minimal model: a prime q has q^4 | A and q^6 | B")]
    NonMinimalModel,

    /// Local analysis is only implemented at primes >= 5.
    #[error("unsupported prime {0}: need a prime >= 5")]
    UnsupportedPrime(u64),

    /// Valuation of zero is undefined.
    #[error("zero input: valuation of 0 is undefined")]
    ZeroInput,

    /// An operation was called outside its stated precondition.
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),

    /// The linear program has no feasible point.
    #[error("infeasible constraints")]
    InfeasibleConstraints,
}

pub type Result<T> = std::result::Result<T, Error>;
