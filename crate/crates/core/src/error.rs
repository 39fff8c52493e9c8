use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WkbError {
    #[error("point outside the declared domain: {0}")]
    Domain(String),
    #[error("square root of f0 cannot be continued: {0}")]
    BranchAmbiguity(String),
    #[error("|f0| fell below the floor at z = {0}")]
    SingularityHit(String),
    #[error("ray integrator could not meet tolerance: {0}")]
    StepFailure(String),
    #[error("far-end decay check failed: {0}")]
    Truncation(String),
    #[error("Pade system is rank deficient (L = {l}, M = {m})")]
    DegeneratePade { l: usize, m: usize },
    #[error("Pade denominator has a root near the Laplace contour at t = {0}")]
    PoleOnContour(String),
    #[error("contraction iteration does not decrease: {0}")]
    GridTooCoarse(String),
    #[error("parameter ordering violated: {0}")]
    ParameterOrder(String),
    #[error("no finite constant satisfies the condition: {0}")]
    ConditionViolated(String),
    #[error("Taylor tail not negligible: {0}")]
    TailNotNegligible(String),
    #[error("bound violated at {0}")]
    BoundViolated(String),
    #[error("reference evaluation lost precision: {0}")]
    PrecisionLoss(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, WkbError>;
