use cosserat_forms::FormError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("time derivative of {0} is not available on this backing")]
    MissingRate(&'static str),
    #[error("transport paths diverged at t = {t}: {divergence:e} > {tolerance:e}")]
    IntegratorConsistency {
        t: f64,
        divergence: f64,
        tolerance: f64,
    },
    #[error("need at least {needed} snapshots, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("{case} case precondition violated: {detail}")]
    CasePrecondition { case: &'static str, detail: String },
    #[error("degree mismatch for {what}: expected {expected}, got {got}")]
    DegreeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("unstable time step {dt}; use dt <= {suggested}")]
    Stability { dt: f64, suggested: f64 },
    #[error("operation needs a {expected}-D state, got {got}-D")]
    Dimension { expected: usize, got: usize },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("scenario `{scenario}` has no parameter `{key}`")]
    UnknownParameter { scenario: String, key: String },
}
