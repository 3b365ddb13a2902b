use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed gauge: rho({x}, {y}) = {value} is negative")]
    MalformedGauge { x: usize, y: usize, value: f64 },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("oracle violation at step {step}: {reason}")]
    OracleViolation { step: usize, reason: String },

    #[error("oracle budget exceeded: space has {points} points, limit is {limit}")]
    OracleBudget { points: usize, limit: usize },

    #[error("invalid certificate request: {0}")]
    InvalidCertificateRequest(String),

    #[error("slope undefined at point {point}: perturbation value is +inf")]
    UndefinedSlope { point: usize },

    #[error("empty neighborhood: radius {radius} is below the grid step {step}")]
    EmptyNeighborhood { radius: f64, step: f64 },

    #[error("trace does not match problem: {0}")]
    TraceMismatch(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("unknown corpus fixture {0:?}")]
    UnknownFixture(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
