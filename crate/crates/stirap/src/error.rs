use thiserror::Error;

/// Crate-wide error type.
///
/// Configuration problems (bad fields, unparsable files, unknown keys) are
/// distinguished from numerical/diagnostic failures so callers can map them
/// to different exit statuses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration: expected n_levels = {expected}, got {got}")]
    WrongLevelCount { expected: usize, got: usize },

    #[error("configuration: field `{field}` invalid: {message}")]
    InvalidConfig { field: &'static str, message: String },

    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config parse error at line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("config error: missing required key `{key}`")]
    MissingKey { key: &'static str },

    #[error("unknown sweep field `{name}`; valid fields: {valid}")]
    UnknownField { name: String, valid: &'static str },

    #[error("singular inversion: two-photon detuning must be nonzero (0 solves the null condition only with a vanishing control field)")]
    SingularInversion,

    #[error("mixing-angle domain error: radicand {radicand} is negative")]
    NegativeRadicand { radicand: f64 },

    #[error("population ratio is infinite: sin(phi) = 0, all transferred population sits on the lower manifold level")]
    InfiniteRatio,

    #[error("target ratio must be positive, got {got}")]
    NonPositiveRatio { got: f64 },

    #[error("manifold dark state requires delta^2 = omega_c^2 + omega_d^2; residual {residual:e}")]
    ManifoldCondition { residual: f64 },

    #[error("null-eigenvalue condition violated for configured detunings; residual {residual:e}")]
    ConditionViolated { residual: f64 },

    #[error("norm drift {drift:e} at t = {t} exceeds 1e-6; reduce the integration step")]
    NormDrift { t: f64, drift: f64 },

    #[error("transfer incomplete: residual population {residual:e} on levels 1-2 at the end of the grid (adiabaticity breakdown, not an integration fault)")]
    TransferIncomplete { residual: f64 },

    #[error("Jacobi eigensolver failed to converge within {sweeps} sweeps")]
    JacobiNoConvergence { sweeps: usize },

    #[error("mixing angle undefined at t = {t}: both pulse envelopes are zero")]
    UndefinedAngle { t: f64 },

    #[error("mixing angle undefined: both pulse envelope values are zero")]
    ZeroEnvelopes,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad input (config files, field values,
    /// sweep specs) as opposed to numerical or diagnostic failures.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::WrongLevelCount { .. }
                | Error::InvalidConfig { .. }
                | Error::Parse { .. }
                | Error::UnknownKey { .. }
                | Error::MissingKey { .. }
                | Error::UnknownField { .. }
                | Error::NonPositiveRatio { .. }
                | Error::SingularInversion
        )
    }
}
