use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LgiError {
    #[error("matrix exponential requires a traceless matrix, got |tr| = {trace:e}")]
    NotTraceless { trace: f64 },

    #[error("energy scale s must be nonzero and finite, got {0}")]
    InvalidScale(f64),

    #[error("alpha = {alpha} is outside the unbroken regime; valid range is 0 <= alpha <= {max} (pi/2 - {guard:e})")]
    AlphaOutOfRange { alpha: f64, max: f64, guard: f64 },

    #[error("alpha = {alpha} is within the exceptional-point guard; valid range is 0 <= alpha <= {max} (pi/2 - {guard:e})")]
    ExceptionalPointProximity { alpha: f64, max: f64, guard: f64 },

    #[error("exceptional-point guard {0:e} is outside [1e-6*pi, pi/2)")]
    InvalidGuard(f64),

    #[error("time {0} is not finite")]
    NonFiniteTime(f64),

    #[error("measurement times must satisfy 0 <= t_i <= t_j, got t_i = {t_i}, t_j = {t_j}")]
    InvalidTimeOrder { t_i: f64, t_j: f64 },

    #[error("tau must be finite and nonnegative, got {0}")]
    InvalidTau(f64),

    #[error("state is not a density matrix within tolerance {tol:e}")]
    InvalidState { tol: f64 },

    #[error("norm collapse: Tr[U rho U^dagger] = {trace:e} is below {tol:e}")]
    NormCollapse { trace: f64, tol: f64 },

    #[error("zero-probability branch: p(q = {outcome:+}) = {probability:e}")]
    ZeroProbabilityBranch { outcome: i8, probability: f64 },

    #[error("probability {value:e} lies outside the clamp window [-{window:e}, 1 + {window:e}]")]
    ProbabilityOutOfRange { value: f64, window: f64 },

    #[error("correlation {value} exceeds the bound |C| <= 1 + {tol:e}")]
    CorrelationOutOfRange { value: f64, tol: f64 },

    #[error("singular closed-form denominator R^2 - K^2 = {denominator:e}")]
    SingularDenominator { denominator: f64 },

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
}
