//! Two-time correlations `C_ji` and the three-term Leggett-Garg functional
//! `K₃ = C₂₁ + C₃₂ − C₃₁`.
//!
//! [`correlation_sim`] runs the measurement protocol and is the normative
//! value. [`correlation_closed`] evaluates the rational closed form in the
//! `R`, `I`, `K` helper factors. Two readings of the `K` factor exist:
//! [`ClosedFormVariant::Repaired`] uses `sin²Δ` and agrees with simulation;
//! [`ClosedFormVariant::AsPrinted`] uses `sin²(2Δ)` and does not. The latter
//! is kept only as a comparison target.

use std::fmt;
use std::str::FromStr;

use crate::error::LgiError;
use crate::measurement::two_time_protocol;
use crate::pt_core::Alpha;

/// Physical correlations satisfy `|C| ≤ 1` up to this slack.
pub const CORRELATION_TOL: f64 = 1e-10;
/// Closed forms refuse to divide by `|R² − K²|` below this.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedFormVariant {
    /// `K = 2 sin²(2Δ) tanα secα`.
    AsPrinted,
    /// `K = 2 sin²(Δ) tanα secα`.
    Repaired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    #[default]
    Simulation,
    ClosedForm(ClosedFormVariant),
}

impl Method {
    pub const ALL: [Method; 3] = [
        Method::Simulation,
        Method::ClosedForm(ClosedFormVariant::Repaired),
        Method::ClosedForm(ClosedFormVariant::AsPrinted),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Simulation => "sim",
            Method::ClosedForm(ClosedFormVariant::Repaired) => "closed-repaired",
            Method::ClosedForm(ClosedFormVariant::AsPrinted) => "closed-printed",
        }
    }

    /// Whether results are held to the physical bound `|C| ≤ 1`.
    fn is_physical(self) -> bool {
        !matches!(self, Method::ClosedForm(ClosedFormVariant::AsPrinted))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                format!("unknown method '{s}' (expected sim, closed-repaired or closed-printed)")
            })
    }
}

/// Helper factors for a time gap `Δ` at angle `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RikFactors {
    pub r: f64,
    pub i_factor: f64,
    pub k: f64,
}

pub fn rik_factors(alpha: Alpha, delta: f64, variant: ClosedFormVariant) -> RikFactors {
    let a = alpha.value();
    let tan = a.tan();
    let sec = 1.0 / a.cos();
    let sin2 = delta.sin().powi(2);
    let r = 1.0 + 2.0 * sin2 * tan * tan;
    let i_factor = (2.0 * delta).cos() - 2.0 * sin2 * tan * tan;
    let k_sin2 = match variant {
        ClosedFormVariant::AsPrinted => (2.0 * delta).sin().powi(2),
        ClosedFormVariant::Repaired => sin2,
    };
    RikFactors {
        r,
        i_factor,
        k: 2.0 * k_sin2 * tan * sec,
    }
}

fn check_times(t_i: f64, t_j: f64) -> Result<(), LgiError> {
    for t in [t_i, t_j] {
        if !t.is_finite() {
            return Err(LgiError::NonFiniteTime(t));
        }
    }
    if !(0.0 <= t_i && t_i <= t_j) {
        return Err(LgiError::InvalidTimeOrder { t_i, t_j });
    }
    Ok(())
}

fn check_bound(value: f64) -> Result<f64, LgiError> {
    if value.abs() > 1.0 + CORRELATION_TOL || value.is_nan() {
        return Err(LgiError::CorrelationOutOfRange {
            value,
            tol: CORRELATION_TOL,
        });
    }
    Ok(value)
}

/// `C_ji` from the simulated two-time protocol.
pub fn correlation_sim(alpha: Alpha, t_i: f64, t_j: f64) -> Result<f64, LgiError> {
    check_bound(two_time_protocol(alpha, t_i, t_j)?.correlation())
}

/// `C_ji` from the closed form.
pub fn correlation_closed(
    alpha: Alpha,
    t_i: f64,
    t_j: f64,
    variant: ClosedFormVariant,
) -> Result<f64, LgiError> {
    check_times(t_i, t_j)?;
    let ji = rik_factors(alpha, t_j - t_i, variant);
    let i0 = rik_factors(alpha, t_i, variant);
    let gap = ji.r * ji.r - ji.k * ji.k;
    if gap.abs() < SINGULAR_TOL {
        return Err(LgiError::SingularDenominator { denominator: gap });
    }
    let numerator = ji.i_factor * (ji.r * i0.r + ji.k * i0.k) + ji.k * (ji.r * i0.k + i0.r * ji.k);
    Ok(numerator / (gap * i0.r))
}

pub fn correlation(alpha: Alpha, t_i: f64, t_j: f64, method: Method) -> Result<f64, LgiError> {
    let value = match method {
        Method::Simulation => return correlation_sim(alpha, t_i, t_j),
        Method::ClosedForm(variant) => correlation_closed(alpha, t_i, t_j, variant)?,
    };
    if method.is_physical() {
        check_bound(value)
    } else {
        Ok(value)
    }
}

/// The three correlations at equally spaced times `τ, 2τ, 3τ` and `K₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub c21: f64,
    pub c32: f64,
    pub c31: f64,
    pub k3: f64,
    pub method: Method,
}

/// `K₃(α, τ)`. Zero `τ` is admitted; every correlation is then 1.
pub fn k3(alpha: Alpha, tau: f64, method: Method) -> Result<CorrelationResult, LgiError> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(LgiError::InvalidTau(tau));
    }
    let (t1, t2, t3) = (tau, 2.0 * tau, 3.0 * tau);
    let c21 = correlation(alpha, t1, t2, method)?;
    let c32 = correlation(alpha, t2, t3, method)?;
    let c31 = correlation(alpha, t1, t3, method)?;
    Ok(CorrelationResult {
        c21,
        c32,
        c31,
        k3: c21 + c32 - c31,
        method,
    })
}

/// `K₃(α, π/4) = 1 + sin²α + 2 sin²α / (1 + sin²α)`.
pub fn k3_quarter_tau(alpha: Alpha) -> f64 {
    let s2 = alpha.value().sin().powi(2);
    1.0 + s2 + 2.0 * s2 / (1.0 + s2)
}
