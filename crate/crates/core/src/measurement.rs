//! Sequential σ_y projective measurements.
//!
//! The two-time protocol here is the reference every correlation value in the
//! crate is checked against: start from `I/2`, evolve to `t_i`, measure,
//! collapse, evolve for `t_j − t_i`, renormalize, measure again.

use std::fmt;

use crate::error::LgiError;
use crate::pt_core::{evolve, propagator, Alpha, DimensionlessTime, QuantumState};
use crate::qmath::ComplexMat2;

/// Raw probabilities may stray this far outside `[0, 1]` before being clamped.
pub const CLAMP_WINDOW: f64 = 1e-12;
/// Smallest branch probability [`collapse`] will condition on.
pub const BRANCH_TOL: f64 = 1e-12;

/// Outcome of a dichotomic measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn value(self) -> f64 {
        f64::from(self.sign())
    }

    fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.sign())
    }
}

/// Rank-one projector onto the σ_y eigenspace of an outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projector {
    pub outcome: Outcome,
    pub matrix: ComplexMat2,
}

impl Projector {
    /// `Π± = (I ± σ_y)/2`.
    pub fn sigma_y(outcome: Outcome) -> Self {
        let sy = ComplexMat2::sigma_y().scale_real(outcome.value());
        Self {
            outcome,
            matrix: (ComplexMat2::identity() + sy).scale_real(0.5),
        }
    }
}

pub fn sigma_y_projectors() -> (Projector, Projector) {
    (
        Projector::sigma_y(Outcome::Plus),
        Projector::sigma_y(Outcome::Minus),
    )
}

/// Process-wide record of every distribution the protocol produced.
///
/// Writers only ever raise counters and maxima, so concurrent updates commute
/// and the snapshot is independent of evaluation order.
pub mod audit {
    use std::sync::atomic::{AtomicU64, Ordering};

    static DISTRIBUTIONS: AtomicU64 = AtomicU64::new(0);
    static CLAMPS: AtomicU64 = AtomicU64::new(0);
    // nonnegative f64 stored as bits; bit order matches numeric order
    static MAX_SUM_DEVIATION: AtomicU64 = AtomicU64::new(0);
    static MAX_EXCURSION: AtomicU64 = AtomicU64::new(0);

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct Snapshot {
        /// Number of [`super::TwoTimeDistribution`]s built.
        pub distributions: u64,
        /// Raw probabilities that fell outside `[0, 1]` and were clamped.
        pub clamps: u64,
        /// Largest `|Σ p − 1|` over all marginals and conditionals.
        pub max_sum_deviation: f64,
        /// Largest distance by which a raw probability left `[0, 1]`.
        pub max_excursion: f64,
    }

    fn raise(cell: &AtomicU64, value: f64) {
        cell.fetch_max(value.abs().to_bits(), Ordering::Relaxed);
    }

    pub(super) fn record_clamp(raw: f64) {
        CLAMPS.fetch_add(1, Ordering::Relaxed);
        raise(&MAX_EXCURSION, if raw < 0.0 { -raw } else { raw - 1.0 });
    }

    pub(super) fn record_distribution(sum_deviation: f64) {
        DISTRIBUTIONS.fetch_add(1, Ordering::Relaxed);
        raise(&MAX_SUM_DEVIATION, sum_deviation);
    }

    pub fn snapshot() -> Snapshot {
        Snapshot {
            distributions: DISTRIBUTIONS.load(Ordering::Relaxed),
            clamps: CLAMPS.load(Ordering::Relaxed),
            max_sum_deviation: f64::from_bits(MAX_SUM_DEVIATION.load(Ordering::Relaxed)),
            max_excursion: f64::from_bits(MAX_EXCURSION.load(Ordering::Relaxed)),
        }
    }
}

/// Maps a raw probability into `[0, 1]`, logging any clamp.
fn clamp_probability(raw: f64) -> Result<f64, LgiError> {
    if !(-CLAMP_WINDOW..=1.0 + CLAMP_WINDOW).contains(&raw) {
        return Err(LgiError::ProbabilityOutOfRange {
            value: raw,
            window: CLAMP_WINDOW,
        });
    }
    if (0.0..=1.0).contains(&raw) {
        return Ok(raw);
    }
    audit::record_clamp(raw);
    log::debug!("clamped probability {raw:e} into [0, 1]");
    Ok(raw.clamp(0.0, 1.0))
}

/// Marginal distribution of a single σ_y measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeProbabilities {
    probs: [f64; 2],
}

impl OutcomeProbabilities {
    pub fn get(&self, q: Outcome) -> f64 {
        self.probs[q.index()]
    }

    pub fn sum(&self) -> f64 {
        self.probs[0] + self.probs[1]
    }
}

/// `p(q) = Tr[ρ Π_q]`, clamped into `[0, 1]`.
pub fn outcome_probabilities(state: &QuantumState) -> Result<OutcomeProbabilities, LgiError> {
    let mut probs = [0.0; 2];
    for q in Outcome::ALL {
        let raw = (*state.rho() * Projector::sigma_y(q).matrix).trace().re;
        probs[q.index()] = clamp_probability(raw)?;
    }
    Ok(OutcomeProbabilities { probs })
}

/// Lüders update `ρ → Π_q ρ Π_q / p(q)`.
///
/// For a rank-one projector `Π ρ Π = Tr[ρΠ]·Π`, so the result is `Π_q` itself.
pub fn collapse(state: &QuantumState, q: Outcome) -> Result<QuantumState, LgiError> {
    let projector = Projector::sigma_y(q).matrix;
    let p = (*state.rho() * projector).trace().re;
    if !(p > BRANCH_TOL) {
        return Err(LgiError::ZeroProbabilityBranch {
            outcome: q.sign(),
            probability: p,
        });
    }
    Ok(QuantumState::from_trusted(projector))
}

/// Outcome statistics of a two-time σ_y measurement run from `I/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTimeDistribution {
    pub p_first: OutcomeProbabilities,
    /// Indexed `[first][second]`.
    p_cond: [OutcomeProbabilities; 2],
}

impl TwoTimeDistribution {
    /// `p(q_j at t_j | q_i at t_i)`.
    pub fn conditional(&self, first: Outcome, second: Outcome) -> f64 {
        self.p_cond[first.index()].get(second)
    }

    pub fn joint(&self, first: Outcome, second: Outcome) -> f64 {
        self.p_first.get(first) * self.conditional(first, second)
    }

    /// `Σ q_i q_j p(q_j|q_i) p(q_i)`.
    pub fn correlation(&self) -> f64 {
        let mut acc = 0.0;
        for qi in Outcome::ALL {
            for qj in Outcome::ALL {
                acc += qi.value() * qj.value() * self.joint(qi, qj);
            }
        }
        acc
    }

    /// Largest `|Σ p − 1|` over the marginal and both conditionals.
    pub fn max_sum_deviation(&self) -> f64 {
        std::iter::once(&self.p_first)
            .chain(self.p_cond.iter())
            .map(|d| (d.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Runs the two-time protocol with `ρ(0) = I/2` and measurements at `t_i` and
/// `t_j` (dimensionless, `0 ≤ t_i ≤ t_j`).
///
/// The conditional distribution is read off from the collapsed state evolved
/// over `t_j − t_i` and renormalized, so `Σ_{q_j} p(q_j|q_i) = 1`.
pub fn two_time_protocol(
    alpha: Alpha,
    t_i: f64,
    t_j: f64,
) -> Result<TwoTimeDistribution, LgiError> {
    let first = DimensionlessTime::new(t_i)?;
    let second = DimensionlessTime::new(t_j)?;
    if !(0.0 <= t_i && t_i <= t_j) {
        return Err(LgiError::InvalidTimeOrder { t_i, t_j });
    }

    let to_first = propagator(alpha, first);
    let state_at_first = evolve(&QuantumState::maximally_mixed(), &to_first)?;
    let p_first = outcome_probabilities(&state_at_first)?;

    let between = propagator(
        alpha,
        DimensionlessTime::new(second.value() - first.value())?,
    );
    let mut p_cond = [p_first; 2];
    for qi in Outcome::ALL {
        let collapsed = collapse(&state_at_first, qi)?;
        let later = evolve(&collapsed, &between)?;
        p_cond[qi.index()] = outcome_probabilities(&later)?;
    }

    let dist = TwoTimeDistribution { p_first, p_cond };
    audit::record_distribution(dist.max_sum_deviation());
    Ok(dist)
}
