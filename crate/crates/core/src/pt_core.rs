//! PT-symmetric two-level Hamiltonian and its non-unitary dynamics.
//!
//! The Hamiltonian is `H = s·[[i sinα, 1], [1, −i sinα]]`. In the unbroken
//! regime `0 ≤ α < π/2` its spectrum `±s·cosα` is real, and the propagator
//! `exp(−itH)` has a closed form in the dimensionless time `t' = s·cosα·t`.
//! States evolved by it must be renormalized after every step.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::LgiError;
use crate::qmath::{c, expm_traceless, validate_density, Complex, ComplexMat2, ComplexVec2};

/// Default distance kept from the exceptional point `α = π/2`.
pub const DEFAULT_EP_GUARD: f64 = 1e-4 * PI;
/// Smallest guard accepted.
pub const MIN_EP_GUARD: f64 = 1e-6 * PI;
/// Tolerance for the [`QuantumState`] invariant.
pub const STATE_TOL: f64 = 1e-10;
/// Smallest admissible `Tr[UρU†]` in [`evolve`].
pub const NORM_TOL: f64 = 1e-12;

/// Non-Hermiticity angle validated against the exceptional-point guard.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self, LgiError> {
        Self::with_guard(alpha, DEFAULT_EP_GUARD)
    }

    /// Accepts `0 ≤ alpha ≤ π/2 − guard`.
    pub fn with_guard(alpha: f64, guard: f64) -> Result<Self, LgiError> {
        let max = Self::upper_bound(guard)?;
        if alpha.is_nan() || alpha < 0.0 {
            return Err(LgiError::AlphaOutOfRange { alpha, max, guard });
        }
        if alpha > max {
            return Err(LgiError::ExceptionalPointProximity { alpha, max, guard });
        }
        Ok(Self(alpha))
    }

    /// Largest admissible angle for a given guard.
    pub fn upper_bound(guard: f64) -> Result<f64, LgiError> {
        if !(MIN_EP_GUARD..FRAC_PI_2).contains(&guard) {
            return Err(LgiError::InvalidGuard(guard));
        }
        Ok(FRAC_PI_2 - guard)
    }

    pub const ZERO: Alpha = Alpha(0.0);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Dimensionless time `t' = (ΔE/2)·t`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DimensionlessTime(f64);

impl DimensionlessTime {
    pub fn new(t_prime: f64) -> Result<Self, LgiError> {
        if !t_prime.is_finite() {
            return Err(LgiError::NonFiniteTime(t_prime));
        }
        Ok(Self(t_prime))
    }

    pub const ZERO: DimensionlessTime = DimensionlessTime(0.0);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtHamiltonian {
    s: f64,
    alpha: Alpha,
    matrix: ComplexMat2,
}

/// `H(s, α)` with the default exceptional-point guard.
pub fn build_hamiltonian(s: f64, alpha: f64) -> Result<PtHamiltonian, LgiError> {
    PtHamiltonian::new(s, Alpha::new(alpha)?)
}

impl PtHamiltonian {
    pub fn new(s: f64, alpha: Alpha) -> Result<Self, LgiError> {
        if s == 0.0 || !s.is_finite() {
            return Err(LgiError::InvalidScale(s));
        }
        let sin = alpha.value().sin();
        let matrix =
            ComplexMat2::new(c(0.0, sin), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -sin)).scale_real(s);
        Ok(Self { s, alpha, matrix })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.matrix
    }

    /// Converts physical time to `t' = s·cosα·t`.
    pub fn dimensionless(&self, t: f64) -> Result<DimensionlessTime, LgiError> {
        DimensionlessTime::new(self.s * self.alpha.value().cos() * t)
    }

    pub fn propagator(&self, t_prime: DimensionlessTime) -> ComplexMat2 {
        propagator(self.alpha, t_prime)
    }

    /// `U(t)` for physical time `t`.
    pub fn propagator_physical(&self, t: f64) -> Result<ComplexMat2, LgiError> {
        Ok(propagator(self.alpha, self.dimensionless(t)?))
    }

    /// `exp(−itH)` evaluated through the generic traceless exponential.
    pub fn propagator_expm(&self, t: f64) -> Result<ComplexMat2, LgiError> {
        expm_traceless(&self.matrix.scale(c(0.0, -t)))
    }

    pub fn eigensystem(&self) -> EigenSystem {
        eigensystem(self)
    }

    pub fn pt_defect(&self) -> f64 {
        pt_defect(&self.matrix)
    }
}

/// Spectrum and (non-orthogonal) eigenvectors of a [`PtHamiltonian`].
///
/// The vectors carry the conventional phases `e^{±iα/2}` and are scaled by
/// `1/sqrt(2cosα)`, so their Euclidean norm is `sqrt(secα)`, not 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    pub e_plus: f64,
    pub e_minus: f64,
    pub v_plus: ComplexVec2,
    pub v_minus: ComplexVec2,
    pub delta_e: f64,
}

impl EigenSystem {
    /// `|⟨v+|v−⟩| / (‖v+‖·‖v−‖)`; equals `sinα`.
    pub fn normalized_overlap(&self) -> f64 {
        self.v_plus.inner(&self.v_minus).norm() / (self.v_plus.norm() * self.v_minus.norm())
    }

    /// Largest of `‖Hv± − E±v±‖` over both eigenpairs.
    pub fn residual(&self, h: &ComplexMat2) -> f64 {
        let res = |v: &ComplexVec2, e: f64| h.apply(v).sub(&v.scale(c(e, 0.0))).norm();
        res(&self.v_plus, self.e_plus).max(res(&self.v_minus, self.e_minus))
    }
}

pub fn eigensystem(h: &PtHamiltonian) -> EigenSystem {
    let alpha = h.alpha.value();
    let cos = alpha.cos();
    let e_plus = h.s * cos;
    let norm = 1.0 / (2.0 * cos).sqrt();
    let phase = Complex::from_polar(1.0, alpha / 2.0);
    let v_plus =
        ComplexVec2::new(c(1.0, 0.0), Complex::from_polar(1.0, -alpha)).scale(phase * norm);
    let v_minus = ComplexVec2::new(c(1.0, 0.0), -Complex::from_polar(1.0, alpha))
        .scale(c(0.0, 1.0) * phase.conj() * norm);
    EigenSystem {
        e_plus,
        e_minus: -e_plus,
        v_plus,
        v_minus,
        delta_e: 2.0 * e_plus,
    }
}

/// `‖P·conj(M)·P − M‖_F` with parity `P = σ_x` and time reversal taken as
/// complex conjugation. Zero iff `M` commutes with PT.
pub fn pt_defect(m: &ComplexMat2) -> f64 {
    let p = ComplexMat2::sigma_x();
    (p * m.conj() * p - *m).frobenius_norm()
}

/// Closed-form `U_α(t') = (1/cosα)·[[cos(t'−α), −i sin t'], [−i sin t', cos(t'+α)]]`.
pub fn propagator(alpha: Alpha, t_prime: DimensionlessTime) -> ComplexMat2 {
    let a = alpha.value();
    let t = t_prime.value();
    let sec = 1.0 / a.cos();
    let off = c(0.0, -t.sin() * sec);
    ComplexMat2::new(
        c((t - a).cos() * sec, 0.0),
        off,
        off,
        c((t + a).cos() * sec, 0.0),
    )
}

/// A 2×2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState {
    rho: ComplexMat2,
}

impl QuantumState {
    pub fn new(rho: ComplexMat2) -> Result<Self, LgiError> {
        if !validate_density(&rho, STATE_TOL) {
            return Err(LgiError::InvalidState { tol: STATE_TOL });
        }
        Ok(Self { rho })
    }

    /// `I/2`.
    pub fn maximally_mixed() -> Self {
        Self {
            rho: ComplexMat2::identity().scale_real(0.5),
        }
    }

    /// Trusted constructor for matrices already known to be states,
    /// e.g. rank-one projectors.
    pub(crate) fn from_trusted(rho: ComplexMat2) -> Self {
        debug_assert!(validate_density(&rho, STATE_TOL));
        Self { rho }
    }

    pub fn rho(&self) -> &ComplexMat2 {
        &self.rho
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.rho * self.rho).trace().re
    }
}

/// `Re Tr[UρU†]`, the weight lost or gained under non-unitary evolution.
pub fn survival_trace(state: &QuantumState, u: &ComplexMat2) -> f64 {
    (*u * state.rho * u.adjoint()).trace().re
}

/// `ρ → UρU† / Tr[UρU†]`.
pub fn evolve(state: &QuantumState, u: &ComplexMat2) -> Result<QuantumState, LgiError> {
    let unnormalized = *u * state.rho * u.adjoint();
    let trace = unnormalized.trace().re;
    if !(trace > NORM_TOL) {
        return Err(LgiError::NormCollapse {
            trace,
            tol: NORM_TOL,
        });
    }
    QuantumState::new(unnormalized.scale_real(1.0 / trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, SQRT_2};

    fn t(v: f64) -> DimensionlessTime {
        DimensionlessTime::new(v).unwrap()
    }

    #[test]
    fn hermitian_at_zero_alpha() {
        let h = build_hamiltonian(1.0, 0.0).unwrap();
        assert_eq!(*h.matrix(), ComplexMat2::sigma_x());
        assert!(h.matrix().is_hermitian(0.0));
    }

    #[test]
    fn direct_substitution() {
        let h = build_hamiltonian(2.0, FRAC_PI_4).unwrap();
        let expected = ComplexMat2::new(
            c(0.0, FRAC_1_SQRT_2),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(0.0, -FRAC_1_SQRT_2),
        )
        .scale_real(2.0);
        assert!(h.matrix().approx_eq(&expected, 1e-15));
        assert_eq!(h.matrix().trace(), c(0.0, 0.0));
    }

    #[test]
    fn guard_errors() {
        assert!(matches!(
            build_hamiltonian(1.0, 0.499999 * PI),
            Err(LgiError::ExceptionalPointProximity { .. })
        ));
        assert!(matches!(
            build_hamiltonian(1.0, FRAC_PI_2),
            Err(LgiError::ExceptionalPointProximity { .. })
        ));
        assert!(matches!(
            build_hamiltonian(0.0, 0.1),
            Err(LgiError::InvalidScale(_))
        ));
        assert!(matches!(
            build_hamiltonian(1.0, -0.1),
            Err(LgiError::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            build_hamiltonian(1.0, f64::NAN),
            Err(LgiError::AlphaOutOfRange { .. })
        ));
        // a tighter guard admits the same point
        assert!(Alpha::with_guard(0.499999 * PI, MIN_EP_GUARD).is_ok());
        assert!(matches!(
            Alpha::with_guard(0.1, 1e-9),
            Err(LgiError::InvalidGuard(_))
        ));
        assert!(Alpha::new(0.499 * PI).is_ok());
    }

    #[test]
    fn eigenvalues_and_overlap() {
        let es = build_hamiltonian(1.0, 0.0).unwrap().eigensystem();
        assert_eq!((es.e_plus, es.e_minus), (1.0, -1.0));
        assert!(es.v_plus.inner(&es.v_minus).norm() < 1e-15);

        let h = build_hamiltonian(1.0, FRAC_PI_3).unwrap();
        let es = h.eigensystem();
        assert!((es.e_plus - 0.5).abs() < 1e-15);
        assert!((es.e_minus + 0.5).abs() < 1e-15);
        assert!((es.normalized_overlap() - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert!(es.residual(h.matrix()) < 1e-12);
        // unnormalized overlap of the displayed vectors is tanα
        assert!((es.v_plus.inner(&es.v_minus).norm() - FRAC_PI_3.tan()).abs() < 1e-14);
    }

    #[test]
    fn pt_symmetry() {
        assert_eq!(build_hamiltonian(1.0, 0.0).unwrap().pt_defect(), 0.0);
        assert!(build_hamiltonian(1.0, FRAC_PI_4).unwrap().pt_defect() < 1e-13);
        let defect = pt_defect(&ComplexMat2::sigma_z());
        assert!((defect - 2.0 * SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn propagator_examples() {
        for &a in &[0.0, 0.3, 1.2] {
            let u = propagator(Alpha::new(a).unwrap(), DimensionlessTime::ZERO);
            assert!(u.approx_eq(&ComplexMat2::identity(), 1e-15));
        }
        let u = propagator(Alpha::ZERO, t(0.7));
        let expected = ComplexMat2::new(
            c(0.7f64.cos(), 0.0),
            c(0.0, -0.7f64.sin()),
            c(0.0, -0.7f64.sin()),
            c(0.7f64.cos(), 0.0),
        );
        assert!(u.approx_eq(&expected, 1e-15));
        assert!((u * u.adjoint()).approx_eq(&ComplexMat2::identity(), 1e-15));

        let u = propagator(Alpha::new(FRAC_PI_4).unwrap(), t(FRAC_PI_4));
        let expected = ComplexMat2::new(c(SQRT_2, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0));
        assert!(u.approx_eq(&expected, 1e-15), "{u:?}");
    }

    #[test]
    fn propagator_matches_expm_with_negative_scale() {
        let h = PtHamiltonian::new(-1.7, Alpha::new(0.9).unwrap()).unwrap();
        for &time in &[0.0, 0.4, 3.3] {
            let a = h.propagator_physical(time).unwrap();
            let b = h.propagator_expm(time).unwrap();
            assert!(a.approx_eq(&b, 1e-12));
        }
    }

    #[test]
    fn evolve_examples() {
        let mixed = QuantumState::maximally_mixed();
        let same = evolve(&mixed, &ComplexMat2::identity()).unwrap();
        assert_eq!(same, mixed);

        let u = propagator(Alpha::new(FRAC_PI_4).unwrap(), t(FRAC_PI_4));
        let out = evolve(&mixed, &u).unwrap();
        let q = SQRT_2 / 4.0;
        let expected = ComplexMat2::new(c(0.75, 0.0), c(0.0, q), c(0.0, -q), c(0.25, 0.0));
        assert!(out.rho().approx_eq(&expected, 1e-15), "{:?}", out.rho());
        assert!((survival_trace(&mixed, &u) - 2.0).abs() < 1e-14);

        // unitary case keeps pure states pure and the trace at 1
        let plus =
            QuantumState::new((ComplexMat2::identity() + ComplexMat2::sigma_y()).scale_real(0.5))
                .unwrap();
        let u0 = propagator(Alpha::ZERO, t(1.1));
        assert!((survival_trace(&plus, &u0) - 1.0).abs() < 1e-15);
        let evolved = evolve(&plus, &u0).unwrap();
        assert!((evolved.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn survival_trace_closed_form() {
        let mixed = QuantumState::maximally_mixed();
        for &a in &[0.0, 0.2, 0.7, 1.3] {
            let alpha = Alpha::new(a).unwrap();
            for &tp in &[0.0, 0.5, 1.9, PI] {
                let u = propagator(alpha, t(tp));
                let expected = 1.0 + 2.0 * tp.sin().powi(2) * a.tan().powi(2);
                assert!((survival_trace(&mixed, &u) - expected).abs() < 1e-12 * expected);
            }
        }
    }

    #[test]
    fn norm_collapse_is_reported() {
        let err = evolve(&QuantumState::maximally_mixed(), &ComplexMat2::zero()).unwrap_err();
        assert!(matches!(err, LgiError::NormCollapse { .. }));
    }
}
