//! Complex 2×2 linear algebra.
//!
//! Every operator in the crate (Hamiltonian, propagator, projectors, density
//! matrices) is a [`ComplexMat2`]. The kernels here are small enough to be
//! written out entry by entry, which keeps them exact in the sense that no
//! iterative routine is involved anywhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::LgiError;

pub use num_complex::Complex64 as Complex;

/// Default tolerance for algebraic identities.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Below this `|ω|` the matrix exponential switches to its Taylor form.
const SERIES_CUTOFF: f64 = 1e-4;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);
const I: Complex = Complex::new(0.0, 1.0);

/// Shorthand for a complex literal.
#[inline]
pub const fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A 2×2 complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMat2 {
    pub a11: Complex,
    pub a12: Complex,
    pub a21: Complex,
    pub a22: Complex,
}

impl fmt::Debug for ComplexMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

impl ComplexMat2 {
    pub const fn new(a11: Complex, a12: Complex, a21: Complex, a22: Complex) -> Self {
        Self { a11, a12, a21, a22 }
    }

    /// Builds a matrix from real entries.
    pub const fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(c(a11, 0.0), c(a12, 0.0), c(a21, 0.0), c(a22, 0.0))
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn sigma_y() -> Self {
        Self::new(ZERO, c(0.0, -1.0), I, ZERO)
    }

    pub const fn sigma_z() -> Self {
        Self::new(ONE, ZERO, ZERO, c(-1.0, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|&z| finite(z))
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a12.conj(),
            self.a21.conj(),
            self.a22.conj(),
        )
    }

    pub fn trace(&self) -> Complex {
        self.a11 + self.a22
    }

    pub fn det(&self) -> Complex {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self::new(self.a11 * k, self.a12 * k, self.a21 * k, self.a22 * k)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(c(k, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other)
            .entries()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn apply(&self, v: &ComplexVec2) -> ComplexVec2 {
        ComplexVec2::new(
            self.a11 * v.v1 + self.a12 * v.v2,
            self.a21 * v.v1 + self.a22 * v.v2,
        )
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }
}

/// Matrix product `a · b`.
pub fn mat_mul(a: &ComplexMat2, b: &ComplexMat2) -> ComplexMat2 {
    ComplexMat2::new(
        a.a11 * b.a11 + a.a12 * b.a21,
        a.a11 * b.a12 + a.a12 * b.a22,
        a.a21 * b.a11 + a.a22 * b.a21,
        a.a21 * b.a12 + a.a22 * b.a22,
    )
}

impl Mul for ComplexMat2 {
    type Output = ComplexMat2;
    fn mul(self, rhs: Self) -> Self {
        mat_mul(&self, &rhs)
    }
}

impl Add for ComplexMat2 {
    type Output = ComplexMat2;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl Sub for ComplexMat2 {
    type Output = ComplexMat2;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.a11 - rhs.a11,
            self.a12 - rhs.a12,
            self.a21 - rhs.a21,
            self.a22 - rhs.a22,
        )
    }
}

impl Neg for ComplexMat2 {
    type Output = ComplexMat2;
    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

/// A column vector in ℂ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexVec2 {
    pub v1: Complex,
    pub v2: Complex,
}

impl ComplexVec2 {
    pub const fn new(v1: Complex, v2: Complex) -> Self {
        Self { v1, v2 }
    }

    pub fn is_finite(&self) -> bool {
        finite(self.v1) && finite(self.v2)
    }

    /// `⟨self|other⟩`, antilinear in the first argument.
    pub fn inner(&self, other: &Self) -> Complex {
        self.v1.conj() * other.v1 + self.v2.conj() * other.v2
    }

    pub fn norm(&self) -> f64 {
        (self.v1.norm_sqr() + self.v2.norm_sqr()).sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self::new(self.v1 * k, self.v2 * k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.v1 - other.v1, self.v2 - other.v2)
    }

    /// Outer product `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> ComplexMat2 {
        ComplexMat2::new(
            self.v1 * other.v1.conj(),
            self.v1 * other.v2.conj(),
            self.v2 * other.v1.conj(),
            self.v2 * other.v2.conj(),
        )
    }
}

/// `cos ω` and `sin ω / ω` as functions of `ω²`.
///
/// Both are even in ω, so the branch of the square root does not matter.
fn cos_sinc(omega_sq: Complex) -> (Complex, Complex) {
    if omega_sq.norm() < SERIES_CUTOFF * SERIES_CUTOFF {
        let w2 = omega_sq;
        let w4 = w2 * w2;
        let w6 = w4 * w2;
        let cos = ONE - w2 / 2.0 + w4 / 24.0 - w6 / 720.0;
        let sinc = ONE - w2 / 6.0 + w4 / 120.0 - w6 / 5040.0;
        (cos, sinc)
    } else {
        let w = omega_sq.sqrt();
        (w.cos(), w.sin() / w)
    }
}

/// Exact exponential of a traceless 2×2 matrix.
///
/// For `tr m = 0`, Cayley–Hamilton gives `m² = −det(m)·I`, hence
/// `exp(m) = cos(ω)·I + sin(ω)/ω · m` with `ω² = det m`.
pub fn expm_traceless(m: &ComplexMat2) -> Result<ComplexMat2, LgiError> {
    let tr = m.trace().norm();
    if !(tr < DEFAULT_TOL) {
        return Err(LgiError::NotTraceless { trace: tr });
    }
    let (cos, sinc) = cos_sinc(m.det());
    Ok(ComplexMat2::identity().scale(cos) + m.scale(sinc))
}

/// Eigenvalues of a Hermitian 2×2 matrix, ascending. Only the Hermitian part
/// of the input is used.
pub fn hermitian_eigenvalues(m: &ComplexMat2) -> (f64, f64) {
    let a = m.a11.re;
    let d = m.a22.re;
    let b = (m.a12 + m.a21.conj()) / 2.0;
    let mean = (a + d) / 2.0;
    let half_gap = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
    (mean - half_gap, mean + half_gap)
}

/// Checks that `rho` is a density matrix: Hermitian, unit trace, and
/// positive semidefinite, each within `tol`.
pub fn validate_density(rho: &ComplexMat2, tol: f64) -> bool {
    if !rho.is_finite() || !rho.is_hermitian(tol) {
        return false;
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return false;
    }
    let (low, _) = hermitian_eigenvalues(rho);
    low >= -tol
}
