//! Temporal Leggett-Garg correlations of a qubit evolving under the
//! PT-symmetric Hamiltonian `H = s·[[i sinα, 1], [1, −i sinα]]`.
//!
//! Layers, bottom up:
//!
//! - [`qmath`]: complex 2×2 algebra and the traceless matrix exponential.
//! - [`pt_core`]: the Hamiltonian, its eigensystem, the closed-form
//!   propagator and renormalized evolution.
//! - [`measurement`]: σ_y projectors and the two-time measurement protocol.
//! - [`correlations`]: `C_ji` by simulation and closed form, and `K₃`.
//! - [`scan`], [`export`]: sweeps, the `max_τ K₃` search and CSV/JSON output.
//! - [`verify`]: seeded closed-form vs simulation comparison.
//! - [`cli`]: the `lgi-pt` binary.

// NaN inputs must fail the `!(x > bound)` style checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod correlations;
pub mod error;
pub mod export;
pub mod measurement;
pub mod optimize;
pub mod par;
pub mod pt_core;
pub mod qmath;
pub mod scan;
pub mod verify;

pub use correlations::{ClosedFormVariant, CorrelationResult, Method};
pub use error::LgiError;
pub use par::Execution;
pub use pt_core::{Alpha, DimensionlessTime, PtHamiltonian, QuantumState};
pub use scan::{ExtremumRecord, ScanRow, SweepConfig};
