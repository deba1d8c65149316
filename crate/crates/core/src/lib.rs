//! Two-state vector formalism with entangled pre- and post-selection.
//!
//! The crate computes weak values of which-path and polarization observables
//! for photons in a Mach-Zehnder interferometer, derives the pre- and
//! post-selected states from idealized optical circuits (including a singlet
//! ancilla whose contraction entangles the two selections), and simulates a
//! finite-strength measurement pointer whose post-selected displacement
//! converges to the weak value.
//!
//! Modules, bottom-up:
//!
//! * [`basis`], [`state`], [`operator`]: exact complex linear algebra over
//!   the labeled path ⊗ polarization (⊗ ancilla) basis.
//! * [`tsvf`]: two-state vectors, weak values, ancilla contraction.
//! * [`circuit`], [`scenario`]: circuit elements, forward and backward
//!   evolution, the two Cheshire-cat setups.
//! * [`pointer`], [`sampling`]: pointer coupling, weak-limit extrapolation,
//!   Monte Carlo clicks.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod basis;
pub mod circuit;
pub mod eigen;
pub mod error;
pub mod fft;
pub mod operator;
pub mod pointer;
pub mod sampling;
pub mod scenario;
pub mod state;
pub mod tsvf;

pub use num_complex::Complex64;

pub use basis::{BasisLabel, Path, Pol, Space};
pub use circuit::{element_unitary, Circuit, CircuitElement, ElementKind, Location};
pub use error::{Error, Result};
pub use operator::{Axis, LabeledOperator};
pub use pointer::{
    couple_and_postselect, weak_limit_extrapolate, CouplingConfig, PointerReadout, PointerState,
};
pub use sampling::{sample_clicks, MonteCarloReadout};
pub use scenario::{build_entangled_tsv, Observable, Probe, Scenario};
pub use state::{inner, phase_aligned_distance, tensor, Kind, LabeledState};
pub use tsvf::{contract_ancilla, flip_polarization, weak_value, TwoStateVector, WeakValueResult};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Comparison tolerance for exact-arithmetic results.
pub const TOL: f64 = 1e-12;
