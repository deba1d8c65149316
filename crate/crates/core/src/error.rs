use alloc::string::String;
use core::fmt;

use crate::basis::Space;
use crate::Complex64;

/// Errors raised by the core library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A bra was supplied where a ket was expected, or vice versa.
    KindMismatch,
    /// Tensor factors overlap (e.g. path ⊗ path).
    OverlappingFactors { left: Space, right: Space },
    SpaceMismatch { left: Space, right: Space },
    /// `|⟨Φ|Ψ⟩|` below the singularity tolerance.
    SingularDenominator { denominator: Complex64 },
    EmptyTerms,
    /// A required tensor factor (e.g. the ancilla) is missing.
    MissingFactor(&'static str),
    /// A detector was used where a unitary element was expected.
    DetectorElement,
    /// Element placed on a location it cannot act on.
    InvalidLocation(String),
    UnknownMarker(String),
    UnknownDetector(String),
    DuplicateName(String),
    /// Input state must be normalized.
    NotNormalized { norm_sqr: f64 },
    NonFinite,
    InvalidGrid(&'static str),
    /// The shifted pointer reaches the grid boundary.
    GridOverflow { g: f64 },
    InvalidCoupling(&'static str),
    InsufficientSamples { needed: usize, got: usize },
    DegenerateSamples,
    /// Coupling outside the weak regime.
    NotWeak { g: f64, ratio: f64 },
    ZeroSamples,
    /// Post-selection probability too small to sample from.
    Starvation { probability: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::KindMismatch => f.write_str("bra/ket kind mismatch"),
            Error::OverlappingFactors { left, right } => {
                write!(f, "cannot tensor overlapping factors {left} and {right}")
            }
            Error::SpaceMismatch { left, right } => write!(f, "space mismatch: {left} vs {right}"),
            Error::SingularDenominator { denominator } => write!(
                f,
                "pre/post-selection overlap is singular (denominator {}{:+}i)",
                denominator.re, denominator.im
            ),
            Error::EmptyTerms => f.write_str("two-state vector needs at least one term"),
            Error::MissingFactor(which) => write!(f, "state has no {which} factor"),
            Error::DetectorElement => f.write_str("detectors have no unitary"),
            Error::InvalidLocation(msg) => write!(f, "invalid element location: {msg}"),
            Error::UnknownMarker(m) => write!(f, "unknown marker `{m}`"),
            Error::UnknownDetector(d) => write!(f, "unknown detector `{d}`"),
            Error::DuplicateName(n) => write!(f, "duplicate name `{n}`"),
            Error::NotNormalized { norm_sqr } => {
                write!(f, "input state is not normalized (norm² = {norm_sqr})")
            }
            Error::NonFinite => f.write_str("non-finite amplitude"),
            Error::InvalidGrid(msg) => write!(f, "invalid pointer grid: {msg}"),
            Error::GridOverflow { g } => {
                write!(f, "pointer support reaches the grid boundary at g = {g}")
            }
            Error::InvalidCoupling(msg) => write!(f, "invalid coupling: {msg}"),
            Error::InsufficientSamples { needed, got } => {
                write!(f, "need at least {needed} distinct coupling strengths, got {got}")
            }
            Error::DegenerateSamples => f.write_str("coupling strengths are degenerate"),
            Error::NotWeak { g, ratio } => {
                write!(f, "g = {g} is outside the weak regime (g/sigma = {ratio})")
            }
            Error::ZeroSamples => f.write_str("sample count must be at least 1"),
            Error::Starvation { probability } => {
                write!(f, "post-selection probability {probability:e} is too small to sample")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
