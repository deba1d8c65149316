//! Idealized linear-optics circuits on the path ⊗ polarization (⊗ ancilla)
//! space.
//!
//! Conventions, fixed so that derived states are reproducible:
//!
//! * Beam splitter: `(1/√2)[[1, 1], [1, −1]]` on the two modes, mirror phases
//!   absorbed. A state `(|L⟩+|R⟩)/√2` entering it leaves entirely in `L`.
//! * Half-wave plate at angle θ: `[[cos 2θ, sin 2θ], [sin 2θ, −cos 2θ]]` on the
//!   polarization of one arm; the default 45° is σ_x.
//! * Polarizing beam splitter: transmits `H` (mode unchanged) and reflects
//!   `V` (modes exchanged), no reflection phase.
//! * Mirror: a phase `e^{iφ}` on one arm.
//! * Singlet source: maps the reference input `|H⟩_S|H⟩_A` to
//!   `(|H⟩_S|V⟩_A − |V⟩_S|H⟩_A)/√2`, completed to a unitary by the other three
//!   Bell states.
//!
//! Elements never touch the ancilla except the singlet source. Markers name
//! positions between elements; detectors are bras at the circuit output.

use alloc::string::String;
use alloc::vec::Vec;

use crate::basis::{BasisLabel, Path, Pol, Space};
use crate::error::{Error, Result};
use crate::operator::LabeledOperator;
use crate::state::{inner, tensor, Kind, LabeledState};
use crate::{Complex64, FRAC_1_SQRT_2, ONE, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub enum ElementKind {
    BeamSplitter,
    HalfWavePlate { angle_deg: f64 },
    PolarizingBeamSplitter,
    Mirror { phase_deg: f64 },
    SingletSource,
    Detector,
}

/// Where an element acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Arm(Path),
    /// Both interferometer modes (beam splitters).
    BothArms,
    /// Polarizations of system and ancilla photons.
    SystemAncilla,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitElement {
    pub kind: ElementKind,
    pub location: Location,
    pub name: Option<String>,
}

impl CircuitElement {
    pub fn new(kind: ElementKind, location: Location) -> Self {
        CircuitElement { kind, location, name: None }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn beam_splitter() -> Self {
        Self::new(ElementKind::BeamSplitter, Location::BothArms)
    }

    pub fn half_wave_plate(arm: Path) -> Self {
        Self::new(ElementKind::HalfWavePlate { angle_deg: 45.0 }, Location::Arm(arm))
    }

    pub fn pbs() -> Self {
        Self::new(ElementKind::PolarizingBeamSplitter, Location::BothArms)
    }

    pub fn mirror(arm: Path, phase_deg: f64) -> Self {
        Self::new(ElementKind::Mirror { phase_deg }, Location::Arm(arm))
    }

    pub fn singlet_source() -> Self {
        Self::new(ElementKind::SingletSource, Location::SystemAncilla)
    }

    /// Check that the location suits the kind and the space has the needed
    /// factors.
    pub fn validate(&self, space: Space) -> Result<()> {
        let ok = match (&self.kind, self.location) {
            (ElementKind::BeamSplitter | ElementKind::PolarizingBeamSplitter, Location::BothArms) => true,
            (ElementKind::HalfWavePlate { .. } | ElementKind::Mirror { .. }, Location::Arm(_)) => true,
            (ElementKind::SingletSource, Location::SystemAncilla) => true,
            (ElementKind::Detector, _) => return Err(Error::DetectorElement),
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidLocation(alloc::format!("{:?} at {:?}", self.kind, self.location)));
        }
        if !space.path {
            return Err(Error::MissingFactor("path"));
        }
        let needs_pol = !matches!(self.kind, ElementKind::BeamSplitter | ElementKind::Mirror { .. });
        if needs_pol && !space.pol {
            return Err(Error::MissingFactor("polarization"));
        }
        if self.kind == ElementKind::SingletSource && !space.ancilla {
            return Err(Error::MissingFactor("ancilla"));
        }
        Ok(())
    }
}

/// `(cos, sin)` of an angle in degrees, exact at multiples of 90°.
fn cos_sin_deg(deg: f64) -> (f64, f64) {
    let quarter = deg / 90.0;
    if quarter == libm::round(quarter) {
        let q = libm::fmod(quarter, 4.0);
        let q = if q < 0.0 { q + 4.0 } else { q };
        return match q as i32 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    let rad = deg.to_radians();
    (libm::cos(rad), libm::sin(rad))
}

/// Unitary of a non-detector element on `space`, identity on untouched
/// factors.
pub fn element_unitary(e: &CircuitElement, space: Space) -> Result<LabeledOperator> {
    e.validate(space)?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let op = match (&e.kind, e.location) {
        (ElementKind::BeamSplitter, _) => LabeledOperator::from_fn(space, |r, c| {
            if r.pol != c.pol || r.ancilla != c.ancilla {
                return ZERO;
            }
            if r.path == Some(Path::R) && c.path == Some(Path::R) {
                -h
            } else {
                h
            }
        }),
        (ElementKind::HalfWavePlate { angle_deg }, Location::Arm(arm)) => {
            let (c2, s2) = cos_sin_deg(2.0 * angle_deg);
            LabeledOperator::from_fn(space, |r, c| {
                if r.path != c.path || r.ancilla != c.ancilla {
                    return ZERO;
                }
                if r.path != Some(arm) {
                    return if r.pol == c.pol { ONE } else { ZERO };
                }
                let v = match (r.pol.unwrap(), c.pol.unwrap()) {
                    (Pol::H, Pol::H) => c2,
                    (Pol::V, Pol::V) => -c2,
                    _ => s2,
                };
                Complex64::new(v, 0.0)
            })
        }
        (ElementKind::PolarizingBeamSplitter, _) => LabeledOperator::from_fn(space, |r, c| {
            if r.pol != c.pol || r.ancilla != c.ancilla {
                return ZERO;
            }
            let transmitted = r.path == c.path;
            match r.pol.unwrap() {
                Pol::H if transmitted => ONE,
                Pol::V if !transmitted => ONE,
                _ => ZERO,
            }
        }),
        (ElementKind::Mirror { phase_deg }, Location::Arm(arm)) => {
            let (c, s) = cos_sin_deg(*phase_deg);
            let phase = Complex64::new(c, s);
            LabeledOperator::from_fn(space, |r, col| {
                if r != col {
                    ZERO
                } else if r.path == Some(arm) {
                    phase
                } else {
                    ONE
                }
            })
        }
        (ElementKind::SingletSource, _) => singlet_source_unitary(space),
        _ => unreachable!("validated above"),
    };
    Ok(op)
}

fn singlet_source_unitary(space: Space) -> LabeledOperator {
    use Pol::{H, V};
    let h = FRAC_1_SQRT_2;
    // columns: input (pol_S, pol_A); rows: output amplitudes on (pol_S, pol_A)
    let bell = |input: (Pol, Pol), output: (Pol, Pol)| -> f64 {
        match (input, output) {
            // singlet
            ((H, H), (H, V)) => h,
            ((H, H), (V, H)) => -h,
            // triplet ψ+
            ((H, V), (H, V)) | ((H, V), (V, H)) => h,
            // φ+
            ((V, H), (H, H)) | ((V, H), (V, V)) => h,
            // φ−
            ((V, V), (H, H)) => h,
            ((V, V), (V, V)) => -h,
            _ => 0.0,
        }
    };
    LabeledOperator::from_fn(space, |r, c| {
        if r.path != c.path {
            return ZERO;
        }
        let v = bell((c.pol.unwrap(), c.ancilla.unwrap()), (r.pol.unwrap(), r.ancilla.unwrap()));
        Complex64::new(v, 0.0)
    })
}

/// Named position between stages; `position` counts the elements before it.
#[derive(Clone, Debug, PartialEq)]
pub struct Marker {
    pub name: String,
    pub position: usize,
}

/// Named projecting bra at the circuit output. It may cover only some
/// factors; detectors combined in a coincidence pattern must together cover
/// the circuit space.
#[derive(Clone, Debug, PartialEq)]
pub struct Detector {
    pub name: String,
    pub bra: LabeledState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    space: Space,
    stages: Vec<CircuitElement>,
    markers: Vec<Marker>,
    detectors: Vec<Detector>,
}

impl Circuit {
    pub fn new(space: Space) -> Self {
        Circuit { space, stages: Vec::new(), markers: Vec::new(), detectors: Vec::new() }
    }

    pub fn push(&mut self, e: CircuitElement) -> Result<&mut Self> {
        e.validate(self.space)?;
        self.stages.push(e);
        Ok(self)
    }

    pub fn mark(&mut self, name: impl Into<String>) -> Result<&mut Self> {
        let name = name.into();
        if self.markers.iter().any(|m| m.name == name) {
            return Err(Error::DuplicateName(name));
        }
        self.markers.push(Marker { name, position: self.stages.len() });
        Ok(self)
    }

    pub fn add_detector(&mut self, name: impl Into<String>, bra: LabeledState) -> Result<&mut Self> {
        let name = name.into();
        if bra.kind() != Kind::Bra {
            return Err(Error::KindMismatch);
        }
        if self.space.union(bra.space()) != self.space {
            return Err(Error::SpaceMismatch { left: bra.space(), right: self.space });
        }
        if self.detectors.iter().any(|d| d.name == name) {
            return Err(Error::DuplicateName(name));
        }
        self.detectors.push(Detector { name, bra });
        Ok(self)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn stages(&self) -> &[CircuitElement] {
        &self.stages
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    pub fn detectors(&self) -> &[Detector] {
        &self.detectors
    }

    pub fn marker(&self, name: &str) -> Result<&Marker> {
        self.markers.iter().find(|m| m.name == name).ok_or_else(|| Error::UnknownMarker(name.into()))
    }

    pub fn detector(&self, name: &str) -> Result<&Detector> {
        self.detectors.iter().find(|d| d.name == name).ok_or_else(|| Error::UnknownDetector(name.into()))
    }

    fn unitaries(&self, range: core::ops::Range<usize>) -> Result<Vec<LabeledOperator>> {
        self.stages[range].iter().map(|e| element_unitary(e, self.space)).collect()
    }

    /// Product of all stage unitaries.
    pub fn total_unitary(&self) -> Result<LabeledOperator> {
        let mut u = LabeledOperator::identity(self.space);
        for op in self.unitaries(0..self.stages.len())? {
            u = op.compose(&u)?;
        }
        Ok(u)
    }

    /// Output bra of a detector pattern: the tensor product of the listed
    /// detector bras, which must cover the circuit space exactly.
    pub fn pattern_bra<S: AsRef<str>>(&self, pattern: &[S]) -> Result<LabeledState> {
        let mut names = pattern.iter();
        let first = names.next().ok_or_else(|| Error::UnknownDetector(String::new()))?;
        let mut bra = self.detector(first.as_ref())?.bra.clone();
        for n in names {
            bra = tensor(&bra, &self.detector(n.as_ref())?.bra)?;
        }
        if bra.space() != self.space {
            return Err(Error::SpaceMismatch { left: bra.space(), right: self.space });
        }
        Ok(bra)
    }

    /// Apply the stages before `marker` to `input`.
    pub fn forward_evolve(&self, input: &LabeledState, marker: &str) -> Result<LabeledState> {
        let pos = self.marker(marker)?.position;
        self.forward_to(input, pos)
    }

    fn forward_to(&self, input: &LabeledState, pos: usize) -> Result<LabeledState> {
        if input.kind() != Kind::Ket {
            return Err(Error::KindMismatch);
        }
        let mut s = input.clone();
        for op in self.unitaries(0..pos)? {
            s = op.apply(&s)?;
        }
        Ok(s)
    }

    /// Evolve an output bra backwards through the stages after `marker`.
    pub fn backward_evolve_bra(&self, bra: &LabeledState, marker: &str) -> Result<LabeledState> {
        let pos = self.marker(marker)?.position;
        self.backward_to(bra, pos)
    }

    fn backward_to(&self, bra: &LabeledState, pos: usize) -> Result<LabeledState> {
        if bra.kind() != Kind::Bra {
            return Err(Error::KindMismatch);
        }
        let mut s = bra.clone();
        for op in self.unitaries(pos..self.stages.len())?.iter().rev() {
            s = op.apply(&s)?;
        }
        Ok(s)
    }

    /// Post-selected bra of one detector at `marker`.
    pub fn backward_evolve(&self, detector: &str, marker: &str) -> Result<LabeledState> {
        let bra = self.pattern_bra(&[detector])?;
        self.backward_evolve_bra(&bra, marker)
    }

    /// `⟨pattern|U_total|input⟩`.
    pub fn transition_amplitude<S: AsRef<str>>(&self, input: &LabeledState, pattern: &[S]) -> Result<Complex64> {
        let bra = self.pattern_bra(pattern)?;
        let out = self.forward_to(input, self.stages.len())?;
        inner(&bra, &out)
    }

    /// Probability that a normalized input fires the detector pattern.
    pub fn postselection_probability<S: AsRef<str>>(&self, input: &LabeledState, pattern: &[S]) -> Result<f64> {
        let n2 = input.norm_sqr();
        if (n2 - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        let bra = self.pattern_bra(pattern)?;
        let amp = inner(&bra, &self.forward_to(input, self.stages.len())?)?;
        Ok((amp.norm_sqr() / bra.norm_sqr()).clamp(0.0, 1.0))
    }
}

/// Label helper for building detector bras by hand.
pub fn system_bra(path: Path, pol: Pol) -> LabeledState {
    LabeledState::basis(Kind::Bra, BasisLabel::system(path, pol))
}
