//! Scenarios: a circuit with an input, a post-selection and the observables
//! probed inside it.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::basis::{Path, Pol, Space};
use crate::circuit::{Circuit, CircuitElement};
use crate::error::{Error, Result};
use crate::operator::{Axis, LabeledOperator};
use crate::state::{tensor, Kind, LabeledState};
use crate::tsvf::{contract_ancilla, TwoStateVector};
use crate::{Complex64, FRAC_1_SQRT_2};

/// Which-path and per-arm polarization observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Observable {
    PiL,
    PiR,
    SxL,
    SyL,
    SzL,
    SxR,
    SyR,
    SzR,
    I,
}

impl Observable {
    pub const ALL: [Observable; 9] = [
        Observable::PiL,
        Observable::PiR,
        Observable::SxL,
        Observable::SyL,
        Observable::SzL,
        Observable::SxR,
        Observable::SyR,
        Observable::SzR,
        Observable::I,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::PiL => "PiL",
            Observable::PiR => "PiR",
            Observable::SxL => "SxL",
            Observable::SyL => "SyL",
            Observable::SzL => "SzL",
            Observable::SxR => "SxR",
            Observable::SyR => "SyR",
            Observable::SzR => "SzR",
            Observable::I => "I",
        }
    }

    /// Arm the observable is localized in; `None` for the global identity.
    pub fn arm(self) -> Option<Path> {
        use Observable::*;
        match self {
            PiL | SxL | SyL | SzL => Some(Path::L),
            PiR | SxR | SyR | SzR => Some(Path::R),
            I => None,
        }
    }

    /// Pauli axis, or `None` for projectors and the identity.
    pub fn axis(self) -> Option<Axis> {
        use Observable::*;
        match self {
            SxL | SxR => Some(Axis::X),
            SyL | SyR => Some(Axis::Y),
            SzL | SzR => Some(Axis::Z),
            PiL | PiR | I => None,
        }
    }

    pub fn operator(self, space: Space) -> Result<LabeledOperator> {
        match (self.arm(), self.axis()) {
            (None, _) => Ok(LabeledOperator::identity(space)),
            (Some(arm), None) => LabeledOperator::path_projector(arm, space),
            (Some(arm), Some(axis)) => LabeledOperator::sigma_in_arm(axis, arm, space),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        Observable::ALL.into_iter().find(|o| o.name() == s).ok_or(())
    }
}

/// An observable evaluated at a named circuit position.
#[derive(Clone, Debug, PartialEq)]
pub struct Probe {
    pub observable: Observable,
    pub marker: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub circuit: Circuit,
    pub input: LabeledState,
    /// Detector names that must all fire.
    pub postselect: Vec<String>,
    pub probes: Vec<Probe>,
}

impl Scenario {
    /// Check cross-references between the parts.
    pub fn validate(&self) -> Result<()> {
        if self.input.kind() != Kind::Ket {
            return Err(Error::KindMismatch);
        }
        if self.input.space() != self.circuit.space() {
            return Err(Error::SpaceMismatch { left: self.input.space(), right: self.circuit.space() });
        }
        self.circuit.pattern_bra(&self.postselect)?;
        for p in &self.probes {
            self.circuit.marker(&p.marker)?;
        }
        Ok(())
    }

    pub fn has_ancilla(&self) -> bool {
        self.circuit.space().ancilla
    }

    /// Pre-selected ket at `marker` over the full circuit space.
    pub fn pre_state(&self, marker: &str) -> Result<LabeledState> {
        self.circuit.forward_evolve(&self.input, marker)
    }

    /// Post-selected bra at `marker` over the full circuit space.
    pub fn post_state(&self, marker: &str) -> Result<LabeledState> {
        let bra = self.circuit.pattern_bra(&self.postselect)?;
        self.circuit.backward_evolve_bra(&bra, marker)
    }

    /// Two-state vector of the system at `marker`. With an ancilla the
    /// ancilla is contracted, giving an entangled pre- and post-selection.
    pub fn tsv_at(&self, marker: &str) -> Result<TwoStateVector> {
        let pre = self.pre_state(marker)?;
        let post = self.post_state(marker)?;
        if self.has_ancilla() {
            contract_ancilla(&pre, &post)
        } else {
            TwoStateVector::single(post, pre)
        }
    }

    /// Space the probes act on.
    pub fn system_space(&self) -> Space {
        self.circuit.space().without_ancilla()
    }

    /// Post-selection probability of the scenario's normalized input.
    pub fn postselection_probability(&self) -> Result<f64> {
        self.circuit.postselection_probability(&self.input, &self.postselect)
    }

    /// The partial Cheshire cat: an `H` photon through a Mach-Zehnder
    /// interferometer with a half-wave plate in the right arm, post-selected
    /// on `D1` (horizontal, bright output).
    pub fn partial_cat() -> Self {
        let mut c = Circuit::new(Space::SYSTEM);
        c.push(CircuitElement::beam_splitter().named("BS1")).unwrap();
        c.mark("arms").unwrap();
        c.push(CircuitElement::half_wave_plate(Path::R).named("HWP")).unwrap();
        c.push(CircuitElement::beam_splitter().named("BS2")).unwrap();
        c.push(CircuitElement::pbs().named("PBS")).unwrap();
        let d = |p, q| crate::circuit::system_bra(p, q);
        c.add_detector("D1", d(Path::L, Pol::H)).unwrap();
        c.add_detector("D2", d(Path::R, Pol::V)).unwrap();
        c.add_detector("D3", d(Path::R, Pol::H)).unwrap();
        c.add_detector("D4", d(Path::L, Pol::V)).unwrap();
        Scenario {
            circuit: c,
            input: tensor(&LabeledState::path(Path::L), &LabeledState::pol(Pol::H)).unwrap(),
            postselect: alloc::vec!["D1".into()],
            probes: default_probes("arms"),
        }
    }

    /// The complete Cheshire cat: the system photon of a singlet pair enters
    /// the same interferometer; the ancilla is kept aside and both are jointly
    /// projected onto the singlet at the output.
    pub fn complete_cat() -> Self {
        let mut c = Circuit::new(Space::FULL);
        c.push(CircuitElement::singlet_source().named("PDC")).unwrap();
        c.push(CircuitElement::beam_splitter().named("BS1")).unwrap();
        c.mark("arms").unwrap();
        c.push(CircuitElement::half_wave_plate(Path::R).named("HWP")).unwrap();
        c.push(CircuitElement::beam_splitter().named("BS2")).unwrap();
        c.add_detector("port", LabeledState::path(Path::L).dual()).unwrap();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let hv = tensor(&LabeledState::pol(Pol::H), &LabeledState::ancilla(Pol::V)).unwrap();
        let vh = tensor(&LabeledState::pol(Pol::V), &LabeledState::ancilla(Pol::H)).unwrap();
        let singlet = hv.sub(&vh).unwrap().scale(h);
        c.add_detector("BS3", singlet.dual()).unwrap();
        let input = tensor(
            &tensor(&LabeledState::path(Path::L), &LabeledState::pol(Pol::H)).unwrap(),
            &LabeledState::ancilla(Pol::H),
        )
        .unwrap();
        Scenario {
            circuit: c,
            input,
            postselect: alloc::vec!["port".into(), "BS3".into()],
            probes: default_probes("arms"),
        }
    }
}

fn default_probes(marker: &str) -> Vec<Probe> {
    Observable::ALL.iter().map(|&observable| Probe { observable, marker: marker.into() }).collect()
}

/// Two-state vector of a scenario with a singlet ancilla, obtained by
/// evolving the full pre- and post-selected states to `marker` and
/// contracting the ancilla.
pub fn build_entangled_tsv(scenario: &Scenario, marker: &str) -> Result<TwoStateVector> {
    if !scenario.has_ancilla() {
        return Err(Error::MissingFactor("ancilla"));
    }
    let pre = scenario.pre_state(marker)?;
    let post = scenario.post_state(marker)?;
    contract_ancilla(&pre, &post)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observable_names_round_trip() {
        for o in Observable::ALL {
            assert_eq!(o.name().parse::<Observable>(), Ok(o));
        }
        assert!("Sx".parse::<Observable>().is_err());
    }

    #[test]
    fn shipped_scenarios_validate() {
        Scenario::partial_cat().validate().unwrap();
        Scenario::complete_cat().validate().unwrap();
    }

    #[test]
    fn entangled_build_needs_ancilla() {
        assert_eq!(build_entangled_tsv(&Scenario::partial_cat(), "arms"), Err(Error::MissingFactor("ancilla")));
    }
}
