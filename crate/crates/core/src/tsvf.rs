//! Two-state vectors and weak values.
//!
//! A [`TwoStateVector`] is a weighted superposition of pre- and post-selected
//! pairs `Σ_k w_k ⟨Φ_k| |Ψ_k⟩`. A single term is the ordinary pre/post-selected
//! state. The weak value of `A` is
//!
//! ```text
//!          Σ_k w_k ⟨Φ_k|A|Ψ_k⟩
//! ⟨A⟩_w = ─────────────────────
//!           Σ_k w_k ⟨Φ_k|Ψ_k⟩
//! ```
//!
//! which is invariant under any common rescaling of the terms, so neither the
//! states nor the weights need to be normalized.

use alloc::vec::Vec;

use crate::basis::{Pol, Space};
use crate::error::{Error, Result};
use crate::operator::{sandwich, LabeledOperator};
use crate::state::{inner, Kind, LabeledState};
use crate::{Complex64, ONE};

/// `|D|` below this is treated as a vanishing pre/post-selection overlap.
pub const SINGULAR_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub bra: LabeledState,
    pub ket: LabeledState,
    pub weight: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoStateVector {
    terms: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakValueResult {
    pub value: Complex64,
    pub denominator: Complex64,
}

impl TwoStateVector {
    /// Store the given `(bra, ket, weight)` terms verbatim.
    pub fn superpose(terms: Vec<(LabeledState, LabeledState, Complex64)>) -> Result<Self> {
        let first = terms.first().ok_or(Error::EmptyTerms)?;
        let space = first.1.space();
        for (bra, ket, _) in &terms {
            if bra.kind() != Kind::Bra || ket.kind() != Kind::Ket {
                return Err(Error::KindMismatch);
            }
            if bra.space() != space {
                return Err(Error::SpaceMismatch { left: bra.space(), right: space });
            }
            if ket.space() != space {
                return Err(Error::SpaceMismatch { left: ket.space(), right: space });
            }
        }
        Ok(TwoStateVector {
            terms: terms.into_iter().map(|(bra, ket, weight)| Term { bra, ket, weight }).collect(),
        })
    }

    /// The plain pre- and post-selected state `⟨bra| |ket⟩`.
    pub fn single(bra: LabeledState, ket: LabeledState) -> Result<Self> {
        Self::superpose(alloc::vec![(bra, ket, ONE)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn space(&self) -> Space {
        self.terms[0].ket.space()
    }

    /// `D = Σ_k w_k ⟨Φ_k|Ψ_k⟩`.
    pub fn denominator(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.weight * inner(&t.bra, &t.ket).expect("validated on construction"))
            .sum()
    }

    pub fn is_singular(&self) -> bool {
        self.denominator().norm() < SINGULAR_TOL
    }

    pub fn numerator(&self, op: &LabeledOperator) -> Result<Complex64> {
        if op.space() != self.space() {
            return Err(Error::SpaceMismatch { left: op.space(), right: self.space() });
        }
        self.terms.iter().map(|t| Ok(t.weight * sandwich(&t.bra, op, &t.ket)?)).sum()
    }

    pub fn weak_value(&self, op: &LabeledOperator) -> Result<WeakValueResult> {
        let numerator = self.numerator(op)?;
        let denominator = self.denominator();
        if denominator.norm() < SINGULAR_TOL {
            return Err(Error::SingularDenominator { denominator });
        }
        Ok(WeakValueResult { value: numerator / denominator, denominator })
    }

    /// Multiply every weight by `c`.
    pub fn rescaled(&self, c: Complex64) -> Self {
        TwoStateVector {
            terms: self.terms.iter().map(|t| Term { weight: t.weight * c, ..t.clone() }).collect(),
        }
    }
}

/// Free-function form of [`TwoStateVector::weak_value`].
pub fn weak_value(tsv: &TwoStateVector, op: &LabeledOperator) -> Result<WeakValueResult> {
    tsv.weak_value(op)
}

/// Swap `H ↔ V` in every term of a state.
pub fn flip_polarization(s: &LabeledState) -> Result<LabeledState> {
    s.flip_polarization()
}

/// Contract the ancilla between a full pre-selected ket and a full
/// post-selected bra.
///
/// For each ancilla value `a` the system components `⟨post|_a` and `|pre⟩_a`
/// form one term with weight 1; the result lives on the system space. Terms
/// whose bra or ket vanishes contribute nothing and are dropped, so a product
/// ancilla collapses to a single effective term.
pub fn contract_ancilla(pre_full: &LabeledState, post_full: &LabeledState) -> Result<TwoStateVector> {
    if pre_full.kind() != Kind::Ket || post_full.kind() != Kind::Bra {
        return Err(Error::KindMismatch);
    }
    if !pre_full.space().ancilla || !post_full.space().ancilla {
        return Err(Error::MissingFactor("ancilla"));
    }
    if pre_full.space() != post_full.space() {
        return Err(Error::SpaceMismatch { left: post_full.space(), right: pre_full.space() });
    }
    let mut terms = Vec::with_capacity(2);
    for a in Pol::ALL {
        terms.push((post_full.ancilla_component(a)?, pre_full.ancilla_component(a)?, ONE));
    }
    let live: Vec<_> = terms
        .iter()
        .filter(|(b, k, _)| !b.is_zero(1e-15) && !k.is_zero(1e-15))
        .cloned()
        .collect();
    if live.is_empty() {
        terms.truncate(1);
        return TwoStateVector::superpose(terms);
    }
    TwoStateVector::superpose(live)
}
