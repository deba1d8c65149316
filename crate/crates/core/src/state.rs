//! Kets and bras over a labeled basis.

use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{BasisLabel, Path, Pol, Space};
use crate::error::{Error, Result};
use crate::{Complex64, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Ket,
    Bra,
}

/// Complex amplitudes over the canonical basis of a [`Space`].
///
/// Bra amplitudes are stored already conjugated: a bra is a dual vector and
/// `inner` is the plain bilinear sum `Σ bra(b)·ket(b)`. Converting between
/// kinds with [`LabeledState::dual`] conjugates exactly once.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledState {
    kind: Kind,
    space: Space,
    amps: Vec<Complex64>,
}

impl LabeledState {
    pub fn new(kind: Kind, space: Space, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.dim() {
            return Err(Error::SpaceMismatch { left: space, right: space });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(LabeledState { kind, space, amps })
    }

    pub fn ket(space: Space, amps: Vec<Complex64>) -> Result<Self> {
        Self::new(Kind::Ket, space, amps)
    }

    pub fn bra(space: Space, amps: Vec<Complex64>) -> Result<Self> {
        Self::new(Kind::Bra, space, amps)
    }

    pub fn zero(kind: Kind, space: Space) -> Self {
        LabeledState { kind, space, amps: vec![ZERO; space.dim()] }
    }

    /// The basis vector `|label⟩` (or `⟨label|`).
    pub fn basis(kind: Kind, label: BasisLabel) -> Self {
        let space = label.space();
        let mut s = Self::zero(kind, space);
        let idx = space.index_of(label).expect("label belongs to its own space");
        s.amps[idx] = ONE;
        s
    }

    /// `|L⟩` or `|R⟩` on the path factor alone.
    pub fn path(p: Path) -> Self {
        Self::basis(Kind::Ket, BasisLabel { path: Some(p), pol: None, ancilla: None })
    }

    /// `|H⟩` or `|V⟩` on the system polarization factor alone.
    pub fn pol(p: Pol) -> Self {
        Self::basis(Kind::Ket, BasisLabel { path: None, pol: Some(p), ancilla: None })
    }

    /// `|H⟩_A` or `|V⟩_A` on the ancilla factor alone.
    pub fn ancilla(p: Pol) -> Self {
        Self::basis(Kind::Ket, BasisLabel { path: None, pol: None, ancilla: Some(p) })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, label: BasisLabel) -> Option<Complex64> {
        self.space.index_of(label).map(|i| self.amps[i])
    }

    /// Iterate `(label, amplitude)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (BasisLabel, Complex64)> + '_ {
        self.amps.iter().enumerate().map(move |(i, a)| (self.space.label(i), *a))
    }

    /// Ket ↔ bra, conjugating every amplitude once.
    pub fn dual(&self) -> Self {
        let kind = match self.kind {
            Kind::Ket => Kind::Bra,
            Kind::Bra => Kind::Ket,
        };
        LabeledState { kind, space: self.space, amps: self.amps.iter().map(|a| a.conj()).collect() }
    }

    /// Same amplitudes relabelled as a bra without conjugation.
    pub fn as_bra_literal(&self) -> Self {
        LabeledState { kind: Kind::Bra, ..self.clone() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        LabeledState {
            kind: self.kind,
            space: self.space,
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &LabeledState) -> Result<Self> {
        self.check_compatible(other)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect();
        Ok(LabeledState { kind: self.kind, space: self.space, amps })
    }

    pub fn sub(&self, other: &LabeledState) -> Result<Self> {
        self.add(&other.scale(-ONE))
    }

    fn check_compatible(&self, other: &LabeledState) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        if self.space != other.space {
            return Err(Error::SpaceMismatch { left: self.space, right: other.space });
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    /// Unit-norm copy; a zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.amps.iter().all(|a| a.norm_sqr() <= tol * tol)
    }

    /// Swap `H` and `V` of the system polarization in every basis label.
    pub fn flip_polarization(&self) -> Result<Self> {
        if !self.space.pol {
            return Err(Error::MissingFactor("polarization"));
        }
        let mut amps = vec![ZERO; self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let mut label = self.space.label(i);
            label.pol = label.pol.map(Pol::flipped);
            amps[self.space.index_of(label).expect("same space")] = *a;
        }
        Ok(LabeledState { kind: self.kind, space: self.space, amps })
    }

    /// Component of a state with an ancilla factor at a fixed ancilla value,
    /// as a state over the remaining factors.
    pub fn ancilla_component(&self, a: Pol) -> Result<Self> {
        if !self.space.ancilla {
            return Err(Error::MissingFactor("ancilla"));
        }
        let sub = self.space.without_ancilla();
        let amps = sub
            .labels()
            .into_iter()
            .map(|l| {
                let full = BasisLabel { ancilla: Some(a), ..l };
                self.amps[self.space.index_of(full).expect("label in space")]
            })
            .collect();
        Ok(LabeledState { kind: self.kind, space: sub, amps })
    }
}

/// Tensor product `a ⊗ b`. The factors must be disjoint and of the same kind;
/// the result lives on the union space in canonical order.
pub fn tensor(a: &LabeledState, b: &LabeledState) -> Result<LabeledState> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch);
    }
    if !a.space.is_disjoint(b.space) {
        return Err(Error::OverlappingFactors { left: a.space, right: b.space });
    }
    let space = a.space.union(b.space);
    let mut out = LabeledState::zero(a.kind, space);
    for (la, xa) in a.iter() {
        for (lb, xb) in b.iter() {
            let label = BasisLabel {
                path: la.path.or(lb.path),
                pol: la.pol.or(lb.pol),
                ancilla: la.ancilla.or(lb.ancilla),
            };
            let idx = space.index_of(label).expect("union label");
            out.amps[idx] = xa * xb;
        }
    }
    Ok(out)
}

/// `⟨bra|ket⟩` as the bilinear sum over the shared basis.
pub fn inner(bra: &LabeledState, ket: &LabeledState) -> Result<Complex64> {
    if bra.kind != Kind::Bra || ket.kind != Kind::Ket {
        return Err(Error::KindMismatch);
    }
    if bra.space != ket.space {
        return Err(Error::SpaceMismatch { left: bra.space, right: ket.space });
    }
    Ok(bra.amps.iter().zip(&ket.amps).map(|(b, k)| b * k).sum())
}

/// `min_φ ‖x − e^{iφ}y‖` for two states of the same kind and space.
pub fn phase_aligned_distance(x: &LabeledState, y: &LabeledState) -> Result<f64> {
    x.check_compatible(y)?;
    let overlap: Complex64 = x.amps.iter().zip(&y.amps).map(|(a, b)| a.conj() * b).sum();
    let phase = if overlap.norm() > 0.0 { overlap.conj() / overlap.norm() } else { ONE };
    let d2: f64 = x.amps.iter().zip(&y.amps).map(|(a, b)| (a - phase * b).norm_sqr()).sum();
    Ok(libm::sqrt(d2))
}
