//! Dense operators over a labeled basis.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::basis::{BasisLabel, Path, Pol, Space};
use crate::error::{Error, Result};
use crate::state::{Kind, LabeledState};
use crate::{Complex64, I, ONE, ZERO};

/// Pauli axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// `⟨row|σ|col⟩` on the `(H, V)` basis.
    fn entry(self, row: Pol, col: Pol) -> Complex64 {
        use Pol::{H, V};
        match (self, row, col) {
            (Axis::Z, H, H) => ONE,
            (Axis::Z, V, V) => -ONE,
            (Axis::X, H, V) | (Axis::X, V, H) => ONE,
            (Axis::Y, H, V) => -I,
            (Axis::Y, V, H) => I,
            _ => ZERO,
        }
    }
}

/// Square complex matrix indexed by the canonical basis of its space.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledOperator {
    space: Space,
    // row-major, dim × dim
    m: Vec<Complex64>,
}

impl LabeledOperator {
    pub fn from_matrix(space: Space, m: Vec<Complex64>) -> Result<Self> {
        let d = space.dim();
        if m.len() != d * d {
            return Err(Error::SpaceMismatch { left: space, right: space });
        }
        if m.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(LabeledOperator { space, m })
    }

    /// Build from a function of `(row label, column label)`.
    pub fn from_fn(space: Space, mut f: impl FnMut(BasisLabel, BasisLabel) -> Complex64) -> Self {
        let d = space.dim();
        let mut m = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                m.push(f(space.label(r), space.label(c)));
            }
        }
        LabeledOperator { space, m }
    }

    pub fn zero(space: Space) -> Self {
        LabeledOperator { space, m: vec![ZERO; space.dim() * space.dim()] }
    }

    pub fn identity(space: Space) -> Self {
        Self::from_fn(space, |r, c| if r == c { ONE } else { ZERO })
    }

    /// `Π_arm = |arm⟩⟨arm|` on the path factor, identity elsewhere.
    pub fn path_projector(arm: Path, space: Space) -> Result<Self> {
        if !space.path {
            return Err(Error::MissingFactor("path"));
        }
        Ok(Self::from_fn(space, |r, c| if r == c && r.path == Some(arm) { ONE } else { ZERO }))
    }

    /// Pauli `σ_axis` on the system polarization, identity elsewhere.
    pub fn sigma(axis: Axis, space: Space) -> Result<Self> {
        if !space.pol {
            return Err(Error::MissingFactor("polarization"));
        }
        Ok(Self::from_fn(space, |r, c| {
            if r.path == c.path && r.ancilla == c.ancilla {
                axis.entry(r.pol.unwrap(), c.pol.unwrap())
            } else {
                ZERO
            }
        }))
    }

    /// `σ_axis^arm = Π_arm σ_axis`.
    pub fn sigma_in_arm(axis: Axis, arm: Path, space: Space) -> Result<Self> {
        Ok(Self::path_projector(arm, space)?.compose(&Self::sigma(axis, space)?)?)
    }

    /// Lift an operator to a larger space, acting as identity on the added
    /// factors.
    pub fn extend(&self, target: Space) -> Result<Self> {
        if self.space.union(target) != target {
            return Err(Error::SpaceMismatch { left: self.space, right: target });
        }
        let src = self.space;
        let restrict = |l: BasisLabel| BasisLabel {
            path: if src.path { l.path } else { None },
            pol: if src.pol { l.pol } else { None },
            ancilla: if src.ancilla { l.ancilla } else { None },
        };
        let rest = |l: BasisLabel| BasisLabel {
            path: if src.path { None } else { l.path },
            pol: if src.pol { None } else { l.pol },
            ancilla: if src.ancilla { None } else { l.ancilla },
        };
        Ok(Self::from_fn(target, |r, c| {
            if rest(r) != rest(c) {
                return ZERO;
            }
            let i = src.index_of(restrict(r)).unwrap();
            let j = src.index_of(restrict(c)).unwrap();
            self.get(i, j)
        }))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[row * self.dim() + col]
    }

    pub fn entry(&self, row: BasisLabel, col: BasisLabel) -> Option<Complex64> {
        Some(self.get(self.space.index_of(row)?, self.space.index_of(col)?))
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let mut m = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                m[c * d + r] = self.m[r * d + c].conj();
            }
        }
        LabeledOperator { space: self.space, m }
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &LabeledOperator) -> Result<Self> {
        self.check_space(rhs.space)?;
        let d = self.dim();
        let mut m = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.m[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    m[r * d + c] += a * rhs.m[k * d + c];
                }
            }
        }
        Ok(LabeledOperator { space: self.space, m })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        LabeledOperator { space: self.space, m: self.m.iter().map(|a| a * c).collect() }
    }

    pub fn try_add(&self, rhs: &LabeledOperator) -> Result<Self> {
        self.check_space(rhs.space)?;
        Ok(LabeledOperator {
            space: self.space,
            m: self.m.iter().zip(&rhs.m).map(|(a, b)| a + b).collect(),
        })
    }

    fn check_space(&self, other: Space) -> Result<()> {
        if self.space != other {
            return Err(Error::SpaceMismatch { left: self.space, right: other });
        }
        Ok(())
    }

    /// `A|ψ⟩` for kets, `⟨φ|A` for bras.
    pub fn apply(&self, s: &LabeledState) -> Result<LabeledState> {
        self.check_space(s.space())?;
        let d = self.dim();
        let v = s.amplitudes();
        let out: Vec<Complex64> = match s.kind() {
            Kind::Ket => (0..d).map(|r| (0..d).map(|c| self.m[r * d + c] * v[c]).sum()).collect(),
            Kind::Bra => (0..d).map(|c| (0..d).map(|r| v[r] * self.m[r * d + c]).sum()).collect(),
        };
        LabeledState::new(s.kind(), s.space(), out)
    }

    /// `max_ij |self_ij − other_ij|`.
    pub fn max_abs_diff(&self, other: &LabeledOperator) -> Result<f64> {
        self.check_space(other.space)?;
        Ok(self.m.iter().zip(&other.m).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().compose(self).expect("same space");
        p.max_abs_diff(&Self::identity(self.space)).expect("same space")
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()).expect("same space") <= tol
    }
}

impl Add for &LabeledOperator {
    type Output = LabeledOperator;

    /// Panics on mismatched spaces; use [`LabeledOperator::try_add`] otherwise.
    fn add(self, rhs: &LabeledOperator) -> LabeledOperator {
        self.try_add(rhs).expect("operator spaces match")
    }
}

impl Sub for &LabeledOperator {
    type Output = LabeledOperator;

    fn sub(self, rhs: &LabeledOperator) -> LabeledOperator {
        self.try_add(&rhs.scale(-ONE)).expect("operator spaces match")
    }
}

impl Mul for &LabeledOperator {
    type Output = LabeledOperator;

    fn mul(self, rhs: &LabeledOperator) -> LabeledOperator {
        self.compose(rhs).expect("operator spaces match")
    }
}

/// `⟨bra|A|ket⟩`.
pub fn sandwich(bra: &LabeledState, op: &LabeledOperator, ket: &LabeledState) -> Result<Complex64> {
    crate::state::inner(bra, &op.apply(ket)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::tensor;

    fn hv(p: Pol) -> LabeledState {
        LabeledState::pol(p)
    }

    #[test]
    fn sigma_x_flips_h() {
        let x = LabeledOperator::sigma(Axis::X, Space::POL).unwrap();
        assert_eq!(x.apply(&hv(Pol::H)).unwrap(), hv(Pol::V));
    }

    #[test]
    fn sigma_y_on_h_is_i_v() {
        let y = LabeledOperator::sigma(Axis::Y, Space::POL).unwrap();
        assert_eq!(y.apply(&hv(Pol::H)).unwrap(), hv(Pol::V).scale(I));
    }

    #[test]
    fn identity_is_neutral() {
        let s = tensor(&LabeledState::path(Path::R), &hv(Pol::V)).unwrap().scale(Complex64::new(0.3, -0.2));
        assert_eq!(LabeledOperator::identity(Space::SYSTEM).apply(&s).unwrap(), s);
    }

    #[test]
    fn pauli_definitions_entrywise() {
        use Pol::{H, V};
        let lbl = |p| BasisLabel { path: None, pol: Some(p), ancilla: None };
        let z = LabeledOperator::sigma(Axis::Z, Space::POL).unwrap();
        let y = LabeledOperator::sigma(Axis::Y, Space::POL).unwrap();
        assert_eq!(z.entry(lbl(H), lbl(H)), Some(ONE));
        assert_eq!(z.entry(lbl(V), lbl(V)), Some(-ONE));
        assert_eq!(y.entry(lbl(H), lbl(V)), Some(-I));
        assert_eq!(y.entry(lbl(V), lbl(H)), Some(I));
    }

    #[test]
    fn observables_are_hermitian_and_square_to_identity() {
        let id = LabeledOperator::identity(Space::SYSTEM);
        for axis in Axis::ALL {
            let s = LabeledOperator::sigma(axis, Space::SYSTEM).unwrap();
            assert!(s.is_hermitian(0.0));
            assert_eq!(s.adjoint(), s);
            assert!((&s * &s).max_abs_diff(&id).unwrap() <= 1e-12);
            for arm in Path::ALL {
                assert!(LabeledOperator::sigma_in_arm(axis, arm, Space::SYSTEM).unwrap().is_hermitian(0.0));
            }
        }
        let pl = LabeledOperator::path_projector(Path::L, Space::SYSTEM).unwrap();
        let pr = LabeledOperator::path_projector(Path::R, Space::SYSTEM).unwrap();
        assert_eq!(pl.adjoint(), pl);
        assert_eq!(&pl + &pr, id);
    }

    #[test]
    fn bra_application_is_row_action() {
        // ⟨H|σ_y = (σ_y†|H⟩)† = (i|V⟩)† = −i⟨V|
        let y = LabeledOperator::sigma(Axis::Y, Space::POL).unwrap();
        let out = y.apply(&hv(Pol::H).dual()).unwrap();
        assert_eq!(out, hv(Pol::V).dual().scale(-I));
    }

    #[test]
    fn extend_acts_as_identity_on_new_factors() {
        let x = LabeledOperator::sigma(Axis::X, Space::POL).unwrap();
        let big = x.extend(Space::FULL).unwrap();
        assert_eq!(big, LabeledOperator::sigma(Axis::X, Space::FULL).unwrap());
        let pl = LabeledOperator::path_projector(Path::L, Space::SYSTEM).unwrap().extend(Space::FULL).unwrap();
        assert_eq!(pl, LabeledOperator::path_projector(Path::L, Space::FULL).unwrap());
    }

    #[test]
    fn mismatched_spaces_error() {
        let a = LabeledOperator::identity(Space::SYSTEM);
        assert!(matches!(a.apply(&LabeledState::path(Path::L)), Err(Error::SpaceMismatch { .. })));
        assert!(LabeledOperator::sigma(Axis::X, Space::PATH).is_err());
    }
}
