//! Labeled tensor-product bases.
//!
//! A [`Space`] is a subset of the three two-level factors used throughout the
//! crate: the interferometer arm (`L`/`R`), the photon polarization (`H`/`V`)
//! and, optionally, the polarization of an ancilla photon. Basis vectors of a
//! space are enumerated in one canonical order: ancilla slowest, then path,
//! then polarization fastest. For the system space that gives
//! `(L,H), (L,V), (R,H), (R,V)`.

use alloc::vec::Vec;
use core::fmt;

/// Interferometer arm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Path {
    L,
    R,
}

/// Linear polarization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pol {
    H,
    V,
}

impl Path {
    pub const ALL: [Path; 2] = [Path::L, Path::R];

    pub(crate) fn bit(self) -> usize {
        match self {
            Path::L => 0,
            Path::R => 1,
        }
    }

    pub(crate) fn from_bit(bit: usize) -> Self {
        if bit == 0 {
            Path::L
        } else {
            Path::R
        }
    }
}

impl Pol {
    pub const ALL: [Pol; 2] = [Pol::H, Pol::V];

    pub(crate) fn bit(self) -> usize {
        match self {
            Pol::H => 0,
            Pol::V => 1,
        }
    }

    pub(crate) fn from_bit(bit: usize) -> Self {
        if bit == 0 {
            Pol::H
        } else {
            Pol::V
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Pol::H => Pol::V,
            Pol::V => Pol::H,
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Path::L => "L",
            Path::R => "R",
        })
    }
}

impl fmt::Display for Pol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pol::H => "H",
            Pol::V => "V",
        })
    }
}

/// Set of tensor factors making up a state space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    pub path: bool,
    pub pol: bool,
    pub ancilla: bool,
}

impl Space {
    pub const PATH: Space = Space { path: true, pol: false, ancilla: false };
    pub const POL: Space = Space { path: false, pol: true, ancilla: false };
    pub const ANCILLA: Space = Space { path: false, pol: false, ancilla: true };
    /// Path ⊗ polarization of the system photon.
    pub const SYSTEM: Space = Space { path: true, pol: true, ancilla: false };
    /// System ⊗ ancilla polarization.
    pub const FULL: Space = Space { path: true, pol: true, ancilla: true };

    pub fn factor_count(self) -> usize {
        self.path as usize + self.pol as usize + self.ancilla as usize
    }

    pub fn dim(self) -> usize {
        1 << self.factor_count()
    }

    pub fn is_empty(self) -> bool {
        self.factor_count() == 0
    }

    /// True when the two spaces share no factor.
    pub fn is_disjoint(self, other: Space) -> bool {
        !(self.path && other.path || self.pol && other.pol || self.ancilla && other.ancilla)
    }

    pub fn union(self, other: Space) -> Space {
        Space {
            path: self.path || other.path,
            pol: self.pol || other.pol,
            ancilla: self.ancilla || other.ancilla,
        }
    }

    /// The space with the ancilla factor removed.
    pub fn without_ancilla(self) -> Space {
        Space { ancilla: false, ..self }
    }

    /// Canonical index of `label` in this space, if the label lives here.
    pub fn index_of(self, label: BasisLabel) -> Option<usize> {
        if label.space() != self {
            return None;
        }
        let mut idx = 0;
        if let Some(a) = label.ancilla {
            idx = idx * 2 + a.bit();
        }
        if let Some(p) = label.path {
            idx = idx * 2 + p.bit();
        }
        if let Some(p) = label.pol {
            idx = idx * 2 + p.bit();
        }
        Some(idx)
    }

    /// Basis label at canonical position `idx`.
    pub fn label(self, idx: usize) -> BasisLabel {
        debug_assert!(idx < self.dim());
        let mut rest = idx;
        let pol = if self.pol {
            let b = rest & 1;
            rest >>= 1;
            Some(Pol::from_bit(b))
        } else {
            None
        };
        let path = if self.path {
            let b = rest & 1;
            rest >>= 1;
            Some(Path::from_bit(b))
        } else {
            None
        };
        let ancilla = if self.ancilla { Some(Pol::from_bit(rest & 1)) } else { None };
        BasisLabel { path, pol, ancilla }
    }

    /// All basis labels in canonical order.
    pub fn labels(self) -> Vec<BasisLabel> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.ancilla {
            parts.push("ancilla");
        }
        if self.path {
            parts.push("path");
        }
        if self.pol {
            parts.push("pol");
        }
        if parts.is_empty() {
            return f.write_str("scalar");
        }
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                f.write_str("⊗")?;
            }
            f.write_str(p)?;
        }
        Ok(())
    }
}

/// One basis vector: a value for each factor present in its space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub path: Option<Path>,
    pub pol: Option<Pol>,
    pub ancilla: Option<Pol>,
}

impl BasisLabel {
    pub const fn system(path: Path, pol: Pol) -> Self {
        BasisLabel { path: Some(path), pol: Some(pol), ancilla: None }
    }

    pub const fn full(path: Path, pol: Pol, ancilla: Pol) -> Self {
        BasisLabel { path: Some(path), pol: Some(pol), ancilla: Some(ancilla) }
    }

    pub fn space(self) -> Space {
        Space {
            path: self.path.is_some(),
            pol: self.pol.is_some(),
            ancilla: self.ancilla.is_some(),
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if first {
                first = false;
                Ok(())
            } else {
                f.write_str(",")
            }
        };
        if let Some(p) = self.path {
            sep(f)?;
            write!(f, "{p}")?;
        }
        if let Some(p) = self.pol {
            sep(f)?;
            write!(f, "{p}")?;
        }
        if let Some(a) = self.ancilla {
            sep(f)?;
            write!(f, "{a}_A")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_order_is_canonical() {
        let labels = Space::SYSTEM.labels();
        assert_eq!(
            labels,
            [
                BasisLabel::system(Path::L, Pol::H),
                BasisLabel::system(Path::L, Pol::V),
                BasisLabel::system(Path::R, Pol::H),
                BasisLabel::system(Path::R, Pol::V),
            ]
        );
    }

    #[test]
    fn ancilla_is_slowest() {
        assert_eq!(Space::FULL.label(0), BasisLabel::full(Path::L, Pol::H, Pol::H));
        assert_eq!(Space::FULL.label(4), BasisLabel::full(Path::L, Pol::H, Pol::V));
        for (i, l) in Space::FULL.labels().into_iter().enumerate() {
            assert_eq!(Space::FULL.index_of(l), Some(i));
        }
    }

    #[test]
    fn index_rejects_foreign_label() {
        assert_eq!(Space::SYSTEM.index_of(BasisLabel::full(Path::L, Pol::H, Pol::V)), None);
    }
}
