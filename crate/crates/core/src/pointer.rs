//! Finite-strength von Neumann measurement with a continuous pointer.
//!
//! The observable `A` couples to a one-dimensional pointer through the
//! impulsive interaction `U = exp(−i g A ⊗ p̂)` (ħ = 1), which translates the
//! pointer by `g·a` on each eigenspace of `A` with eigenvalue `a`. After
//! post-selection the pointer is left in
//!
//! ```text
//! φ(x) ∝ Σ_a ⟨post| P_a |pre⟩ ψ₀(x − g·a)
//! ```
//!
//! For small `g` the mean position moves by `g·Re⟨A⟩_w` and the mean momentum
//! by `2g·Var(p̂)·Im⟨A⟩_w`. Nothing here is perturbative: the shifted pointers
//! are computed exactly with a spectral shift on a periodic grid.
//!
//! A multi-term two-state vector `Σ_k w_k ⟨Φ_k| |Ψ_k⟩` is coupled through an
//! equivalent physical pair on system ⊗ ancilla, `|pre⟩ = Σ_k |Ψ_k⟩|k⟩` and
//! `⟨post| = Σ_k w_k ⟨Φ_k|⟨k|`, both normalized. Contracting the ancilla of
//! that pair gives back the original terms, and for a single term the
//! construction is just the normalized pre- and post-selection.
//!
//! The pointer shape is independent of how the pointer is realized in the
//! laboratory (a transverse beam displacement, a birefringent walk-off or a
//! time-of-arrival delay); only `g` and the initial wavefunction enter.

use alloc::vec;
use alloc::vec::Vec;

use crate::eigen::hermitian_spectrum;
use crate::error::{Error, Result};
use crate::fft;
use crate::operator::LabeledOperator;
use crate::tsvf::{TwoStateVector, SINGULAR_TOL};
use crate::{Complex64, ZERO};

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 2048;
/// Default grid half-width in units of σ.
pub const DEFAULT_HALF_WIDTH: f64 = 8.0;
/// Largest boundary amplitude tolerated, relative to the peak.
pub const BOUNDARY_TOL: f64 = 1e-8;
/// Couplings with `g/σ` above this are outside the weak regime.
pub const WEAK_RATIO: f64 = 0.1;

/// Discretized pointer wavefunction on the periodic grid
/// `x_i = grid_min + i·dx`, `dx = (grid_max − grid_min)/n_points`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointerState {
    grid_min: f64,
    grid_max: f64,
    amps: Vec<Complex64>,
}

impl PointerState {
    /// Validate and normalize (`Σ|ψ_i|² dx = 1`).
    pub fn new(grid_min: f64, grid_max: f64, amps: Vec<Complex64>) -> Result<Self> {
        if !(grid_min.is_finite() && grid_max.is_finite() && grid_min < grid_max) {
            return Err(Error::InvalidGrid("grid bounds must be finite and increasing"));
        }
        if amps.len() < 8 || !amps.len().is_power_of_two() {
            return Err(Error::InvalidGrid("point count must be a power of two, at least 8"));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut p = PointerState { grid_min, grid_max, amps };
        let n2 = p.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::InvalidGrid("zero wavefunction"));
        }
        p.scale_in_place(Complex64::new(1.0 / libm::sqrt(n2), 0.0));
        if p.boundary_ratio() >= BOUNDARY_TOL {
            return Err(Error::InvalidGrid("wavefunction does not vanish at the grid boundary"));
        }
        Ok(p)
    }

    /// `ψ(x) ∝ exp(−x²/(2σ²))` on `n_points` spanning `±half_width·σ`.
    pub fn gaussian(sigma: f64, n_points: usize, half_width: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidCoupling("sigma must be positive"));
        }
        let lo = -half_width * sigma;
        let hi = half_width * sigma;
        let dx = (hi - lo) / n_points as f64;
        let amps = (0..n_points)
            .map(|i| {
                let x = lo + i as f64 * dx;
                Complex64::new(libm::exp(-x * x / (2.0 * sigma * sigma)), 0.0)
            })
            .collect();
        Self::new(lo, hi, amps)
    }

    /// Gaussian of width σ with the default grid.
    pub fn default_for(sigma: f64) -> Result<Self> {
        Self::gaussian(sigma, DEFAULT_POINTS, DEFAULT_HALF_WIDTH)
    }

    pub fn grid_min(&self) -> f64 {
        self.grid_min
    }

    pub fn grid_max(&self) -> f64 {
        self.grid_max
    }

    pub fn n_points(&self) -> usize {
        self.amps.len()
    }

    pub fn dx(&self) -> f64 {
        (self.grid_max - self.grid_min) / self.amps.len() as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.grid_min + i as f64 * self.dx()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dx()
    }

    fn scale_in_place(&mut self, c: Complex64) {
        for a in &mut self.amps {
            *a *= c;
        }
    }

    /// Largest endpoint amplitude relative to the peak amplitude.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let edge = self.amps[0].norm().max(self.amps[self.amps.len() - 1].norm());
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }

    /// Cell probabilities `|ψ_i|² dx`, summing to the squared norm.
    pub fn probabilities(&self) -> Vec<f64> {
        let dx = self.dx();
        self.amps.iter().map(|a| a.norm_sqr() * dx).collect()
    }

    pub fn mean_position(&self) -> f64 {
        let dx = self.dx();
        let (num, den) = self.amps.iter().enumerate().fold((0.0, 0.0), |(num, den), (i, a)| {
            let p = a.norm_sqr();
            (num + p * (self.grid_min + i as f64 * dx), den + p)
        });
        num / den
    }

    fn momentum_moments(&self) -> (f64, f64) {
        let mut spec = self.amps.clone();
        fft::forward(&mut spec);
        let n = spec.len();
        let dx = self.dx();
        let mut m0 = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (i, s) in spec.iter().enumerate() {
            let k = fft::wavenumber(i, n, dx);
            let p = s.norm_sqr();
            m0 += p;
            m1 += p * k;
            m2 += p * k * k;
        }
        let mean = m1 / m0;
        (mean, m2 / m0 - mean * mean)
    }

    pub fn mean_momentum(&self) -> f64 {
        self.momentum_moments().0
    }

    pub fn momentum_variance(&self) -> f64 {
        self.momentum_moments().1
    }

    /// `ψ(x − s)`, exact for band-limited wavefunctions on the periodic grid.
    pub fn shifted(&self, s: f64) -> PointerState {
        if s == 0.0 {
            return self.clone();
        }
        let mut spec = self.amps.clone();
        fft::forward(&mut spec);
        let n = spec.len();
        let dx = self.dx();
        for (i, v) in spec.iter_mut().enumerate() {
            let k = fft::wavenumber(i, n, dx);
            *v *= Complex64::new(libm::cos(k * s), -libm::sin(k * s));
        }
        fft::inverse(&mut spec);
        PointerState { grid_min: self.grid_min, grid_max: self.grid_max, amps: spec }
    }
}

/// Coupling strength `g` (pointer units per eigenvalue unit) and initial
/// pointer width σ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingConfig {
    pub g: f64,
    pub sigma: f64,
}

impl CouplingConfig {
    pub fn new(g: f64, sigma: f64) -> Result<Self> {
        let cfg = CouplingConfig { g, sigma };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidCoupling("g must be finite and non-negative"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidCoupling("sigma must be positive"));
        }
        Ok(())
    }

    pub fn ratio(&self) -> f64 {
        self.g / self.sigma
    }

    /// `g/σ ≤ 0.1`.
    pub fn is_weak(&self) -> bool {
        self.ratio() <= WEAK_RATIO
    }
}

/// Summary of a post-selected pointer. Positions and momenta are
/// displacements relative to the uncoupled pointer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointerReadout {
    pub mean_position: f64,
    pub mean_momentum: f64,
    pub postselect_prob: f64,
    pub n_samples: Option<u64>,
    pub stderr: Option<f64>,
    /// `Var(p̂)` of the uncoupled pointer; converts the momentum shift into
    /// `Im⟨A⟩_w`.
    pub momentum_variance: f64,
}

impl PointerReadout {
    /// Exact readout of a conditional pointer relative to `p0`.
    pub fn exact(p0: &PointerState, coupled: &CoupledPointer) -> Self {
        let (p0_mean, p0_var) = p0.momentum_moments();
        PointerReadout {
            mean_position: coupled.pointer.mean_position() - p0.mean_position(),
            mean_momentum: coupled.pointer.mean_momentum() - p0_mean,
            postselect_prob: coupled.postselect_prob,
            n_samples: None,
            stderr: None,
            momentum_variance: p0_var,
        }
    }

    /// `mean_position / g`, the real-part channel.
    pub fn real_channel(&self, g: f64) -> f64 {
        self.mean_position / g
    }

    /// `mean_momentum / (2 g Var p̂)`, the imaginary-part channel.
    pub fn imag_channel(&self, g: f64) -> f64 {
        self.mean_momentum / (2.0 * g * self.momentum_variance)
    }
}

/// Result of coupling and post-selecting.
#[derive(Clone, Debug)]
pub struct CoupledPointer {
    /// Normalized conditional pointer, with the global phase of the
    /// pre/post overlap removed so that `g = 0` returns the input pointer.
    pub pointer: PointerState,
    pub postselect_prob: f64,
    /// Squared norm of the joint system ⊗ pointer state after the coupling
    /// and before post-selection.
    pub joint_norm_sqr: f64,
}

/// Physical pre/post pair realizing a two-state vector: normalized vectors
/// over system ⊗ ancilla (ancilla dimension = number of terms), ancilla
/// index slowest.
fn physical_pair(tsv: &TwoStateVector) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut pre = Vec::new();
    let mut post = Vec::new();
    for t in tsv.terms() {
        pre.extend_from_slice(t.ket.amplitudes());
        post.extend(t.bra.amplitudes().iter().map(|b| b * t.weight));
    }
    let normalize = |v: &mut Vec<Complex64>| {
        let n = libm::sqrt(v.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if n > 0.0 {
            for a in v.iter_mut() {
                *a /= n;
            }
        }
    };
    normalize(&mut pre);
    normalize(&mut post);
    (pre, post)
}

/// Exact coupling of `A` to the pointer followed by post-selection.
pub fn couple_and_postselect(
    tsv: &TwoStateVector,
    op: &LabeledOperator,
    cfg: &CouplingConfig,
    p0: &PointerState,
) -> Result<CoupledPointer> {
    cfg.validate()?;
    if op.space() != tsv.space() {
        return Err(Error::SpaceMismatch { left: op.space(), right: tsv.space() });
    }
    let denominator = tsv.denominator();
    if denominator.norm() < SINGULAR_TOL {
        return Err(Error::SingularDenominator { denominator });
    }
    let spectrum = hermitian_spectrum(op)?;
    let (pre, post) = physical_pair(tsv);
    let d = op.dim();
    let terms = tsv.terms().len();
    let n = p0.n_points();
    let dx = p0.dx();

    let mut joint = vec![vec![ZERO; n]; d * terms];
    let mut cond = vec![ZERO; n];
    for comp in &spectrum {
        let shifted = p0.shifted(cfg.g * comp.value);
        if shifted.boundary_ratio() >= BOUNDARY_TOL {
            return Err(Error::GridOverflow { g: cfg.g });
        }
        // (P_a ⊗ I_ancilla)|pre⟩, block by block
        let mut branch = vec![ZERO; d * terms];
        for k in 0..terms {
            for r in 0..d {
                branch[k * d + r] = (0..d).map(|c| comp.projector.get(r, c) * pre[k * d + c]).sum();
            }
        }
        let weight: Complex64 = post.iter().zip(&branch).map(|(b, v)| b * v).sum();
        for (s, amp) in branch.iter().enumerate() {
            if *amp == ZERO {
                continue;
            }
            for (j, psi) in joint[s].iter_mut().zip(shifted.amplitudes()) {
                *j += amp * psi;
            }
        }
        if weight != ZERO {
            for (c, psi) in cond.iter_mut().zip(shifted.amplitudes()) {
                *c += weight * psi;
            }
        }
    }

    let joint_norm_sqr = joint.iter().flatten().map(|a| a.norm_sqr()).sum::<f64>() * dx;
    let prob = cond.iter().map(|a| a.norm_sqr()).sum::<f64>() * dx;
    if prob <= 0.0 {
        return Err(Error::Starvation { probability: prob });
    }
    let overlap: Complex64 = post.iter().zip(&pre).map(|(b, k)| b * k).sum();
    let phase = if overlap.norm() > 0.0 { overlap.conj() / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    let scale = phase / libm::sqrt(prob);
    for c in &mut cond {
        *c *= scale;
    }
    Ok(CoupledPointer {
        pointer: PointerState { grid_min: p0.grid_min, grid_max: p0.grid_max, amps: cond },
        postselect_prob: prob.min(1.0),
        joint_norm_sqr,
    })
}

/// Least-squares fit of `y = c₀ + c₂ g²`, returning `c₀`.
fn intercept_in_g_squared(points: &[(f64, f64)]) -> Result<f64> {
    let n = points.len() as f64;
    let (sx, sy, sxx, sxy) = points.iter().fold((0.0, 0.0, 0.0, 0.0), |(sx, sy, sxx, sxy), &(g, y)| {
        let x = g * g;
        (sx + x, sy + y, sxx + x * x, sxy + x * y)
    });
    let det = n * sxx - sx * sx;
    if det.abs() <= 1e-300 || det.abs() <= 1e-12 * n * sxx {
        return Err(Error::DegenerateSamples);
    }
    Ok((sxx * sy - sx * sxy) / det)
}

/// Extrapolate readouts at several small `g` to `g → 0`, returning the
/// estimated complex weak value.
///
/// The real part comes from `mean_position/g`, the imaginary part from
/// `mean_momentum/(2 g Var p̂)`; both are fitted as `c₀ + c₂ g²`, the form of
/// the leading correction for an even pointer.
pub fn weak_limit_extrapolate(readouts: &[(f64, PointerReadout)]) -> Result<Complex64> {
    let mut gs: Vec<f64> = readouts.iter().map(|(g, _)| *g).filter(|g| *g > 0.0).collect();
    gs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    gs.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
    if gs.len() < 3 || readouts.iter().any(|(g, _)| !(*g > 0.0 && g.is_finite())) {
        return Err(Error::InsufficientSamples { needed: 3, got: gs.len() });
    }
    for (g, r) in readouts {
        // σ of the Gaussian with this momentum variance
        let sigma = 1.0 / libm::sqrt(2.0 * r.momentum_variance);
        let ratio = g / sigma;
        if ratio > WEAK_RATIO {
            return Err(Error::NotWeak { g: *g, ratio });
        }
    }
    let re: Vec<(f64, f64)> = readouts.iter().map(|(g, r)| (*g, r.real_channel(*g))).collect();
    let im: Vec<(f64, f64)> = readouts.iter().map(|(g, r)| (*g, r.imag_channel(*g))).collect();
    Ok(Complex64::new(intercept_in_g_squared(&re)?, intercept_in_g_squared(&im)?))
}

/// Convenience: exact readouts at each `g`.
pub fn sweep(
    tsv: &TwoStateVector,
    op: &LabeledOperator,
    sigma: f64,
    gs: &[f64],
    p0: &PointerState,
) -> Result<Vec<(f64, PointerReadout)>> {
    gs.iter()
        .map(|&g| {
            let cfg = CouplingConfig::new(g, sigma)?;
            let coupled = couple_and_postselect(tsv, op, &cfg, p0)?;
            Ok((g, PointerReadout::exact(p0, &coupled)))
        })
        .collect()
}

/// `|⟨post|pre⟩|²` of the normalized physical pair, the `g = 0`
/// post-selection probability.
pub fn uncoupled_probability(tsv: &TwoStateVector) -> f64 {
    let (pre, post) = physical_pair(tsv);
    let overlap: Complex64 = post.iter().zip(&pre).map(|(b, k)| b * k).sum();
    overlap.norm_sqr()
}
