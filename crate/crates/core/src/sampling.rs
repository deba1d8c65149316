//! Monte Carlo click sampling from the exact post-selected pointer.
//!
//! Each trial is post-selected with the exact probability; accepted trials
//! draw a pointer position from the conditional distribution by inverse CDF
//! over the grid cells, with a uniform offset inside the chosen cell.
//!
//! Random numbers come from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64(seed)`. Trials are split into fixed blocks of
//! [`BLOCK_TRIALS`]; block `b` uses ChaCha stream `b`. Uniform variates are
//! `(next_u64 >> 11) · 2⁻⁵³`. The sample stream for a given seed is therefore
//! independent of how blocks are distributed over workers, and merging the
//! per-block [`Moments`] in block order is bit-reproducible.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::operator::LabeledOperator;
use crate::pointer::{couple_and_postselect, CouplingConfig, PointerReadout, PointerState};
use crate::tsvf::TwoStateVector;

pub const BLOCK_TRIALS: u64 = 1 << 16;
/// Post-selection probabilities below this are refused.
pub const STARVATION_PROB: f64 = 1e-12;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Piecewise-uniform distribution over the pointer grid cells.
#[derive(Clone, Debug)]
pub struct ConditionalDistribution {
    x0: f64,
    dx: f64,
    cdf: Vec<f64>,
}

impl ConditionalDistribution {
    pub fn from_pointer(p: &PointerState) -> Self {
        let probs = p.probabilities();
        let total: f64 = probs.iter().sum();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = probs
            .iter()
            .map(|q| {
                acc += q / total;
                acc
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        ConditionalDistribution { x0: p.grid_min(), dx: p.dx(), cdf }
    }

    /// Cell centred on grid point `i`: `[x_i − dx/2, x_i + dx/2)`.
    fn cell_lo(&self, i: usize) -> f64 {
        self.x0 + (i as f64 - 0.5) * self.dx
    }

    /// Position for uniform variates `u` (cell choice) and `v` (offset).
    pub fn quantile(&self, u: f64, v: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1);
        self.cell_lo(i) + v * self.dx
    }

    /// Exact CDF of the sampled distribution.
    pub fn cdf(&self, x: f64) -> f64 {
        let t = (x - self.cell_lo(0)) / self.dx;
        if t <= 0.0 {
            return 0.0;
        }
        let i = libm::floor(t) as usize;
        if i >= self.cdf.len() {
            return 1.0;
        }
        let below = if i == 0 { 0.0 } else { self.cdf[i - 1] };
        below + (self.cdf[i] - below) * (t - i as f64)
    }

    /// Mean of the sampled distribution (the grid-point mean).
    pub fn mean(&self) -> f64 {
        let mut prev = 0.0;
        self.cdf
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let p = c - prev;
                prev = c;
                p * (self.x0 + i as f64 * self.dx)
            })
            .sum()
    }
}

/// Running sums; merging is associative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub trials: u64,
    pub accepted: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn merge(self, other: Moments) -> Moments {
        Moments {
            trials: self.trials + other.trials,
            accepted: self.accepted + other.accepted,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.accepted as f64
    }

    /// Standard error of the mean from the unbiased sample variance.
    pub fn stderr(&self) -> f64 {
        let n = self.accepted as f64;
        if self.accepted < 2 {
            return f64::INFINITY;
        }
        let var = (self.sum_sq - n * self.mean() * self.mean()) / (n - 1.0);
        libm::sqrt(var.max(0.0) / n)
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.trials as f64
    }
}

/// Number of blocks for `n` trials.
pub fn block_count(n: u64) -> u64 {
    n.div_ceil(BLOCK_TRIALS)
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Run block `block` of an `n`-trial experiment. Positions are reported
/// relative to `origin`.
pub fn run_block(
    dist: &ConditionalDistribution,
    postselect_prob: f64,
    origin: f64,
    seed: u64,
    n: u64,
    block: u64,
) -> Moments {
    let start = block * BLOCK_TRIALS;
    let trials = BLOCK_TRIALS.min(n.saturating_sub(start));
    let mut rng = block_rng(seed, block);
    let mut m = Moments { trials, ..Moments::default() };
    for _ in 0..trials {
        if uniform(&mut rng) >= postselect_prob {
            continue;
        }
        let u = uniform(&mut rng);
        let v = uniform(&mut rng);
        let x = dist.quantile(u, v) - origin;
        m.accepted += 1;
        m.sum += x;
        m.sum_sq += x * x;
    }
    m
}

/// Draw `n` post-selected positions (no rejection step), for distribution
/// checks.
pub fn sample_positions(dist: &ConditionalDistribution, seed: u64, n: usize) -> Vec<f64> {
    let mut rng = block_rng(seed, u64::MAX);
    (0..n)
        .map(|_| {
            let u = uniform(&mut rng);
            let v = uniform(&mut rng);
            dist.quantile(u, v)
        })
        .collect()
}

/// Everything needed to run the Monte Carlo blocks, possibly in parallel.
#[derive(Clone, Debug)]
pub struct SamplingPlan {
    pub dist: ConditionalDistribution,
    pub postselect_prob: f64,
    pub origin: f64,
    pub seed: u64,
    pub n: u64,
    /// Exact readout the samples estimate.
    pub exact: PointerReadout,
}

impl SamplingPlan {
    pub fn new(
        tsv: &TwoStateVector,
        op: &LabeledOperator,
        cfg: &CouplingConfig,
        p0: &PointerState,
        n: u64,
        seed: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSamples);
        }
        let coupled = couple_and_postselect(tsv, op, cfg, p0)?;
        if coupled.postselect_prob < STARVATION_PROB {
            return Err(Error::Starvation { probability: coupled.postselect_prob });
        }
        Ok(SamplingPlan {
            dist: ConditionalDistribution::from_pointer(&coupled.pointer),
            postselect_prob: coupled.postselect_prob,
            origin: p0.mean_position(),
            seed,
            n,
            exact: PointerReadout::exact(p0, &coupled),
        })
    }

    pub fn blocks(&self) -> u64 {
        block_count(self.n)
    }

    pub fn run_block(&self, block: u64) -> Moments {
        run_block(&self.dist, self.postselect_prob, self.origin, self.seed, self.n, block)
    }

    /// Merge block results (in block order) into a readout.
    pub fn finish(&self, moments: Moments) -> Result<MonteCarloReadout> {
        if moments.accepted == 0 {
            return Err(Error::Starvation { probability: self.postselect_prob });
        }
        Ok(MonteCarloReadout {
            readout: PointerReadout {
                mean_position: moments.mean(),
                mean_momentum: self.exact.mean_momentum,
                postselect_prob: moments.acceptance_rate(),
                n_samples: Some(moments.accepted),
                stderr: Some(moments.stderr()),
                momentum_variance: self.exact.momentum_variance,
            },
            exact: self.exact,
            moments,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloReadout {
    /// Empirical readout: sampled mean displacement, its standard error, the
    /// observed post-selection rate and the accepted sample count. The
    /// momentum field is copied from the exact readout.
    pub readout: PointerReadout,
    pub exact: PointerReadout,
    pub moments: Moments,
}

/// Sequential Monte Carlo estimate over `n` trials.
pub fn sample_clicks(
    tsv: &TwoStateVector,
    op: &LabeledOperator,
    cfg: &CouplingConfig,
    p0: &PointerState,
    n: u64,
    seed: u64,
) -> Result<MonteCarloReadout> {
    let plan = SamplingPlan::new(tsv, op, cfg, p0, n, seed)?;
    let total = (0..plan.blocks()).map(|b| plan.run_block(b)).fold(Moments::default(), Moments::merge);
    plan.finish(total)
}
