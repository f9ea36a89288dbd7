//! Exact Monte Carlo engine: Poisson network sampling, Voronoi user tagging,
//! the scheduling policies, distance-triple extraction, and estimators for
//! activation probability, coverage, and rate.
//!
//! # Determinism
//!
//! Every trial derives its own ChaCha stream from `(master_seed, trial_index)`
//! and per-trial outputs are reduced in trial order, so estimates are
//! bit-identical for a fixed seed regardless of how many worker threads run
//! the trials.

mod engine;
mod geometry;

pub use geometry::Point;

use crate::model::{DistanceTriple, NetworkParams, SchedulingPolicy, TinParams};
use engine::TrialPieces;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

const Z95: f64 = 1.959_963_984_540_054;
const Z99: f64 = 2.575_829_303_548_900_4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("policy {policy} not usable here: {reason}")]
    PolicyMismatch { policy: SchedulingPolicy, reason: String },
}

/// How the typical cell is picked in each realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypicalCellMode {
    /// Uniformly random interior cell, its UE drawn uniformly in the cell:
    /// the approximation-free view used for gain measurements.
    Random,
    /// The cell containing the window center, with the tagged UE pinned at
    /// the center itself. This realizes the distance laws assumed by the
    /// analytical formulas and is the mode for validating them.
    Crofton,
}

/// Which tagged UEs count as interference victims in the full TIN check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VictimMode {
    /// Victims are the tagged UEs of all other cells, i.e. the check runs
    /// against the configuration produced by the selection step (default).
    AllCells,
    /// Sensitivity alternative: victim distances are re-measured against the
    /// UEs of cells that passed a first all-cells round, and the check is
    /// re-evaluated once against that reduced set.
    ActiveOnly,
}

/// User-density regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaUMode {
    /// Every cell always has users; the tagged UE is uniform in the cell.
    Infinite,
    /// Users form their own Poisson process with this density; a cell with no
    /// user stays idle for the slot.
    Finite(f64),
}

/// Monte Carlo run description.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub window_side: f64,
    /// Fraction of the window side kept as guard on each edge when choosing
    /// the typical cell; interference still uses the full window.
    pub guard_fraction: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub policy: SchedulingPolicy,
    /// Lower bound on the expected BS count in the window, enforced against
    /// the network density so estimates are not edge-dominated.
    pub min_expected_bs: f64,
    pub typical_cell: TypicalCellMode,
    pub victim_mode: VictimMode,
    pub lambda_u: LambdaUMode,
}

impl SimulationConfig {
    pub fn new(
        net: &NetworkParams,
        window_side: f64,
        trials: u64,
        master_seed: u64,
        policy: SchedulingPolicy,
    ) -> Result<Self, SimError> {
        let cfg = Self {
            window_side,
            guard_fraction: 0.25,
            trials,
            master_seed,
            policy,
            min_expected_bs: 500.0,
            typical_cell: TypicalCellMode::Random,
            victim_mode: VictimMode::AllCells,
            lambda_u: LambdaUMode::Infinite,
        };
        cfg.validate(net)?;
        Ok(cfg)
    }

    /// Smallest window side meeting the expected-BS floor at this density.
    pub fn recommended_window(net: &NetworkParams, min_expected_bs: f64) -> f64 {
        (min_expected_bs / net.lambda_b).sqrt()
    }

    pub fn with_typical_cell(mut self, mode: TypicalCellMode) -> Self {
        self.typical_cell = mode;
        self
    }

    pub fn with_victim_mode(mut self, mode: VictimMode) -> Self {
        self.victim_mode = mode;
        self
    }

    pub fn with_lambda_u(mut self, mode: LambdaUMode) -> Self {
        self.lambda_u = mode;
        self
    }

    pub fn with_guard_fraction(mut self, guard: f64) -> Self {
        self.guard_fraction = guard;
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_policy(mut self, policy: SchedulingPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn validate(&self, net: &NetworkParams) -> Result<(), SimError> {
        if !(self.window_side > 0.0) || !self.window_side.is_finite() {
            return Err(SimError::InvalidConfig(format!(
                "window_side must be > 0, got {}",
                self.window_side
            )));
        }
        if !(0.0..0.5).contains(&self.guard_fraction) {
            return Err(SimError::InvalidConfig(format!(
                "guard_fraction must be in [0, 0.5), got {}",
                self.guard_fraction
            )));
        }
        if self.trials < 1 {
            return Err(SimError::InvalidConfig("trials must be >= 1".into()));
        }
        let expected = net.lambda_b * self.window_side * self.window_side;
        if expected < self.min_expected_bs {
            return Err(SimError::InvalidConfig(format!(
                "expected BS count {expected:.1} below floor {}; widen the window",
                self.min_expected_bs
            )));
        }
        if let LambdaUMode::Finite(lu) = self.lambda_u {
            if !(lu > 0.0) || !lu.is_finite() {
                return Err(SimError::InvalidConfig(format!(
                    "finite lambda_u must be > 0, got {lu}"
                )));
            }
        }
        Ok(())
    }
}

/// Monte Carlo estimate with a normal-approximation confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub mean: f64,
    pub ci95_halfwidth: f64,
    pub trials_used: u64,
}

impl MetricEstimate {
    pub(crate) fn from_bernoulli(successes: u64, trials: u64) -> Self {
        let n = trials as f64;
        let p = successes as f64 / n;
        let se = (p * (1.0 - p) / n).sqrt();
        Self { mean: p, ci95_halfwidth: Z95 * se, trials_used: trials }
    }

    pub(crate) fn from_samples(trials: u64, sum: f64, sumsq: f64) -> Self {
        let n = trials as f64;
        let mean = sum / n;
        let var = if trials > 1 { ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0) } else { 0.0 };
        let se = (var / n).sqrt();
        Self { mean, ci95_halfwidth: Z95 * se, trials_used: trials }
    }

    /// Half-width at the 99% level (same standard error, wider quantile).
    pub fn ci99_halfwidth(&self) -> f64 {
        self.ci95_halfwidth * (Z99 / Z95)
    }
}

/// Coverage estimates: over all trials (effective) and over active trials
/// only (conditional; absent when no trial was active).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    pub effective: MetricEstimate,
    pub conditional: Option<MetricEstimate>,
}

/// Rate estimates in nats/sec/Hz, same effective/conditional split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub effective: MetricEstimate,
    pub conditional: Option<MetricEstimate>,
}

/// One sampled network: BS positions, tagged UE per cell, and the typical cell.
#[derive(Debug, Clone)]
pub struct NetworkRealization {
    pub window_side: f64,
    pub bs: Vec<Point>,
    /// Tagged UE per cell; `None` when a finite user density left the cell idle.
    pub tagged_ue: Vec<Option<Point>>,
    pub typical: usize,
}

fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

fn run_trials<T, F>(cfg: &SimulationConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.master_seed, i);
            f(i, &mut rng)
        })
        .collect()
}

/// Sample one network realization for the given trial index: Poisson BS
/// count, uniform positions, one tagged UE per cell, typical cell per config.
pub fn sample_network(
    cfg: &SimulationConfig,
    net: &NetworkParams,
    trial_index: u64,
) -> NetworkRealization {
    let mut rng = trial_rng(cfg.master_seed, trial_index);
    let world = engine::build_world(cfg, net, &mut rng);
    let ues = engine::sample_tagged_ues(&world, cfg, &mut rng);
    NetworkRealization {
        window_side: cfg.window_side,
        typical: world.typical as usize,
        bs: world.bs,
        tagged_ue: ues,
    }
}

/// Distance triple of the typical cell; `None` if the typical cell is idle.
pub fn extract_distances(real: &NetworkRealization) -> Option<DistanceTriple> {
    extract_for_cell(real, real.typical)
}

/// Distance triples for every non-idle cell, keyed by cell index.
pub fn extract_all_distances(real: &NetworkRealization) -> Vec<(usize, DistanceTriple)> {
    (0..real.bs.len()).filter_map(|i| extract_for_cell(real, i).map(|d| (i, d))).collect()
}

fn extract_for_cell(real: &NetworkRealization, cell: usize) -> Option<DistanceTriple> {
    let ue = real.tagged_ue[cell]?;
    let grid = geometry::PointGrid::build(&real.bs, real.window_side);
    let x11 = real.bs[cell].dist(ue);
    let (_, x21_2) = grid.nearest(&real.bs, ue, Some(cell as u32));
    let x12 = nearest_other_ue(real, cell);
    DistanceTriple::new(x11.max(f64::MIN_POSITIVE), x12, x21_2.sqrt()).ok()
}

fn nearest_other_ue(real: &NetworkRealization, cell: usize) -> f64 {
    let p = real.bs[cell];
    let mut best = f64::INFINITY;
    for (j, ue) in real.tagged_ue.iter().enumerate() {
        if j == cell {
            continue;
        }
        if let Some(u) = ue {
            best = best.min(u.dist2(p));
        }
    }
    best.sqrt()
}

/// Evaluate the activation mask for a realization under `policy`, checking
/// every cell simultaneously against the selection-step configuration.
pub fn apply_scheduling(
    real: &NetworkRealization,
    policy: SchedulingPolicy,
    net: &NetworkParams,
    tin: &TinParams,
) -> Vec<bool> {
    let grid = geometry::PointGrid::build(&real.bs, real.window_side);
    (0..real.bs.len())
        .map(|i| {
            let Some(ue) = real.tagged_ue[i] else { return false };
            match policy {
                SchedulingPolicy::Classical => true,
                SchedulingPolicy::TinSimplified => {
                    let x11 = real.bs[i].dist(ue).max(f64::MIN_POSITIVE);
                    let x21 = grid.nearest(&real.bs, ue, Some(i as u32)).1.sqrt();
                    crate::model::tin_simplified_predicate(x11, x21, net, tin)
                }
                SchedulingPolicy::TinExact => {
                    let x11 = real.bs[i].dist(ue).max(f64::MIN_POSITIVE);
                    let x21 = grid.nearest(&real.bs, ue, Some(i as u32)).1.sqrt();
                    let x12 = nearest_other_ue(real, i);
                    let d = DistanceTriple { x11, x12, x21 };
                    crate::model::tin_exact_predicate(&d, net, tin)
                }
            }
        })
        .collect()
}

/// Probability that the typical cell stays active under the configured TIN
/// policy.
pub fn estimate_prob_tin(
    cfg: &SimulationConfig,
    net: &NetworkParams,
    tin: &TinParams,
) -> Result<MetricEstimate, SimError> {
    cfg.validate(net)?;
    if cfg.policy == SchedulingPolicy::Classical {
        return Err(SimError::PolicyMismatch {
            policy: cfg.policy,
            reason: "activation probability is defined for the TIN policies".into(),
        });
    }
    let results = run_trials(cfg, |_, rng| {
        let pieces = TrialPieces::activity(cfg, net, tin, rng);
        pieces.active
    });
    let successes = results.iter().filter(|&&a| a).count() as u64;
    Ok(MetricEstimate::from_bernoulli(successes, cfg.trials))
}

/// Effective and conditional SINR coverage at threshold `theta`.
pub fn estimate_coverage(
    cfg: &SimulationConfig,
    net: &NetworkParams,
    tin: &TinParams,
    theta: f64,
) -> Result<CoverageEstimate, SimError> {
    Ok(estimate_coverage_multi(cfg, net, tin, &[theta])?.pop().expect("one theta"))
}

/// Coverage at several thresholds from one set of realizations; the SINR is
/// simulated once per trial and compared against each threshold.
pub fn estimate_coverage_multi(
    cfg: &SimulationConfig,
    net: &NetworkParams,
    tin: &TinParams,
    thetas: &[f64],
) -> Result<Vec<CoverageEstimate>, SimError> {
    cfg.validate(net)?;
    for &t in thetas {
        if !(t > 0.0) || !t.is_finite() {
            return Err(SimError::InvalidConfig(format!("theta must be > 0, got {t}")));
        }
    }
    let results = run_trials(cfg, |_, rng| {
        let pieces = TrialPieces::with_sinr(cfg, net, tin, rng);
        (pieces.active, pieces.sinr)
    });
    let active_count = results.iter().filter(|r| r.0).count() as u64;
    let mut out = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let covered =
            results.iter().filter(|&&(active, sinr)| active && sinr >= theta).count() as u64;
        let effective = MetricEstimate::from_bernoulli(covered, cfg.trials);
        let conditional = if active_count > 0 {
            Some(MetricEstimate::from_bernoulli(covered, active_count))
        } else {
            None
        };
        out.push(CoverageEstimate { effective, conditional });
    }
    Ok(out)
}

/// Effective and conditional average rate ln(1 + SINR) in nats/sec/Hz.
pub fn estimate_rate(
    cfg: &SimulationConfig,
    net: &NetworkParams,
    tin: &TinParams,
) -> Result<RateEstimate, SimError> {
    cfg.validate(net)?;
    let results = run_trials(cfg, |_, rng| {
        let pieces = TrialPieces::with_sinr(cfg, net, tin, rng);
        if pieces.active {
            Some(pieces.sinr.ln_1p())
        } else {
            None
        }
    });
    let (mut sum, mut sumsq, mut active) = (0.0f64, 0.0f64, 0u64);
    for r in results.iter().flatten() {
        sum += r;
        sumsq += r * r;
        active += 1;
    }
    let effective = MetricEstimate::from_samples(cfg.trials, sum, sumsq);
    let conditional =
        if active > 0 { Some(MetricEstimate::from_samples(active, sum, sumsq)) } else { None };
    Ok(RateEstimate { effective, conditional })
}

/// Typical-cell distance triples with activity flags, one per trial, for
/// external histogramming. Trials whose typical cell is idle are skipped.
pub fn sample_distance_triples(
    cfg: &SimulationConfig,
    net: &NetworkParams,
    tin: &TinParams,
    n: u64,
) -> Result<Vec<(DistanceTriple, bool)>, SimError> {
    let cfg = cfg.clone().with_trials(n);
    cfg.validate(net)?;
    let results = run_trials(&cfg, |_, rng| {
        let pieces = TrialPieces::with_triple(&cfg, net, tin, rng);
        pieces.triple.map(|t| (t, pieces.active))
    });
    Ok(results.into_iter().flatten().collect())
}
