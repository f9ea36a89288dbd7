//! Per-trial simulation machinery shared by the estimators.
//!
//! A trial samples the BS process, tags UEs, applies the configured policy,
//! and reports the typical cell's activity plus whatever else the estimator
//! needs (SINR or the distance triple). All randomness comes from the trial's
//! own stream, drawn in a fixed order.

use super::geometry::{sample_in_voronoi_cell, Point, PointGrid};
use super::{LambdaUMode, SimulationConfig, TypicalCellMode, VictimMode};
use crate::model::{ln_bound_coeff, DistanceTriple, NetworkParams, SchedulingPolicy, TinParams};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

pub(crate) struct World {
    pub side: f64,
    pub bs: Vec<Point>,
    pub grid: PointGrid,
    pub typical: u32,
}

impl World {
    fn center(&self) -> Point {
        Point { x: 0.5 * self.side, y: 0.5 * self.side }
    }
}

/// Sample BS positions and pick the typical cell. Degenerate draws (fewer
/// than two BSs, or no interior BS in random mode) are resampled from the
/// same stream; with the configured expected-count floor this is a
/// vanishing-probability path.
pub(crate) fn build_world<R: Rng>(
    cfg: &SimulationConfig,
    net: &NetworkParams,
    rng: &mut R,
) -> World {
    let side = cfg.window_side;
    let pois = Poisson::new(net.lambda_b * side * side).expect("positive Poisson mean");
    for _ in 0..1024 {
        let n = pois.sample(rng) as usize;
        if n < 2 {
            continue;
        }
        let mut bs = Vec::with_capacity(n);
        for _ in 0..n {
            bs.push(Point { x: rng.gen::<f64>() * side, y: rng.gen::<f64>() * side });
        }
        let typical = match cfg.typical_cell {
            TypicalCellMode::Crofton => {
                let grid = PointGrid::build(&bs, side);
                let t = grid.nearest(&bs, Point { x: 0.5 * side, y: 0.5 * side }, None).0;
                return World { side, bs, grid, typical: t };
            }
            TypicalCellMode::Random => {
                let g = cfg.guard_fraction * side;
                let (lo, hi) = (g, side - g);
                let interior = |p: &Point| p.x >= lo && p.x <= hi && p.y >= lo && p.y <= hi;
                let count = bs.iter().filter(|p| interior(p)).count();
                if count == 0 {
                    continue;
                }
                let k = rng.gen_range(0..count);
                let mut seen = 0usize;
                let mut pick = 0u32;
                for (i, p) in bs.iter().enumerate() {
                    if interior(p) {
                        if seen == k {
                            pick = i as u32;
                            break;
                        }
                        seen += 1;
                    }
                }
                pick
            }
        };
        let grid = PointGrid::build(&bs, side);
        return World { side, bs, grid, typical };
    }
    panic!("failed to sample a usable network realization after 1024 attempts");
}

/// Tagged UE of the typical cell alone (enough for the classical policy and
/// the distributed check of the typical cell).
fn typical_ue<R: Rng>(world: &World, cfg: &SimulationConfig, rng: &mut R) -> Point {
    match cfg.typical_cell {
        TypicalCellMode::Crofton => world.center(),
        TypicalCellMode::Random => {
            sample_in_voronoi_cell(&world.bs, &world.grid, world.typical, world.side, rng)
        }
    }
}

/// Tagged UE for every cell. In the infinite-user regime each cell gets a
/// uniform point of its Voronoi cell; with a finite user density, users form
/// their own Poisson process, each cell picks uniformly among its own users
/// (reservoir over the assignment pass), and empty cells stay idle.
pub(crate) fn sample_tagged_ues<R: Rng>(
    world: &World,
    cfg: &SimulationConfig,
    rng: &mut R,
) -> Vec<Option<Point>> {
    let n = world.bs.len();
    let mut out: Vec<Option<Point>> = match cfg.lambda_u {
        LambdaUMode::Infinite => (0..n as u32)
            .map(|i| {
                if cfg.typical_cell == TypicalCellMode::Crofton && i == world.typical {
                    Some(world.center())
                } else {
                    Some(sample_in_voronoi_cell(&world.bs, &world.grid, i, world.side, rng))
                }
            })
            .collect(),
        LambdaUMode::Finite(lambda_u) => {
            let pois = Poisson::new(lambda_u * world.side * world.side).expect("positive mean");
            let m = pois.sample(rng) as usize;
            let mut chosen: Vec<Option<Point>> = vec![None; n];
            let mut counts = vec![0u32; n];
            for _ in 0..m {
                let p = Point { x: rng.gen::<f64>() * world.side, y: rng.gen::<f64>() * world.side };
                let owner = world.grid.nearest(&world.bs, p, None).0 as usize;
                counts[owner] += 1;
                if counts[owner] == 1 || rng.gen::<f64>() < 1.0 / counts[owner] as f64 {
                    chosen[owner] = Some(p);
                }
            }
            chosen
        }
    };
    if cfg.typical_cell == TypicalCellMode::Crofton {
        out[world.typical as usize] = Some(world.center());
    }
    out
}

/// Serving and strongest-interferer distances of one cell.
fn link_distances(world: &World, cell: u32, ue: Point) -> (f64, f64) {
    let x11 = world.bs[cell as usize].dist(ue).max(f64::MIN_POSITIVE);
    let x21 = world.grid.nearest(&world.bs, ue, Some(cell)).1.sqrt();
    (x11, x21)
}

/// Victim distance: nearest tagged UE of another cell to this BS, by direct
/// scan. Infinite when no other cell has a user.
fn victim_distance_scan(world: &World, ues: &[Option<Point>], cell: u32) -> f64 {
    let p = world.bs[cell as usize];
    let mut best = f64::INFINITY;
    for (j, ue) in ues.iter().enumerate() {
        if j as u32 == cell {
            continue;
        }
        if let Some(u) = ue {
            best = best.min(u.dist2(p));
        }
    }
    best.sqrt()
}

struct UeIndex {
    pts: Vec<Point>,
    grid: PointGrid,
    /// Index into `pts` of each cell's own UE, if present.
    of_cell: Vec<Option<u32>>,
}

fn index_ues(world: &World, ues: &[Option<Point>], keep: Option<&[bool]>) -> UeIndex {
    let mut pts = Vec::with_capacity(ues.len());
    let mut of_cell = vec![None; ues.len()];
    for (c, ue) in ues.iter().enumerate() {
        if keep.is_some_and(|k| !k[c]) {
            continue;
        }
        if let Some(u) = ue {
            of_cell[c] = Some(pts.len() as u32);
            pts.push(*u);
        }
    }
    let grid = PointGrid::build(&pts, world.side);
    UeIndex { pts, grid, of_cell }
}

fn victim_distance_indexed(idx: &UeIndex, bs: Point, own: Option<u32>) -> f64 {
    idx.grid.nearest(&idx.pts, bs, own).1.sqrt()
}

/// Activation mask for every cell under `policy`, all checks evaluated
/// against the selection-step configuration. With `VictimMode::ActiveOnly`
/// the full check runs a second round against the survivors' UEs.
pub(crate) fn full_mask(
    world: &World,
    ues: &[Option<Point>],
    policy: SchedulingPolicy,
    victim_mode: VictimMode,
    net: &NetworkParams,
    tin: &TinParams,
) -> Vec<bool> {
    let n = world.bs.len();
    match policy {
        SchedulingPolicy::Classical => ues.iter().map(|u| u.is_some()).collect(),
        SchedulingPolicy::TinSimplified => {
            let ln_coeff = ln_bound_coeff(net, tin);
            (0..n as u32)
                .map(|i| {
                    let Some(ue) = ues[i as usize] else { return false };
                    let (x11, x21) = link_distances(world, i, ue);
                    x11.ln() <= ln_coeff + 2.0 * x21.ln() / tin.mu
                })
                .collect()
        }
        SchedulingPolicy::TinExact => {
            let ln_coeff = ln_bound_coeff(net, tin);
            let links: Vec<Option<(f64, f64)>> = (0..n as u32)
                .map(|i| ues[i as usize].map(|ue| link_distances(world, i, ue)))
                .collect();
            let idx = index_ues(world, ues, None);
            let decide = |i: usize, idx: &UeIndex| -> bool {
                let Some((x11, x21)) = links[i] else { return false };
                let x12 = victim_distance_indexed(idx, world.bs[i], idx.of_cell[i]);
                x11.ln() <= ln_coeff + (x12.ln() + x21.ln()) / tin.mu
            };
            let mask: Vec<bool> = (0..n).map(|i| decide(i, &idx)).collect();
            match victim_mode {
                VictimMode::AllCells => mask,
                VictimMode::ActiveOnly => {
                    let idx2 = index_ues(world, ues, Some(&mask));
                    (0..n).map(|i| decide(i, &idx2)).collect()
                }
            }
        }
    }
}

/// SINR at the typical UE. Fading is drawn fresh for every BS; interference
/// sums over the BSs left active by `mask` (all of them when `None`).
fn sinr_at_typical<R: Rng>(
    world: &World,
    ue_t: Point,
    mask: Option<&[bool]>,
    net: &NetworkParams,
    rng: &mut R,
) -> f64 {
    let t = world.typical as usize;
    let alpha = net.alpha;
    let inv_beta = (-net.ln_beta()).exp();
    let mut interference = 0.0;
    let mut h_t = 0.0;
    for (j, bsj) in world.bs.iter().enumerate() {
        let h: f64 = Exp1.sample(rng);
        if j == t {
            h_t = h;
            continue;
        }
        if mask.is_none_or(|m| m[j]) {
            interference += h * inv_pow_half_alpha(bsj.dist2(ue_t), alpha);
        }
    }
    let x11_2 = world.bs[t].dist2(ue_t).max(f64::MIN_POSITIVE);
    h_t * inv_pow_half_alpha(x11_2, alpha) / (interference + inv_beta)
}

/// d^{-α} from the squared distance.
fn inv_pow_half_alpha(d2: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (d2 * d2)
    } else {
        (-0.5 * alpha * d2.ln()).exp()
    }
}

/// Everything one trial can report.
pub(crate) struct TrialPieces {
    pub active: bool,
    /// SINR at the typical UE; NaN unless computed for an active trial.
    pub sinr: f64,
    pub triple: Option<DistanceTriple>,
}

impl TrialPieces {
    /// Typical-cell activity only (no fading draws).
    pub fn activity<R: Rng>(
        cfg: &SimulationConfig,
        net: &NetworkParams,
        tin: &TinParams,
        rng: &mut R,
    ) -> Self {
        let world = build_world(cfg, net, rng);
        let active = match (cfg.policy, cfg.lambda_u) {
            (SchedulingPolicy::Classical, LambdaUMode::Infinite) => true,
            (SchedulingPolicy::TinSimplified, LambdaUMode::Infinite) => {
                // The distributed check of the typical cell involves only its
                // own distances.
                let ue = typical_ue(&world, cfg, rng);
                let (x11, x21) = link_distances(&world, world.typical, ue);
                x11.ln() <= ln_bound_coeff(net, tin) + 2.0 * x21.ln() / tin.mu
            }
            _ => {
                let ues = sample_tagged_ues(&world, cfg, rng);
                let mask = full_mask(&world, &ues, cfg.policy, cfg.victim_mode, net, tin);
                mask[world.typical as usize]
            }
        };
        Self { active, sinr: f64::NAN, triple: None }
    }

    /// Activity plus the SINR at the typical UE when active.
    pub fn with_sinr<R: Rng>(
        cfg: &SimulationConfig,
        net: &NetworkParams,
        tin: &TinParams,
        rng: &mut R,
    ) -> Self {
        let world = build_world(cfg, net, rng);
        match (cfg.policy, cfg.lambda_u) {
            (SchedulingPolicy::Classical, LambdaUMode::Infinite) => {
                let ue_t = typical_ue(&world, cfg, rng);
                let sinr = sinr_at_typical(&world, ue_t, None, net, rng);
                Self { active: true, sinr, triple: None }
            }
            _ => {
                let ues = sample_tagged_ues(&world, cfg, rng);
                let mask = full_mask(&world, &ues, cfg.policy, cfg.victim_mode, net, tin);
                let active = mask[world.typical as usize];
                let sinr = if active {
                    let ue_t = ues[world.typical as usize].expect("active cell has a UE");
                    sinr_at_typical(&world, ue_t, Some(&mask), net, rng)
                } else {
                    f64::NAN
                };
                Self { active, sinr, triple: None }
            }
        }
    }

    /// Activity plus the typical cell's distance triple (no fading draws).
    pub fn with_triple<R: Rng>(
        cfg: &SimulationConfig,
        net: &NetworkParams,
        tin: &TinParams,
        rng: &mut R,
    ) -> Self {
        let world = build_world(cfg, net, rng);
        let ues = sample_tagged_ues(&world, cfg, rng);
        let t = world.typical;
        let Some(ue_t) = ues[t as usize] else {
            return Self { active: false, sinr: f64::NAN, triple: None };
        };
        let (x11, x21) = link_distances(&world, t, ue_t);
        let x12 = victim_distance_scan(&world, &ues, t);
        let ln_coeff = ln_bound_coeff(net, tin);
        let active = match cfg.policy {
            SchedulingPolicy::Classical => true,
            SchedulingPolicy::TinSimplified => x11.ln() <= ln_coeff + 2.0 * x21.ln() / tin.mu,
            SchedulingPolicy::TinExact => match cfg.victim_mode {
                VictimMode::AllCells => {
                    x11.ln() <= ln_coeff + (x12.ln() + x21.ln()) / tin.mu
                }
                VictimMode::ActiveOnly => {
                    let mask = full_mask(&world, &ues, cfg.policy, cfg.victim_mode, net, tin);
                    mask[t as usize]
                }
            },
        };
        let triple = DistanceTriple::new(x11, x12, x21).ok();
        Self { active, sinr: f64::NAN, triple }
    }
}
