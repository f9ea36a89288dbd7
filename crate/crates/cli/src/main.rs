//! Experiment runner for TIN-based cellular scheduling studies: analytic
//! evaluations, high-SNR asymptotics, and Monte Carlo sweeps, emitted as
//! plot-ready tables with reproducibility manifests.

mod config;
mod output;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand};
use config::{fmt, Origin, Resolved};
use output::{Format, Table};
use std::path::PathBuf;
use tincell_core::model::SchedulingPolicy;
use tincell_core::{analytics, asymptotics, sim};

#[derive(Parser)]
#[command(
    name = "tincell",
    version,
    about = "TIN-based cellular scheduling: simulation, analysis, optimization",
    long_about = "Evaluates a two-step TIN scheduling network over Poisson cell layouts.\n\
                  Engines: `analytic` (numerical integration of the coverage/rate\n\
                  formulas), `asymptotic` (high-SNR alpha=4 forms), `simulation`\n\
                  (exact Monte Carlo). Output is a delimited table with a `#`\n\
                  manifest block (resolved config, seed, sha256 of the data)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Flat `key = value` config file (keys: lambda_b, p_dbm, n_dbm, alpha,
    /// m_factor, mu, theta_db, window_side, guard_fraction, trials, seed,
    /// typical_cell, lambda_u_mode).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for the per-trial random streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials per simulated point.
    #[arg(long)]
    trials: Option<u64>,
    /// Comma-separated scheduling policies: classical | tin-exact | tin-simplified.
    #[arg(long)]
    policy: Option<String>,
    /// Comma-separated engines: analytic | asymptotic | simulation.
    #[arg(long)]
    engines: Option<String>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Report rates in bits/sec/Hz instead of nats/sec/Hz.
    #[arg(long)]
    bits: bool,
    /// Sweep `axis=v1,v2,...` or `axis=start:stop:step`;
    /// axes: theta_db | lambda_b | mu | m_factor | alpha.
    #[arg(long)]
    sweep: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Probability that the typical cell stays active (default sweep: mu).
    Ptin(Common),
    /// Effective and conditional SINR coverage (default sweep: theta_db).
    Coverage(Common),
    /// Effective and conditional average rate (single point unless swept).
    Rate(Common),
    /// Coverage-optimal mu from the high-SNR condition (default sweep: theta_db).
    OptimizeMu {
        #[command(flatten)]
        common: Common,
        /// Cross-check against the argmax of the exact effective coverage on
        /// a mu grid.
        #[arg(long)]
        exact_grid: bool,
        /// Grid step for --exact-grid.
        #[arg(long, default_value_t = 0.001)]
        grid_step: f64,
    },
    /// Dump typical-cell distance triples with activity flags.
    Distances(Common),
    /// Gain report of the TIN policies over classical scheduling.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Metric to compare: coverage | rate | both.
        #[arg(long, default_value = "coverage")]
        metric: String,
        /// Pin mu instead of optimizing (coverage) / using 1.9 (rate).
        #[arg(long)]
        mu: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Engine {
    Analytic,
    Asymptotic,
    Simulation,
}

impl Engine {
    fn as_str(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Asymptotic => "asymptotic",
            Engine::Simulation => "simulation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    ThetaDb,
    LambdaB,
    Mu,
    MFactor,
    Alpha,
}

impl Axis {
    fn as_str(self) -> &'static str {
        match self {
            Axis::ThetaDb => "theta_db",
            Axis::LambdaB => "lambda_b",
            Axis::Mu => "mu",
            Axis::MFactor => "m_factor",
            Axis::Alpha => "alpha",
        }
    }
}

struct Sweep {
    axis: Axis,
    values: Vec<f64>,
}

impl Sweep {
    fn parse(spec: &str) -> Result<Self> {
        let (axis, values) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("sweep must be axis=values, got {spec:?}"))?;
        let axis = match axis.trim() {
            "theta_db" => Axis::ThetaDb,
            "lambda_b" => Axis::LambdaB,
            "mu" => Axis::Mu,
            "m_factor" => Axis::MFactor,
            "alpha" => Axis::Alpha,
            other => bail!("unknown sweep axis {other:?}"),
        };
        let values = parse_values(values.trim())?;
        if values.is_empty() {
            bail!("sweep values must be non-empty");
        }
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sorted != values {
            bail!("sweep values must be sorted ascending");
        }
        Ok(Self { axis, values })
    }

    fn single(axis: Axis, value: f64) -> Self {
        Self { axis, values: vec![value] }
    }

    fn apply(&self, base: &Resolved, value: f64) -> Resolved {
        let mut point = base.clone();
        match self.axis {
            Axis::ThetaDb => point.theta_db = value,
            Axis::LambdaB => point.lambda_b = value,
            Axis::Mu => point.mu = value,
            Axis::MFactor => point.m_factor = value,
            Axis::Alpha => point.alpha = value,
        }
        point
    }
}

fn parse_values(spec: &str) -> Result<Vec<f64>> {
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            bail!("range sweep must be start:stop:step, got {spec:?}");
        }
        let start: f64 = parts[0].parse()?;
        let stop: f64 = parts[1].parse()?;
        let step: f64 = parts[2].parse()?;
        if !(step > 0.0) || stop < start {
            bail!("range sweep requires step > 0 and stop >= start");
        }
        let mut values = Vec::new();
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        for k in 0..=n {
            values.push(start + k as f64 * step);
        }
        Ok(values)
    } else {
        spec.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| anyhow!("bad value {v:?}: {e}")))
            .collect()
    }
}

fn parse_policies(s: Option<&str>, default: &[SchedulingPolicy]) -> Result<Vec<SchedulingPolicy>> {
    match s {
        None => Ok(default.to_vec()),
        Some(list) => list
            .split(',')
            .map(|p| p.trim().parse::<SchedulingPolicy>().map_err(|e| anyhow!("{e}")))
            .collect(),
    }
}

fn parse_engines(s: Option<&str>, default: &[Engine]) -> Result<Vec<Engine>> {
    match s {
        None => Ok(default.to_vec()),
        Some(list) => list
            .split(',')
            .map(|e| match e.trim() {
                "analytic" => Ok(Engine::Analytic),
                "asymptotic" => Ok(Engine::Asymptotic),
                "simulation" => Ok(Engine::Simulation),
                other => bail!("unknown engine {other:?}"),
            })
            .collect(),
    }
}

fn resolve(common: &Common) -> Result<Resolved> {
    let mut resolved = match &common.config {
        Some(path) => Resolved::from_file(path)?,
        None => Resolved::default(),
    };
    if let Some(seed) = common.seed {
        resolved.apply("seed", &seed.to_string(), Origin::Cli)?;
    }
    if let Some(trials) = common.trials {
        resolved.apply("trials", &trials.to_string(), Origin::Cli)?;
    }
    Ok(resolved)
}

fn base_manifest(
    common: &Common,
    resolved: &Resolved,
    sweep: &Sweep,
    policies: &[SchedulingPolicy],
    engines: &[Engine],
) -> Vec<(String, String)> {
    let mut m: Vec<(String, String)> = resolved
        .manifest()
        .into_iter()
        .map(|(k, v, origin)| (k, format!("{v} ({origin})")))
        .collect();
    m.push((
        "sweep".to_string(),
        format!(
            "{} = [{}]",
            sweep.axis.as_str(),
            sweep.values.iter().map(|v| fmt(*v)).collect::<Vec<_>>().join(", ")
        ),
    ));
    m.push((
        "policies".to_string(),
        policies.iter().map(|p| p.as_str()).collect::<Vec<_>>().join(","),
    ));
    m.push((
        "engines".to_string(),
        engines.iter().map(|e| e.as_str()).collect::<Vec<_>>().join(","),
    ));
    m.push(("rate_unit".to_string(), if common.bits { "bits" } else { "nats" }.to_string()));
    m
}

fn point_fields(p: &Resolved) -> Vec<String> {
    vec![
        fmt(p.lambda_b),
        fmt(p.alpha),
        fmt(p.p_dbm),
        fmt(p.n_dbm),
        fmt(p.m_factor),
        fmt(p.mu),
    ]
}

const QCFG: tincell_core::QuadratureConfig =
    tincell_core::QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-12, max_subdivisions: 2000 };

fn run_ptin(common: &Common) -> Result<Table> {
    let resolved = resolve(common)?;
    let sweep = match &common.sweep {
        Some(s) => Sweep::parse(s)?,
        None => Sweep { axis: Axis::Mu, values: (0..=10).map(|k| 1.0 + 0.1 * k as f64).collect() },
    };
    let policies =
        parse_policies(common.policy.as_deref(), &[SchedulingPolicy::TinSimplified])?;
    let engines =
        parse_engines(common.engines.as_deref(), &[Engine::Analytic, Engine::Simulation])?;
    if policies.contains(&SchedulingPolicy::Classical) {
        bail!("ptin is defined for the TIN policies");
    }

    let mut rows = Vec::new();
    for &value in &sweep.values {
        let point = sweep.apply(&resolved, value);
        let net = point.network()?;
        let tin = point.tin()?;
        for &engine in &engines {
            match engine {
                Engine::Analytic => {
                    let r = analytics::prob_tin(&net, &tin, &QCFG).map_err(|e| anyhow!("{e}"))?;
                    let mut row = point_fields(&point);
                    row.extend([
                        "-".into(),
                        "analytic".into(),
                        fmt(r.value),
                        fmt(r.est_error),
                        "0".into(),
                    ]);
                    rows.push(row);
                }
                Engine::Asymptotic => {
                    let r =
                        asymptotics::prob_tin_highsnr(&net, &tin).map_err(|e| anyhow!("{e}"))?;
                    let mut row = point_fields(&point);
                    row.extend([
                        "-".into(),
                        "asymptotic".into(),
                        fmt(r.value),
                        "0".into(),
                        "0".into(),
                    ]);
                    rows.push(row);
                }
                Engine::Simulation => {
                    for &policy in &policies {
                        let cfg = point.sim_config(&net, policy, 200_000)?;
                        let est = sim::estimate_prob_tin(&cfg, &net, &tin)
                            .map_err(|e| anyhow!("{e}"))?;
                        let mut row = point_fields(&point);
                        row.extend([
                            policy.as_str().into(),
                            "simulation".into(),
                            fmt(est.mean),
                            fmt(est.ci95_halfwidth),
                            est.trials_used.to_string(),
                        ]);
                        rows.push(row);
                    }
                }
            }
        }
    }
    Ok(Table {
        subcommand: "ptin",
        manifest: base_manifest(common, &resolved, &sweep, &policies, &engines),
        columns: vec![
            "lambda_b",
            "alpha",
            "p_dbm",
            "n_dbm",
            "m_factor",
            "mu",
            "policy",
            "engine",
            "value",
            "uncertainty",
            "trials",
        ],
        rows,
    })
}

fn run_coverage(common: &Common) -> Result<Table> {
    let resolved = resolve(common)?;
    let sweep = match &common.sweep {
        Some(s) => Sweep::parse(s)?,
        None => Sweep {
            axis: Axis::ThetaDb,
            values: (0..=10).map(|k| -5.0 + 2.5 * k as f64).collect(),
        },
    };
    let policies = parse_policies(
        common.policy.as_deref(),
        &[SchedulingPolicy::Classical, SchedulingPolicy::TinSimplified],
    )?;
    let engines =
        parse_engines(common.engines.as_deref(), &[Engine::Analytic, Engine::Simulation])?;

    let mut rows = Vec::new();
    for &value in &sweep.values {
        let point = sweep.apply(&resolved, value);
        let net = point.network()?;
        let tin = point.tin()?;
        let theta = point.theta();
        for &engine in &engines {
            for &policy in &policies {
                match engine {
                    Engine::Analytic => {
                        let (eff, cond) = match policy {
                            SchedulingPolicy::Classical => {
                                let c = analytics::coverage_classical(theta, &net, &QCFG)
                                    .map_err(|e| anyhow!("{e}"))?;
                                (c, c)
                            }
                            _ => {
                                let model = analytics::TinModel::new(net, tin, QCFG)
                                    .map_err(|e| anyhow!("{e}"))?;
                                (
                                    model.coverage_effective(theta).map_err(|e| anyhow!("{e}"))?,
                                    model.coverage_active(theta).map_err(|e| anyhow!("{e}"))?,
                                )
                            }
                        };
                        for (metric, r) in [("effective", eff), ("conditional", cond)] {
                            let mut row = point_fields(&point);
                            row.extend([
                                fmt(point.theta_db),
                                policy.as_str().into(),
                                "analytic".into(),
                                metric.into(),
                                fmt(r.value),
                                fmt(r.est_error),
                                "0".into(),
                            ]);
                            rows.push(row);
                        }
                    }
                    Engine::Asymptotic => {
                        let r = asymptotics::coverage_highsnr_integral(theta, &net, &tin, &QCFG)
                            .map_err(|e| anyhow!("{e}"))?;
                        let mut row = point_fields(&point);
                        row.extend([
                            fmt(point.theta_db),
                            policy.as_str().into(),
                            "asymptotic".into(),
                            "effective".into(),
                            fmt(r.value),
                            fmt(r.est_error),
                            "0".into(),
                        ]);
                        rows.push(row);
                    }
                    Engine::Simulation => {
                        let cfg = point.sim_config(&net, policy, 200_000)?;
                        let est = sim::estimate_coverage(&cfg, &net, &tin, theta)
                            .map_err(|e| anyhow!("{e}"))?;
                        let mut entries = vec![("effective", est.effective)];
                        if let Some(c) = est.conditional {
                            entries.push(("conditional", c));
                        }
                        for (metric, m) in entries {
                            let mut row = point_fields(&point);
                            row.extend([
                                fmt(point.theta_db),
                                policy.as_str().into(),
                                "simulation".into(),
                                metric.into(),
                                fmt(m.mean),
                                fmt(m.ci95_halfwidth),
                                m.trials_used.to_string(),
                            ]);
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    Ok(Table {
        subcommand: "coverage",
        manifest: base_manifest(common, &resolved, &sweep, &policies, &engines),
        columns: vec![
            "lambda_b",
            "alpha",
            "p_dbm",
            "n_dbm",
            "m_factor",
            "mu",
            "theta_db",
            "policy",
            "engine",
            "metric",
            "value",
            "uncertainty",
            "trials",
        ],
        rows,
    })
}

fn run_rate(common: &Common) -> Result<Table> {
    let resolved = resolve(common)?;
    let sweep = match &common.sweep {
        Some(s) => Sweep::parse(s)?,
        None => Sweep::single(Axis::LambdaB, resolved.lambda_b),
    };
    let policies = parse_policies(
        common.policy.as_deref(),
        &[SchedulingPolicy::Classical, SchedulingPolicy::TinSimplified],
    )?;
    let engines =
        parse_engines(common.engines.as_deref(), &[Engine::Analytic, Engine::Simulation])?;
    if engines.contains(&Engine::Asymptotic) {
        bail!("the asymptotic engine covers coverage only, not rate");
    }
    let unit = if common.bits { "bits" } else { "nats" };
    let scale = if common.bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };

    let mut rows = Vec::new();
    for &value in &sweep.values {
        let point = sweep.apply(&resolved, value);
        let net = point.network()?;
        let tin = point.tin()?;
        for &engine in &engines {
            for &policy in &policies {
                match engine {
                    Engine::Analytic => {
                        let (eff, cond) = match policy {
                            SchedulingPolicy::Classical => {
                                let c = analytics::rate_classical(&net, &QCFG)
                                    .map_err(|e| anyhow!("{e}"))?;
                                (c, c)
                            }
                            _ => {
                                let model = analytics::TinModel::new(net, tin, QCFG)
                                    .map_err(|e| anyhow!("{e}"))?;
                                (
                                    model.rate_effective().map_err(|e| anyhow!("{e}"))?,
                                    model.rate_active().map_err(|e| anyhow!("{e}"))?,
                                )
                            }
                        };
                        for (metric, r) in [("effective", eff), ("conditional", cond)] {
                            let mut row = point_fields(&point);
                            row.extend([
                                policy.as_str().into(),
                                "analytic".into(),
                                metric.into(),
                                unit.into(),
                                fmt(r.value * scale),
                                fmt(r.est_error * scale),
                                "0".into(),
                            ]);
                            rows.push(row);
                        }
                    }
                    Engine::Asymptotic => unreachable!("rejected above"),
                    Engine::Simulation => {
                        let cfg = point.sim_config(&net, policy, 50_000)?;
                        let est =
                            sim::estimate_rate(&cfg, &net, &tin).map_err(|e| anyhow!("{e}"))?;
                        let mut entries = vec![("effective", est.effective)];
                        if let Some(c) = est.conditional {
                            entries.push(("conditional", c));
                        }
                        for (metric, m) in entries {
                            let mut row = point_fields(&point);
                            row.extend([
                                policy.as_str().into(),
                                "simulation".into(),
                                metric.into(),
                                unit.into(),
                                fmt(m.mean * scale),
                                fmt(m.ci95_halfwidth * scale),
                                m.trials_used.to_string(),
                            ]);
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    Ok(Table {
        subcommand: "rate",
        manifest: base_manifest(common, &resolved, &sweep, &policies, &engines),
        columns: vec![
            "lambda_b",
            "alpha",
            "p_dbm",
            "n_dbm",
            "m_factor",
            "mu",
            "policy",
            "engine",
            "metric",
            "unit",
            "value",
            "uncertainty",
            "trials",
        ],
        rows,
    })
}

fn run_optimize_mu(common: &Common, exact_grid: bool, grid_step: f64) -> Result<Table> {
    let resolved = resolve(common)?;
    let sweep = match &common.sweep {
        Some(s) => Sweep::parse(s)?,
        None => Sweep { axis: Axis::ThetaDb, values: (0..=4).map(|k| 5.0 * k as f64).collect() },
    };
    if !(grid_step > 0.0 && grid_step < 1.0) {
        bail!("grid_step must be in (0, 1)");
    }

    let mut columns = vec![
        "lambda_b",
        "alpha",
        "p_dbm",
        "n_dbm",
        "theta_db",
        "mu_star",
        "regime",
        "r_at_mu_star",
    ];
    if exact_grid {
        columns.push("mu_star_grid");
        columns.push("grid_gap");
    }

    let mut rows = Vec::new();
    for &value in &sweep.values {
        let point = sweep.apply(&resolved, value);
        let net = point.network()?;
        let theta = point.theta();
        let opt = asymptotics::solve_optimal_mu(theta, &net).map_err(|e| anyhow!("{e}"))?;
        let regime = match opt.regime {
            asymptotics::OptimalMuRegime::Interior => "interior",
            asymptotics::OptimalMuRegime::NoTinNeeded => "no-tin-needed",
            asymptotics::OptimalMuRegime::Saturated => "saturated",
        };
        let tin_star = tincell_core::TinParams::new(1.0, opt.mu).map_err(|e| anyhow!("{e}"))?;
        let r_at = asymptotics::r_statistic(theta, &net, &tin_star).map_err(|e| anyhow!("{e}"))?;
        let mut row = vec![
            fmt(point.lambda_b),
            fmt(point.alpha),
            fmt(point.p_dbm),
            fmt(point.n_dbm),
            fmt(point.theta_db),
            fmt(opt.mu),
            regime.to_string(),
            fmt(r_at),
        ];
        if exact_grid {
            let (grid_mu, _) = exact_grid_argmax(&net, theta, grid_step)?;
            row.push(fmt(grid_mu));
            row.push(fmt((grid_mu - opt.mu).abs()));
        }
        rows.push(row);
    }
    let mut manifest = base_manifest(common, &resolved, &sweep, &[], &[Engine::Asymptotic]);
    manifest.push(("exact_grid".to_string(), exact_grid.to_string()));
    if exact_grid {
        manifest.push(("grid_step".to_string(), fmt(grid_step)));
    }
    Ok(Table { subcommand: "optimize-mu", manifest, columns, rows })
}

/// Argmax of the exact effective coverage over a mu grid on [1, 2].
fn exact_grid_argmax(
    net: &tincell_core::NetworkParams,
    theta: f64,
    step: f64,
) -> Result<(f64, f64)> {
    let n = (1.0 / step).round() as usize;
    let mut best = (1.0, f64::NEG_INFINITY);
    for k in 0..=n {
        let mu = (1.0 + k as f64 * step).min(2.0);
        let tin = tincell_core::TinParams::new(1.0, mu).map_err(|e| anyhow!("{e}"))?;
        let c = analytics::coverage_effective(theta, net, &tin, &QCFG)
            .map_err(|e| anyhow!("{e}"))?
            .value;
        if c > best.1 {
            best = (mu, c);
        }
    }
    Ok(best)
}

fn run_distances(common: &Common) -> Result<Table> {
    let resolved = resolve(common)?;
    let policies =
        parse_policies(common.policy.as_deref(), &[SchedulingPolicy::TinSimplified])?;
    if policies.len() != 1 {
        bail!("distances wants exactly one policy");
    }
    let policy = policies[0];
    let net = resolved.network()?;
    let tin = resolved.tin()?;
    let count = resolved.trials.unwrap_or(10_000);
    let cfg = resolved.sim_config(&net, policy, count)?;
    let triples =
        sim::sample_distance_triples(&cfg, &net, &tin, count).map_err(|e| anyhow!("{e}"))?;
    let rows: Vec<Vec<String>> = triples
        .iter()
        .enumerate()
        .map(|(i, (d, active))| {
            vec![i.to_string(), fmt(d.x11), fmt(d.x12), fmt(d.x21), (*active as u8).to_string()]
        })
        .collect();
    let sweep = Sweep::single(Axis::Mu, resolved.mu);
    Ok(Table {
        subcommand: "distances",
        manifest: base_manifest(common, &resolved, &sweep, &[policy], &[Engine::Simulation]),
        columns: vec!["sample", "x11", "x12", "x21", "active"],
        rows,
    })
}

fn run_compare(common: &Common, metric: &str, mu_pin: Option<f64>) -> Result<Table> {
    let resolved = resolve(common)?;
    let sweep = match &common.sweep {
        Some(s) => {
            let s = Sweep::parse(s)?;
            if s.axis != Axis::LambdaB && s.axis != Axis::ThetaDb {
                bail!("compare sweeps over lambda_b or theta_db only");
            }
            s
        }
        None => Sweep::single(Axis::LambdaB, resolved.lambda_b),
    };
    let metrics: Vec<&str> = match metric {
        "coverage" => vec!["coverage"],
        "rate" => vec!["rate"],
        "both" => vec!["coverage", "rate"],
        other => bail!("metric must be coverage | rate | both, got {other:?}"),
    };
    let policies = parse_policies(
        common.policy.as_deref(),
        &[SchedulingPolicy::TinExact, SchedulingPolicy::TinSimplified],
    )?;
    let unit = if common.bits { "bits" } else { "nats" };
    let scale = if common.bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };

    let mut rows = Vec::new();
    for &value in &sweep.values {
        let point = sweep.apply(&resolved, value);
        let net = point.network()?;
        let theta = point.theta();
        for &metric in &metrics {
            let (baseline, base_ci) = match metric {
                "coverage" => {
                    let cfg = point.sim_config(&net, SchedulingPolicy::Classical, 200_000)?;
                    let tin = point.tin()?;
                    let est = sim::estimate_coverage(&cfg, &net, &tin, theta)
                        .map_err(|e| anyhow!("{e}"))?;
                    (est.effective.mean, est.effective.ci95_halfwidth)
                }
                _ => {
                    let cfg = point.sim_config(&net, SchedulingPolicy::Classical, 50_000)?;
                    let tin = point.tin()?;
                    let est = sim::estimate_rate(&cfg, &net, &tin).map_err(|e| anyhow!("{e}"))?;
                    (est.effective.mean * scale, est.effective.ci95_halfwidth * scale)
                }
            };
            if baseline <= 0.0 {
                bail!("baseline {metric} is not positive; cannot form a gain");
            }
            for &policy in &policies {
                let mu_used = match (mu_pin, metric) {
                    (Some(m), _) => m,
                    (None, "coverage") => optimized_mu(&point, &net, policy, theta)?,
                    (None, _) => 1.9,
                };
                let tin = tincell_core::TinParams::new(point.m_factor, mu_used)
                    .map_err(|e| anyhow!("{e}"))?;
                let (treatment, treat_ci) = match metric {
                    "coverage" => {
                        let cfg = point.sim_config(&net, policy, 200_000)?;
                        let est = sim::estimate_coverage(&cfg, &net, &tin, theta)
                            .map_err(|e| anyhow!("{e}"))?;
                        (est.effective.mean, est.effective.ci95_halfwidth)
                    }
                    _ => {
                        let cfg = point.sim_config(&net, policy, 50_000)?;
                        let est =
                            sim::estimate_rate(&cfg, &net, &tin).map_err(|e| anyhow!("{e}"))?;
                        (est.effective.mean * scale, est.effective.ci95_halfwidth * scale)
                    }
                };
                let gain = (treatment - baseline) / baseline;
                rows.push(vec![
                    metric.to_string(),
                    if metric == "rate" { unit.to_string() } else { "probability".to_string() },
                    fmt(point.theta_db),
                    fmt(point.lambda_b),
                    policy.as_str().to_string(),
                    fmt(mu_used),
                    fmt(baseline),
                    fmt(treatment),
                    fmt(gain),
                    fmt(base_ci),
                    fmt(treat_ci),
                ]);
            }
        }
    }
    let mut manifest = base_manifest(common, &resolved, &sweep, &policies, &[Engine::Simulation]);
    manifest.push(("metric".to_string(), metric.to_string()));
    manifest.push((
        "mu_selection".to_string(),
        match mu_pin {
            Some(m) => format!("pinned {m}"),
            None => "coverage: optimized per policy; rate: 1.9".to_string(),
        },
    ));
    Ok(Table {
        subcommand: "compare",
        manifest,
        columns: vec![
            "metric",
            "unit",
            "theta_db",
            "lambda_b",
            "policy",
            "mu_used",
            "baseline",
            "treatment",
            "relative_gain",
            "baseline_ci95",
            "treatment_ci95",
        ],
        rows,
    })
}

/// Coverage-optimal mu per policy: the root condition for the distributed
/// policy, a coarse simulated argmax for the full one.
fn optimized_mu(
    point: &Resolved,
    net: &tincell_core::NetworkParams,
    policy: SchedulingPolicy,
    theta: f64,
) -> Result<f64> {
    let solver = asymptotics::solve_optimal_mu(theta, net).map_err(|e| anyhow!("{e}"))?;
    match policy {
        SchedulingPolicy::TinSimplified => Ok(solver.mu),
        SchedulingPolicy::TinExact => {
            let coarse_trials = (point.trials.unwrap_or(200_000) / 8).max(5_000);
            let mut best = (solver.mu, f64::NEG_INFINITY);
            let mut mu = 1.5;
            while mu <= 1.975 {
                let tin = tincell_core::TinParams::new(1.0, mu).map_err(|e| anyhow!("{e}"))?;
                let mut p = point.clone();
                p.trials = Some(coarse_trials);
                let cfg = p.sim_config(net, policy, coarse_trials)?;
                let est =
                    sim::estimate_coverage(&cfg, net, &tin, theta).map_err(|e| anyhow!("{e}"))?;
                if est.effective.mean > best.1 {
                    best = (mu, est.effective.mean);
                }
                mu += 0.05;
            }
            Ok(best.0)
        }
        SchedulingPolicy::Classical => Ok(2.0),
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ptin(c) => run_and_write(c, run_ptin),
        Command::Coverage(c) => run_and_write(c, run_coverage),
        Command::Rate(c) => run_and_write(c, run_rate),
        Command::OptimizeMu { common, exact_grid, grid_step } => {
            run_and_write(common, |c| run_optimize_mu(c, *exact_grid, *grid_step))
        }
        Command::Distances(c) => run_and_write(c, run_distances),
        Command::Compare { common, metric, mu } => {
            run_and_write(common, |c| run_compare(c, metric, *mu))
        }
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}

fn run_and_write(common: &Common, f: impl Fn(&Common) -> Result<Table>) -> Result<()> {
    let format: Format = common.format.parse()?;
    let table = f(common)?;
    table.write(common.out.as_deref(), format)
}
