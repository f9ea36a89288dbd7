// Temporary numeric probes; removed before finalization.
use tincell_core::model::*;
use tincell_core::sim::*;
use tincell_core::{analytics, asymptotics, QuadratureConfig};

fn paper_net(l: f64) -> NetworkParams {
    NetworkParams::from_dbm(l, 46.0, -110.0, 4.0).unwrap()
}
fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}
fn q() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
#[ignore]
fn probe_series_regimes() {
    // (mu, beta, theta_db) candidates for the 2% series-vs-integral check.
    let cases = [
        (1.3, 1e4, 62.0),
        (1.3, 1e4, 65.0),
        (1.5, 1e6, 58.0),
        (1.5, 1e6, 60.0),
        (1.8, 10f64.powf(15.6), 48.0),
        (1.8, 10f64.powf(15.6), 50.0),
        (1.8, 10f64.powf(15.6), 52.0),
    ];
    for (mu, beta, theta_db) in cases {
        let net = NetworkParams::new(5.0, beta, 1.0, 4.0).unwrap();
        let tin = TinParams::new(1.0, mu).unwrap();
        let theta = db(theta_db);
        let coeff = asymptotics::SeriesCoefficients::new(theta, &net, &tin).unwrap();
        let series = asymptotics::coverage_series(theta, &net, &tin);
        let integral = asymptotics::coverage_highsnr_integral(theta, &net, &tin, &q()).unwrap();
        match series {
            Ok(s) => println!(
                "mu={mu} beta=1e{:.1} theta={theta_db}dB R={:.3e}: series={s:.6e} integral={:.6e} rel={:.4}%",
                beta.log10(),
                coeff.r,
                integral.value,
                100.0 * (s - integral.value).abs() / integral.value
            ),
            Err(e) => println!("mu={mu} theta={theta_db}dB R={:.3e}: series ERR {e}", coeff.r),
        }
    }
}

#[test]
#[ignore]
fn probe_optimizer_grid() {
    for &theta_db in &[5.0, 10.0, 15.0] {
        for &lam in &[1.0, 5.0, 10.0] {
            let net = paper_net(lam);
            let theta = db(theta_db);
            let opt = asymptotics::solve_optimal_mu(theta, &net).unwrap();
            // 1e-3 grid argmax of the exact effective coverage
            let mut best = (1.0, f64::NEG_INFINITY);
            let mut mu: f64 = 1.0;
            while mu <= 2.0 + 1e-9 {
                let tin = TinParams::new(1.0, mu.min(2.0)).unwrap();
                let c = analytics::coverage_effective(theta, &net, &tin, &q()).unwrap().value;
                if c > best.1 {
                    best = (mu, c);
                }
                mu += 0.001;
            }
            println!(
                "theta={theta_db}dB lam={lam}: solver={:.4} ({:?}), grid={:.4}, gap={:.4}",
                opt.mu,
                opt.regime,
                best.0,
                (opt.mu - best.0).abs()
            );
        }
    }
}

#[test]
#[ignore]
fn probe_lower_bound() {
    let net = paper_net(5.0);
    for &mu in &[1.5, 1.7, 1.9] {
        let tin = TinParams::new(1.0, mu).unwrap();
        let cfg = SimulationConfig::new(&net, 10.0, 30_000, 900 + mu as u64, SchedulingPolicy::TinExact)
            .unwrap();
        let thetas = [db(5.0), db(10.0)];
        let est = estimate_coverage_multi(&cfg, &net, &tin, &thetas).unwrap();
        for (k, theta_db) in [5.0, 10.0].iter().enumerate() {
            let analytic = analytics::coverage_effective(thetas[k], &net, &tin, &q()).unwrap().value;
            let sim = est[k].effective.mean;
            let ci = est[k].effective.ci95_halfwidth;
            println!(
                "mu={mu} theta={theta_db}dB: sim={sim:.5} ± {ci:.5} analytic={analytic:.5} margin={:.5}",
                sim - (analytic - 2.0 * ci)
            );
        }
    }
}

#[test]
#[ignore]
fn probe_gains_coverage() {
    let net = paper_net(5.0);
    let theta = db(10.0);
    let trials = 30_000;

    let cl = SimulationConfig::new(&net, 10.0, trials, 1001, SchedulingPolicy::Classical).unwrap();
    let tin_any = TinParams::new(1.0, 1.9).unwrap();
    let base = estimate_coverage(&cl, &net, &tin_any, theta).unwrap().effective;
    println!("classical eff cov: {:.5} ± {:.5}", base.mean, base.ci95_halfwidth);

    let solver = asymptotics::solve_optimal_mu(theta, &net).unwrap();
    println!("solver mu* = {:.4}", solver.mu);

    for &(policy, name) in &[
        (SchedulingPolicy::TinExact, "exact"),
        (SchedulingPolicy::TinSimplified, "simplified"),
    ] {
        for &mu in &[1.90, solver.mu, 1.94, 1.95, 1.96, 1.97, 1.98, 1.99] {
            let tin = TinParams::new(1.0, mu).unwrap();
            let cfg = SimulationConfig::new(&net, 10.0, trials, 1002, policy).unwrap();
            let est = estimate_coverage(&cfg, &net, &tin, theta).unwrap().effective;
            println!(
                "{name} mu={mu:.4}: eff={:.5} gain={:.1}%",
                est.mean,
                100.0 * (est.mean - base.mean) / base.mean
            );
        }
    }
}

#[test]
#[ignore]
fn probe_window_sensitivity() {
    let net = paper_net(5.0);
    let theta = db(10.0);
    let tin = TinParams::new(1.0, 1.94).unwrap();
    for &(side, trials) in &[(10.0, 40_000u64), (14.0, 20_000), (20.0, 10_000)] {
        let cl = SimulationConfig::new(&net, side, trials, 1201, SchedulingPolicy::Classical).unwrap();
        let base = estimate_coverage(&cl, &net, &tin, theta).unwrap().effective;
        let ex = SimulationConfig::new(&net, side, trials, 1202, SchedulingPolicy::TinExact).unwrap();
        let tr = estimate_coverage(&ex, &net, &tin, theta).unwrap().effective;
        println!(
            "side={side}: base={:.5}±{:.5} exact={:.5}±{:.5} gain={:.1}%",
            base.mean, base.ci95_halfwidth, tr.mean, tr.ci95_halfwidth,
            100.0 * (tr.mean - base.mean) / base.mean
        );
    }
}

#[test]
#[ignore]
fn probe_gains_rate() {
    for &lam in &[1.0, 5.0, 10.0] {
        let net = paper_net(lam);
        let window = SimulationConfig::recommended_window(&net, 500.0);
        let tin = TinParams::new(1.0, 1.9).unwrap();
        let cl =
            SimulationConfig::new(&net, window, 20_000, 1100, SchedulingPolicy::Classical).unwrap();
        let base = estimate_rate(&cl, &net, &tin).unwrap().effective;
        for &(policy, name) in &[
            (SchedulingPolicy::TinExact, "exact"),
            (SchedulingPolicy::TinSimplified, "simplified"),
        ] {
            let cfg = SimulationConfig::new(&net, window, 20_000, 1101, policy).unwrap();
            let est = estimate_rate(&cfg, &net, &tin).unwrap().effective;
            println!(
                "lam={lam} {name}: base={:.4} treat={:.4} gain={:.1}%",
                base.mean,
                est.mean,
                100.0 * (est.mean - base.mean) / base.mean
            );
        }
    }
}
