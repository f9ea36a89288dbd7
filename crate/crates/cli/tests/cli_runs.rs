//! End-to-end runs of the `tincell` binary: config handling, manifest
//! reproducibility, and the documented table schemas.

use std::path::PathBuf;
use std::process::{Command, Output};

fn tincell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tincell")).args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &tempfile::TempDir, content: &str) -> PathBuf {
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn ptin_sweep_reproduces_monotone_curve() {
    let out = tincell(&[
        "ptin",
        "--trials",
        "4000",
        "--seed",
        "5",
        "--engines",
        "analytic,simulation",
        "--sweep",
        "mu=1.0,1.4,1.8,2.0",
    ]);
    let text = stdout_of(&out);
    let mut analytic = Vec::new();
    let mut simulated = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let value: f64 = cols[8].parse().unwrap();
        match cols[7] {
            "analytic" => analytic.push(value),
            "simulation" => simulated.push(value),
            other => panic!("unexpected engine {other}"),
        }
    }
    assert_eq!(analytic.len(), 4);
    assert_eq!(simulated.len(), 4);
    for w in analytic.windows(2) {
        assert!(w[1] >= w[0] - 1e-12, "analytic curve not monotone: {analytic:?}");
    }
    assert!((analytic[3] - 1.0).abs() < 1e-9, "P at mu=2 must be 1");
    assert!(simulated[3] > 0.999, "simulated P at mu=2 ~ 1, got {}", simulated[3]);
    for w in simulated.windows(2) {
        assert!(w[1] >= w[0] - 0.02, "simulated curve not monotone: {simulated:?}");
    }
}

#[test]
fn fixed_seed_output_is_byte_identical() {
    let args = [
        "coverage",
        "--trials",
        "2500",
        "--seed",
        "11",
        "--sweep",
        "theta_db=5,10",
        "--policy",
        "classical,tin-simplified",
    ];
    let a = stdout_of(&tincell(&args));
    let b = stdout_of(&tincell(&args));
    assert_eq!(a, b);
    let c = stdout_of(&tincell(&["coverage", "--trials", "2500", "--seed", "12", "--sweep",
        "theta_db=5,10", "--policy", "classical,tin-simplified"]));
    assert_ne!(a, c);
}

#[test]
fn config_file_defaults_and_rejections() {
    let dir = tempfile::tempdir().unwrap();

    let empty = write_config(&dir, "");
    let out = tincell(&[
        "ptin",
        "--config",
        empty.to_str().unwrap(),
        "--trials",
        "500",
        "--engines",
        "analytic",
        "--sweep",
        "mu=1.8",
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("# lambda_b = 5 (default)"));
    assert!(text.contains("# p_dbm = 46 (default)"));
    assert!(text.contains("# n_dbm = -110 (default)"));

    let bad_mu = write_config(&dir, "mu = 2.5\n");
    let out = tincell(&["coverage", "--config", bad_mu.to_str().unwrap(), "--engines", "analytic"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu"));

    let bad_m = write_config(&dir, "m_factor = 0.5\n");
    let out = tincell(&["coverage", "--config", bad_m.to_str().unwrap(), "--engines", "analytic"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("m_factor"));

    let unknown = write_config(&dir, "lambda_b = 5\ntypo_key = 3\n");
    let out = tincell(&["ptin", "--config", unknown.to_str().unwrap(), "--engines", "analytic"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("typo_key") && err.contains(":2"), "{err}");
}

#[test]
fn config_file_values_reach_the_engine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "schema = 1\nlambda_b = 2\nmu = 1.6\ntheta_db = 5\nseed = 9\n");
    let out = tincell(&[
        "coverage",
        "--config",
        cfg.to_str().unwrap(),
        "--engines",
        "analytic",
        "--policy",
        "tin-simplified",
        "--sweep",
        "theta_db=5",
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("# lambda_b = 2 (config)"));
    assert!(text.contains("# mu = 1.6 (config)"));
    assert!(text.contains("# seed = 9 (config)"));
    let row = text.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap();
    assert!(row.starts_with("2,4,46,-110,1,1.6,5,tin-simplified,analytic,"), "{row}");
}

#[test]
fn json_mirror_matches_csv_rows() {
    let args_csv = ["rate", "--trials", "1500", "--seed", "3", "--policy", "classical",
        "--engines", "simulation"];
    let csv = stdout_of(&tincell(&args_csv));
    let json = stdout_of(&tincell(&[
        "rate", "--trials", "1500", "--seed", "3", "--policy", "classical", "--engines",
        "simulation", "--format", "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let csv_first_row: Vec<&str> =
        csv.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap().split(',').collect();
    let json_first_row: Vec<String> = v["rows"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    assert_eq!(csv_first_row, json_first_row);
    assert_eq!(v["subcommand"], "rate");
}

#[test]
fn bits_flag_divides_by_ln2() {
    let nats = stdout_of(&tincell(&["rate", "--engines", "analytic", "--policy", "classical"]));
    let bits = stdout_of(&tincell(&[
        "rate", "--engines", "analytic", "--policy", "classical", "--bits",
    ]));
    let get = |text: &str| -> f64 {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .nth(1)
            .unwrap()
            .split(',')
            .nth(10)
            .unwrap()
            .parse()
            .unwrap()
    };
    let n = get(&nats);
    let b = get(&bits);
    assert!((b - n / std::f64::consts::LN_2).abs() < 1e-12 * n);
    assert!(nats.contains(",nats,") && bits.contains(",bits,"));
}

#[test]
fn distances_dump_has_valid_triples() {
    let out = stdout_of(&tincell(&[
        "distances",
        "--trials",
        "400",
        "--seed",
        "8",
        "--policy",
        "tin-simplified",
    ]));
    let mut rows = 0;
    for line in out.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let x11: f64 = cols[1].parse().unwrap();
        let x21: f64 = cols[3].parse().unwrap();
        let active: u8 = cols[4].parse().unwrap();
        assert!(x11 > 0.0 && x21 >= x11);
        assert!(active <= 1);
        rows += 1;
    }
    assert_eq!(rows, 400);
}

#[test]
fn compare_gain_recomputes_from_columns() {
    let out = stdout_of(&tincell(&[
        "compare",
        "--metric",
        "coverage",
        "--mu",
        "1.9",
        "--trials",
        "3000",
        "--seed",
        "21",
        "--policy",
        "tin-simplified",
    ]));
    let row: Vec<&str> =
        out.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap().split(',').collect();
    let baseline: f64 = row[6].parse().unwrap();
    let treatment: f64 = row[7].parse().unwrap();
    let gain: f64 = row[8].parse().unwrap();
    assert_eq!(gain.to_bits(), ((treatment - baseline) / baseline).to_bits());
}

#[test]
fn rejects_malformed_sweeps_and_engines() {
    let out = tincell(&["ptin", "--sweep", "bogus=1,2"]);
    assert!(!out.status.success());
    let out = tincell(&["ptin", "--sweep", "mu=2,1"]);
    assert!(!out.status.success());
    let out = tincell(&["coverage", "--engines", "psychic"]);
    assert!(!out.status.success());
    let out = tincell(&["rate", "--engines", "asymptotic"]);
    assert!(!out.status.success());
    let out = tincell(&["ptin", "--policy", "classical"]);
    assert!(!out.status.success());
}
