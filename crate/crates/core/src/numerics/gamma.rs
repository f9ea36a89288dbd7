//! Gamma function via the Lanczos approximation (g = 7, 9 coefficients).

use super::NumericsError;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    let mut s = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (z + i as f64);
    }
    s
}

fn check_positive(x: f64) -> Result<(), NumericsError> {
    if !x.is_finite() || x <= 0.0 {
        return Err(NumericsError::Domain(format!("gamma requires finite x > 0, got {x}")));
    }
    Ok(())
}

/// Γ(x) for x > 0, accurate to roughly 14 significant digits.
pub fn gamma_fn(x: f64) -> Result<f64, NumericsError> {
    check_positive(x)?;
    if x < 0.5 {
        // Reflection keeps the Lanczos argument away from the poles.
        return Ok(PI / ((PI * x).sin() * gamma_fn(1.0 - x)?));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z))
}

/// ln Γ(x) for x > 0, overflow-safe for large arguments.
pub fn ln_gamma(x: f64) -> Result<f64, NumericsError> {
    check_positive(x)?;
    if x < 0.5 {
        return Ok(PI.ln() - (PI * x).sin().ln() - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}
