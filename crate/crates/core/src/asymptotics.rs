//! High-SNR closed forms and the design-parameter optimizer, specialized to
//! path-loss exponent α = 4 with M = 1.
//!
//! In this regime the effective coverage reduces to a one-dimensional integral
//! whose exponent splits into A₁ x^μ (scheduling) and A₂ x² (interference)
//! parts; expanding the scheduling factor gives an alternating power series in
//! R = A₁²/A₂^μ, and the coverage-optimal μ solves R = 1.

use crate::analytics::AnalyticResult;
use crate::model::{NetworkParams, TinParams};
use crate::numerics::{
    find_root_bracketed, integrate, ln_gamma, sum_alternating_series, NumericsError,
    QuadratureConfig, RootOutcome,
};
use std::f64::consts::PI;
use thiserror::Error;

const SERIES_TOL: f64 = 1e-12;
const SERIES_N_MAX: usize = 400;
const TRUNC_LOG: f64 = 45.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    /// The closed forms here hold only for α = 4 and M = 1.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
}

/// A value clamped into [0, 1]; `clamped` flags that the raw closed form
/// exceeded 1 (these are high-SNR approximations, not probabilities by
/// construction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampedProb {
    pub value: f64,
    pub clamped: bool,
}

/// Coefficients of the high-SNR coverage exponent and the series variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCoefficients {
    /// A₁ = πλ_b β^{(2−μ)/4}, weight of the scheduling term x^μ.
    pub a1: f64,
    /// A₂ = π²λ_b P[active] √Θ / 2, weight of the interference term x².
    pub a2: f64,
    /// R = A₁² / A₂^μ; the coverage optimum sits near R = 1.
    pub r: f64,
}

fn require_regime(net: &NetworkParams, tin: &TinParams) -> Result<(), AsymptoticsError> {
    if net.alpha != 4.0 {
        return Err(AsymptoticsError::UnsupportedRegime(format!(
            "alpha must be 4 (got {}); use the exact analytics for general alpha",
            net.alpha
        )));
    }
    if tin.m_factor != 1.0 {
        return Err(AsymptoticsError::UnsupportedRegime(format!(
            "m_factor must be 1 (got {})",
            tin.m_factor
        )));
    }
    Ok(())
}

/// Unclamped closed form 2 Γ(2/μ) / (μ (πλ)^{2/μ−1} β^{1/μ−1/2}), evaluated
/// in log space. Shared by the activation probability and the small-threshold
/// coverage limit, and (algebraically) by the optimizer residual.
fn high_snr_prob_raw(net: &NetworkParams, tin: &TinParams) -> Result<f64, AsymptoticsError> {
    let mu = tin.mu;
    let ln_value = (2.0f64).ln() + ln_gamma(2.0 / mu)? - mu.ln()
        - (2.0 / mu - 1.0) * (PI * net.lambda_b).ln()
        - (1.0 / mu - 0.5) * net.ln_beta();
    Ok(ln_value.exp())
}

fn clamp_prob(raw: f64) -> ClampedProb {
    if raw > 1.0 {
        ClampedProb { value: 1.0, clamped: true }
    } else {
        ClampedProb { value: raw, clamped: false }
    }
}

/// High-SNR approximation of the activation probability for α = 4, M = 1.
pub fn prob_tin_highsnr(
    net: &NetworkParams,
    tin: &TinParams,
) -> Result<ClampedProb, AsymptoticsError> {
    require_regime(net, tin)?;
    Ok(clamp_prob(high_snr_prob_raw(net, tin)?))
}

/// Small-threshold limit of the effective coverage; shares its right-hand
/// side with [`prob_tin_highsnr`], so the two agree bit-exactly.
pub fn cnet_small_theta(
    net: &NetworkParams,
    tin: &TinParams,
) -> Result<ClampedProb, AsymptoticsError> {
    require_regime(net, tin)?;
    Ok(clamp_prob(high_snr_prob_raw(net, tin)?))
}

impl SeriesCoefficients {
    /// Build the exponent coefficients at SINR threshold `theta`. The raw
    /// (unclamped) activation closed form enters A₂, matching the algebraic
    /// substitution used by the optimizer residual.
    pub fn new(
        theta: f64,
        net: &NetworkParams,
        tin: &TinParams,
    ) -> Result<Self, AsymptoticsError> {
        require_regime(net, tin)?;
        check_theta(theta)?;
        let lam = net.lambda_b;
        let a1 = PI * lam * ((2.0 - tin.mu) / 4.0 * net.ln_beta()).exp();
        let p_raw = high_snr_prob_raw(net, tin)?;
        let a2 = PI * PI * lam * p_raw * theta.sqrt() / 2.0;
        let r = (2.0 * a1.ln() - tin.mu * a2.ln()).exp();
        Ok(Self { a1, a2, r })
    }
}

/// Series statistic R = A₁²/A₂^μ.
pub fn r_statistic(
    theta: f64,
    net: &NetworkParams,
    tin: &TinParams,
) -> Result<f64, AsymptoticsError> {
    Ok(SeriesCoefficients::new(theta, net, tin)?.r)
}

/// Effective coverage via the alternating power series
/// (πλ/A₂) Σ (−1)^n R^{n/2} Γ((nμ+2)/2) / n!.
///
/// At μ = 2 the series is geometric: it sums to πλ/(A₁+A₂) for √R < 1 and
/// diverges otherwise. For μ < 2 it converges formally for every R, but the
/// terms first grow like a hump whose height explodes with R; the summation
/// guard reports divergence when the hump exceeds what f64 cancellation can
/// resolve, which confines this route to the moderate-R (large-threshold)
/// regime around the coverage optimum.
pub fn coverage_series(
    theta: f64,
    net: &NetworkParams,
    tin: &TinParams,
) -> Result<f64, AsymptoticsError> {
    let coeff = SeriesCoefficients::new(theta, net, tin)?;
    let lam = net.lambda_b;
    let mu = tin.mu;
    if mu == 2.0 {
        if coeff.r.sqrt() >= 1.0 {
            return Err(NumericsError::Divergent { at: 0 }.into());
        }
        return Ok(PI * lam / (coeff.a1 + coeff.a2));
    }
    let ln_r = coeff.r.ln();
    let sum = sum_alternating_series(
        |n| {
            let nf = n as f64;
            0.5 * nf * ln_r + ln_gamma((nf * mu + 2.0) / 2.0).unwrap_or(f64::NAN)
                - ln_gamma(nf + 1.0).unwrap_or(f64::NAN)
        },
        SERIES_TOL,
        SERIES_N_MAX,
    )?;
    Ok(PI * lam / coeff.a2 * sum)
}

/// Effective coverage via adaptive quadrature of the high-SNR integrand
/// 2πλ x exp(−πλ x^μ β^{(2−μ)/4} − πλ P x² √Θ (π/2 − arctan(x^{μ−2} β^{(2−μ)/4}/√Θ)))
/// on [0, β^{1/4}].
pub fn coverage_highsnr_integral(
    theta: f64,
    net: &NetworkParams,
    tin: &TinParams,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AsymptoticsError> {
    require_regime(net, tin)?;
    check_theta(theta)?;
    let lam = net.lambda_b;
    let pi_lam = PI * lam;
    let mu = tin.mu;
    let beta_pow = ((2.0 - mu) / 4.0 * net.ln_beta()).exp();
    let p_raw = high_snr_prob_raw(net, tin)?;
    let sqrt_theta = theta.sqrt();
    let interference_scale = pi_lam * p_raw * sqrt_theta;

    // The integrand lives where A₁ x^μ ≲ 45; integrating all the way to
    // β^{1/4} would hide the peak from the panel nodes.
    let a1 = pi_lam * beta_pow;
    let upper = net.beta().powf(0.25);
    let x_hi = upper.min((TRUNC_LOG / a1).powf(1.0 / mu)).min((TRUNC_LOG / (interference_scale * PI / 2.0)).sqrt().max(1e-300));

    let q = integrate(
        |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let sched = a1 * x.powf(mu);
            let atan_arg = x.powf(mu - 2.0) * beta_pow / sqrt_theta;
            let interf =
                interference_scale * x * x * (std::f64::consts::FRAC_PI_2 - atan_arg.atan());
            2.0 * pi_lam * x * (-sched - interf).exp()
        },
        0.0,
        x_hi,
        cfg,
    )?;
    Ok(AnalyticResult { value: q.value.min(1.0), est_error: q.error })
}

/// Regime of the optimal μ search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalMuRegime {
    /// Interior root of the residual on (1, 2).
    Interior,
    /// R > 1 on the whole interval (small threshold): scheduling never pays,
    /// μ* = 2 keeps every BS on.
    NoTinNeeded,
    /// R < 1 already at μ = 1 (extreme threshold): the search saturates at
    /// the lower boundary.
    Saturated,
}

/// Output of [`solve_optimal_mu`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalMu {
    pub mu: f64,
    pub regime: OptimalMuRegime,
}

/// Residual of the optimality condition
/// μ^μ (πλ)⁴ β^{2−μ} − (π³ λ² √Θ Γ(2/μ))^μ = 0,
/// evaluated as the difference of the logarithms of the two sides; both sides
/// are positive, so the sign (and the root) is unchanged while the raw terms
/// would overflow at realistic β.
pub fn optimal_mu_residual(mu: f64, theta: f64, net: &NetworkParams) -> Result<f64, NumericsError> {
    let lam = net.lambda_b;
    let minuend = mu * mu.ln() + 4.0 * (PI * lam).ln() + (2.0 - mu) * net.ln_beta();
    let subtrahend =
        mu * (3.0 * PI.ln() + 2.0 * lam.ln() + 0.5 * theta.ln() + ln_gamma(2.0 / mu)?);
    let r = minuend - subtrahend;
    if !r.is_finite() {
        return Err(NumericsError::Domain(format!("non-finite residual at mu={mu}")));
    }
    Ok(r)
}

/// Solve for the coverage-optimal μ ∈ [1, 2] at SINR threshold `theta`
/// (α = 4, M = 1). Boundary regimes are flagged instead of failing.
pub fn solve_optimal_mu(theta: f64, net: &NetworkParams) -> Result<OptimalMu, AsymptoticsError> {
    if net.alpha != 4.0 {
        return Err(AsymptoticsError::UnsupportedRegime(format!(
            "alpha must be 4 (got {})",
            net.alpha
        )));
    }
    check_theta(theta)?;
    let f = |mu: f64| optimal_mu_residual(mu, theta, net).unwrap_or(f64::NAN);
    match find_root_bracketed(f, 1.0, 2.0, 1e-10)? {
        RootOutcome::Bracketed { x, .. } => Ok(OptimalMu { mu: x, regime: OptimalMuRegime::Interior }),
        RootOutcome::NoSignChange { .. } => {
            if f(2.0) > 0.0 {
                Ok(OptimalMu { mu: 2.0, regime: OptimalMuRegime::NoTinNeeded })
            } else {
                Ok(OptimalMu { mu: 1.0, regime: OptimalMuRegime::Saturated })
            }
        }
    }
}

fn check_theta(theta: f64) -> Result<(), NumericsError> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(NumericsError::Domain(format!("theta must be > 0, got {theta}")));
    }
    Ok(())
}
