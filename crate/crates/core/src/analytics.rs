//! Numerical evaluation of the analytical coverage and rate framework:
//! activation probability, conditional serving-distance density, interference
//! Laplace transform, and the coverage/rate integrals for both the scheduled
//! and the conventional network.
//!
//! The interference Laplace transform is always evaluated through the tail
//! integral J(v, α) rather than a hypergeometric series; the two forms are the
//! same function and the integral is numerically robust. Semi-infinite
//! integrals over the serving distance are truncated where the dominating
//! exponential factor drops below e^{−45} of its peak, then refined adaptively.

use crate::model::{ln_inhomogeneity_radius, NetworkParams, TinParams};
use crate::numerics::{
    integrate, interference_tail_integral, NumericsError, QuadratureConfig,
};
use std::cell::RefCell;
use std::f64::consts::PI;
use thiserror::Error;

/// Below this activation probability, conditional quantities are refused
/// instead of returning 0/0 noise.
pub const DEGENERATE_PROB: f64 = 1e-12;

const TRUNC_LOG: f64 = 45.0;
const TAU_CEILING: f64 = 40.0;
const TAU_PEAK_DROP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    /// Activation probability is numerically zero; quantities conditioned on
    /// activation are undefined.
    #[error("degenerate conditioning: activation probability {p_tin:e} below {limit:e}")]
    DegenerateConditioning { p_tin: f64, limit: f64 },
}

/// A numerically evaluated quantity with an integration error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticResult {
    pub value: f64,
    pub est_error: f64,
}

/// ln of the squared exclusion radius, πλ-free part: R_I(x)².
fn r_i_squared(x: f64, net: &NetworkParams, tin: &TinParams) -> f64 {
    (2.0 * ln_inhomogeneity_radius(x.ln(), net, tin)).exp()
}

/// Probability that the tagged UE of the typical cell passes the activation
/// test, from the nearest/second-nearest joint distance law.
///
/// At μ = 2 the bound coefficient is M^{1/(2α)} ≥ 1 and the condition reduces
/// to the association inequality, so the probability is exactly 1.
pub fn prob_tin(
    net: &NetworkParams,
    tin: &TinParams,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AnalyticsError> {
    if tin.mu == 2.0 {
        return Ok(AnalyticResult { value: 1.0, est_error: 0.0 });
    }
    let lam = net.lambda_b;
    let pi_lam = PI * lam;
    let ln_coeff = crate::model::ln_bound_coeff(net, tin);
    let two_over_mu = 2.0 / tin.mu;
    let x_hi = (TRUNC_LOG / pi_lam).sqrt();
    let q = integrate(
        |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let bound = (ln_coeff + two_over_mu * x.ln()).exp();
            let m = x.min(bound);
            2.0 * pi_lam * pi_lam * x * (-pi_lam * x * x).exp() * m * m
        },
        0.0,
        x_hi,
        cfg,
    )?;
    Ok(AnalyticResult { value: q.value.clamp(0.0, 1.0), est_error: q.error })
}

/// Density of the serving distance conditioned on the cell being active:
/// 2πλ x e^{−πλ R_I(x)²} / p_a.
pub fn conditional_pdf_x11(
    x11: f64,
    net: &NetworkParams,
    tin: &TinParams,
    p_a: f64,
) -> Result<f64, AnalyticsError> {
    if p_a < DEGENERATE_PROB {
        return Err(AnalyticsError::DegenerateConditioning { p_tin: p_a, limit: DEGENERATE_PROB });
    }
    if !(x11 > 0.0) || !x11.is_finite() {
        return Err(NumericsError::Domain(format!("x11 must be > 0, got {x11}")).into());
    }
    let pi_lam = PI * net.lambda_b;
    Ok(2.0 * pi_lam * x11 * (-pi_lam * r_i_squared(x11, net, tin)).exp() / p_a)
}

/// Laplace transform of the interference seen at an active UE with serving
/// distance `x11`: exp(−πλ p_a s^{2/α} J(s^{−2/α} R_I(x11)², α)).
pub fn laplace_interference(
    s: f64,
    x11: f64,
    net: &NetworkParams,
    tin: &TinParams,
    p_a: f64,
) -> Result<f64, AnalyticsError> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(NumericsError::Domain(format!("s must be >= 0, got {s}")).into());
    }
    if !(0.0..=1.0).contains(&p_a) {
        return Err(NumericsError::Domain(format!("p_a must be in [0, 1], got {p_a}")).into());
    }
    if s == 0.0 || p_a == 0.0 {
        return Ok(1.0);
    }
    let two_over_alpha = 2.0 / net.alpha;
    let ln_s = s.ln();
    let v = (2.0 * ln_inhomogeneity_radius(x11.ln(), net, tin) - two_over_alpha * ln_s).exp();
    let j = interference_tail_integral(v, net.alpha)?;
    Ok((-PI * net.lambda_b * p_a * (two_over_alpha * ln_s).exp() * j).exp())
}

/// Truncation point for integrals damped by e^{−πλ R_I(x)²}: the earliest x
/// at which either branch of the max pushes the exponent past `TRUNC_LOG`.
fn serving_distance_cutoff(net: &NetworkParams, tin: &TinParams) -> f64 {
    let pi_lam = PI * net.lambda_b;
    let a = (TRUNC_LOG / pi_lam).sqrt();
    // Second branch: πλ x^μ D with D = β^{(2−μ)/α} M^{−1/α}.
    let ln_d = (2.0 - tin.mu) / net.alpha * net.ln_beta() - tin.m_factor.ln() / net.alpha;
    let b = (((TRUNC_LOG / pi_lam).ln() - ln_d) / tin.mu).exp();
    a.min(b)
}

fn effective_coverage_integral(
    theta: f64,
    net: &NetworkParams,
    tin: &TinParams,
    p_a: f64,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AnalyticsError> {
    let lam = net.lambda_b;
    let pi_lam = PI * lam;
    let alpha = net.alpha;
    let two_over_alpha = 2.0 / alpha;
    let inv_beta = (-net.ln_beta()).exp();
    let x_hi = serving_distance_cutoff(net, tin);
    let inner_err: RefCell<Option<NumericsError>> = RefCell::new(None);

    let q = integrate(
        |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let ri2 = r_i_squared(x, net, tin);
            let s = x.powf(alpha) * theta;
            let laplace_exponent = if p_a == 0.0 {
                0.0
            } else {
                let v = ri2 / (two_over_alpha * s.ln()).exp();
                match interference_tail_integral(v, alpha) {
                    Ok(j) => pi_lam * p_a * (two_over_alpha * s.ln()).exp() * j,
                    Err(e) => {
                        inner_err.borrow_mut().get_or_insert(e);
                        return f64::NAN;
                    }
                }
            };
            2.0 * pi_lam * x * (-pi_lam * ri2 - s * inv_beta - laplace_exponent).exp()
        },
        0.0,
        x_hi,
        cfg,
    );
    if let Some(e) = inner_err.into_inner() {
        return Err(e.into());
    }
    let q = q?;
    Ok(AnalyticResult { value: q.value.clamp(0.0, 1.0), est_error: q.error })
}

/// Effective coverage probability of the scheduled network at SINR threshold
/// `theta`: activation probability times the conditional coverage.
pub fn coverage_effective(
    theta: f64,
    net: &NetworkParams,
    tin: &TinParams,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AnalyticsError> {
    check_theta(theta)?;
    let pa = prob_tin(net, tin, cfg)?;
    effective_coverage_integral(theta, net, tin, pa.value, cfg)
}

/// Coverage probability of the typical active UE.
pub fn coverage_active(
    theta: f64,
    net: &NetworkParams,
    tin: &TinParams,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AnalyticsError> {
    check_theta(theta)?;
    let pa = prob_tin(net, tin, cfg)?;
    if pa.value < DEGENERATE_PROB {
        return Err(AnalyticsError::DegenerateConditioning {
            p_tin: pa.value,
            limit: DEGENERATE_PROB,
        });
    }
    let eff = effective_coverage_integral(theta, net, tin, pa.value, cfg)?;
    Ok(AnalyticResult {
        value: (eff.value / pa.value).clamp(0.0, 1.0),
        est_error: eff.est_error / pa.value,
    })
}

/// Coverage probability of the conventional network (no scheduling).
pub fn coverage_classical(
    theta: f64,
    net: &NetworkParams,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AnalyticsError> {
    check_theta(theta)?;
    let lam = net.lambda_b;
    let pi_lam = PI * lam;
    let alpha = net.alpha;
    let inv_beta = (-net.ln_beta()).exp();
    let theta_2a = theta.powf(2.0 / alpha);
    let j = interference_tail_integral(1.0 / theta_2a, alpha)?;
    let damping = pi_lam * (1.0 + theta_2a * j);
    let x_hi = (TRUNC_LOG / damping).sqrt();
    let q = integrate(
        |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            2.0 * pi_lam * x * (-damping * x * x - x.powf(alpha) * theta * inv_beta).exp()
        },
        0.0,
        x_hi,
        cfg,
    )?;
    Ok(AnalyticResult { value: q.value.clamp(0.0, 1.0), est_error: q.error })
}

/// Inner rate integrand: ∫_0^{τ_hi} e^{−s(τ)/β} L_I(s(τ)) dτ at fixed x,
/// where s(τ) = x^α (e^τ − 1). The upper limit is found by scanning until the
/// integrand falls below `TAU_PEAK_DROP` of its running peak, capped at
/// `TAU_CEILING`.
fn rate_tau_integral(
    x: f64,
    ri2: f64,
    net: &NetworkParams,
    p_a: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, NumericsError> {
    let pi_lam = PI * net.lambda_b;
    let alpha = net.alpha;
    let two_over_alpha = 2.0 / alpha;
    let inv_beta = (-net.ln_beta()).exp();
    let x_alpha = x.powf(alpha);

    let integrand = |tau: f64| -> Result<f64, NumericsError> {
        if tau <= 0.0 {
            return Ok(1.0);
        }
        let s = x_alpha * tau.exp_m1();
        if s <= 0.0 {
            return Ok(1.0);
        }
        let mut exponent = s * inv_beta;
        if p_a > 0.0 {
            let s_2a = (two_over_alpha * s.ln()).exp();
            let j = interference_tail_integral(ri2 / s_2a, alpha)?;
            exponent += pi_lam * p_a * s_2a * j;
        }
        Ok((-exponent).exp())
    };

    // Scan for the effective upper limit.
    let mut peak = 1.0f64;
    let mut tau_hi = TAU_CEILING;
    let mut tau = 0.5;
    while tau <= TAU_CEILING {
        let h = integrand(tau)?;
        peak = peak.max(h);
        if h < TAU_PEAK_DROP * peak {
            tau_hi = tau;
            break;
        }
        tau += 0.5;
    }

    let inner_err: RefCell<Option<NumericsError>> = RefCell::new(None);
    let q = integrate(
        |tau: f64| match integrand(tau) {
            Ok(v) => v,
            Err(e) => {
                inner_err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        tau_hi,
        cfg,
    );
    if let Some(e) = inner_err.into_inner() {
        return Err(e);
    }
    Ok(q?.value)
}

fn effective_rate_integral(
    net: &NetworkParams,
    tin: &TinParams,
    p_a: f64,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AnalyticsError> {
    let pi_lam = PI * net.lambda_b;
    let x_hi = serving_distance_cutoff(net, tin);
    let inner_err: RefCell<Option<NumericsError>> = RefCell::new(None);
    let q = integrate(
        |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let ri2 = r_i_squared(x, net, tin);
            match rate_tau_integral(x, ri2, net, p_a, cfg) {
                Ok(inner) => 2.0 * pi_lam * x * (-pi_lam * ri2).exp() * inner,
                Err(e) => {
                    inner_err.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        x_hi,
        cfg,
    );
    if let Some(e) = inner_err.into_inner() {
        return Err(e.into());
    }
    let q = q?;
    Ok(AnalyticResult { value: q.value.max(0.0), est_error: q.error })
}

/// Effective average rate of the scheduled network in nats/sec/Hz:
/// activation probability times the conditional rate.
pub fn rate_effective(
    net: &NetworkParams,
    tin: &TinParams,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AnalyticsError> {
    let pa = prob_tin(net, tin, cfg)?;
    effective_rate_integral(net, tin, pa.value, cfg)
}

/// Average rate of the typical active UE in nats/sec/Hz.
pub fn rate_active(
    net: &NetworkParams,
    tin: &TinParams,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AnalyticsError> {
    let pa = prob_tin(net, tin, cfg)?;
    if pa.value < DEGENERATE_PROB {
        return Err(AnalyticsError::DegenerateConditioning {
            p_tin: pa.value,
            limit: DEGENERATE_PROB,
        });
    }
    let eff = effective_rate_integral(net, tin, pa.value, cfg)?;
    Ok(AnalyticResult { value: eff.value / pa.value, est_error: eff.est_error / pa.value })
}

/// Average rate of the conventional network in nats/sec/Hz.
pub fn rate_classical(
    net: &NetworkParams,
    cfg: &QuadratureConfig,
) -> Result<AnalyticResult, AnalyticsError> {
    let lam = net.lambda_b;
    let pi_lam = PI * lam;
    let alpha = net.alpha;
    let two_over_alpha = 2.0 / alpha;
    let inv_beta = (-net.ln_beta()).exp();
    let x_hi = (TRUNC_LOG / pi_lam).sqrt();
    let inner_err: RefCell<Option<NumericsError>> = RefCell::new(None);

    let q = integrate(
        |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let x2 = x * x;
            let x_alpha = x.powf(alpha);
            let integrand = |tau: f64| -> Result<f64, NumericsError> {
                if tau <= 0.0 {
                    return Ok(1.0);
                }
                let em = tau.exp_m1();
                let em_2a = (two_over_alpha * em.ln()).exp();
                let j = interference_tail_integral(1.0 / em_2a, alpha)?;
                Ok((-(x_alpha * em * inv_beta + pi_lam * x2 * em_2a * j)).exp())
            };
            let mut peak = 1.0f64;
            let mut tau_hi = TAU_CEILING;
            let mut tau = 0.5;
            while tau <= TAU_CEILING {
                let h = match integrand(tau) {
                    Ok(v) => v,
                    Err(e) => {
                        inner_err.borrow_mut().get_or_insert(e);
                        return f64::NAN;
                    }
                };
                peak = peak.max(h);
                if h < TAU_PEAK_DROP * peak {
                    tau_hi = tau;
                    break;
                }
                tau += 0.5;
            }
            let inner = integrate(
                |tau: f64| match integrand(tau) {
                    Ok(v) => v,
                    Err(e) => {
                        inner_err.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                },
                0.0,
                tau_hi,
                cfg,
            );
            match inner {
                Ok(r) => 2.0 * pi_lam * x * (-pi_lam * x2).exp() * r.value,
                Err(e) => {
                    inner_err.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        x_hi,
        cfg,
    );
    if let Some(e) = inner_err.into_inner() {
        return Err(e.into());
    }
    let q = q?;
    Ok(AnalyticResult { value: q.value.max(0.0), est_error: q.error })
}

fn check_theta(theta: f64) -> Result<(), NumericsError> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(NumericsError::Domain(format!("theta must be > 0, got {theta}")));
    }
    Ok(())
}

/// Precomputed activation probability for repeated coverage/rate evaluations
/// at the same parameter point, e.g. across a sweep of SINR thresholds.
#[derive(Debug, Clone)]
pub struct TinModel {
    pub net: NetworkParams,
    pub tin: TinParams,
    pub cfg: QuadratureConfig,
    p_tin: AnalyticResult,
}

impl TinModel {
    pub fn new(
        net: NetworkParams,
        tin: TinParams,
        cfg: QuadratureConfig,
    ) -> Result<Self, AnalyticsError> {
        let p_tin = prob_tin(&net, &tin, &cfg)?;
        Ok(Self { net, tin, cfg, p_tin })
    }

    pub fn p_tin(&self) -> AnalyticResult {
        self.p_tin
    }

    pub fn coverage_effective(&self, theta: f64) -> Result<AnalyticResult, AnalyticsError> {
        check_theta(theta)?;
        effective_coverage_integral(theta, &self.net, &self.tin, self.p_tin.value, &self.cfg)
    }

    pub fn coverage_active(&self, theta: f64) -> Result<AnalyticResult, AnalyticsError> {
        check_theta(theta)?;
        self.require_non_degenerate()?;
        let eff = self.coverage_effective(theta)?;
        Ok(AnalyticResult {
            value: (eff.value / self.p_tin.value).clamp(0.0, 1.0),
            est_error: eff.est_error / self.p_tin.value,
        })
    }

    pub fn rate_effective(&self) -> Result<AnalyticResult, AnalyticsError> {
        effective_rate_integral(&self.net, &self.tin, self.p_tin.value, &self.cfg)
    }

    pub fn rate_active(&self) -> Result<AnalyticResult, AnalyticsError> {
        self.require_non_degenerate()?;
        let eff = self.rate_effective()?;
        Ok(AnalyticResult {
            value: eff.value / self.p_tin.value,
            est_error: eff.est_error / self.p_tin.value,
        })
    }

    pub fn laplace_interference(&self, s: f64, x11: f64) -> Result<f64, AnalyticsError> {
        laplace_interference(s, x11, &self.net, &self.tin, self.p_tin.value)
    }

    pub fn conditional_pdf_x11(&self, x11: f64) -> Result<f64, AnalyticsError> {
        conditional_pdf_x11(x11, &self.net, &self.tin, self.p_tin.value)
    }

    fn require_non_degenerate(&self) -> Result<(), AnalyticsError> {
        if self.p_tin.value < DEGENERATE_PROB {
            return Err(AnalyticsError::DegenerateConditioning {
                p_tin: self.p_tin.value,
                limit: DEGENERATE_PROB,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::inhomogeneity_radius;
    use crate::numerics::integrate_semi_infinite;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn paper_net(lambda_b: f64) -> NetworkParams {
        NetworkParams::from_dbm(lambda_b, 46.0, -110.0, 4.0).unwrap()
    }

    fn no_noise_net(lambda_b: f64, alpha: f64) -> NetworkParams {
        NetworkParams::new(lambda_b, 1e30, 1.0, alpha).unwrap()
    }

    #[test]
    fn prob_tin_is_one_at_mu2() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 2.0).unwrap();
        assert_eq!(prob_tin(&net, &tin, &cfg()).unwrap().value, 1.0);
        let tin_m = TinParams::new(7.0, 2.0).unwrap();
        assert_eq!(prob_tin(&net, &tin_m, &cfg()).unwrap().value, 1.0);
    }

    #[test]
    fn prob_tin_vanishes_at_mu1_high_snr() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 1.0).unwrap();
        let p = prob_tin(&net, &tin, &cfg()).unwrap().value;
        assert!(p < 1e-8, "got {p}");
    }

    #[test]
    fn prob_tin_monotone_in_mu() {
        let net = paper_net(5.0);
        let mut prev = 0.0;
        for i in 0..=10 {
            let mu = 1.0 + 0.1 * i as f64;
            let tin = TinParams::new(1.0, mu).unwrap();
            let p = prob_tin(&net, &tin, &cfg()).unwrap().value;
            assert!(p >= prev - 1e-12, "mu={mu}: {p} < {prev}");
            prev = p;
        }
        assert!((prev - 1.0).abs() < 1e-10);
    }

    #[test]
    fn conditional_pdf_reduces_to_rayleigh_at_mu2() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 2.0).unwrap();
        let pi_lam = PI * net.lambda_b;
        for &x in &[0.05, 0.2, 0.5, 1.0] {
            let got = conditional_pdf_x11(x, &net, &tin, 1.0).unwrap();
            let want = 2.0 * pi_lam * x * (-pi_lam * x * x).exp();
            assert!((got - want).abs() < 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn conditional_pdf_integrates_to_one() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 1.5).unwrap();
        let pa = prob_tin(&net, &tin, &cfg()).unwrap().value;
        let total = integrate_semi_infinite(
            |x: f64| {
                if x <= 0.0 {
                    0.0
                } else {
                    conditional_pdf_x11(x, &net, &tin, pa).unwrap()
                }
            },
            0.0,
            &cfg(),
        )
        .unwrap();
        assert!((total.value - 1.0).abs() < 1e-6, "got {}", total.value);
    }

    #[test]
    fn conditional_pdf_degenerate_conditioning() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 1.0).unwrap();
        let err = conditional_pdf_x11(0.1, &net, &tin, 1e-15).unwrap_err();
        assert!(matches!(err, AnalyticsError::DegenerateConditioning { .. }));
    }

    #[test]
    fn laplace_is_one_at_zero() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 1.8).unwrap();
        assert_eq!(laplace_interference(0.0, 0.3, &net, &tin, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn laplace_alpha4_closed_form_grid() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 2.0).unwrap();
        let pa = 1.0;
        for &x11 in &[0.1f64, 0.3, 0.7] {
            for &theta in &[0.5f64, 1.0, 10.0] {
                let s = x11.powi(4) * theta;
                let got = laplace_interference(s, x11, &net, &tin, pa).unwrap();
                let want = (-PI
                    * net.lambda_b
                    * pa
                    * x11
                    * x11
                    * theta.sqrt()
                    * (std::f64::consts::FRAC_PI_2 - (1.0 / theta.sqrt()).atan()))
                .exp();
                assert!((got - want).abs() < 1e-10, "x11={x11} theta={theta}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn laplace_non_increasing_in_s() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 1.7).unwrap();
        let pa = prob_tin(&net, &tin, &cfg()).unwrap().value;
        let mut prev = 1.0;
        for i in 0..20 {
            let s = 1e-3 * 10f64.powf(i as f64 * 0.3);
            let l = laplace_interference(s, 0.2, &net, &tin, pa).unwrap();
            assert!(l <= prev + 1e-14 && l > 0.0 && l <= 1.0);
            prev = l;
        }
    }

    #[test]
    fn coverage_matches_classical_at_degenerate_point() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 2.0).unwrap();
        for &theta_db in &[0.0, 5.0, 10.0] {
            let theta = 10f64.powf(theta_db / 10.0);
            let a = coverage_active(theta, &net, &tin, &cfg()).unwrap().value;
            let c = coverage_classical(theta, &net, &cfg()).unwrap().value;
            assert!((a - c).abs() < 1e-6, "theta_db={theta_db}: {a} vs {c}");
        }
    }

    #[test]
    fn coverage_interference_limited_closed_form() {
        // At β → ∞, α = 4, Θ = 1 the exponent is linear in x² and the integral
        // collapses to 1/(1 + π/4).
        let net = no_noise_net(5.0, 4.0);
        let tin = TinParams::new(1.0, 2.0).unwrap();
        let want = 1.0 / (1.0 + PI / 4.0);
        let a = coverage_active(1.0, &net, &tin, &cfg()).unwrap().value;
        let c = coverage_classical(1.0, &net, &cfg()).unwrap().value;
        assert!((a - want).abs() < 1e-6, "theorem path: {a} vs {want}");
        assert!((c - want).abs() < 1e-8, "classical path: {c} vs {want}");
    }

    #[test]
    fn coverage_decreasing_in_theta() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 1.8).unwrap();
        let model = TinModel::new(net, tin, cfg()).unwrap();
        let mut prev = f64::INFINITY;
        for &theta_db in &[-5.0, 0.0, 5.0, 10.0, 15.0, 20.0] {
            let v = model.coverage_effective(10f64.powf(theta_db / 10.0)).unwrap().value;
            assert!(v <= prev + 1e-10, "theta_db={theta_db}");
            prev = v;
        }
        let c0 = coverage_classical(1.0, &net, &cfg()).unwrap().value;
        let c10 = coverage_classical(10.0, &net, &cfg()).unwrap().value;
        assert!(c10 < c0);
    }

    #[test]
    fn effective_equals_prob_times_active() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 1.6).unwrap();
        let theta = 10.0;
        let pa = prob_tin(&net, &tin, &cfg()).unwrap().value;
        let active = coverage_active(theta, &net, &tin, &cfg()).unwrap().value;
        let eff = coverage_effective(theta, &net, &tin, &cfg()).unwrap().value;
        assert!((eff - pa * active).abs() < 1e-12 * eff.max(1e-30));
    }

    #[test]
    fn coverage_effective_defined_at_mu1() {
        // Effective coverage must not error in the degenerate regime; it is
        // simply ~0 because almost no cell stays on.
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 1.0).unwrap();
        let eff = coverage_effective(10.0, &net, &tin, &cfg()).unwrap().value;
        assert!(eff < 1e-8, "got {eff}");
        // With β pushed far enough, the activation probability drops below the
        // degeneracy threshold and conditional quantities refuse to evaluate.
        let extreme = NetworkParams::new(5.0, 1e26, 1.0, 4.0).unwrap();
        assert!(prob_tin(&extreme, &tin, &cfg()).unwrap().value < DEGENERATE_PROB);
        assert!(matches!(
            coverage_active(10.0, &extreme, &tin, &cfg()),
            Err(AnalyticsError::DegenerateConditioning { .. })
        ));
        assert!(matches!(
            rate_active(&extreme, &tin, &cfg()),
            Err(AnalyticsError::DegenerateConditioning { .. })
        ));
    }

    #[test]
    fn rate_matches_classical_at_degenerate_point() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 2.0).unwrap();
        let a = rate_active(&net, &tin, &cfg()).unwrap().value;
        let c = rate_classical(&net, &cfg()).unwrap().value;
        assert!((a - c).abs() < 1e-5, "{a} vs {c}");
    }

    #[test]
    fn rate_classical_scale_free_without_noise() {
        let want = rate_classical(&no_noise_net(1.0, 4.0), &cfg()).unwrap().value;
        for &lam in &[5.0, 10.0] {
            let got = rate_classical(&no_noise_net(lam, 4.0), &cfg()).unwrap().value;
            assert!((got - want).abs() < 1e-4, "lambda={lam}: {got} vs {want}");
        }
    }

    #[test]
    fn rate_classical_interference_limited_grid_oracle() {
        // Brute-force 2-D trapezoid grid over (x, τ), fully independent of the
        // adaptive quadrature path.
        let net = no_noise_net(1.0, 4.0);
        let pi_lam = PI * net.lambda_b;
        let (nx, nt) = (900, 900);
        let (x_max, t_max) = (3.5, 18.0);
        let dx = x_max / nx as f64;
        let dt = t_max / nt as f64;
        let mut total = 0.0;
        for i in 1..=nx {
            let x = i as f64 * dx;
            let wx = if i == nx { 0.5 } else { 1.0 };
            let mut inner = 0.0;
            for k in 0..=nt {
                let tau = k as f64 * dt;
                let wt = if k == 0 || k == nt { 0.5 } else { 1.0 };
                let em = tau.exp_m1();
                let term = if em <= 0.0 {
                    1.0
                } else {
                    let j = std::f64::consts::FRAC_PI_2 - (1.0 / em.sqrt()).atan();
                    (-pi_lam * x * x * em.sqrt() * j).exp()
                };
                inner += wt * term;
            }
            total += wx * 2.0 * pi_lam * x * (-pi_lam * x * x).exp() * inner * dt;
        }
        total *= dx;
        let got = rate_classical(&net, &cfg()).unwrap().value;
        assert!((got - total).abs() < 2e-3, "adaptive {got} vs grid {total}");
    }

    #[test]
    fn rate_equals_integral_of_coverage() {
        // E[ln(1+SINR)] = ∫_0^∞ P[SINR ≥ e^τ − 1] dτ, evaluated with the τ
        // integral outermost as an independent route.
        let net = paper_net(5.0);
        let from_coverage = integrate(
            |tau: f64| {
                if tau <= 0.0 {
                    return 1.0;
                }
                let em = tau.exp_m1();
                coverage_classical(em, &net, &cfg()).map(|r| r.value).unwrap_or(f64::NAN)
            },
            0.0,
            40.0,
            &QuadratureConfig { rel_tol: 1e-7, abs_tol: 1e-10, max_subdivisions: 400 },
        )
        .unwrap()
        .value;
        let direct = rate_classical(&net, &cfg()).unwrap().value;
        assert!((direct - from_coverage).abs() < 1e-4, "{direct} vs {from_coverage}");
    }

    #[test]
    fn radius_consistency_with_model() {
        let net = paper_net(5.0);
        let tin = TinParams::new(1.0, 1.4).unwrap();
        let r = inhomogeneity_radius(0.2, &net, &tin);
        assert!((r_i_squared(0.2, &net, &tin) - r * r).abs() < 1e-12 * r * r);
    }
}
