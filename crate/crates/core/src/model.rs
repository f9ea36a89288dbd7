//! Network and scheduler parameter records, unit conversions, and the TIN
//! scheduling predicates.
//!
//! All powers and ratios are evaluated in natural-log space: with SNRs around
//! 10^15.6, linear-space evaluation of α-th powers of distances overflows.

use thiserror::Error;

/// Invalid parameter values.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid {field}: {message}")]
pub struct ParamError {
    pub field: &'static str,
    pub message: String,
}

fn require(ok: bool, field: &'static str, message: String) -> Result<(), ParamError> {
    if ok {
        Ok(())
    } else {
        Err(ParamError { field, message })
    }
}

/// Physical description of the network: BS density, powers, and path loss.
///
/// Distances are unit-agnostic; `lambda_b` is in points per unit area and all
/// lengths are in the matching unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// Base-station density (points per unit area).
    pub lambda_b: f64,
    /// Transmit power, linear scale.
    pub tx_power: f64,
    /// Total noise power at the receiver, linear scale.
    pub noise_power: f64,
    /// Path-loss exponent, must exceed 2.
    pub alpha: f64,
}

impl NetworkParams {
    pub fn new(
        lambda_b: f64,
        tx_power: f64,
        noise_power: f64,
        alpha: f64,
    ) -> Result<Self, ParamError> {
        require(lambda_b > 0.0 && lambda_b.is_finite(), "lambda_b", format!("must be > 0, got {lambda_b}"))?;
        require(tx_power > 0.0 && tx_power.is_finite(), "tx_power", format!("must be > 0, got {tx_power}"))?;
        require(noise_power > 0.0 && noise_power.is_finite(), "noise_power", format!("must be > 0, got {noise_power}"))?;
        require(alpha > 2.0 && alpha.is_finite(), "alpha", format!("must be > 2, got {alpha}"))?;
        Ok(Self { lambda_b, tx_power, noise_power, alpha })
    }

    /// Construct from powers in dBm.
    pub fn from_dbm(lambda_b: f64, p_dbm: f64, n_dbm: f64, alpha: f64) -> Result<Self, ParamError> {
        require(p_dbm.is_finite(), "p_dbm", format!("must be finite, got {p_dbm}"))?;
        require(n_dbm.is_finite(), "n_dbm", format!("must be finite, got {n_dbm}"))?;
        // Normalize tx power to 1; only the ratio β = P/N enters any formula.
        Self::new(lambda_b, 1.0, 1.0 / beta_from_dbm(p_dbm, n_dbm), alpha)
    }

    /// Transmit-power-to-noise ratio β = P/N.
    pub fn beta(&self) -> f64 {
        self.tx_power / self.noise_power
    }

    /// ln β, the quantity actually used by the predicates.
    pub fn ln_beta(&self) -> f64 {
        self.tx_power.ln() - self.noise_power.ln()
    }
}

/// The two scheduler design knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TinParams {
    /// Multiplicative slack M ≥ 1 on the signal side of the condition.
    pub m_factor: f64,
    /// Exponent μ ∈ [1, 2] on the signal side of the condition.
    pub mu: f64,
}

impl TinParams {
    pub fn new(m_factor: f64, mu: f64) -> Result<Self, ParamError> {
        require(m_factor >= 1.0 && m_factor.is_finite(), "m_factor", format!("must be >= 1, got {m_factor}"))?;
        require((1.0..=2.0).contains(&mu), "mu", format!("must be in [1, 2], got {mu}"))?;
        Ok(Self { m_factor, mu })
    }
}

/// The three distances that drive every TIN decision for one cell:
/// serving link, most-interfered victim, and strongest interferer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceTriple {
    /// Serving-link distance from the tagged UE to its BS.
    pub x11: f64,
    /// Distance from the BS to the UE it interferes with most.
    pub x12: f64,
    /// Distance from the tagged UE to the strongest interfering BS.
    pub x21: f64,
}

impl DistanceTriple {
    pub fn new(x11: f64, x12: f64, x21: f64) -> Result<Self, ParamError> {
        require(x11 > 0.0 && x11.is_finite(), "x11", format!("must be > 0, got {x11}"))?;
        require(x12 > 0.0 && x12.is_finite(), "x12", format!("must be > 0, got {x12}"))?;
        require(x21 > 0.0 && x21.is_finite(), "x21", format!("must be > 0, got {x21}"))?;
        // Nearest-BS association: any other BS is at least as far as the serving one.
        require(x21 >= x11, "x21", format!("must be >= x11 ({x11}), got {x21}"))?;
        Ok(Self { x11, x12, x21 })
    }
}

/// Which activation rule the network applies after UE selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchedulingPolicy {
    /// Every BS transmits; no TIN check.
    Classical,
    /// Full condition on (x11, x12, x21).
    TinExact,
    /// Distributed condition using x21 in place of x12.
    TinSimplified,
}

impl SchedulingPolicy {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchedulingPolicy::Classical => "classical",
            SchedulingPolicy::TinExact => "tin-exact",
            SchedulingPolicy::TinSimplified => "tin-simplified",
        }
    }
}

impl std::str::FromStr for SchedulingPolicy {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, ParamError> {
        match s {
            "classical" => Ok(SchedulingPolicy::Classical),
            "tin-exact" => Ok(SchedulingPolicy::TinExact),
            "tin-simplified" => Ok(SchedulingPolicy::TinSimplified),
            other => Err(ParamError {
                field: "policy",
                message: format!(
                    "unknown policy {other:?} (expected classical | tin-exact | tin-simplified)"
                ),
            }),
        }
    }
}

impl std::fmt::Display for SchedulingPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Linear power ratio from a dBm difference: 10^{(p_dbm − n_dbm)/10}.
pub fn beta_from_dbm(p_dbm: f64, n_dbm: f64) -> f64 {
    10f64.powf((p_dbm - n_dbm) / 10.0)
}

/// ln κ for the activation bound x11 ≤ κ · (x12 x21)^{1/μ}
/// (simplified form: x11 ≤ κ · x21^{2/μ}), κ = M^{1/(αμ)} β^{−(2−μ)/(αμ)}.
pub(crate) fn ln_bound_coeff(net: &NetworkParams, tin: &TinParams) -> f64 {
    let am = net.alpha * tin.mu;
    tin.m_factor.ln() / am - (2.0 - tin.mu) / am * net.ln_beta()
}

/// Exclusion radius around an active UE: no active interferer can be closer.
///
/// Returns max(x11, x11^{μ/2} β^{(2−μ)/(2α)} M^{−1/(2α)}).
pub fn inhomogeneity_radius(x11: f64, net: &NetworkParams, tin: &TinParams) -> f64 {
    ln_inhomogeneity_radius(x11.ln(), net, tin).exp()
}

pub(crate) fn ln_inhomogeneity_radius(ln_x11: f64, net: &NetworkParams, tin: &TinParams) -> f64 {
    let two_alpha = 2.0 * net.alpha;
    let second = tin.mu / 2.0 * ln_x11 + (2.0 - tin.mu) / two_alpha * net.ln_beta()
        - tin.m_factor.ln() / two_alpha;
    ln_x11.max(second)
}

/// Full TIN activation test on a distance triple. `true` keeps the BS on.
///
/// Evaluates x11 ≤ M^{1/(αμ)} (N/P)^{(2−μ)/(αμ)} (x12 x21)^{1/μ} in log space;
/// the boundary case (equality) counts as active.
pub fn tin_exact_predicate(d: &DistanceTriple, net: &NetworkParams, tin: &TinParams) -> bool {
    d.x11.ln() <= ln_bound_coeff(net, tin) + (d.x12.ln() + d.x21.ln()) / tin.mu
}

/// Distributed TIN activation test using only the serving and strongest-interferer
/// distances; equals [`tin_exact_predicate`] with x12 := x21.
pub fn tin_simplified_predicate(
    x11: f64,
    x21: f64,
    net: &NetworkParams,
    tin: &TinParams,
) -> bool {
    x11.ln() <= ln_bound_coeff(net, tin) + 2.0 * x21.ln() / tin.mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn net(lambda_b: f64, alpha: f64, beta_exp10: f64) -> NetworkParams {
        NetworkParams::new(lambda_b, 10f64.powf(beta_exp10), 1.0, alpha).unwrap()
    }

    #[test]
    fn beta_from_dbm_examples() {
        let b = beta_from_dbm(46.0, -110.0);
        assert!((b / 10f64.powf(15.6) - 1.0).abs() < 1e-12);
        assert_eq!(beta_from_dbm(0.0, 0.0), 1.0);
        assert!((beta_from_dbm(30.0, 0.0) - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn invariants_rejected() {
        assert!(NetworkParams::new(0.0, 1.0, 1.0, 4.0).is_err());
        assert!(NetworkParams::new(5.0, 1.0, 1.0, 2.0).is_err());
        assert!(NetworkParams::new(5.0, -1.0, 1.0, 4.0).is_err());
        assert!(TinParams::new(0.5, 1.5).is_err());
        assert!(TinParams::new(1.0, 2.5).is_err());
        assert!(TinParams::new(1.0, 0.9).is_err());
        assert!(DistanceTriple::new(2.0, 1.0, 1.0).is_err());
        assert!(DistanceTriple::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn radius_collapses_at_mu2_m1() {
        let n = net(5.0, 4.0, 15.6);
        let t = TinParams::new(1.0, 2.0).unwrap();
        for &r in &[0.01, 0.5, 3.0] {
            assert!((inhomogeneity_radius(r, &n, &t) - r).abs() < 1e-12 * r);
        }
    }

    #[test]
    fn radius_mu1_matches_direct_arithmetic() {
        let n = net(5.0, 4.0, 15.6);
        let t = TinParams::new(1.0, 1.0).unwrap();
        // x11^{1/2} β^{1/8} at x11 = 1 is 10^{15.6/8} = 10^{1.95}.
        let want = 10f64.powf(1.95);
        let got = inhomogeneity_radius(1.0, &n, &t);
        assert!((got / want - 1.0).abs() < 1e-12, "got {got}, want {want}");
    }

    #[test]
    fn radius_large_m_picks_x11() {
        let n = net(5.0, 4.0, 15.6);
        let t = TinParams::new(16.0, 2.0).unwrap();
        // Second argument is 2 · 16^{−1/8} < 2, so the max picks x11 = 2.
        assert_eq!(inhomogeneity_radius(2.0, &n, &t), 2.0);
    }

    #[test]
    fn predicate_examples_mu2() {
        let n = net(5.0, 4.0, 15.6);
        let t = TinParams::new(1.0, 2.0).unwrap();
        // Reduces to x11² ≤ x12 · x21.
        let active = DistanceTriple::new(1.0, 2.0, 1.0).unwrap();
        assert!(tin_exact_predicate(&active, &n, &t));
        let off = DistanceTriple::new(2.0, 1.0, 2.0).unwrap();
        assert!(!tin_exact_predicate(&off, &n, &t));
        assert!(tin_simplified_predicate(1.0, 1.5, &n, &t));
        assert!(!tin_simplified_predicate(1.0, 0.5, &n, &t));
    }

    proptest! {
        /// Log-space predicate equals a direct evaluation of the SNR-form
        /// condition M (β x11^{−α})^μ ≥ β² (x12 x21)^{−α}.
        #[test]
        fn exact_predicate_matches_snr_form(
            x11 in 0.01f64..3.0,
            x12 in 0.01f64..5.0,
            gap in 0.0f64..3.0,
            mu in 1.0f64..2.0,
            m in 1.0f64..20.0,
        ) {
            let n = net(5.0, 4.0, 15.6);
            let t = TinParams::new(m, mu).unwrap();
            let x21 = x11 + gap;
            let d = DistanceTriple::new(x11, x12, x21).unwrap();
            // Same inequality, assembled from the SNR side in log space.
            let lhs = t.m_factor.ln() + t.mu * (n.ln_beta() - n.alpha * x11.ln());
            let rhs = 2.0 * n.ln_beta() - n.alpha * (x12.ln() + x21.ln());
            prop_assert_eq!(tin_exact_predicate(&d, &n, &t), lhs >= rhs);
        }

        /// Raising M only relaxes the bound.
        #[test]
        fn monotone_in_m(
            x11 in 0.01f64..3.0,
            x12 in 0.01f64..5.0,
            gap in 0.0f64..3.0,
            mu in 1.0f64..2.0,
            m in 1.0f64..10.0,
            extra in 0.0f64..10.0,
        ) {
            let n = net(5.0, 4.0, 15.6);
            let d = DistanceTriple::new(x11, x12, x11 + gap).unwrap();
            let t1 = TinParams::new(m, mu).unwrap();
            let t2 = TinParams::new(m + extra, mu).unwrap();
            if tin_exact_predicate(&d, &n, &t1) {
                prop_assert!(tin_exact_predicate(&d, &n, &t2));
            }
        }

        /// Simplified predicate is the exact predicate with x12 := x21.
        #[test]
        fn simplified_is_substitution(
            x11 in 0.01f64..3.0,
            gap in 0.0f64..3.0,
            mu in 1.0f64..2.0,
            m in 1.0f64..20.0,
        ) {
            let n = net(5.0, 4.0, 15.6);
            let t = TinParams::new(m, mu).unwrap();
            let x21 = x11 + gap;
            let d = DistanceTriple::new(x11, x21, x21).unwrap();
            prop_assert_eq!(
                tin_simplified_predicate(x11, x21, &n, &t),
                tin_exact_predicate(&d, &n, &t)
            );
        }

        /// At M = 1, μ = 2 both predicates are independent of β.
        #[test]
        fn beta_independence_at_degenerate_point(
            x11 in 0.01f64..3.0,
            x12 in 0.01f64..5.0,
            gap in 0.0f64..3.0,
            beta_exp in -3.0f64..20.0,
        ) {
            let t = TinParams::new(1.0, 2.0).unwrap();
            let n1 = net(5.0, 4.0, beta_exp);
            let n2 = net(5.0, 4.0, 0.0);
            let d = DistanceTriple::new(x11, x12, x11 + gap).unwrap();
            prop_assert_eq!(tin_exact_predicate(&d, &n1, &t), tin_exact_predicate(&d, &n2, &t));
        }

        /// The exclusion radius never falls below the serving distance.
        #[test]
        fn radius_at_least_x11(
            x11 in 1e-4f64..10.0,
            mu in 1.0f64..2.0,
            m in 1.0f64..10.0,
            alpha in 2.5f64..6.0,
        ) {
            let n = net(5.0, alpha, 15.6);
            let t = TinParams::new(m, mu).unwrap();
            prop_assert!(inhomogeneity_radius(x11, &n, &t) >= x11 * (1.0 - 1e-12));
        }
    }
}
