//! Alternating-series summation with terms supplied in log space.

use super::NumericsError;

// exp() overflows just above this; a growing term this large can never cancel
// back down to a representable sum.
const LN_OVERFLOW: f64 = 700.0;

/// Sum Σ_n (−1)^n t_n where `ln_term_magnitude(n)` returns ln t_n (t_n ≥ 0).
///
/// Terminates when the next term magnitude drops below `tol · |partial sum|`.
/// Exhausting `n_max` terms yields a budget error, or a divergence error when
/// the magnitudes were still growing at the end.
pub fn sum_alternating_series<F: Fn(usize) -> f64>(
    ln_term_magnitude: F,
    tol: f64,
    n_max: usize,
) -> Result<f64, NumericsError> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(NumericsError::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    if n_max < 1 {
        return Err(NumericsError::Domain("n_max must be >= 1".into()));
    }

    let ln_t0 = ln_term_magnitude(0);
    if ln_t0 > LN_OVERFLOW {
        return Err(NumericsError::Divergent { at: 0 });
    }
    let mut sum = ln_t0.exp();
    let mut sign = -1.0;
    let mut prev_ln = ln_t0;
    let mut nondecreasing_streak = 0usize;

    for n in 1..=n_max {
        let ln_t = ln_term_magnitude(n);
        if !ln_t.is_finite() && ln_t != f64::NEG_INFINITY {
            return Err(NumericsError::Domain(format!("non-finite term magnitude at n={n}")));
        }
        if ln_t > LN_OVERFLOW {
            return Err(NumericsError::Divergent { at: n });
        }
        let t = ln_t.exp();
        if t < tol * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
        sum += sign * t;
        sign = -sign;
        if ln_t >= prev_ln {
            nondecreasing_streak += 1;
        } else {
            nondecreasing_streak = 0;
        }
        prev_ln = ln_t;
    }

    if nondecreasing_streak >= n_max / 2 {
        Err(NumericsError::Divergent { at: n_max })
    } else {
        Err(NumericsError::SeriesBudget { terms: n_max, partial: sum })
    }
}
