//! Bracketed scalar root finding.

use super::NumericsError;

/// Result of a bracketed search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootOutcome {
    /// A sign change was present; `x` is the located root.
    Bracketed { x: f64, f: f64 },
    /// No sign change on the interval; `x` is the endpoint with the smaller |f|.
    NoSignChange { x: f64, f: f64 },
}

impl RootOutcome {
    /// The root if one was bracketed.
    pub fn root(&self) -> Option<f64> {
        match *self {
            RootOutcome::Bracketed { x, .. } => Some(x),
            RootOutcome::NoSignChange { .. } => None,
        }
    }
}

/// Find a root of `f` on `[lo, hi]` by bisection, to bracket width `tol`.
///
/// If `f` has the same sign at both endpoints, reports which endpoint
/// minimises |f| instead of failing.
pub fn find_root_bracketed<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<RootOutcome, NumericsError> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(NumericsError::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(NumericsError::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let f_lo = f(lo);
    let f_hi = f(hi);
    if !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(NumericsError::Domain(format!(
            "non-finite function values at endpoints: f({lo})={f_lo}, f({hi})={f_hi}"
        )));
    }
    if f_lo == 0.0 {
        return Ok(RootOutcome::Bracketed { x: lo, f: 0.0 });
    }
    if f_hi == 0.0 {
        return Ok(RootOutcome::Bracketed { x: hi, f: 0.0 });
    }
    if f_lo.signum() == f_hi.signum() {
        let (x, fx) = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
        return Ok(RootOutcome::NoSignChange { x, f: fx });
    }

    let (mut a, mut b) = (lo, hi);
    let mut f_a = f_lo;
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let f_mid = f(mid);
        if !f_mid.is_finite() {
            return Err(NumericsError::Domain(format!("non-finite f({mid})={f_mid}")));
        }
        if f_mid == 0.0 {
            return Ok(RootOutcome::Bracketed { x: mid, f: 0.0 });
        }
        if f_mid.signum() == f_a.signum() {
            a = mid;
            f_a = f_mid;
        } else {
            b = mid;
        }
    }
    let x = 0.5 * (a + b);
    Ok(RootOutcome::Bracketed { x, f: f(x) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_root() {
        let r = find_root_bracketed(|x| x - 1.5, 1.0, 2.0, 1e-10).unwrap();
        assert!((r.root().unwrap() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn sqrt_two() {
        let r = find_root_bracketed(|x| x * x - 2.0, 1.0, 2.0, 1e-9).unwrap();
        assert!((r.root().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-7);
    }

    #[test]
    fn no_sign_change_picks_smaller_endpoint() {
        let r = find_root_bracketed(|x| x * x + 1.0, 1.0, 3.0, 1e-9).unwrap();
        match r {
            RootOutcome::NoSignChange { x, f } => {
                assert_eq!(x, 1.0);
                assert_eq!(f, 2.0);
            }
            other => panic!("expected no-sign-change, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(find_root_bracketed(|x| x, 2.0, 1.0, 1e-9).is_err());
        assert!(find_root_bracketed(|_| f64::NAN, 0.0, 1.0, 1e-9).is_err());
        assert!(find_root_bracketed(|x| x, 0.0, 1.0, 0.0).is_err());
    }

    proptest! {
        /// The located root is invariant under positive rescaling of f.
        #[test]
        fn rescale_invariance(c in 0.01f64..100.0, shift in -0.9f64..0.9) {
            let f = move |x: f64| x * x * x - shift;
            let g = move |x: f64| c * f(x);
            let a = find_root_bracketed(f, -1.0, 1.0, 1e-12).unwrap().root().unwrap();
            let b = find_root_bracketed(g, -1.0, 1.0, 1e-12).unwrap().root().unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}
