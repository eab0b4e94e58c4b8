//! Gautschi's two-sided inequalities for the exponential integral.
//!
//! For q > 1 and u >= 0, with I_q(u) = exp(u^q) * int_u^inf exp(-t^q) dt and
//! c_q = Gamma(1 + 1/q)^(q/(q-1)):
//!
//! ```text
//! (1/2) ((u^q + 2)^(1/q) - u)  <  I_q(u)  <=  c_q ((u^q + 1/c_q)^(1/q) - u)
//! ```
//!
//! In the q -> inf limit this becomes the elementary sandwich
//!
//! ```text
//! (1/2) ln(1 + 2/u)  <=  e^u E1(u)  <=  ln(1 + 1/u)
//! ```
//!
//! exposed here both in that exp-scaled form and multiplied through by e^-u
//! as direct bounds on E1(u), which is what every consumer wants. The lower
//! bound is asymptotically sharp: both sides expand as 1/u - 1/u^2 + O(1/u^3),
//! so the envelope pinches to a relative gap of (2/3)/u^2 at large u.

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::reference::Argument;

/// Threshold above which `e1_bounds` switches to log-scale values.
pub const LOG_SCALE_THRESHOLD: f64 = 500.0;

/// Two-sided envelope. `lower < upper` always; when `log_scale` is set the
/// fields carry natural logarithms of the bounds instead of the bounds
/// themselves (used past `LOG_SCALE_THRESHOLD`, where e^-u underflows plots).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    pub log_scale: bool,
}

/// Gautschi coefficient c_q = Gamma(1 + 1/q)^(q/(q-1)), finite for all q > 1
/// (it tends to e^(gamma - 1) ~ 0.655 as q -> 1+ and to 1 as q -> inf).
pub fn gautschi_coefficient(q: f64) -> Result<f64> {
    if q <= 1.0 || !q.is_finite() {
        return Err(Error::Domain(format!(
            "gautschi coefficient requires q > 1, got {q}"
        )));
    }
    // exp((q/(q-1)) * ln Gamma(1 + 1/q)) keeps the near-1 base well conditioned
    // when the exponent blows up as q -> 1+.
    let lg = gamma(1.0 + 1.0 / q).ln();
    Ok((q / (q - 1.0) * lg).exp())
}

/// Bounds on I_q(u) for u >= 0, q > 1.
pub fn iq_bounds(u: f64, q: f64) -> Result<BoundPair> {
    if u < 0.0 || !u.is_finite() {
        return Err(Error::Domain(format!("iq_bounds requires u >= 0, got {u}")));
    }
    let cq = gautschi_coefficient(q)?;
    let uq = u.powf(q);
    let lower = 0.5 * ((uq + 2.0).powf(1.0 / q) - u);
    let upper = cq * ((uq + 1.0 / cq).powf(1.0 / q) - u);
    Ok(BoundPair {
        lower,
        upper,
        log_scale: false,
    })
}

/// Bounds on e^u E1(u): lower = ln(1 + 2/u)/2, upper = ln(1 + 1/u).
pub fn e1_bounds_exp_form(u: Argument) -> BoundPair {
    let x = u.value();
    BoundPair {
        lower: 0.5 * (2.0 / x).ln_1p(),
        upper: (1.0 / x).ln_1p(),
        log_scale: false,
    }
}

/// Bounds on E1(u) itself. Past `LOG_SCALE_THRESHOLD` the pair is returned in
/// log scale (flagged) so extreme arguments stay representable.
pub fn e1_bounds(u: Argument) -> BoundPair {
    let x = u.value();
    let exp_form = e1_bounds_exp_form(u);
    if x > LOG_SCALE_THRESHOLD {
        BoundPair {
            lower: -x + exp_form.lower.ln(),
            upper: -x + exp_form.upper.ln(),
            log_scale: true,
        }
    } else {
        let e = (-x).exp();
        BoundPair {
            lower: e * exp_form.lower,
            upper: e * exp_form.upper,
            log_scale: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::e1_reference;
    use approx::assert_relative_eq;

    fn arg(u: f64) -> Argument {
        Argument::new(u).unwrap()
    }

    #[test]
    fn coefficient_reference_values() {
        // c_2 = Gamma(3/2)^2 = pi/4; the rest from mpmath at 50 digits
        assert_relative_eq!(
            gautschi_coefficient(2.0).unwrap(),
            std::f64::consts::FRAC_PI_4,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            gautschi_coefficient(3.0).unwrap(),
            0.8438441459705278,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            gautschi_coefficient(1.001).unwrap(),
            0.6554310796382963,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            gautschi_coefficient(1000.0).unwrap(),
            0.9994231958466593,
            max_relative = 1e-12
        );
        assert!(gautschi_coefficient(1.0).is_err());
        assert!(gautschi_coefficient(0.5).is_err());
    }

    #[test]
    fn iq_bounds_reference_points() {
        // I_2(0) = sqrt(pi)/2 attains the upper bound exactly
        let b = iq_bounds(0.0, 2.0).unwrap();
        assert_relative_eq!(
            b.lower,
            std::f64::consts::SQRT_2 / 2.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(b.upper, 0.886226925452758, max_relative = 1e-12);
        // I_2(1) = 0.37893607807065605 (quadrature), strictly inside
        let b = iq_bounds(1.0, 2.0).unwrap();
        let i2 = 0.37893607807065605;
        assert!(b.lower < i2 && i2 < b.upper);
        assert_relative_eq!(b.lower, 0.36602540378443865, max_relative = 1e-13);
        // I_2(10) = 0.04975365939122349, bounds pinch to the 1/(2u) scale
        let b = iq_bounds(10.0, 2.0).unwrap();
        let i2 = 0.04975365939122349;
        assert!(b.lower < i2 && i2 <= b.upper);
        assert!(b.upper / b.lower < 1.002);
        assert!(iq_bounds(-0.1, 2.0).is_err());
        assert!(iq_bounds(1.0, 1.0).is_err());
    }

    #[test]
    fn e1_bounds_at_unit_argument() {
        let b = e1_bounds(arg(1.0));
        assert_relative_eq!(b.lower, 0.20207843740965173, max_relative = 1e-14);
        assert_relative_eq!(b.upper, 0.25499459743395353, max_relative = 1e-14);
        let e1 = e1_reference(arg(1.0)).value;
        assert!(b.lower < e1 && e1 < b.upper);
    }

    #[test]
    fn sandwich_holds_on_log_grid() {
        let n = 2000;
        let (lo, hi) = (1e-3f64.ln(), 500f64.ln());
        for i in 0..n {
            let u = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
            let b = e1_bounds(arg(u));
            let e1 = e1_reference(arg(u)).value;
            assert!(!b.log_scale);
            assert!(b.lower < e1, "lower bound violated at u = {u}");
            assert!(e1 <= b.upper, "upper bound violated at u = {u}");
            // upper/lower = 2 ln(1+1/u)/ln(1+2/u) <= 2
            assert!(b.upper / b.lower <= 2.0 + 1e-15);
        }
    }

    #[test]
    fn log_scale_kicks_in_past_threshold() {
        let b = e1_bounds(arg(600.0));
        assert!(b.log_scale);
        assert!(b.lower < b.upper);
        // recover natural scale and compare against the oracle in log space
        let e1_ln = e1_reference(arg(600.0)).value.ln();
        assert!(b.lower < e1_ln && e1_ln <= b.upper);
    }

    #[test]
    fn iq_bounds_approach_the_limit_form() {
        // at u = 1 the substituted argument v^(1/q) is exactly 1, so q times
        // the I_q bounds must descend monotonically onto the exp-form envelope
        let target = e1_bounds_exp_form(arg(1.0));
        let mut prev_lower = f64::INFINITY;
        let mut prev_upper = f64::INFINITY;
        for q in [10.0, 100.0, 1000.0] {
            let b = iq_bounds(1.0, q).unwrap();
            let (scaled_lower, scaled_upper) = (q * b.lower, q * b.upper);
            assert!(scaled_lower > target.lower && scaled_lower < prev_lower);
            assert!(scaled_upper > target.upper && scaled_upper < prev_upper);
            prev_lower = scaled_lower;
            prev_upper = scaled_upper;
        }
        assert!((prev_lower - target.lower).abs() < 1e-3);
        assert!((prev_upper - target.upper).abs() < 1e-3);
    }
}
