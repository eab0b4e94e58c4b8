//! Series representations of E1 with explicit truncation control.
//!
//! Three expansions with very different numerical personalities:
//!
//! * the classical convergent series `-gamma - ln u - sum (-1)^k u^k/(k k!)`,
//!   mathematically valid everywhere but alternating, so catastrophic
//!   cancellation limits it to small arguments in fixed precision;
//! * the divergent asymptotic expansion `(e^-u/u) sum k!/(-u)^k`, excellent
//!   at large arguments when truncated near its smallest term;
//! * Ramanujan's rearrangement, which after the `-u` substitution has all
//!   positive outer terms `u^k/(k! 2^(k-1)) * sum_{n<=(k-1)/2} 1/(2n+1)`
//!   under an `e^(-u/2)` prefactor, no term-level cancellation, and markedly
//!   fewer terms to a given accuracy than the classical form.
//!
//! `terms_to_converge` isolates truncation error from round-off by running
//! the partial sums in double-double precision; with plain binary64 the
//! classical series at u = 20 drowns in term round-off (peak term ~2e6
//! against a result ~1e-10) long before truncation matters.

use crate::compensated::DoubleDouble;
use crate::error::{Error, Result};
use crate::reference::{e1_reference, Argument, EULER_GAMMA, EULER_GAMMA_LO};

/// Term cap for `terms_to_converge`.
pub const CONVERGENCE_TERM_CAP: u32 = 500;

/// Outcome of a truncated series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: f64,
    pub terms_used: u32,
    /// True when the relative stopping rule fired before the term cap.
    /// Always false for the asymptotic expansion, which diverges.
    pub converged: bool,
    /// Magnitude of the last term actually added (prefactor included).
    pub last_term_magnitude: f64,
}

/// The two convergent expansions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergentSeries {
    Classical,
    Ramanujan,
}

fn check_truncation(tol: f64, k_max: u32) -> Result<()> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    Ok(())
}

/// Classical series, plain binary64 accumulation. Stops when a term's
/// relative contribution drops below `tol` twice in a row (the second hit is
/// the guard term), or at `k_max` with `converged = false`.
pub fn classical_series(u: Argument, tol: f64, k_max: u32) -> Result<EvalResult> {
    check_truncation(tol, k_max)?;
    let x = u.value();
    let mut sum = -EULER_GAMMA - x.ln();
    let mut power = 1.0; // u^k / k!
    let mut hits = 0u32;
    let mut last = f64::NAN;
    let mut terms_used = 0;
    for k in 1..=k_max {
        let kf = f64::from(k);
        power *= x / kf;
        let term = if k % 2 == 1 { power / kf } else { -power / kf };
        sum += term;
        last = term.abs();
        terms_used = k;
        if last <= tol * sum.abs() {
            hits += 1;
            if hits == 2 {
                return Ok(EvalResult {
                    value: sum,
                    terms_used,
                    converged: true,
                    last_term_magnitude: last,
                });
            }
        } else {
            hits = 0;
        }
    }
    Ok(EvalResult {
        value: sum,
        terms_used,
        converged: false,
        last_term_magnitude: last,
    })
}

/// Ramanujan's series for E1(u) = -Ei(-u). The inner sum over 1/(2n+1) grows
/// only when k passes an odd index, so it is updated incrementally.
pub fn ramanujan_series(u: Argument, tol: f64, k_max: u32) -> Result<EvalResult> {
    check_truncation(tol, k_max)?;
    let x = u.value();
    let base = -EULER_GAMMA - x.ln();
    let prefactor = (-x / 2.0).exp();
    let mut inner = 0.0;
    let mut power = x; // u^k / (k! 2^(k-1))
    let mut odd_sum = 1.0; // sum_{n=0}^{floor((k-1)/2)} 1/(2n+1)
    let mut hits = 0u32;
    let mut last = f64::NAN;
    let mut terms_used = 0;
    for k in 1..=k_max {
        let kf = f64::from(k);
        if k >= 3 && k % 2 == 1 {
            odd_sum += 1.0 / kf;
        }
        if k > 1 {
            power *= x / (2.0 * kf);
        }
        inner += power * odd_sum;
        let value = base + prefactor * inner;
        last = prefactor * power * odd_sum;
        terms_used = k;
        if last <= tol * value.abs() {
            hits += 1;
            if hits == 2 {
                return Ok(EvalResult {
                    value,
                    terms_used,
                    converged: true,
                    last_term_magnitude: last,
                });
            }
        } else {
            hits = 0;
        }
    }
    Ok(EvalResult {
        value: base + prefactor * inner,
        terms_used,
        converged: false,
        last_term_magnitude: last,
    })
}

/// Truncated asymptotic expansion (e^-u/u) * sum_{k=0}^{n_terms-1} k!/(-u)^k.
pub fn asymptotic_series(u: Argument, n_terms: u32) -> Result<EvalResult> {
    if n_terms == 0 {
        return Err(Error::Domain("n_terms must be at least 1".into()));
    }
    let x = u.value();
    let prefactor = (-x).exp() / x;
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 0..n_terms {
        if k > 0 {
            term *= -f64::from(k) / x;
        }
        sum += term;
    }
    Ok(EvalResult {
        value: prefactor * sum,
        terms_used: n_terms,
        converged: false,
        last_term_magnitude: (prefactor * term).abs(),
    })
}

/// Scan truncation orders 1..=n_max and return the one whose partial sum
/// lands closest to the reference, with its value. Ties keep the smaller
/// order; the scan stops early if terms overflow.
pub fn asymptotic_optimal_truncation(u: Argument, n_max: u32) -> Result<(u32, f64)> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let reference = e1_reference(u).value;
    let x = u.value();
    let prefactor = (-x).exp() / x;
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut best_n = 1;
    let mut best_value = f64::NAN;
    let mut best_err = f64::INFINITY;
    for n in 1..=n_max {
        if n > 1 {
            term *= -f64::from(n - 1) / x;
        }
        if !term.is_finite() {
            break;
        }
        sum += term;
        let value = prefactor * sum;
        let err = (value - reference).abs();
        if err < best_err {
            best_n = n;
            best_value = value;
            best_err = err;
        }
    }
    Ok((best_n, best_value))
}

/// Smallest number of series terms whose partial sum lies within
/// `rel_target` relative distance of the reference. Partial sums run in
/// double-double so the count reflects truncation, not round-off; `None`
/// means the target was not reached within [`CONVERGENCE_TERM_CAP`] terms.
pub fn terms_to_converge(
    method: ConvergentSeries,
    u: Argument,
    rel_target: f64,
) -> Result<Option<u32>> {
    if rel_target.is_nan() || rel_target <= 0.0 || rel_target >= 1.0 {
        return Err(Error::Domain(format!(
            "rel_target must lie in (0, 1), got {rel_target}"
        )));
    }
    let reference = e1_reference(u);
    if reference.underflow {
        return Err(Error::Domain(format!(
            "reference underflows at u = {} (u > 700)",
            u.value()
        )));
    }
    let x = u.value();
    let tol_abs = rel_target * reference.value;
    let base = DoubleDouble::new(-EULER_GAMMA, -EULER_GAMMA_LO) + DoubleDouble::from_f64(-x.ln());
    match method {
        ConvergentSeries::Classical => {
            let mut sum = base;
            let mut power = DoubleDouble::from_f64(1.0);
            for k in 1..=CONVERGENCE_TERM_CAP {
                let kf = f64::from(k);
                power = power.mul_f64(x).div_f64(kf);
                let term = power.div_f64(if k % 2 == 1 { kf } else { -kf });
                sum = sum + term;
                if (sum.to_f64() - reference.value).abs() <= tol_abs {
                    return Ok(Some(k));
                }
            }
            Ok(None)
        }
        ConvergentSeries::Ramanujan => {
            let prefactor = (-x / 2.0).exp();
            let mut inner = DoubleDouble::ZERO;
            let mut power = DoubleDouble::from_f64(x);
            let mut odd_sum = DoubleDouble::from_f64(1.0);
            for k in 1..=CONVERGENCE_TERM_CAP {
                let kf = f64::from(k);
                if k >= 3 && k % 2 == 1 {
                    odd_sum = odd_sum + DoubleDouble::from_f64(1.0).div_f64(kf);
                }
                if k > 1 {
                    power = power.mul_f64(x).div_f64(2.0 * kf);
                }
                inner = inner + power * odd_sum;
                let value = base + inner.mul_f64(prefactor);
                if (value.to_f64() - reference.value).abs() <= tol_abs {
                    return Ok(Some(k));
                }
            }
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn arg(u: f64) -> Argument {
        Argument::new(u).unwrap()
    }

    fn rel_err(value: f64, reference: f64) -> f64 {
        ((value - reference) / reference).abs()
    }

    #[test]
    fn classical_small_argument() {
        let r = classical_series(arg(0.001), 1e-12, 100).unwrap();
        assert!(r.converged);
        assert!(r.terms_used <= 6);
        assert_relative_eq!(r.value, 6.331539364136149, max_relative = 1e-12);

        let r = classical_series(arg(1.0), 1e-12, 100).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 0.21938393439552029, max_relative = 1e-12);
        assert!(r.last_term_magnitude <= 1e-12 * r.value.abs());
    }

    #[test]
    fn classical_large_argument_is_numerically_unreliable() {
        // At u = 20 the largest intermediate term is ~2e6 while the result is
        // ~1e-10: the stopping rule fires, but the value is round-off noise.
        let r = classical_series(arg(20.0), 1e-12, 200).unwrap();
        assert!(r.converged);
        let reference = e1_reference(arg(20.0)).value;
        assert!(
            rel_err(r.value, reference) > 1e-2,
            "expected cancellation damage, got rel err {:e}",
            rel_err(r.value, reference)
        );
    }

    #[test]
    fn classical_cap_reported_as_not_converged() {
        let r = classical_series(arg(5.0), 1e-14, 3).unwrap();
        assert!(!r.converged);
        assert_eq!(r.terms_used, 3);
    }

    #[test]
    fn ramanujan_matches_oracle() {
        let r = ramanujan_series(arg(1.0), 1e-12, 200).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 0.21938393439552029, max_relative = 1e-12);

        let r5 = ramanujan_series(arg(5.0), 1e-8, 200).unwrap();
        assert!(r5.converged);
        assert!(rel_err(r5.value, e1_reference(arg(5.0)).value) <= 1e-8);
    }

    #[test]
    fn ramanujan_five_terms_reproduce_the_quintic() {
        // first five outer terms = u + u^2/4 + u^3/18 + u^4/144 + 23u^5/28800
        for u in [0.1, 0.5, 1.0] {
            let r = ramanujan_series(arg(u), 1e-300, 5).unwrap();
            let poly =
                u + u * u / 4.0 + u.powi(3) / 18.0 + u.powi(4) / 144.0 + 23.0 * u.powi(5) / 28800.0;
            let direct = -EULER_GAMMA - u.ln() + (-u / 2.0).exp() * poly;
            assert_relative_eq!(r.value, direct, max_relative = 1e-14);
        }
    }

    #[test]
    fn ramanujan_inner_sum_sequence() {
        // sum_{n=0}^{floor((k-1)/2)} 1/(2n+1) for k = 1..6
        let expected = [1.0, 1.0, 4.0 / 3.0, 4.0 / 3.0, 23.0 / 15.0, 23.0 / 15.0];
        let mut odd_sum = 1.0;
        for (k, want) in (1u32..=6).zip(expected) {
            if k >= 3 && k % 2 == 1 {
                odd_sum += 1.0 / f64::from(k);
            }
            assert!((odd_sum - want).abs() <= 1e-15, "k = {k}");
        }
    }

    #[test]
    fn ramanujan_converges_in_fewer_terms_than_classical() {
        for u in [1.0, 2.0, 5.0] {
            let c = classical_series(arg(u), 1e-12, 400).unwrap();
            let r = ramanujan_series(arg(u), 1e-12, 400).unwrap();
            assert!(c.converged && r.converged);
            assert!(
                r.terms_used < c.terms_used,
                "u = {u}: ramanujan {} vs classical {}",
                r.terms_used,
                c.terms_used
            );
        }
    }

    #[test]
    fn convergent_series_track_oracle_over_small_range() {
        // log grid over [1e-3, 3]
        let n = 120;
        let (lo, hi) = (1e-3f64.ln(), 3f64.ln());
        for i in 0..n {
            let u = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
            let reference = e1_reference(arg(u)).value;
            let c = classical_series(arg(u), 1e-10, 200).unwrap();
            let r = ramanujan_series(arg(u), 1e-10, 200).unwrap();
            assert!(c.converged && r.converged, "u = {u}");
            assert!(rel_err(c.value, reference) <= 1e-10, "classical at u = {u}");
            assert!(rel_err(r.value, reference) <= 1e-10, "ramanujan at u = {u}");
        }
    }

    #[test]
    fn asymptotic_leading_term_and_divergence() {
        let one = asymptotic_series(arg(10.0), 1).unwrap();
        assert_relative_eq!(one.value, 4.539992976248485e-6, max_relative = 1e-14);
        assert!(!one.converged);

        let reference = e1_reference(arg(10.0)).value;
        let near_optimal = asymptotic_series(arg(10.0), 10).unwrap();
        assert!(rel_err(near_optimal.value, reference) < 1e-3);
        let past_optimal = asymptotic_series(arg(10.0), 40).unwrap();
        assert!(rel_err(past_optimal.value, reference) > 1.0);
    }

    #[test]
    fn asymptotic_partial_sums_bracket_reference_while_terms_decrease() {
        for u in [5.0, 10.0, 20.0] {
            let reference = e1_reference(arg(u)).value;
            let limit = u as u32 - 1;
            for n in 1..limit {
                let lo = asymptotic_series(arg(u), n).unwrap().value - reference;
                let hi = asymptotic_series(arg(u), n + 1).unwrap().value - reference;
                assert!(lo * hi < 0.0, "u = {u}, n = {n}");
            }
        }
    }

    #[test]
    fn optimal_truncation_scan() {
        // near u = 15 the best order sits at n ~ u
        let (n, value) = asymptotic_optimal_truncation(arg(15.0), 60).unwrap();
        assert!((12..=18).contains(&n), "n = {n}");
        assert!(rel_err(value, e1_reference(arg(15.0)).value) < 1e-5);

        // at u = 50 the binary64 error floor is reached well before n = u:
        // the term at n ~ 21 is already below 1 ulp of the sum
        let (n, value) = asymptotic_optimal_truncation(arg(50.0), 80).unwrap();
        assert!(n <= 30, "n = {n}");
        assert!(rel_err(value, e1_reference(arg(50.0)).value) <= 1e-14);

        // small argument: the expansion is useless no matter the order
        let (_, value) = asymptotic_optimal_truncation(arg(2.0), 80).unwrap();
        assert!(rel_err(value, e1_reference(arg(2.0)).value) > 1e-3);
    }

    #[test]
    fn terms_to_converge_reference_counts() {
        // counts cross-checked against 40-digit partial sums
        let cases = [
            (0.5, 1e-6, 6u32, 6u32),
            (1.0, 1e-6, 9, 7),
            (2.0, 1e-6, 13, 10),
            (5.0, 1e-6, 24, 17),
        ];
        for (u, target, classical, ramanujan) in cases {
            assert_eq!(
                terms_to_converge(ConvergentSeries::Classical, arg(u), target).unwrap(),
                Some(classical),
                "classical at u = {u}"
            );
            assert_eq!(
                terms_to_converge(ConvergentSeries::Ramanujan, arg(u), target).unwrap(),
                Some(ramanujan),
                "ramanujan at u = {u}"
            );
        }
        assert!(
            terms_to_converge(ConvergentSeries::Classical, arg(0.01), 1e-10)
                .unwrap()
                .unwrap()
                <= 5
        );
    }

    #[test]
    fn classical_needs_seventy_odd_terms_for_two_digits_at_twenty() {
        let n = terms_to_converge(ConvergentSeries::Classical, arg(20.0), 1e-2)
            .unwrap()
            .expect("reachable in double-double");
        assert!((50..=90).contains(&n), "n = {n}");
    }

    #[test]
    fn round_off_floor_reported_as_sentinel() {
        // at u = 20 a 1e-10 relative target sits below what the e^(-u/2)
        // prefactor rounding allows for the ramanujan form
        let r = terms_to_converge(ConvergentSeries::Ramanujan, arg(20.0), 1e-10).unwrap();
        assert_eq!(r, None);
    }

    #[test]
    fn validates_inputs() {
        assert!(classical_series(arg(1.0), 0.0, 10).is_err());
        assert!(classical_series(arg(1.0), 1e-6, 0).is_err());
        assert!(asymptotic_series(arg(1.0), 0).is_err());
        assert!(terms_to_converge(ConvergentSeries::Classical, arg(1.0), 1.5).is_err());
        assert!(terms_to_converge(ConvergentSeries::Classical, arg(701.0), 0.5).is_err());
    }
}
