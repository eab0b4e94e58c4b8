//! Closed-form well-function approximations, their analytic derivatives,
//! and the percentage-error sweep machinery.
//!
//! The combined approximation pairs a five-term Ramanujan polynomial on
//! (0, 1] with a fitted exponential-log form on (1, 100]; the Swamee-Ojha,
//! Barry and Vatankhah formulas are transcribed exactly as published for
//! comparison. Intermediates that can overflow binary64 (u^4 e^(7.7u) in
//! Swamee-Ojha, u^2 e^(2u) in Vatankhah) only ever enter under a negative
//! fractional power, so those paths switch to log-space evaluation once the
//! inner logarithm passes ~690.

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::reference::{e1_derivative_exact, e1_reference, Argument, EULER_GAMMA};
use crate::series::{asymptotic_series, classical_series, ramanujan_series};
use std::fmt;
use std::str::FromStr;

/// Default stopping tolerance when a convergent series is used as an
/// evaluation route.
pub const SERIES_ROUTE_TOL: f64 = 1e-12;
/// Default term cap for series evaluation routes.
pub const SERIES_ROUTE_KMAX: u32 = 200;

/// Natural-log threshold past which growing intermediates switch to
/// log-space evaluation.
const LOG_OVERFLOW: f64 = 690.0;

/// The seven W(u) evaluation routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxKind {
    Proposed,
    SwameeOjha,
    Barry,
    Vatankhah,
    ClassicalSeries,
    RamanujanSeries,
    AsymptoticSeries,
}

impl ApproxKind {
    pub const ALL: [ApproxKind; 7] = [
        ApproxKind::Proposed,
        ApproxKind::SwameeOjha,
        ApproxKind::Barry,
        ApproxKind::Vatankhah,
        ApproxKind::ClassicalSeries,
        ApproxKind::RamanujanSeries,
        ApproxKind::AsymptoticSeries,
    ];

    /// The four closed forms that have hand-differentiated derivatives.
    pub const CLOSED_FORMS: [ApproxKind; 4] = [
        ApproxKind::Proposed,
        ApproxKind::SwameeOjha,
        ApproxKind::Barry,
        ApproxKind::Vatankhah,
    ];

    pub fn is_closed_form(self) -> bool {
        Self::CLOSED_FORMS.contains(&self)
    }
}

impl fmt::Display for ApproxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ApproxKind::Proposed => "proposed",
            ApproxKind::SwameeOjha => "swamee-ojha",
            ApproxKind::Barry => "barry",
            ApproxKind::Vatankhah => "vatankhah",
            ApproxKind::ClassicalSeries => "classical-series",
            ApproxKind::RamanujanSeries => "ramanujan-series",
            ApproxKind::AsymptoticSeries => "asymptotic-series",
        };
        f.write_str(s)
    }
}

impl FromStr for ApproxKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "proposed" => Ok(ApproxKind::Proposed),
            "swamee-ojha" | "swamee_ojha" | "swamee" => Ok(ApproxKind::SwameeOjha),
            "barry" => Ok(ApproxKind::Barry),
            "vatankhah" => Ok(ApproxKind::Vatankhah),
            "classical-series" | "classical" => Ok(ApproxKind::ClassicalSeries),
            "ramanujan-series" | "ramanujan" => Ok(ApproxKind::RamanujanSeries),
            "asymptotic-series" | "asymptotic" => Ok(ApproxKind::AsymptoticSeries),
            other => Err(Error::Domain(format!("unknown method '{other}'"))),
        }
    }
}

/// An evaluation route including the reference oracle itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WellMethod {
    Oracle,
    Approx(ApproxKind),
}

impl WellMethod {
    pub fn value(self, u: Argument) -> f64 {
        match self {
            WellMethod::Oracle => e1_reference(u).value,
            WellMethod::Approx(kind) => well_value(kind, u),
        }
    }
}

impl fmt::Display for WellMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WellMethod::Oracle => f.write_str("oracle"),
            WellMethod::Approx(kind) => kind.fmt(f),
        }
    }
}

impl FromStr for WellMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("oracle") {
            Ok(WellMethod::Oracle)
        } else {
            Ok(WellMethod::Approx(s.parse()?))
        }
    }
}

/// Coefficients of the fitted branch
/// `W(u) ~ a2^a1 exp(-a1 a3 u) [ln(1 + a4/u^a5)]^a1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eq10Coefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
}

impl Eq10Coefficients {
    /// The published coefficient set (a2^a1 ~ 0.7042, a1*a3 ~ 0.99994).
    pub const fn published() -> Self {
        Self {
            a1: 1.21,
            a2: 0.7484,
            a3: 0.8264,
            a4: 1.39,
            a5: 0.8346,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a5]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self {
            a1: a[0],
            a2: a[1],
            a3: a[2],
            a4: a[3],
            a5: a[4],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.as_array().iter().all(|c| c.is_finite() && *c > 0.0) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "coefficients must be positive and finite: {self:?}"
            )))
        }
    }
}

/// Five-term Ramanujan polynomial branch,
/// `-gamma - ln u + e^(-u/2) (u + u^2/4 + u^3/18 + u^4/144 + 23u^5/28800)`.
/// Intended for u in [0.001, 1]; evaluable for any u > 0.
pub fn ramanujan5(u: Argument) -> f64 {
    let x = u.value();
    let poly = x * (1.0 + x * (0.25 + x * (1.0 / 18.0 + x * (1.0 / 144.0 + x * (23.0 / 28800.0)))));
    -EULER_GAMMA - x.ln() + (-x / 2.0).exp() * poly
}

/// Fitted branch at the published coefficients; intended for u > 1.
pub fn eq10(u: Argument) -> f64 {
    eq10_with(u, &Eq10Coefficients::published())
}

/// Fitted branch `a2^a1 exp(-a1 a3 u) [ln(1 + a4/u^a5)]^a1` at arbitrary
/// coefficients.
pub fn eq10_with(u: Argument, c: &Eq10Coefficients) -> f64 {
    let x = u.value();
    let inner_log = (c.a4 * x.powf(-c.a5)).ln_1p();
    c.a2.powf(c.a1) * (-c.a1 * c.a3 * x).exp() * inner_log.powf(c.a1)
}

/// Combined approximation: Ramanujan quintic for u <= 1, fitted branch above.
pub fn w_proposed(u: Argument) -> f64 {
    if u.value() <= 1.0 {
        ramanujan5(u)
    } else {
        eq10(u)
    }
}

/// Swamee-Ojha (1990):
/// `[ (ln[(1+u)(0.56146/u + 0.65)])^-7.7 + u^4 e^(7.7u) (2+u)^3.7 ]^-0.13`.
pub fn w_swamee_ojha(u: Argument) -> f64 {
    let x = u.value();
    let ln_b = 4.0 * x.ln() + 7.7 * x + 3.7 * (2.0 + x).ln();
    if ln_b > LOG_OVERFLOW {
        // the first addend is at most ~1e-4 here, 300 orders below e^ln_b
        return (-0.13 * ln_b).exp();
    }
    let l = ((1.0 + x) * (0.56146 / x + 0.65)).ln();
    let a = l.powf(-7.7);
    let b = x.powi(4) * (7.7 * x).exp() * (2.0 + x).powf(3.7);
    (a + b).powf(-0.13)
}

/// Barry, Parlange and Li (2000), denominator constants as published
/// (0.5616 + 0.4385 does not sum to 1 exactly).
pub fn w_barry(u: Argument) -> f64 {
    let x = u.value();
    let g = barry_g(x);
    let f = 0.5615 / x - 0.4385 / (g * g);
    let d = 0.5616 + 0.4385 * (-2.2803 * x).exp();
    (-x).exp() * f.ln_1p() / d
}

fn barry_g(x: f64) -> f64 {
    1.0421 * x + 1.0 / (1.0 + x.powf(1.5)) + 1.0801 / (1.0 + 2.35 * x.powf(-1.0919))
}

/// Vatankhah (2014):
/// `[ (1 - 0.19u^0.7)^-2 / (ln(0.565/u + 4))^2 + u^2 e^(2u) ((u+1.384)/(u+0.444))^2 ]^-0.5`.
pub fn w_vatankhah(u: Argument) -> f64 {
    let x = u.value();
    let m = (x + 1.384) / (x + 0.444);
    let ln_r = 2.0 * x.ln() + 2.0 * x + 2.0 * m.ln();
    if ln_r > LOG_OVERFLOW {
        return (-0.5 * ln_r).exp();
    }
    let p = (1.0 - 0.19 * x.powf(0.7)).powi(-2);
    let q = (0.565 / x + 4.0).ln();
    let r = x * x * (2.0 * x).exp() * m * m;
    (p / (q * q) + r).powf(-0.5)
}

/// Signed percentage error `100 (w_ref - w_approx) / w_ref`.
pub fn percentage_error(w_ref: f64, w_approx: f64) -> Result<f64> {
    if w_ref == 0.0 {
        return Err(Error::Domain(
            "percentage error undefined for zero reference".into(),
        ));
    }
    Ok(100.0 * (w_ref - w_approx) / w_ref)
}

/// Evaluate any of the seven routes at u. Series routes use the default
/// truncation controls; the asymptotic route truncates near its optimal
/// order n ~ u (clamped to [1, 60]).
pub fn well_value(kind: ApproxKind, u: Argument) -> f64 {
    match kind {
        ApproxKind::Proposed => w_proposed(u),
        ApproxKind::SwameeOjha => w_swamee_ojha(u),
        ApproxKind::Barry => w_barry(u),
        ApproxKind::Vatankhah => w_vatankhah(u),
        ApproxKind::ClassicalSeries => {
            classical_series(u, SERIES_ROUTE_TOL, SERIES_ROUTE_KMAX)
                .expect("default truncation controls are valid")
                .value
        }
        ApproxKind::RamanujanSeries => {
            ramanujan_series(u, SERIES_ROUTE_TOL, SERIES_ROUTE_KMAX)
                .expect("default truncation controls are valid")
                .value
        }
        ApproxKind::AsymptoticSeries => {
            let n = (u.value().round() as i64).clamp(1, 60) as u32;
            asymptotic_series(u, n)
                .expect("n >= 1 by construction")
                .value
        }
    }
}

/// Analytic derivative dW/du of a closed-form route.
pub fn dw_du(kind: ApproxKind, u: Argument) -> Result<f64> {
    match kind {
        ApproxKind::Proposed => Ok(dw_proposed(u)),
        ApproxKind::SwameeOjha => Ok(dw_swamee_ojha(u)),
        ApproxKind::Barry => Ok(dw_barry(u)),
        ApproxKind::Vatankhah => Ok(dw_vatankhah(u)),
        other => Err(Error::Domain(format!(
            "no closed-form derivative for series route '{other}'"
        ))),
    }
}

fn dw_proposed(u: Argument) -> f64 {
    let x = u.value();
    if x <= 1.0 {
        let poly =
            x * (1.0 + x * (0.25 + x * (1.0 / 18.0 + x * (1.0 / 144.0 + x * (23.0 / 28800.0)))));
        let dpoly = 1.0 + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 36.0 + x * (23.0 / 5760.0))));
        -1.0 / x + (-x / 2.0).exp() * (dpoly - 0.5 * poly)
    } else {
        let c = Eq10Coefficients::published();
        let inner_log = (c.a4 * x.powf(-c.a5)).ln_1p();
        let dlog = -c.a4 * c.a5 / (x * (x.powf(c.a5) + c.a4));
        c.a1 * eq10(u) * (-c.a3 + dlog / inner_log)
    }
}

fn dw_swamee_ojha(u: Argument) -> f64 {
    let x = u.value();
    let w = w_swamee_ojha(u);
    let b_growth = 4.0 / x + 7.7 + 3.7 / (2.0 + x);
    let ln_b = 4.0 * x.ln() + 7.7 * x + 3.7 * (2.0 + x).ln();
    if ln_b > LOG_OVERFLOW {
        return -0.13 * w * b_growth;
    }
    let l = ((1.0 + x) * (0.56146 / x + 0.65)).ln();
    let dl = 1.0 / (1.0 + x) - 0.56146 / (x * (0.56146 + 0.65 * x));
    let a = l.powf(-7.7);
    let b = x.powi(4) * (7.7 * x).exp() * (2.0 + x).powf(3.7);
    let da = -7.7 * l.powf(-8.7) * dl;
    // dW = -0.13 (a+b)^-1.13 (a'+b'); routing through w keeps the
    // intermediate (a+b)^-1.13 from underflowing near u ~ 80
    -0.13 * w * (da + b * b_growth) / (a + b)
}

fn dw_barry(u: Argument) -> f64 {
    let x = u.value();
    let g = barry_g(x);
    let dg = 1.0421 - 1.5 * x.sqrt() / (1.0 + x.powf(1.5)).powi(2)
        + 1.0801 * 2.35 * 1.0919 * x.powf(-2.0919) / (1.0 + 2.35 * x.powf(-1.0919)).powi(2);
    let f = 0.5615 / x - 0.4385 / (g * g);
    let df = -0.5615 / (x * x) + 0.877 * dg / g.powi(3);
    let d = 0.5616 + 0.4385 * (-2.2803 * x).exp();
    let dd = -0.4385 * 2.2803 * (-2.2803 * x).exp();
    let ln_f = f.ln_1p();
    let e = (-x).exp();
    e * (-ln_f + df / (1.0 + f)) / d - e * ln_f * dd / (d * d)
}

fn dw_vatankhah(u: Argument) -> f64 {
    let x = u.value();
    let w = w_vatankhah(u);
    let m = (x + 1.384) / (x + 0.444);
    let dm = -0.94 / ((x + 0.444) * (x + 0.444));
    let r_growth = 2.0 / x + 2.0 + 2.0 * dm / m;
    let ln_r = 2.0 * x.ln() + 2.0 * x + 2.0 * m.ln();
    if ln_r > LOG_OVERFLOW {
        return -0.5 * w * r_growth;
    }
    let t = 1.0 - 0.19 * x.powf(0.7);
    let p = t.powi(-2);
    let dp = 0.266 * x.powf(-0.3) * t.powi(-3);
    let q = (0.565 / x + 4.0).ln();
    let dq = -0.565 / (x * (0.565 + 4.0 * x));
    let r = x * x * (2.0 * x).exp() * m * m;
    let s = p / (q * q) + r;
    let ds = dp / (q * q) - 2.0 * p * dq / q.powi(3) + r * r_growth;
    -0.5 * w * ds / s
}

/// What a sweep compares against the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepTarget {
    Value,
    Derivative,
}

impl FromStr for SweepTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "value" | "w" => Ok(SweepTarget::Value),
            "derivative" | "dw" => Ok(SweepTarget::Derivative),
            other => Err(Error::Domain(format!(
                "unknown target '{other}' (value|derivative)"
            ))),
        }
    }
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Copy)]
pub struct ErrorSample {
    pub u: f64,
    pub w_ref: f64,
    pub w_approx: f64,
    pub pe_percent: f64,
}

/// Full sweep record: every sample plus the worst absolute percentage error.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub kind: ApproxKind,
    pub target: SweepTarget,
    pub samples: Vec<ErrorSample>,
    pub max_abs_pe: f64,
    /// Argument attaining `max_abs_pe`; ties resolve to the smaller u.
    pub argmax_u: f64,
}

/// Percentage-error sweep of one route against the oracle over a grid
/// restricted to (0, 100].
pub fn sweep(kind: ApproxKind, grid: &GridSpec, target: SweepTarget) -> Result<SweepReport> {
    if grid.u_max > 100.0 {
        return Err(Error::Grid(format!(
            "sweep grid must stay within (0, 100], got u_max = {}",
            grid.u_max
        )));
    }
    if target == SweepTarget::Derivative && !kind.is_closed_form() {
        return Err(Error::Domain(format!(
            "derivative sweeps need a closed-form route, got '{kind}'"
        )));
    }
    let mut samples = Vec::with_capacity(grid.n_points);
    let mut max_abs_pe = -1.0;
    let mut argmax_u = grid.u_min;
    for x in grid.points() {
        let u = Argument::new(x)?;
        let (w_ref, w_approx) = match target {
            SweepTarget::Value => (e1_reference(u).value, well_value(kind, u)),
            SweepTarget::Derivative => (e1_derivative_exact(u), dw_du(kind, u)?),
        };
        let pe_percent = percentage_error(w_ref, w_approx)
            .map_err(|e| Error::Domain(format!("at u = {x}: {e}")))?;
        if pe_percent.abs() > max_abs_pe {
            max_abs_pe = pe_percent.abs();
            argmax_u = x;
        }
        samples.push(ErrorSample {
            u: x,
            w_ref,
            w_approx,
            pe_percent,
        });
    }
    Ok(SweepReport {
        kind,
        target,
        samples,
        max_abs_pe,
        argmax_u,
    })
}
