//! Hydrological application layer: Theis drawdown and the discrete pumping
//! kernel U = (W[r^2 S/4tT] - W[r^2 S/4(t-tau)T]) / (4 pi T), the response to
//! a unit-duration pumping pulse. The kernel is a difference of two
//! well-function values, so relative errors of an approximation can amplify;
//! that amplification is exactly what the percentage-error columns measure.

use crate::approx::{percentage_error, WellMethod};
use crate::error::{Error, Result};
use crate::reference::{Argument, U_MAX};
use std::f64::consts::PI;

/// Pumping-test configuration. Units are documentation-level: metres for
/// lengths, weeks for times, m^2/week for transmissivity.
#[derive(Debug, Clone, PartialEq)]
pub struct AquiferCase {
    pub transmissivity: f64,
    pub storativity: f64,
    /// Pump shutoff time; the kernel applies for t > tau.
    pub tau: f64,
    pub radii: Vec<f64>,
    pub t_start: f64,
    pub t_end: f64,
    pub t_step: f64,
    /// Used by drawdown only; zero means an idle well.
    pub pumping_rate: f64,
}

impl AquiferCase {
    /// The classic benchmark pumping test used across the well-function
    /// literature: T = 10^4 m^2/week, S = 0.2, tau = 1 week, four radii from
    /// 1050 m to 4200 m, t from 2 to 18 weeks. Covers 0.30 < u < 89.
    pub fn benchmark() -> Self {
        Self {
            transmissivity: 1e4,
            storativity: 0.2,
            tau: 1.0,
            radii: vec![1050.0, 2100.0, 3150.0, 4200.0],
            t_start: 2.0,
            t_end: 18.0,
            t_step: 1.0,
            pumping_rate: 4.0 * PI * 1e4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("transmissivity", self.transmissivity),
            ("storativity", self.storativity),
            ("tau", self.tau),
            ("t_start", self.t_start),
            ("t_step", self.t_step),
        ];
        for (name, v) in positive {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if self.storativity > 1.0 {
            return Err(Error::Domain(format!(
                "storativity must lie in (0, 1], got {}",
                self.storativity
            )));
        }
        if self.radii.is_empty() || self.radii.iter().any(|r| *r <= 0.0 || !r.is_finite()) {
            return Err(Error::Domain(
                "radii must be a nonempty list of positive values".into(),
            ));
        }
        if self.t_start <= self.tau {
            return Err(Error::Domain(format!(
                "t_start must exceed tau ({} <= {}): the kernel applies after shutoff",
                self.t_start, self.tau
            )));
        }
        if self.t_end.is_nan() || self.t_end < self.t_start {
            return Err(Error::Domain("t_end must be at least t_start".into()));
        }
        if self.pumping_rate < 0.0 || !self.pumping_rate.is_finite() {
            return Err(Error::Domain("pumping rate must be nonnegative".into()));
        }
        Ok(())
    }

    /// Time grid t_start, t_start + t_step, ..., up to t_end inclusive.
    pub fn times(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let t = self.t_start + f64::from(i) * self.t_step;
            if t > self.t_end * (1.0 + 1e-12) {
                break;
            }
            out.push(t);
            i += 1;
        }
        out
    }
}

/// One kernel evaluation, carrying both the on- and off-pulse arguments.
#[derive(Debug, Clone, Copy)]
pub struct KernelSample {
    pub r: f64,
    pub t: f64,
    pub u_on: f64,
    pub u_off: f64,
    pub u_ref: f64,
    pub u_approx: f64,
    pub pe_percent: f64,
    /// Set when u_off > 700 and the subtracted term was taken as exactly 0.
    pub off_term_underflowed: bool,
}

/// Dimensionless argument u = r^2 S / (4 T t).
pub fn theis_u(r: f64, t: f64, storativity: f64, transmissivity: f64) -> Result<f64> {
    for (name, v) in [
        ("r", r),
        ("t", t),
        ("storativity", storativity),
        ("transmissivity", transmissivity),
    ] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::Domain(format!(
                "theis_u: {name} must be positive, got {v}"
            )));
        }
    }
    Ok(r * r * storativity / (4.0 * transmissivity * t))
}

fn well_or_underflow(method: WellMethod, u: f64) -> Result<(f64, bool)> {
    if u > U_MAX {
        return Ok((0.0, true));
    }
    Ok((method.value(Argument::new(u)?), false))
}

/// Theis drawdown h0 - h = Q W(u) / (4 pi T).
pub fn drawdown(r: f64, t: f64, case: &AquiferCase, method: WellMethod) -> Result<f64> {
    let u = theis_u(r, t, case.storativity, case.transmissivity)?;
    let (w, _) = well_or_underflow(method, u)?;
    Ok(case.pumping_rate / (4.0 * PI * case.transmissivity) * w)
}

/// Discrete pumping kernel at one (r, t); defined for t > tau.
pub fn discrete_kernel(
    r: f64,
    t: f64,
    case: &AquiferCase,
    method: WellMethod,
) -> Result<KernelSample> {
    if t <= case.tau {
        return Err(Error::Domain(format!(
            "kernel undefined before the well turns off (t = {t} <= tau = {})",
            case.tau
        )));
    }
    let u_on = theis_u(r, t, case.storativity, case.transmissivity)?;
    let u_off = theis_u(r, t - case.tau, case.storativity, case.transmissivity)?;
    let scale = 1.0 / (4.0 * PI * case.transmissivity);

    let (w_on_ref, _) = well_or_underflow(WellMethod::Oracle, u_on)?;
    let (w_off_ref, _) = well_or_underflow(WellMethod::Oracle, u_off)?;
    let u_ref = scale * (w_on_ref - w_off_ref);

    let (w_on, _) = well_or_underflow(method, u_on)?;
    let (w_off, off_term_underflowed) = well_or_underflow(method, u_off)?;
    let u_approx = scale * (w_on - w_off);

    let pe_percent = percentage_error(u_ref, u_approx)?;
    Ok(KernelSample {
        r,
        t,
        u_on,
        u_off,
        u_ref,
        u_approx,
        pe_percent,
        off_term_underflowed,
    })
}

/// Kernel over the full radii x times grid, r-major then t, deterministic.
pub fn kernel_sweep(case: &AquiferCase, method: WellMethod) -> Result<Vec<KernelSample>> {
    case.validate()?;
    let times = case.times();
    let mut out = Vec::with_capacity(case.radii.len() * times.len());
    for &r in &case.radii {
        for &t in &times {
            out.push(discrete_kernel(r, t, case, method)?);
        }
    }
    Ok(out)
}
