//! Evaluation grids for sweeps, bound envelopes, and fitting.

use crate::error::{Error, Result};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "log" => Ok(Spacing::Log),
            "linear" | "lin" => Ok(Spacing::Linear),
            other => Err(Error::Grid(format!(
                "unknown spacing '{other}' (log|linear)"
            ))),
        }
    }
}

/// A deterministic 1-D grid over (u_min, u_max), endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(u_min: f64, u_max: f64, n_points: usize, spacing: Spacing) -> Result<Self> {
        if !u_min.is_finite() || !u_max.is_finite() {
            return Err(Error::Grid("grid endpoints must be finite".into()));
        }
        if u_min <= 0.0 {
            return Err(Error::Grid(format!("u_min must be positive, got {u_min}")));
        }
        if u_min >= u_max {
            return Err(Error::Grid(format!(
                "u_min must be below u_max, got [{u_min}, {u_max}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::Grid(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        Ok(Self {
            u_min,
            u_max,
            n_points,
            spacing,
        })
    }

    /// 2000 log-spaced points on [1e-3, 100]: the default error-sweep grid.
    pub fn default_sweep() -> Self {
        Self {
            u_min: 1e-3,
            u_max: 100.0,
            n_points: 2000,
            spacing: Spacing::Log,
        }
    }

    /// 500 log-spaced points just inside (1, 100]: the default fit grid.
    pub fn default_fit() -> Self {
        Self {
            u_min: 1.001,
            u_max: 100.0,
            n_points: 500,
            spacing: Spacing::Log,
        }
    }

    /// 1000 log-spaced points on [1e-3, 500]: the default bounds-envelope grid.
    pub fn default_bounds() -> Self {
        Self {
            u_min: 1e-3,
            u_max: 500.0,
            n_points: 1000,
            spacing: Spacing::Log,
        }
    }

    /// Materialize the grid, endpoints exact.
    pub fn points(&self) -> Vec<f64> {
        let n = self.n_points;
        let mut pts = Vec::with_capacity(n);
        match self.spacing {
            Spacing::Log => {
                let (lo, hi) = (self.u_min.ln(), self.u_max.ln());
                for i in 0..n {
                    pts.push((lo + (hi - lo) * i as f64 / (n - 1) as f64).exp());
                }
            }
            Spacing::Linear => {
                for i in 0..n {
                    pts.push(self.u_min + (self.u_max - self.u_min) * i as f64 / (n - 1) as f64);
                }
            }
        }
        pts[0] = self.u_min;
        pts[n - 1] = self.u_max;
        pts
    }
}
