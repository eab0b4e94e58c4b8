//! Evaluation toolkit for the Theis well function W(u) = E1(u).
//!
//! The exponential integral shows up in every confined-aquifer pumping-test
//! analysis, and a long line of closed-form approximations compete on
//! accuracy and simplicity. This crate gathers the whole toolbox behind one
//! oracle so the competing routes can be measured instead of trusted:
//!
//! * [`reference`] — a high-precision E1 oracle (compensated power series
//!   below u = 1, modified-Lentz continued fraction above) and its exact
//!   derivative;
//! * [`series`] — classical, asymptotic, and Ramanujan expansions with
//!   truncation control and convergence diagnostics;
//! * [`bounds`] — Gautschi's elementary two-sided envelope for e^u E1(u);
//! * [`approx`] — a combined five-term-Ramanujan + fitted-exponential-log
//!   approximation, the Swamee-Ojha, Barry, and Vatankhah formulas, their
//!   analytic derivatives, and percentage-error sweeps;
//! * [`kernel`] — Theis drawdown and the discrete pumping kernel on the
//!   standard four-radius benchmark case;
//! * [`fit`] — Levenberg-Marquardt refit of the approximation coefficients
//!   against the oracle.
//!
//! Everything is a pure function of its arguments; concurrent use is safe.
//! The companion `wellfn-cli` crate exposes each piece as a CSV-emitting
//! subcommand, and `wellfn-wasm` drives an interactive browser demo.

pub mod approx;
pub mod bounds;
pub mod compensated;
mod error;
pub mod fit;
pub mod gamma;
pub mod grid;
pub mod kernel;
pub mod reference;
pub mod series;

pub use approx::{
    dw_du, eq10, eq10_with, percentage_error, ramanujan5, sweep, w_barry, w_proposed,
    w_swamee_ojha, w_vatankhah, well_value, ApproxKind, Eq10Coefficients, ErrorSample, SweepReport,
    SweepTarget, WellMethod,
};
pub use bounds::{e1_bounds, e1_bounds_exp_form, gautschi_coefficient, iq_bounds, BoundPair};
pub use error::{Error, Result};
pub use fit::{fit_eq9, jacobian_eq9, FitResult, FitTraceEntry};
pub use grid::{GridSpec, Spacing};
pub use kernel::{discrete_kernel, drawdown, kernel_sweep, theis_u, AquiferCase, KernelSample};
pub use reference::{e1_derivative_exact, e1_reference, Argument, OracleMethod, OracleValue};
pub use series::{
    asymptotic_optimal_truncation, asymptotic_series, classical_series, ramanujan_series,
    terms_to_converge, ConvergentSeries, EvalResult,
};
