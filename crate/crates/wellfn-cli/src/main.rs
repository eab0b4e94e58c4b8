//! Batch front end for the well-function toolkit. Every subcommand writes
//! one CSV table to stdout (or `--out`); run metadata goes to stderr so that
//! identical invocations produce byte-identical data.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use wellfn::{
    asymptotic_series, classical_series, discrete_kernel, e1_bounds, e1_reference, fit_eq9,
    ramanujan_series, sweep, terms_to_converge, well_value, ApproxKind, AquiferCase, Argument,
    ConvergentSeries, Eq10Coefficients, GridSpec, Spacing, SweepTarget, WellMethod,
};

#[derive(Parser)]
#[command(
    name = "wellfn",
    about = "Theis well function W(u) = E1(u): evaluation, error sweeps, bounds, kernel, refit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Lower grid edge
    #[arg(long)]
    u_min: Option<f64>,
    /// Upper grid edge
    #[arg(long)]
    u_max: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    points: Option<usize>,
    /// Point spacing: log or linear
    #[arg(long)]
    spacing: Option<String>,
}

impl GridArgs {
    fn resolve(&self, defaults: GridSpec) -> Result<GridSpec> {
        let spacing = match &self.spacing {
            Some(s) => Spacing::from_str(s)?,
            None => defaults.spacing,
        };
        Ok(GridSpec::new(
            self.u_min.unwrap_or(defaults.u_min),
            self.u_max.unwrap_or(defaults.u_max),
            self.points.unwrap_or(defaults.n_points),
            spacing,
        )?)
    }
}

#[derive(Args)]
struct OutArg {
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one route at a single argument; emits "u,value"
    Eval {
        /// oracle, proposed, swamee-ojha, barry, vatankhah, classical-series,
        /// ramanujan-series, asymptotic-series
        #[arg(long)]
        method: String,
        #[arg(long, allow_negative_numbers = true)]
        u: f64,
        /// Relative stopping tolerance for convergent series routes
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Term cap for convergent series routes
        #[arg(long, default_value_t = 200)]
        k_max: u32,
        /// Truncation order for the asymptotic route (default: round(u))
        #[arg(long)]
        terms: Option<u32>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Terms needed to reach a relative target, classical vs ramanujan
    Converge {
        #[arg(long, default_value_t = 1e-6)]
        rel_target: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gautschi envelope and oracle; emits "u,lower,oracle,upper"
    Bounds {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Percentage-error sweep of one route; footer row carries max |PE|
    Sweep {
        #[arg(long)]
        method: String,
        /// value or derivative
        #[arg(long, default_value = "value")]
        target: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Discrete pumping kernel over the radii x times grid
    Kernel {
        /// key=value case file (transmissivity, storativity, tau, radii,
        /// t_start, t_end, t_step, pumping_rate)
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "proposed")]
        method: String,
        #[arg(long)]
        transmissivity: Option<f64>,
        #[arg(long)]
        storativity: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        /// Comma-separated radii in metres
        #[arg(long)]
        radii: Option<String>,
        #[arg(long)]
        t_start: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        t_step: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Refit the approximation coefficients against the oracle
    Fit {
        /// Comma-separated starting coefficients a1,a2,a3,a4,a5
        #[arg(long, default_value = "1.21,0.7484,0.8264,1.39,0.8346")]
        init: String,
        #[arg(long, default_value_t = wellfn::fit::DEFAULT_MAX_ITER)]
        max_iter: u32,
        #[arg(long, default_value_t = wellfn::fit::DEFAULT_TOL)]
        tol: f64,
        /// Write the iteration trace CSV here
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Max |PE| matrix (four closed forms x {W, dW/du}) on one grid
    Table1 {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArg,
    },
}

/// Round-trippable number formatting: plain decimal in a sane range,
/// scientific outside it.
fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn write_out(out: &OutArg, csv: &str) -> Result<()> {
    match &out.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(csv.as_bytes())?;
        }
    }
    Ok(())
}

fn arg(u: f64) -> Result<Argument> {
    Ok(Argument::new(u)?)
}

fn run_eval(method: &str, u: f64, tol: f64, k_max: u32, terms: Option<u32>) -> Result<String> {
    let method: WellMethod = method.parse()?;
    let u = arg(u)?;
    let value = match method {
        WellMethod::Oracle => {
            let v = e1_reference(u);
            if v.underflow {
                eprintln!("# warning: E1 underflows binary64 for u > 700; reporting 0");
            }
            v.value
        }
        WellMethod::Approx(ApproxKind::ClassicalSeries) => {
            let r = classical_series(u, tol, k_max)?;
            if !r.converged {
                eprintln!("# warning: classical series hit the term cap without converging");
            }
            r.value
        }
        WellMethod::Approx(ApproxKind::RamanujanSeries) => {
            let r = ramanujan_series(u, tol, k_max)?;
            if !r.converged {
                eprintln!("# warning: ramanujan series hit the term cap without converging");
            }
            r.value
        }
        WellMethod::Approx(ApproxKind::AsymptoticSeries) => {
            let n = terms.unwrap_or_else(|| (u.value().round() as i64).clamp(1, 60) as u32);
            asymptotic_series(u, n)?.value
        }
        WellMethod::Approx(kind) => well_value(kind, u),
    };
    eprintln!("# eval method={method} u={}", num(u.value()));
    Ok(format!("u,value\n{},{}\n", num(u.value()), num(value)))
}

fn run_converge(rel_target: f64, grid: &GridSpec) -> Result<String> {
    let mut csv = String::from("u,classical_terms,ramanujan_terms\n");
    for u in grid.points() {
        let u = arg(u)?;
        let cell = |r: Option<u32>| r.map(|n| n.to_string()).unwrap_or_default();
        let classical = terms_to_converge(ConvergentSeries::Classical, u, rel_target)?;
        let ramanujan = terms_to_converge(ConvergentSeries::Ramanujan, u, rel_target)?;
        csv.push_str(&format!(
            "{},{},{}\n",
            num(u.value()),
            cell(classical),
            cell(ramanujan)
        ));
    }
    eprintln!(
        "# converge rel_target={rel_target} grid=[{},{}]x{} (empty cell: not reached within cap)",
        num(grid.u_min),
        num(grid.u_max),
        grid.n_points
    );
    Ok(csv)
}

fn run_bounds(grid: &GridSpec) -> Result<String> {
    if grid.u_max > 700.0 {
        bail!("bounds grid must stay within (0, 700] so the oracle column is representable");
    }
    let mut csv = String::from("u,lower,oracle,upper\n");
    for u in grid.points() {
        let u = arg(u)?;
        let b = e1_bounds(u);
        // past the internal log-scale threshold, map back to natural scale;
        // representable here because u <= 700
        let (lower, upper) = if b.log_scale {
            (b.lower.exp(), b.upper.exp())
        } else {
            (b.lower, b.upper)
        };
        let oracle = e1_reference(u).value;
        csv.push_str(&format!(
            "{},{},{},{}\n",
            num(u.value()),
            num(lower),
            num(oracle),
            num(upper)
        ));
    }
    eprintln!(
        "# bounds grid=[{},{}]x{}",
        num(grid.u_min),
        num(grid.u_max),
        grid.n_points
    );
    Ok(csv)
}

fn run_sweep(method: &str, target: &str, grid: &GridSpec) -> Result<String> {
    let kind: ApproxKind = method.parse()?;
    let target: SweepTarget = target.parse()?;
    let report = sweep(kind, grid, target)?;
    let header = match target {
        SweepTarget::Value => "u,w_ref,w_approx,pe_percent",
        SweepTarget::Derivative => "u,dw_ref,dw_approx,pe_percent",
    };
    let mut csv = String::from(header);
    csv.push('\n');
    for s in &report.samples {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            num(s.u),
            num(s.w_ref),
            num(s.w_approx),
            num(s.pe_percent)
        ));
    }
    csv.push_str(&format!(
        "max_abs_pe,{},{}\n",
        num(report.argmax_u),
        num(report.max_abs_pe)
    ));
    eprintln!(
        "# sweep method={kind} target={target:?} grid=[{},{}]x{}",
        num(grid.u_min),
        num(grid.u_max),
        grid.n_points
    );
    Ok(csv)
}

fn parse_radii(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("bad radius '{p}'"))
        })
        .collect()
}

fn load_case_file(path: &PathBuf, case: &mut AquiferCase) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("{}:{}: expected key=value", path.display(), lineno + 1))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        let parse = || -> Result<f64> {
            value
                .parse::<f64>()
                .with_context(|| format!("{}:{}: bad number '{value}'", path.display(), lineno + 1))
        };
        match key.as_str() {
            "transmissivity" | "t" => case.transmissivity = parse()?,
            "storativity" | "s" => case.storativity = parse()?,
            "tau" => case.tau = parse()?,
            "radii" | "r" => case.radii = parse_radii(value)?,
            "t_start" | "t-start" => case.t_start = parse()?,
            "t_end" | "t-end" => case.t_end = parse()?,
            "t_step" | "t-step" => case.t_step = parse()?,
            "pumping_rate" | "q" => case.pumping_rate = parse()?,
            other => bail!("{}:{}: unknown key '{other}'", path.display(), lineno + 1),
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_kernel(
    config: Option<&PathBuf>,
    method: &str,
    transmissivity: Option<f64>,
    storativity: Option<f64>,
    tau: Option<f64>,
    radii: Option<&String>,
    t_start: Option<f64>,
    t_end: Option<f64>,
    t_step: Option<f64>,
) -> Result<String> {
    let method: WellMethod = method.parse()?;
    let mut case = AquiferCase::benchmark();
    if let Some(path) = config {
        load_case_file(path, &mut case)?;
    }
    if let Some(v) = transmissivity {
        case.transmissivity = v;
    }
    if let Some(v) = storativity {
        case.storativity = v;
    }
    if let Some(v) = tau {
        case.tau = v;
    }
    if let Some(s) = radii {
        case.radii = parse_radii(s)?;
    }
    if let Some(v) = t_start {
        case.t_start = v;
    }
    if let Some(v) = t_end {
        case.t_end = v;
    }
    if let Some(v) = t_step {
        case.t_step = v;
    }
    case.validate()?;

    let mut csv = String::from("r,t,u_on,u_off,U_ref,U_approx,pe_percent\n");
    let times = case.times();
    for &r in &case.radii {
        for &t in &times {
            let s = discrete_kernel(r, t, &case, method)?;
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                num(s.r),
                num(s.t),
                num(s.u_on),
                num(s.u_off),
                num(s.u_ref),
                num(s.u_approx),
                num(s.pe_percent)
            ));
        }
    }
    eprintln!(
        "# kernel method={method} T={} S={} tau={} radii={:?} t={}..{} step {}",
        case.transmissivity,
        case.storativity,
        case.tau,
        case.radii,
        case.t_start,
        case.t_end,
        case.t_step
    );
    Ok(csv)
}

fn run_fit(
    init: &str,
    max_iter: u32,
    tol: f64,
    grid: &GridSpec,
    trace: Option<&PathBuf>,
) -> Result<String> {
    let parts: Vec<f64> = init
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("bad coefficient '{p}'"))
        })
        .collect::<Result<_>>()?;
    if parts.len() != 5 {
        bail!("--init needs exactly five comma-separated coefficients");
    }
    let init = Eq10Coefficients::from_array([parts[0], parts[1], parts[2], parts[3], parts[4]]);
    let result = fit_eq9(grid, init, max_iter, tol)?;

    if let Some(path) = trace {
        let mut trace_csv = String::from("iteration,residual_norm,lambda\n");
        for e in &result.trace {
            trace_csv.push_str(&format!(
                "{},{},{}\n",
                e.iteration,
                num(e.residual_norm),
                num(e.lambda)
            ));
        }
        fs::write(path, trace_csv).with_context(|| format!("writing {}", path.display()))?;
    }

    let c = result.coefficients;
    eprintln!(
        "# fit grid=[{},{}]x{} max_iter={max_iter} tol={tol} converged={}",
        num(grid.u_min),
        num(grid.u_max),
        grid.n_points,
        result.converged
    );
    Ok(format!(
        "a1,a2,a3,a4,a5,iterations,residual_norm,max_pe_percent,converged\n{},{},{},{},{},{},{},{},{}\n",
        num(c.a1),
        num(c.a2),
        num(c.a3),
        num(c.a4),
        num(c.a5),
        result.iterations,
        num(result.final_residual_norm),
        num(result.max_pe_over_fit_domain),
        result.converged
    ))
}

fn run_table1(grid: &GridSpec) -> Result<String> {
    let mut csv = String::from("method,max_abs_pe_value,max_abs_pe_derivative\n");
    for kind in ApproxKind::CLOSED_FORMS {
        let value = sweep(kind, grid, SweepTarget::Value)?.max_abs_pe;
        let derivative = sweep(kind, grid, SweepTarget::Derivative)?.max_abs_pe;
        csv.push_str(&format!("{kind},{},{}\n", num(value), num(derivative)));
    }
    eprintln!(
        "# table1 grid=[{},{}]x{}",
        num(grid.u_min),
        num(grid.u_max),
        grid.n_points
    );
    Ok(csv)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval {
            method,
            u,
            tol,
            k_max,
            terms,
            out,
        } => {
            let csv = run_eval(&method, u, tol, k_max, terms)?;
            write_out(&out, &csv)
        }
        Command::Converge {
            rel_target,
            grid,
            out,
        } => {
            let defaults = GridSpec {
                u_min: 0.01,
                u_max: 20.0,
                n_points: 40,
                spacing: Spacing::Log,
            };
            let csv = run_converge(rel_target, &grid.resolve(defaults)?)?;
            write_out(&out, &csv)
        }
        Command::Bounds { grid, out } => {
            let csv = run_bounds(&grid.resolve(GridSpec::default_bounds())?)?;
            write_out(&out, &csv)
        }
        Command::Sweep {
            method,
            target,
            grid,
            out,
        } => {
            let csv = run_sweep(&method, &target, &grid.resolve(GridSpec::default_sweep())?)?;
            write_out(&out, &csv)
        }
        Command::Kernel {
            config,
            method,
            transmissivity,
            storativity,
            tau,
            radii,
            t_start,
            t_end,
            t_step,
            out,
        } => {
            let csv = run_kernel(
                config.as_ref(),
                &method,
                transmissivity,
                storativity,
                tau,
                radii.as_ref(),
                t_start,
                t_end,
                t_step,
            )?;
            write_out(&out, &csv)
        }
        Command::Fit {
            init,
            max_iter,
            tol,
            trace,
            grid,
            out,
        } => {
            let csv = run_fit(
                &init,
                max_iter,
                tol,
                &grid.resolve(GridSpec::default_fit())?,
                trace.as_ref(),
            )?;
            write_out(&out, &csv)
        }
        Command::Table1 { grid, out } => {
            let csv = run_table1(&grid.resolve(GridSpec::default_sweep())?)?;
            write_out(&out, &csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
