//! wasm-bindgen surface for the browser demo: three array-returning calls
//! that the static page plots on a canvas. Errors surface as thrown strings.

use wasm_bindgen::prelude::*;

use wellfn::{
    e1_bounds, e1_reference, sweep, well_value, ApproxKind, Argument, GridSpec, Spacing,
    SweepTarget,
};

fn grid(u_min: f64, u_max: f64, points: usize) -> Result<GridSpec, String> {
    GridSpec::new(u_min, u_max, points, Spacing::Log).map_err(|e| e.to_string())
}

/// Percentage-error sweep of one route against the oracle.
/// Returns [u0, pe0, u1, pe1, ...] for a log grid of `points` samples.
#[wasm_bindgen]
pub fn sweep_pe(
    method: &str,
    target: &str,
    u_min: f64,
    u_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let kind: ApproxKind = method.parse().map_err(|e: wellfn::Error| e.to_string())?;
    let target: SweepTarget = target.parse().map_err(|e: wellfn::Error| e.to_string())?;
    let report = sweep(kind, &grid(u_min, u_max, points)?, target).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * report.samples.len());
    for s in &report.samples {
        out.push(s.u);
        out.push(s.pe_percent);
    }
    Ok(out)
}

/// Gautschi envelope and the oracle on a log grid.
/// Returns [u, lower, oracle, upper] interleaved.
#[wasm_bindgen]
pub fn bounds_curves(u_min: f64, u_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if u_max > 700.0 {
        return Err("u_max must stay at or below 700".to_string());
    }
    let mut out = Vec::with_capacity(4 * points);
    for u in grid(u_min, u_max, points)?.points() {
        let a = Argument::new(u).map_err(|e| e.to_string())?;
        let b = e1_bounds(a);
        let (lower, upper) = if b.log_scale {
            (b.lower.exp(), b.upper.exp())
        } else {
            (b.lower, b.upper)
        };
        out.push(u);
        out.push(lower);
        out.push(e1_reference(a).value);
        out.push(upper);
    }
    Ok(out)
}

/// Every evaluation route at a single argument, in a fixed order:
/// [oracle, proposed, swamee-ojha, barry, vatankhah,
///  classical-series, ramanujan-series, asymptotic-series].
#[wasm_bindgen]
pub fn eval_methods(u: f64) -> Result<Vec<f64>, String> {
    let a = Argument::new(u).map_err(|e| e.to_string())?;
    let mut out = vec![e1_reference(a).value];
    for kind in ApproxKind::ALL {
        out.push(well_value(kind, a));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_pe_matches_library() {
        let data = sweep_pe("proposed", "value", 1e-3, 100.0, 200).unwrap();
        assert_eq!(data.len(), 400);
        assert_eq!(data[0], 1e-3);
        let report = sweep(
            ApproxKind::Proposed,
            &GridSpec::new(1e-3, 100.0, 200, Spacing::Log).unwrap(),
            SweepTarget::Value,
        )
        .unwrap();
        assert_eq!(data[2 * 50 + 1], report.samples[50].pe_percent);
        assert!(sweep_pe("nonsense", "value", 1e-3, 100.0, 10).is_err());
        assert!(sweep_pe("classical", "derivative", 1e-3, 100.0, 10).is_err());
    }

    #[test]
    fn bounds_curves_sandwich() {
        let data = bounds_curves(1e-3, 500.0, 100).unwrap();
        assert_eq!(data.len(), 400);
        for chunk in data.chunks_exact(4) {
            let (lower, oracle, upper) = (chunk[1], chunk[2], chunk[3]);
            assert!(lower < oracle && oracle <= upper);
        }
        assert!(bounds_curves(1e-3, 800.0, 10).is_err());
    }

    #[test]
    fn eval_methods_order_and_sanity() {
        let v = eval_methods(2.0).unwrap();
        assert_eq!(v.len(), 8);
        // oracle first, then the combined approximation within 0.06%
        assert!((v[1] - v[0]).abs() / v[0] < 6e-4);
        assert!(eval_methods(-1.0).is_err());
    }
}
