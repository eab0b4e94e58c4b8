//! Gamma function via the Lanczos approximation (g = 7, 9 coefficients).
//!
//! Only needed on (1, 2), where the Gautschi coefficient evaluates
//! Gamma(1 + 1/q); the approximation is good to ~1e-14 relative there.

use std::f64::consts::PI;

const G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // constants as published
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma(x) for x > 0.5 (reflection is not needed by this crate).
pub fn gamma(x: f64) -> f64 {
    debug_assert!(x > 0.5, "gamma: argument {x} out of supported range");
    let z = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}
