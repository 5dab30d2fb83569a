//! Small numeric kernels shared by the optics and statistics modules.

use std::sync::OnceLock;

const LN_FACTORIAL_TABLE: usize = 256;

fn ln_factorial_table() -> &'static [f64; LN_FACTORIAL_TABLE] {
    static TABLE: OnceLock<[f64; LN_FACTORIAL_TABLE]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; LN_FACTORIAL_TABLE];
        let mut acc = 0.0_f64;
        for (k, slot) in t.iter_mut().enumerate().skip(1) {
            acc += (k as f64).ln();
            *slot = acc;
        }
        t
    })
}

/// `ln(n!)`, tabulated for small `n` and via `ln Γ(n + 1)` beyond.
pub fn ln_factorial(n: u32) -> f64 {
    match ln_factorial_table().get(n as usize) {
        Some(v) => *v,
        None => ln_gamma(n as f64 + 1.0),
    }
}

// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
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

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Poisson pmf `e^{-λ} λ^k / k!`, evaluated in log space.
pub fn poisson_pmf(lambda: f64, k: u32) -> f64 {
    if k == 0 {
        return (-lambda).exp();
    }
    (-lambda + k as f64 * lambda.ln() - ln_factorial(k)).exp()
}

/// Binomial pmf with success probability 1/2.
pub fn half_binomial_pmf(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k) - n as f64 * std::f64::consts::LN_2)
        .exp()
}
