//! Tests built on overlapping m-bit pattern counts with wraparound.

use super::special::gamma_q;
use super::{require, Limits};
use crate::error::{Error, Result};

const MAX_PATTERN_BITS: usize = 24;

/// Occurrences of every `m`-bit pattern among the `n` cyclic windows.
fn pattern_counts(bits: &[u8], m: usize) -> Vec<u64> {
    let mut counts = vec![0u64; 1 << m];
    if m == 0 {
        counts[0] = bits.len() as u64;
        return counts;
    }
    let n = bits.len();
    let mask = (1usize << m) - 1;
    let mut window = 0usize;
    for &b in &bits[..m - 1] {
        window = (window << 1) | usize::from(b != 0);
    }
    for i in 0..n {
        let b = bits[(i + m - 1) % n];
        window = ((window << 1) | usize::from(b != 0)) & mask;
        counts[window] += 1;
    }
    counts
}

fn log2_floor(n: usize) -> usize {
    (usize::BITS - 1 - n.leading_zeros()) as usize
}

fn check_pattern_len(
    m: usize,
    min: usize,
    n: usize,
    headroom: usize,
    limits: Limits,
    name: &str,
) -> Result<()> {
    let too_long = match limits {
        Limits::Recommended => m + headroom >= log2_floor(n.max(1)),
        Limits::Relaxed => m + 1 > n,
    };
    if m < min || m > MAX_PATTERN_BITS || too_long {
        return Err(Error::InvalidParameter(format!(
            "{name} pattern length {m} is not valid for {n} bits"
        )));
    }
    Ok(())
}

fn phi(bits: &[u8], m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len() as f64;
    pattern_counts(bits, m)
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum()
}

pub(super) fn approximate_entropy(bits: &[u8], m: usize, limits: Limits) -> Result<f64> {
    require(bits.len(), limits.pick(100, 2))?;
    check_pattern_len(m, 1, bits.len(), 5, limits, "approximate entropy")?;
    let n = bits.len() as f64;
    let apen = phi(bits, m) - phi(bits, m + 1);
    let chi2 = (2.0 * n * (std::f64::consts::LN_2 - apen)).max(0.0);
    Ok(gamma_q(2f64.powi(m as i32 - 1), chi2 / 2.0))
}

/// `ψ²_m = (2^m / n) Σ c² − n`, computed exactly in integers.
fn psi_squared(bits: &[u8], m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len() as i128;
    let sum_sq: i128 = pattern_counts(bits, m)
        .into_iter()
        .map(|c| (c as i128) * (c as i128))
        .sum();
    ((sum_sq << m) - n * n) as f64 / n as f64
}

pub(super) fn serial(bits: &[u8], m: usize, limits: Limits) -> Result<(f64, f64)> {
    require(bits.len(), limits.pick(100, 4))?;
    check_pattern_len(m, 2, bits.len(), 2, limits, "serial")?;
    let psi_m = psi_squared(bits, m);
    let psi_m1 = psi_squared(bits, m - 1);
    let psi_m2 = psi_squared(bits, m - 2);
    let del1 = (psi_m - psi_m1).max(0.0);
    let del2 = (psi_m - 2.0 * psi_m1 + psi_m2).max(0.0);
    Ok((
        gamma_q(2f64.powi(m as i32 - 2), del1 / 2.0),
        gamma_q(2f64.powi(m as i32 - 3), del2 / 2.0),
    ))
}
