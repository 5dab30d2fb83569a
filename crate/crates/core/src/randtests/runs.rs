use super::special::{erfc, gamma_q};
use super::{require, Limits};
use crate::error::Result;

pub(super) fn runs(bits: &[u8], limits: Limits) -> Result<f64> {
    require(bits.len(), limits.pick(100, 2))?;
    let n = bits.len() as f64;
    let pi = bits.iter().filter(|&&b| b != 0).count() as f64 / n;
    // frequency prerequisite: the runs statistic is meaningless on a
    // grossly unbalanced sequence
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return Ok(0.0);
    }
    let v = 1 + bits
        .windows(2)
        .filter(|w| (w[0] != 0) != (w[1] != 0))
        .count();
    let expected = 2.0 * n * pi * (1.0 - pi);
    Ok(erfc(
        (v as f64 - expected).abs() / (2.0 * (2.0 * n).sqrt() * pi * (1.0 - pi)),
    ))
}

struct LongestRunTable {
    block_len: usize,
    /// Category `i` holds runs of length `first_category + i`, clamped at
    /// both ends.
    first_category: usize,
    probabilities: &'static [f64],
}

const SHORT: LongestRunTable = LongestRunTable {
    block_len: 8,
    first_category: 1,
    probabilities: &[0.21484375, 0.3671875, 0.23046875, 0.1875],
};

const MEDIUM: LongestRunTable = LongestRunTable {
    block_len: 128,
    first_category: 4,
    probabilities: &[
        0.1174035788,
        0.242955959,
        0.249363483,
        0.17517706,
        0.102701071,
        0.112398847,
    ],
};

const LONG: LongestRunTable = LongestRunTable {
    block_len: 10_000,
    first_category: 10,
    probabilities: &[0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
};

pub(super) fn longest_run_of_ones(bits: &[u8], limits: Limits) -> Result<f64> {
    let n = bits.len();
    require(n, limits.pick(128, SHORT.block_len))?;
    let table = if n < 6272 {
        &SHORT
    } else if n < 750_000 {
        &MEDIUM
    } else {
        &LONG
    };
    let k = table.probabilities.len();
    let mut counts = vec![0u64; k];
    for block in bits.chunks_exact(table.block_len) {
        let mut longest = 0usize;
        let mut current = 0usize;
        for &b in block {
            if b != 0 {
                current += 1;
                longest = longest.max(current);
            } else {
                current = 0;
            }
        }
        let idx = longest.clamp(table.first_category, table.first_category + k - 1)
            - table.first_category;
        counts[idx] += 1;
    }
    let blocks = (n / table.block_len) as f64;
    let chi2: f64 = counts
        .iter()
        .zip(table.probabilities)
        .map(|(&c, &p)| {
            let e = blocks * p;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    Ok(gamma_q((k - 1) as f64 / 2.0, chi2 / 2.0))
}
