use super::special::{erfc, gamma_q};
use super::{require, Limits};
use crate::error::{Error, Result};

pub(super) fn monobit(bits: &[u8], limits: Limits) -> Result<f64> {
    require(bits.len(), limits.pick(100, 1))?;
    let n = bits.len() as f64;
    let ones = bits.iter().filter(|&&b| b != 0).count() as f64;
    let s = 2.0 * ones - n;
    Ok(erfc(s.abs() / (2.0 * n).sqrt()))
}

pub(super) fn block_frequency(bits: &[u8], block_len: usize, limits: Limits) -> Result<f64> {
    require(bits.len(), limits.pick(100, 1))?;
    if block_len < limits.pick(20, 1) {
        return Err(Error::InvalidParameter(format!(
            "block frequency block length {block_len} is below the minimum"
        )));
    }
    require(bits.len(), block_len)?;
    let blocks = bits.len() / block_len;
    let chi2: f64 = bits
        .chunks_exact(block_len)
        .map(|block| {
            let pi = block.iter().filter(|&&b| b != 0).count() as f64 / block_len as f64;
            (pi - 0.5) * (pi - 0.5)
        })
        .sum::<f64>()
        * 4.0
        * block_len as f64;
    Ok(gamma_q(blocks as f64 / 2.0, chi2 / 2.0))
}
