use super::special::normal_cdf;
use super::{require, Limits};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

pub(super) fn cumulative_sums(bits: &[u8], direction: Direction, limits: Limits) -> Result<f64> {
    require(bits.len(), limits.pick(100, 1))?;
    let step = |b: &u8| if *b != 0 { 1i64 } else { -1 };
    let excursion = |it: &mut dyn Iterator<Item = i64>| {
        let mut s = 0i64;
        let mut z = 0i64;
        for x in it {
            s += x;
            z = z.max(s.abs());
        }
        z
    };
    let z = match direction {
        Direction::Forward => excursion(&mut bits.iter().map(step)),
        Direction::Reverse => excursion(&mut bits.iter().rev().map(step)),
    } as f64;
    let n = bits.len() as f64;
    let sqrt_n = n.sqrt();

    let mut first = 0.0;
    let lo = ((-n / z + 1.0) / 4.0).floor() as i64;
    let hi = ((n / z - 1.0) / 4.0).floor() as i64;
    for k in lo..=hi {
        let k = k as f64;
        first +=
            normal_cdf((4.0 * k + 1.0) * z / sqrt_n) - normal_cdf((4.0 * k - 1.0) * z / sqrt_n);
    }
    let mut second = 0.0;
    let lo = ((-n / z - 3.0) / 4.0).floor() as i64;
    for k in lo..=hi {
        let k = k as f64;
        second +=
            normal_cdf((4.0 * k + 3.0) * z / sqrt_n) - normal_cdf((4.0 * k + 1.0) * z / sqrt_n);
    }
    Ok((1.0 - first + second).clamp(0.0, 1.0))
}
