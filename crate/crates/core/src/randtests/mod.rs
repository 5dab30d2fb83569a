//! Seven statistical randomness tests with p-value outputs, and a block-wise
//! battery runner.
//!
//! Tests take unpacked bits (`&[u8]`, one bit per byte, nonzero = 1). The
//! top-level functions enforce the recommended minimum lengths and
//! parameter ranges of the reference suite; [`relaxed`] exposes the same
//! statistics with only the mathematically required checks, for short
//! worked examples.

mod battery;
mod cusum;
mod entropy;
mod frequency;
mod runs;
pub mod special;

use crate::error::{Error, Result};

pub use battery::{run_battery, BatteryConfig, TestKind, TestReport, TestResult, NOT_RUN};
pub use cusum::Direction;

/// Default significance level.
pub const DEFAULT_SIGNIFICANCE: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Limits {
    Recommended,
    Relaxed,
}

impl Limits {
    fn pick(self, recommended: usize, relaxed: usize) -> usize {
        match self {
            Limits::Recommended => recommended,
            Limits::Relaxed => relaxed,
        }
    }
}

fn require(got: usize, needed: usize) -> Result<()> {
    if got < needed {
        Err(Error::InsufficientData { needed, got })
    } else {
        Ok(())
    }
}

/// Frequency (monobit) test: `erfc(|S_n| / √(2n))`.
pub fn frequency_monobit(bits: &[u8]) -> Result<f64> {
    frequency::monobit(bits, Limits::Recommended)
}

/// Frequency test within blocks of `block_len` bits.
pub fn block_frequency(bits: &[u8], block_len: usize) -> Result<f64> {
    frequency::block_frequency(bits, block_len, Limits::Recommended)
}

/// Runs test, including its frequency prerequisite (p = 0 when failed).
pub fn runs(bits: &[u8]) -> Result<f64> {
    runs::runs(bits, Limits::Recommended)
}

/// Longest run of ones in a block; block length and category table follow
/// from the input length.
pub fn longest_run_of_ones(bits: &[u8]) -> Result<f64> {
    runs::longest_run_of_ones(bits, Limits::Recommended)
}

pub fn cumulative_sums(bits: &[u8], direction: Direction) -> Result<f64> {
    cusum::cumulative_sums(bits, direction, Limits::Recommended)
}

pub fn approximate_entropy(bits: &[u8], m: usize) -> Result<f64> {
    entropy::approximate_entropy(bits, m, Limits::Recommended)
}

/// Serial test; returns the p-values of the first and second differences.
pub fn serial(bits: &[u8], m: usize) -> Result<(f64, f64)> {
    entropy::serial(bits, m, Limits::Recommended)
}

/// The same tests without the recommended minimum lengths.
pub mod relaxed {
    use super::*;

    pub fn frequency_monobit(bits: &[u8]) -> Result<f64> {
        frequency::monobit(bits, Limits::Relaxed)
    }

    pub fn block_frequency(bits: &[u8], block_len: usize) -> Result<f64> {
        frequency::block_frequency(bits, block_len, Limits::Relaxed)
    }

    pub fn runs(bits: &[u8]) -> Result<f64> {
        runs::runs(bits, Limits::Relaxed)
    }

    pub fn longest_run_of_ones(bits: &[u8]) -> Result<f64> {
        runs::longest_run_of_ones(bits, Limits::Relaxed)
    }

    pub fn cumulative_sums(bits: &[u8], direction: Direction) -> Result<f64> {
        cusum::cumulative_sums(bits, direction, Limits::Relaxed)
    }

    pub fn approximate_entropy(bits: &[u8], m: usize) -> Result<f64> {
        entropy::approximate_entropy(bits, m, Limits::Relaxed)
    }

    pub fn serial(bits: &[u8], m: usize) -> Result<(f64, f64)> {
        entropy::serial(bits, m, Limits::Relaxed)
    }
}

/// Parses `'0'`/`'1'` text into unpacked bits, ignoring whitespace.
pub fn bits_from_str(s: &str) -> Vec<u8> {
    s.bytes()
        .filter(|b| !b.is_ascii_whitespace())
        .map(|b| u8::from(b == b'1'))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Binary expansion of π used by the reference suite's 100-bit examples.
    const PI_100: &str = "1100100100001111110110101010001000100001011010001100001000110100110001001100011001100010100010111000";

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }

    #[test]
    fn ten_bit_worked_examples() {
        close(
            relaxed::frequency_monobit(&bits_from_str("1011010101")).unwrap(),
            0.527089,
        );
        close(
            relaxed::frequency_monobit(&bits_from_str("1001101011")).unwrap(),
            0.527089,
        );
        close(
            relaxed::block_frequency(&bits_from_str("0110011010"), 3).unwrap(),
            0.801252,
        );
        close(
            relaxed::runs(&bits_from_str("1001101011")).unwrap(),
            0.147232,
        );
        close(
            relaxed::cumulative_sums(&bits_from_str("1011010111"), Direction::Forward).unwrap(),
            0.411585,
        );
        close(
            relaxed::approximate_entropy(&bits_from_str("0100110101"), 3).unwrap(),
            0.261961,
        );
        let (p1, p2) = relaxed::serial(&bits_from_str("0011011101"), 3).unwrap();
        close(p1, 0.808792);
        close(p2, 0.670320);
    }

    #[test]
    fn monobit_matches_erfc_form() {
        let p = relaxed::frequency_monobit(&bits_from_str("1001101011")).unwrap();
        assert_eq!(p, special::erfc(2.0 / 20f64.sqrt()));
    }

    #[test]
    fn alternating_and_constant() {
        let alt: Vec<u8> = (0..100).map(|i| (i % 2) as u8).collect();
        assert_eq!(frequency_monobit(&alt).unwrap(), 1.0);
        let ones = vec![1u8; 1000];
        assert!(frequency_monobit(&ones).unwrap() < 1e-10);
        assert!(block_frequency(&ones, 20).unwrap() < 1e-10);
        assert_eq!(runs(&ones).unwrap(), 0.0);
        assert!(longest_run_of_ones(&ones).unwrap() < 1e-10);
        assert!(cumulative_sums(&ones, Direction::Forward).unwrap() < 1e-10);
        assert!(cumulative_sums(&ones, Direction::Reverse).unwrap() < 1e-10);
        assert!(approximate_entropy(&ones, 2).unwrap() < 1e-10);
        let (p1, p2) = serial(&ones, 3).unwrap();
        assert!(p1 < 1e-10 && p2 < 1e-10);
    }

    #[test]
    fn pi_examples() {
        let pi = bits_from_str(PI_100);
        close(frequency_monobit(&pi).unwrap(), 0.109599);
        close(runs(&pi).unwrap(), 0.500798);
        close(cumulative_sums(&pi, Direction::Forward).unwrap(), 0.219194);
        close(cumulative_sums(&pi, Direction::Reverse).unwrap(), 0.114866);
        close(relaxed::block_frequency(&pi, 10).unwrap(), 0.706438);
        close(relaxed::approximate_entropy(&pi, 2).unwrap(), 0.235301);
    }

    #[test]
    fn minimum_lengths_enforced() {
        let short = bits_from_str("1011010101");
        assert!(matches!(
            frequency_monobit(&short),
            Err(Error::InsufficientData {
                needed: 100,
                got: 10
            })
        ));
        assert!(runs(&short).is_err());
        assert!(longest_run_of_ones(&[0; 127]).is_err());
        assert!(cumulative_sums(&short, Direction::Forward).is_err());
        let n100 = vec![0u8; 100];
        assert!(block_frequency(&n100, 10).is_err());
        // floor(log2 100) = 6: approximate entropy needs m < 1, serial m < 4
        assert!(approximate_entropy(&n100, 1).is_err());
        assert!(serial(&n100, 4).is_err());
        assert!(serial(&n100, 3).is_ok());
    }

    proptest! {
        #[test]
        fn p_values_in_unit_interval(bits in proptest::collection::vec(0u8..=1, 128..600)) {
            let checks = [
                frequency_monobit(&bits).unwrap(),
                block_frequency(&bits, 20).unwrap(),
                runs(&bits).unwrap(),
                longest_run_of_ones(&bits).unwrap(),
                cumulative_sums(&bits, Direction::Forward).unwrap(),
                cumulative_sums(&bits, Direction::Reverse).unwrap(),
                serial(&bits, 2).unwrap().0,
                serial(&bits, 2).unwrap().1,
            ];
            for p in checks {
                prop_assert!((0.0..=1.0).contains(&p));
            }
        }

        #[test]
        fn monobit_complement_symmetry(bits in proptest::collection::vec(0u8..=1, 100..400)) {
            let flipped: Vec<u8> = bits.iter().map(|b| 1 - b).collect();
            prop_assert_eq!(frequency_monobit(&bits).unwrap(), frequency_monobit(&flipped).unwrap());
        }
    }
}
