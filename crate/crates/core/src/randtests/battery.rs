use std::fmt::Write as _;

use super::{cusum, entropy, frequency, runs, Direction, Limits, DEFAULT_SIGNIFICANCE};
use crate::error::{Error, Result};
use crate::exec::Executor;

/// One reported p-value stream. Cumulative sums and serial each contribute
/// two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestKind {
    FrequencyMonobit,
    BlockFrequency,
    Runs,
    LongestRunOfOnes,
    CumulativeSumsForward,
    CumulativeSumsReverse,
    ApproximateEntropy,
    SerialFirst,
    SerialSecond,
}

impl TestKind {
    pub const ALL: [TestKind; 9] = [
        TestKind::FrequencyMonobit,
        TestKind::BlockFrequency,
        TestKind::Runs,
        TestKind::LongestRunOfOnes,
        TestKind::CumulativeSumsForward,
        TestKind::CumulativeSumsReverse,
        TestKind::ApproximateEntropy,
        TestKind::SerialFirst,
        TestKind::SerialSecond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestKind::FrequencyMonobit => "frequency_monobit",
            TestKind::BlockFrequency => "block_frequency",
            TestKind::Runs => "runs",
            TestKind::LongestRunOfOnes => "longest_run_of_ones",
            TestKind::CumulativeSumsForward => "cumulative_sums_forward",
            TestKind::CumulativeSumsReverse => "cumulative_sums_reverse",
            TestKind::ApproximateEntropy => "approximate_entropy",
            TestKind::SerialFirst => "serial_p1",
            TestKind::SerialSecond => "serial_p2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Tests of the reference suite that this battery does not implement.
pub const NOT_RUN: [&str; 8] = [
    "binary_matrix_rank",
    "discrete_fourier_transform",
    "non_overlapping_template",
    "overlapping_template",
    "universal",
    "linear_complexity",
    "random_excursions",
    "random_excursions_variant",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BatteryConfig {
    pub block_size: usize,
    pub significance: f64,
    pub block_frequency_len: usize,
    /// Defaults to `min(10, ⌊log2 n⌋ − 6)`.
    pub apen_m: Option<usize>,
    /// Defaults to `min(16, ⌊log2 n⌋ − 3)`.
    pub serial_m: Option<usize>,
}

impl BatteryConfig {
    pub fn new(block_size: usize) -> Self {
        Self {
            block_size,
            significance: DEFAULT_SIGNIFICANCE,
            block_frequency_len: 128,
            apen_m: None,
            serial_m: None,
        }
    }

    pub fn with_significance(mut self, significance: f64) -> Self {
        self.significance = significance;
        self
    }

    fn log2_block(&self) -> usize {
        (usize::BITS - 1 - self.block_size.max(1).leading_zeros()) as usize
    }

    pub fn apen_m(&self) -> usize {
        self.apen_m
            .unwrap_or_else(|| self.log2_block().saturating_sub(6).min(10))
    }

    pub fn serial_m(&self) -> usize {
        self.serial_m
            .unwrap_or_else(|| self.log2_block().saturating_sub(3).min(16))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    pub kind: TestKind,
    pub block: usize,
    pub p_value: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestReport {
    pub block_size: usize,
    pub block_count: usize,
    pub significance: f64,
    /// Ordered by block, then by [`TestKind::ALL`].
    pub results: Vec<TestResult>,
}

fn run_block(bits: &[u8], cfg: &BatteryConfig) -> Result<[f64; 9]> {
    let l = Limits::Recommended;
    let (s1, s2) = entropy::serial(bits, cfg.serial_m(), l)?;
    Ok([
        frequency::monobit(bits, l)?,
        frequency::block_frequency(bits, cfg.block_frequency_len, l)?,
        runs::runs(bits, l)?,
        runs::longest_run_of_ones(bits, l)?,
        cusum::cumulative_sums(bits, Direction::Forward, l)?,
        cusum::cumulative_sums(bits, Direction::Reverse, l)?,
        entropy::approximate_entropy(bits, cfg.apen_m(), l)?,
        s1,
        s2,
    ])
}

/// Splits `bits` into consecutive blocks of `cfg.block_size` (a trailing
/// partial block is ignored) and runs every test on each.
pub fn run_battery(bits: &[u8], cfg: &BatteryConfig, executor: Executor) -> Result<TestReport> {
    if !(cfg.significance > 0.0 && cfg.significance < 1.0) {
        return Err(Error::Domain {
            name: "significance",
            value: cfg.significance,
            expected: "in (0, 1)",
        });
    }
    if cfg.block_size == 0 || bits.len() < cfg.block_size {
        return Err(Error::InsufficientData {
            needed: cfg.block_size.max(1),
            got: bits.len(),
        });
    }
    let blocks: Vec<&[u8]> = bits.chunks_exact(cfg.block_size).collect();
    let block_count = blocks.len();
    let per_block = executor.map(blocks, |b| run_block(b, cfg));
    let mut results = Vec::with_capacity(block_count * TestKind::ALL.len());
    for (block, ps) in per_block.into_iter().enumerate() {
        for (kind, p) in TestKind::ALL.into_iter().zip(ps?) {
            results.push(TestResult {
                kind,
                block,
                p_value: p,
                passed: p >= cfg.significance,
            });
        }
    }
    Ok(TestReport {
        block_size: cfg.block_size,
        block_count,
        significance: cfg.significance,
        results,
    })
}

impl TestReport {
    pub fn p_values(&self, kind: TestKind) -> Vec<f64> {
        self.results
            .iter()
            .filter(|r| r.kind == kind)
            .map(|r| r.p_value)
            .collect()
    }

    pub fn passes(&self, kind: TestKind) -> usize {
        self.results
            .iter()
            .filter(|r| r.kind == kind && r.passed)
            .count()
    }

    pub fn pass_fraction(&self, kind: TestKind) -> f64 {
        match self.block_count {
            0 => 0.0,
            n => self.passes(kind) as f64 / n as f64,
        }
    }

    /// One line per test per block, then a per-test summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# block_size={} blocks={} significance={}",
            self.block_size, self.block_count, self.significance
        );
        for r in &self.results {
            let _ = writeln!(
                out,
                "{:<24} {:>6} {:.6} {}",
                r.kind.name(),
                r.block,
                r.p_value,
                if r.passed { "PASS" } else { "FAIL" }
            );
        }
        out.push_str("# summary\n");
        for kind in TestKind::ALL {
            let _ = writeln!(
                out,
                "{:<24} passed {}/{}",
                kind.name(),
                self.passes(kind),
                self.block_count
            );
        }
        for name in NOT_RUN {
            let _ = writeln!(out, "{name:<24} not run");
        }
        out
    }

    /// Columns: `test,block,block_size,significance,p_value,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("test,block,block_size,significance,p_value,pass\n");
        for r in &self.results {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.kind.name(),
                r.block,
                self.block_size,
                self.significance,
                r.p_value,
                u8::from(r.passed)
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |line: usize, why: &str| Error::Format(format!("report line {line}: {why}"));
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "test,block,block_size,significance,p_value,pass" => {}
            _ => {
                return Err(Error::Format(
                    "not a test report (unexpected header)".into(),
                ))
            }
        }
        let mut results = Vec::new();
        let mut block_size = None;
        let mut significance = None;
        for (i, line) in lines.filter(|(_, l)| !l.trim().is_empty()) {
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 6 {
                return Err(bad(i + 1, "expected 6 columns"));
            }
            let kind = TestKind::from_name(f[0]).ok_or_else(|| bad(i + 1, "unknown test"))?;
            let block = f[1].parse().map_err(|_| bad(i + 1, "bad block"))?;
            let bs: usize = f[2].parse().map_err(|_| bad(i + 1, "bad block_size"))?;
            let sig: f64 = f[3].parse().map_err(|_| bad(i + 1, "bad significance"))?;
            let p_value: f64 = f[4].parse().map_err(|_| bad(i + 1, "bad p_value"))?;
            if !(0.0..=1.0).contains(&p_value) {
                return Err(bad(i + 1, "p_value outside [0, 1]"));
            }
            if *block_size.get_or_insert(bs) != bs || *significance.get_or_insert(sig) != sig {
                return Err(bad(i + 1, "inconsistent block_size or significance"));
            }
            results.push(TestResult {
                kind,
                block,
                p_value,
                passed: p_value >= sig,
            });
        }
        let block_count = results.iter().map(|r| r.block + 1).max().unwrap_or(0);
        Ok(TestReport {
            block_size: block_size.unwrap_or(0),
            block_count,
            significance: significance.unwrap_or(DEFAULT_SIGNIFICANCE),
            results,
        })
    }
}
