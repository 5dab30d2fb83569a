//! Gate-synchronous Monte Carlo of the two-detector experiment.
//!
//! Each gate draws source photons, routes them through the splitter, thins
//! them at the detectors and classifies the result. Coincidence means "both
//! detectors fired in the same gate"; there is no continuous time axis.

mod sampler;
mod stream;

use std::fmt;
use std::io::Write;
use std::ops::Range;

use crate::detection::DetectorPair;
use crate::error::{check_positive, Error, Result};
use crate::exec::Executor;
use crate::fock::{truncation_bound, SourceKind, SourceModel, TruncationPolicy, MAX_FOCK_TOTAL};

pub use sampler::{sample_bs_outcome, GateSampler, Routing};
pub use stream::{gate_stream, mix64, GateRng};

/// Gates per work unit handed to the executor.
pub const CHUNK_GATES: u64 = 1 << 16;

/// Default cap on gates whose records are held in memory.
pub const DEFAULT_RECORD_BUDGET: u64 = 1 << 27;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub n_gates: u64,
    /// Mean total photon number per gate at the splitter input.
    pub mu: f64,
    pub source: SourceModel,
    pub detectors: DetectorPair,
    /// Gates per second. Only used to convert rates into throughput.
    pub gate_rate: f64,
}

impl SimConfig {
    pub const DEFAULT_GATE_RATE: f64 = 100_000.0;

    pub fn new(seed: u64, n_gates: u64, mu: f64, source: SourceModel) -> Self {
        Self {
            seed,
            n_gates,
            mu,
            source,
            detectors: DetectorPair::ideal(),
            gate_rate: Self::DEFAULT_GATE_RATE,
        }
    }

    pub fn with_detectors(mut self, detectors: DetectorPair) -> Self {
        self.detectors = detectors;
        self
    }

    pub fn with_gate_rate(mut self, gate_rate: f64) -> Self {
        self.gate_rate = gate_rate;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_gates == 0 {
            return Err(Error::InvalidParameter("n_gates must be at least 1".into()));
        }
        check_positive("mu", self.mu)?;
        check_positive("gate_rate", self.gate_rate)?;
        if matches!(
            self.source.kind(),
            SourceKind::IndistinguishablePair | SourceKind::PartialMixture
        ) {
            let bound = truncation_bound(self.mu, TruncationPolicy::precise())?;
            if bound > MAX_FOCK_TOTAL {
                return Err(Error::Truncation {
                    bound: MAX_FOCK_TOTAL,
                    mass: (0..=MAX_FOCK_TOTAL)
                        .map(|k| crate::numeric::poisson_pmf(self.mu, k))
                        .sum(),
                });
            }
        }
        Ok(())
    }
}

/// Per-gate classification. The discriminants are the streaming byte codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Outcome {
    None = 0,
    Bit0 = 1,
    Bit1 = 2,
    Collision = 3,
}

impl Outcome {
    pub fn classify(click0: bool, click1: bool) -> Self {
        match (click0, click1) {
            (true, true) => Outcome::Collision,
            (true, false) => Outcome::Bit0,
            (false, true) => Outcome::Bit1,
            (false, false) => Outcome::None,
        }
    }

    pub fn as_byte(self) -> u8 {
        self as u8
    }

    pub fn from_byte(b: u8) -> Result<Self> {
        match b {
            0 => Ok(Outcome::None),
            1 => Ok(Outcome::Bit0),
            2 => Ok(Outcome::Bit1),
            3 => Ok(Outcome::Collision),
            other => Err(Error::Format(format!("invalid event byte 0x{other:02x}"))),
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            Outcome::Bit0 => Some(false),
            Outcome::Bit1 => Some(true),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EventRecord {
    pub gate_index: u64,
    pub outcome: Outcome,
}

/// Outcome counts. Merging is associative and commutative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EventTally {
    pub none: u64,
    pub bit0: u64,
    pub bit1: u64,
    pub collision: u64,
}

impl EventTally {
    pub fn record(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::None => self.none += 1,
            Outcome::Bit0 => self.bit0 += 1,
            Outcome::Bit1 => self.bit1 += 1,
            Outcome::Collision => self.collision += 1,
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.none += other.none;
        self.bit0 += other.bit0;
        self.bit1 += other.bit1;
        self.collision += other.collision;
        self
    }

    pub fn n_gates(&self) -> u64 {
        self.none + self.bit0 + self.bit1 + self.collision
    }

    pub fn valid(&self) -> u64 {
        self.bit0 + self.bit1
    }

    fn fraction(&self, count: u64) -> f64 {
        match self.n_gates() {
            0 => 0.0,
            n => count as f64 / n as f64,
        }
    }

    fn binomial_se(&self, p: f64) -> f64 {
        match self.n_gates() {
            0 => 0.0,
            n => (p * (1.0 - p) / n as f64).sqrt(),
        }
    }

    pub fn p_gen(&self) -> f64 {
        self.fraction(self.valid())
    }

    pub fn p_disc(&self) -> f64 {
        self.fraction(self.collision)
    }

    pub fn p_none(&self) -> f64 {
        self.fraction(self.none)
    }

    pub fn se_gen(&self) -> f64 {
        self.binomial_se(self.p_gen())
    }

    pub fn se_disc(&self) -> f64 {
        self.binomial_se(self.p_disc())
    }

    /// Empirical probability of a 1 among valid bits.
    pub fn ones_fraction(&self) -> Option<f64> {
        (self.valid() > 0).then(|| self.bit1 as f64 / self.valid() as f64)
    }
}

impl FromIterator<Outcome> for EventTally {
    fn from_iter<I: IntoIterator<Item = Outcome>>(iter: I) -> Self {
        let mut t = EventTally::default();
        for o in iter {
            t.record(o);
        }
        t
    }
}

/// `key=value` summary, one per line.
impl fmt::Display for EventTally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gates={}", self.n_gates())?;
        writeln!(f, "bit0={}", self.bit0)?;
        writeln!(f, "bit1={}", self.bit1)?;
        writeln!(f, "collision={}", self.collision)?;
        writeln!(f, "none={}", self.none)?;
        writeln!(f, "p_gen={:.9}", self.p_gen())?;
        writeln!(f, "p_gen_se={:.9}", self.se_gen())?;
        writeln!(f, "p_disc={:.9}", self.p_disc())?;
        write!(f, "p_disc_se={:.9}", self.se_disc())
    }
}

/// Outcome of a single gate.
pub fn sample_gate(cfg: &SimConfig, gate_index: u64) -> Result<EventRecord> {
    cfg.validate()?;
    Ok(EventRecord {
        gate_index,
        outcome: GateSampler::new(cfg).sample(gate_index),
    })
}

fn chunks(range: Range<u64>) -> Vec<Range<u64>> {
    let mut out = Vec::new();
    let mut start = range.start;
    while start < range.end {
        let end = range.end.min(start + CHUNK_GATES);
        out.push(start..end);
        start = end;
    }
    out
}

/// Outcomes of the gates in `range`, in gate order.
pub fn outcomes(cfg: &SimConfig, range: Range<u64>, executor: Executor) -> Result<Vec<Outcome>> {
    cfg.validate()?;
    let sampler = GateSampler::new(cfg);
    let parts = executor.map(chunks(range), |r| {
        r.map(|g| sampler.sample(g)).collect::<Vec<_>>()
    });
    Ok(parts.concat())
}

/// Counts only; memory use is independent of `n_gates`.
pub fn run_tally(cfg: &SimConfig, executor: Executor) -> Result<EventTally> {
    cfg.validate()?;
    let sampler = GateSampler::new(cfg);
    let parts = executor.map(chunks(0..cfg.n_gates), |r| {
        r.map(|g| sampler.sample(g)).collect::<EventTally>()
    });
    Ok(parts
        .into_iter()
        .fold(EventTally::default(), EventTally::merge))
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub executor: Executor,
    pub record_budget: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            executor: Executor::default(),
            record_budget: DEFAULT_RECORD_BUDGET,
        }
    }
}

/// Full run with every per-gate record held in memory.
pub fn run(cfg: &SimConfig) -> Result<(EventTally, Vec<EventRecord>)> {
    run_with(cfg, RunOptions::default())
}

pub fn run_with(cfg: &SimConfig, opts: RunOptions) -> Result<(EventTally, Vec<EventRecord>)> {
    cfg.validate()?;
    if cfg.n_gates > opts.record_budget {
        return Err(Error::Resource {
            n_gates: cfg.n_gates,
            budget: opts.record_budget,
        });
    }
    let out = outcomes(cfg, 0..cfg.n_gates, opts.executor)?;
    let tally = out.iter().copied().collect();
    let records = out
        .into_iter()
        .enumerate()
        .map(|(i, outcome)| EventRecord {
            gate_index: i as u64,
            outcome,
        })
        .collect();
    Ok((tally, records))
}

/// Writes one byte per gate (0 none, 1 bit 0, 2 bit 1, 3 collision).
pub fn run_streaming<W: Write>(
    cfg: &SimConfig,
    executor: Executor,
    mut sink: W,
) -> Result<EventTally> {
    cfg.validate()?;
    let sampler = GateSampler::new(cfg);
    let batch = CHUNK_GATES * 64;
    let mut tally = EventTally::default();
    let mut start = 0;
    while start < cfg.n_gates {
        let end = cfg.n_gates.min(start + batch);
        let parts = executor.map(chunks(start..end), |r| {
            r.map(|g| sampler.sample(g).as_byte()).collect::<Vec<u8>>()
        });
        for part in parts {
            for &b in &part {
                tally.record(Outcome::from_byte(b)?);
            }
            sink.write_all(&part)?;
        }
        start = end;
    }
    sink.flush()?;
    Ok(tally)
}

/// Reads a stream written by [`run_streaming`].
pub fn read_event_stream(bytes: &[u8]) -> Result<Vec<Outcome>> {
    bytes.iter().map(|&b| Outcome::from_byte(b)).collect()
}
