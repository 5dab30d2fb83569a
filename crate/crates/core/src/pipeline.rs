//! Simulation → bits → optional debiasing, run until a gate or bit budget
//! is met.

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::postproc::{BitStream, Provenance, VonNeumannState};
use crate::sim::{outcomes, EventTally, SimConfig, CHUNK_GATES};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// Exactly `cfg.n_gates` gates.
    Gates,
    /// Gates until this many output bits exist.
    Bits(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub bits: BitStream,
    pub tally: EventTally,
    /// Valid bits before debiasing.
    pub raw_bits: u64,
}

impl Generated {
    pub fn gates(&self) -> u64 {
        self.tally.n_gates()
    }
}

const BATCH_GATES: u64 = CHUNK_GATES * 16;

pub fn generate(
    cfg: &SimConfig,
    target: Target,
    debias: bool,
    executor: Executor,
) -> Result<Generated> {
    cfg.validate()?;
    let (gate_limit, bit_target) = match target {
        Target::Gates => (cfg.n_gates, None),
        Target::Bits(0) => {
            return Err(Error::InvalidParameter(
                "bit target must be at least 1".into(),
            ))
        }
        Target::Bits(n) => (n.saturating_mul(1000).saturating_add(100_000_000), Some(n)),
    };

    let mut bits = BitStream::new();
    let mut tally = EventTally::default();
    let mut raw_bits = 0u64;
    let mut vn = VonNeumannState::default();
    let mut start = 0u64;
    'outer: while start < gate_limit {
        let end = gate_limit.min(start + BATCH_GATES);
        for outcome in outcomes(cfg, start..end, executor)? {
            tally.record(outcome);
            if let Some(bit) = outcome.bit() {
                raw_bits += 1;
                let emitted = if debias { vn.feed(bit) } else { Some(bit) };
                if let Some(b) = emitted {
                    bits.push(b);
                    if bit_target == Some(bits.len() as u64) {
                        break 'outer;
                    }
                }
            }
        }
        start = end;
    }
    if let Some(n) = bit_target {
        if (bits.len() as u64) < n {
            return Err(Error::NoValidEvents);
        }
    }
    bits.provenance = Provenance {
        source: Some(cfg.source.to_string()),
        mu: Some(cfg.mu),
        seed: Some(cfg.seed),
        debiased: debias,
        input_len: debias.then_some(raw_bits),
    };
    Ok(Generated {
        bits,
        tally,
        raw_bits,
    })
}
