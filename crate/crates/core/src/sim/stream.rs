//! Per-gate random streams.
//!
//! Gate `g` of a run seeded with `s` draws from a xoshiro256++ generator
//! whose four state words are SplitMix64 outputs at counters `4g .. 4g + 3`
//! under the key `mix(s)`. Streams are therefore a pure function of
//! `(seed, gate_index)`: any partition of the gate range over workers
//! reproduces the sequential run exactly.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub type GateRng = Xoshiro256PlusPlus;

/// Random stream owned by a single gate.
pub fn gate_stream(seed: u64, gate_index: u64) -> GateRng {
    let key = mix64(seed);
    let base = gate_index.wrapping_mul(4);
    let mut bytes = [0u8; 32];
    for (i, chunk) in bytes.chunks_exact_mut(8).enumerate() {
        let counter = base.wrapping_add(i as u64 + 1);
        let word = mix64(key.wrapping_add(counter.wrapping_mul(GOLDEN_GAMMA)));
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    Xoshiro256PlusPlus::from_seed(bytes)
}
