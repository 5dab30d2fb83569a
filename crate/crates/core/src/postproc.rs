//! Event-to-bit conversion, debiasing and bit-file formats.
//!
//! Bits are packed most-significant-bit first; a trailing partial byte is
//! zero-padded and the true length is stored alongside.
//!
//! Binary file layout (integers little-endian):
//!
//! ```text
//! magic       8 bytes   "WCSQBITS"
//! version     u16       1
//! bit_length  u64
//! prov_len    u32
//! provenance  prov_len bytes of UTF-8 `key=value;key=value`
//! payload     ceil(bit_length / 8) bytes
//! ```

use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::{EventRecord, Outcome};

pub const MAGIC: &[u8; 8] = b"WCSQBITS";
pub const FORMAT_VERSION: u16 = 1;

/// Where a bit stream came from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Provenance {
    pub source: Option<String>,
    pub mu: Option<f64>,
    pub seed: Option<u64>,
    pub debiased: bool,
    /// Length of the stream the debiaser consumed.
    pub input_len: Option<u64>,
}

impl Provenance {
    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        if let Some(s) = &self.source {
            parts.push(format!("source={s}"));
        }
        if let Some(mu) = self.mu {
            parts.push(format!("mu={mu}"));
        }
        if let Some(seed) = self.seed {
            parts.push(format!("seed={seed}"));
        }
        parts.push(format!("debiased={}", u8::from(self.debiased)));
        if let Some(n) = self.input_len {
            parts.push(format!("input_len={n}"));
        }
        parts.join(";")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Format(format!("bad provenance field '{what}'"));
        let mut p = Provenance::default();
        for field in text.split(';').filter(|f| !f.is_empty()) {
            let (k, v) = field.split_once('=').ok_or_else(|| bad(field))?;
            match k {
                "source" => p.source = Some(v.to_string()),
                "mu" => p.mu = Some(v.parse().map_err(|_| bad(field))?),
                "seed" => p.seed = Some(v.parse().map_err(|_| bad(field))?),
                "debiased" => p.debiased = v == "1",
                "input_len" => p.input_len = Some(v.parse().map_err(|_| bad(field))?),
                // unknown keys are kept out of the struct but tolerated
                _ => {}
            }
        }
        Ok(p)
    }
}

/// Packed bit sequence.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BitStream {
    bytes: Vec<u8>,
    len: usize,
    pub provenance: Provenance,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        (i < self.len).then(|| self.bytes[i / 8] & (0x80 >> (i % 8)) != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bytes[i / 8] & (0x80 >> (i % 8)) != 0)
    }

    /// Packed payload, MSB first, zero-padded.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn count_ones(&self) -> usize {
        // padding bits are always zero
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// One byte per bit, each 0 or 1.
    pub fn to_unpacked(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.len = len;
        self.bytes.truncate(len.div_ceil(8));
        if !len.is_multiple_of(8) {
            let last = self.bytes.len() - 1;
            self.bytes[last] &= !(0xFFu8 >> (len % 8));
        }
    }

    pub fn from_ascii(text: &str) -> Result<Self> {
        let mut s = BitStream::new();
        for ch in text.chars().filter(|c| !c.is_whitespace()) {
            match ch {
                '0' => s.push(false),
                '1' => s.push(true),
                other => {
                    return Err(Error::Format(format!(
                        "unexpected character {other:?} in ASCII bits"
                    )))
                }
            }
        }
        Ok(s)
    }

    pub fn to_ascii(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    pub fn to_file_bytes(&self) -> Vec<u8> {
        let prov = self.provenance.to_text();
        let mut out = Vec::with_capacity(22 + prov.len() + self.bytes.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.len as u64).to_le_bytes());
        out.extend_from_slice(&(prov.len() as u32).to_le_bytes());
        out.extend_from_slice(prov.as_bytes());
        out.extend_from_slice(&self.bytes);
        out
    }

    pub fn from_file_bytes(data: &[u8]) -> Result<Self> {
        let short = || Error::Format("truncated bit file".into());
        if data.len() < 22 || &data[..8] != MAGIC {
            return Err(Error::Format("missing bit-file magic".into()));
        }
        let version = u16::from_le_bytes([data[8], data[9]]);
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported bit-file version {version}"
            )));
        }
        let len = u64::from_le_bytes(data[10..18].try_into().unwrap());
        let prov_len = u32::from_le_bytes(data[18..22].try_into().unwrap()) as usize;
        let prov_end = 22usize.checked_add(prov_len).ok_or_else(short)?;
        let prov_text = std::str::from_utf8(data.get(22..prov_end).ok_or_else(short)?)
            .map_err(|_| Error::Format("provenance is not UTF-8".into()))?;
        let payload = &data[prov_end..];
        let len = usize::try_from(len).map_err(|_| short())?;
        if payload.len() != len.div_ceil(8) {
            return Err(Error::Format(format!(
                "payload has {} bytes, header declares {len} bits",
                payload.len()
            )));
        }
        if len % 8 != 0 && payload[payload.len() - 1] & (0xFF >> (len % 8)) != 0 {
            return Err(Error::Format("non-zero padding bits".into()));
        }
        Ok(BitStream {
            bytes: payload.to_vec(),
            len,
            provenance: Provenance::parse(prov_text)?,
        })
    }

    pub fn write_binary(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_file_bytes())?;
        Ok(())
    }

    pub fn write_ascii(&self, path: &Path) -> Result<()> {
        let mut text = self.to_ascii();
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    /// Reads either the binary format (detected by its magic) or ASCII bits.
    pub fn read_file(path: &Path) -> Result<Self> {
        let data = fs::read(path)?;
        if data.starts_with(MAGIC) {
            Self::from_file_bytes(&data)
        } else {
            let text = std::str::from_utf8(&data).map_err(|_| {
                Error::Format(format!(
                    "{} is neither a bit file nor ASCII bits",
                    path.display()
                ))
            })?;
            Self::from_ascii(text)
        }
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut s = BitStream::new();
        for b in iter {
            s.push(b);
        }
        s
    }
}

impl fmt::Display for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

/// Bit 0 and bit 1 events become 0 and 1; collisions and empty gates are
/// dropped.
pub fn events_to_bits(events: &[EventRecord]) -> BitStream {
    outcomes_to_bits(events.iter().map(|e| e.outcome))
}

pub fn outcomes_to_bits<I: IntoIterator<Item = Outcome>>(outcomes: I) -> BitStream {
    outcomes.into_iter().filter_map(Outcome::bit).collect()
}

pub trait Debiaser {
    fn debias(&self, bits: &BitStream) -> BitStream;
}

/// Classic von Neumann extractor over non-overlapping pairs.
#[derive(Clone, Copy, Debug, Default)]
pub struct VonNeumann;

impl Debiaser for VonNeumann {
    fn debias(&self, bits: &BitStream) -> BitStream {
        von_neumann(bits)
    }
}

/// Streaming von Neumann state, for callers that see bits incrementally.
#[derive(Clone, Copy, Debug, Default)]
pub struct VonNeumannState {
    pending: Option<bool>,
}

impl VonNeumannState {
    /// Feeds one input bit; returns an output bit when a pair completes with
    /// differing values.
    pub fn feed(&mut self, bit: bool) -> Option<bool> {
        match self.pending.take() {
            None => {
                self.pending = Some(bit);
                None
            }
            Some(first) if first != bit => Some(first),
            Some(_) => None,
        }
    }
}

/// Pairs `01 → 0`, `10 → 1`; `00`, `11` and a trailing odd bit emit nothing.
pub fn von_neumann(bits: &BitStream) -> BitStream {
    let mut state = VonNeumannState::default();
    let mut out: BitStream = bits.iter().filter_map(|b| state.feed(b)).collect();
    out.provenance = Provenance {
        debiased: true,
        input_len: Some(bits.len() as u64),
        ..bits.provenance.clone()
    };
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StreamStats {
    pub length: usize,
    pub ones: usize,
    /// Absent for an empty stream.
    pub ones_fraction: Option<f64>,
    /// Output over input length; only for debiased streams.
    pub extraction_efficiency: Option<f64>,
}

pub fn stream_stats(bits: &BitStream) -> StreamStats {
    let ones = bits.count_ones();
    let length = bits.len();
    StreamStats {
        length,
        ones,
        ones_fraction: (length > 0).then(|| ones as f64 / length as f64),
        extraction_efficiency: match (bits.provenance.debiased, bits.provenance.input_len) {
            (true, Some(n)) if n > 0 => Some(length as f64 / n as f64),
            _ => None,
        },
    }
}
