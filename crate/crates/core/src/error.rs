use thiserror::Error;

/// Errors produced anywhere in the modelling and testing pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Fock truncation at total photon number {bound} captures only {mass:.6} of the probability mass")]
    Truncation { bound: u32, mass: f64 },

    #[error("photon total {total} exceeds the supported Fock bound {limit}")]
    FockOverflow { total: u32, limit: u32 },

    #[error("numeric range error: {0}")]
    Range(String),

    #[error("no valid events: generation probability is zero")]
    NoValidEvents,

    #[error(
        "{n_gates} gates exceed the in-memory record budget of {budget}; use streaming output"
    )]
    Resource { n_gates: u64, budget: u64 },

    #[error("insufficient data: need at least {needed} bits, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("bracket [{lo}, {hi}] does not straddle a unique interior maximum")]
    Bracket { lo: f64, hi: f64 },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: "finite and > 0",
        })
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected: "in [0, 1]",
        })
    }
}
