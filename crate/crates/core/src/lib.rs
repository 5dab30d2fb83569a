//! Modelling toolkit for beam-splitter quantum random number generators fed
//! by weak coherent states (WCSs).
//!
//! The crate covers the whole chain:
//!
//! * [`fock`]: exact photon-number statistics at the two outputs of a
//!   symmetric beam splitter, for a single WCS plus vacuum and for pairs of
//!   (in)distinguishable WCSs.
//! * [`detection`]: threshold-detector model and the analytic probabilities
//!   of producing a bit, discarding a collision, or seeing nothing.
//! * [`sim`]: a seeded, gate-synchronous Monte Carlo of the detection
//!   experiment whose per-gate draws depend only on `(seed, gate_index)`.
//! * [`postproc`]: event-to-bit conversion, von Neumann debiasing and the
//!   packed bit-file format.
//! * [`randtests`]: a seven-test statistical battery with its special
//!   functions.
//! * [`sweep`]: parameter sweeps and optimal operating-point search.
//!
//! Data-parallel loops (gates, sweep rows, test blocks) run on rayon when the
//! `parallel` feature is enabled and fall back to a sequential path otherwise;
//! both paths produce identical output.

// `!(a < b)` is used on purpose so that NaN fails range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detection;
pub mod error;
pub mod exec;
pub mod fock;
pub mod numeric;
pub mod pipeline;
pub mod postproc;
pub mod randtests;
pub mod sim;
pub mod sweep;

pub use detection::{DetectorPair, OutcomeProbabilities};
pub use error::{Error, Result};
pub use exec::Executor;
pub use fock::{
    JointPhotonDistribution, OccupationPair, SourceKind, SourceModel, TruncationPolicy,
};
pub use postproc::BitStream;
pub use sim::{EventRecord, EventTally, Outcome, SimConfig};
