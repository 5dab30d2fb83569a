//! Threshold-detector model and the analytic bit/collision/no-click
//! probabilities per gate.
//!
//! Output mode `c` feeds the bit-0 detector and mode `d` the bit-1 detector.
//! Dark counts are not modelled.

use crate::error::{check_positive, check_unit_interval, Error, Result};
use crate::fock::{
    output_joint_distribution, JointPhotonDistribution, SourceModel, TruncationPolicy,
};

/// Overall efficiencies of the two threshold detectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectorPair {
    eta0: f64,
    eta1: f64,
}

impl DetectorPair {
    pub fn new(eta0: f64, eta1: f64) -> Result<Self> {
        check_unit_interval("eta0", eta0)?;
        check_unit_interval("eta1", eta1)?;
        Ok(Self { eta0, eta1 })
    }

    pub fn symmetric(eta: f64) -> Result<Self> {
        Self::new(eta, eta)
    }

    pub const fn ideal() -> Self {
        Self {
            eta0: 1.0,
            eta1: 1.0,
        }
    }

    pub fn eta0(&self) -> f64 {
        self.eta0
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }
}

impl Default for DetectorPair {
    fn default() -> Self {
        Self::ideal()
    }
}

/// Probability that a threshold detector of efficiency `eta` fires on an
/// `photons`-photon state: `1 − (1 − η)^i`.
pub fn click_probability(eta: f64, photons: u32) -> f64 {
    if photons == 0 || eta == 0.0 {
        return 0.0;
    }
    if eta >= 1.0 {
        return 1.0;
    }
    -(photons as f64 * (-eta).ln_1p()).exp_m1()
}

/// The four valid-bit contributions, kept apart so each can be checked on
/// its own.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GenerationTerms {
    /// `Σ_M P(M, 0) η_M`
    pub bit0_vacuum_d: f64,
    /// `Σ_{M,N≥1} P(M, N) η_M (1 − η_N)`
    pub bit0_miss_d: f64,
    /// `Σ_N P(0, N) η_N`
    pub bit1_vacuum_c: f64,
    /// `Σ_{M,N≥1} P(M, N) (1 − η_M) η_N`
    pub bit1_miss_c: f64,
}

impl GenerationTerms {
    pub fn bit0(&self) -> f64 {
        self.bit0_vacuum_d + self.bit0_miss_d
    }

    pub fn bit1(&self) -> f64 {
        self.bit1_vacuum_c + self.bit1_miss_c
    }

    pub fn total(&self) -> f64 {
        self.bit0() + self.bit1()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeProbabilities {
    pub p_gen: f64,
    pub p_disc: f64,
    /// No click, plus whatever mass the Fock truncation dropped.
    pub p_none: f64,
    /// `None` when `p_gen` is zero.
    pub p_bit0_given_valid: Option<f64>,
    pub terms: GenerationTerms,
}

impl OutcomeProbabilities {
    /// Conditional probability of a 0 among valid bits.
    pub fn bit0_fraction(&self) -> Result<f64> {
        self.p_bit0_given_valid.ok_or(Error::NoValidEvents)
    }

    pub fn max_abs_deviation(&self, other: &Self) -> f64 {
        let mut d = (self.p_gen - other.p_gen)
            .abs()
            .max((self.p_disc - other.p_disc).abs())
            .max((self.p_none - other.p_none).abs());
        if let (Some(a), Some(b)) = (self.p_bit0_given_valid, other.p_bit0_given_valid) {
            d = d.max((a - b).abs());
        }
        d
    }
}

fn click_tables(dist: &JointPhotonDistribution, det: DetectorPair) -> (Vec<f64>, Vec<f64>) {
    let n = dist.bound() as usize + 1;
    let c = (0..n)
        .map(|i| click_probability(det.eta0, i as u32))
        .collect();
    let d = (0..n)
        .map(|i| click_probability(det.eta1, i as u32))
        .collect();
    (c, d)
}

/// `Σ_{M,N≥1} P(M, N) η_M η_N`.
pub fn coincidence_probability(dist: &JointPhotonDistribution, det: DetectorPair) -> f64 {
    let (click_c, click_d) = click_tables(dist, det);
    dist.iter()
        .filter(|(occ, _)| occ.first > 0 && occ.second > 0)
        .map(|(occ, p)| p * click_c[occ.first as usize] * click_d[occ.second as usize])
        .sum()
}

/// Evaluates the valid-bit and collision probabilities for one gate.
pub fn outcome_probabilities(
    dist: &JointPhotonDistribution,
    det: DetectorPair,
) -> OutcomeProbabilities {
    let (click_c, click_d) = click_tables(dist, det);
    let mut terms = GenerationTerms::default();
    let mut p_disc = 0.0;
    for (occ, p) in dist.iter() {
        let (m, n) = (occ.first as usize, occ.second as usize);
        match (m, n) {
            (0, 0) => {}
            (_, 0) => terms.bit0_vacuum_d += p * click_c[m],
            (0, _) => terms.bit1_vacuum_c += p * click_d[n],
            _ => {
                terms.bit0_miss_d += p * click_c[m] * (1.0 - click_d[n]);
                terms.bit1_miss_c += p * (1.0 - click_c[m]) * click_d[n];
                p_disc += p * click_c[m] * click_d[n];
            }
        }
    }
    let p_gen = terms.total();
    OutcomeProbabilities {
        p_gen,
        p_disc,
        p_none: (1.0 - p_gen - p_disc).max(0.0),
        p_bit0_given_valid: (p_gen > 0.0).then(|| terms.bit0() / p_gen),
        terms,
    }
}

/// Convenience: distribution plus outcome evaluation in one call.
pub fn analytic_outcomes(
    source: SourceModel,
    mu: f64,
    det: DetectorPair,
    policy: TruncationPolicy,
) -> Result<OutcomeProbabilities> {
    let dist = output_joint_distribution(source, mu, policy)?;
    Ok(outcome_probabilities(&dist, det))
}

/// Largest component deviation between evaluating at `μ` behind detectors
/// of efficiency `η`, and at `μη` behind ideal detectors.
pub fn folding_equivalence_check(mu: f64, eta: f64, source: SourceModel) -> Result<f64> {
    folding_equivalence_check_with(mu, eta, source, TruncationPolicy::precise())
}

pub fn folding_equivalence_check_with(
    mu: f64,
    eta: f64,
    source: SourceModel,
    policy: TruncationPolicy,
) -> Result<f64> {
    check_positive("mu", mu)?;
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain {
            name: "eta",
            value: eta,
            expected: "in (0, 1]",
        });
    }
    let lossy = analytic_outcomes(source, mu, DetectorPair::symmetric(eta)?, policy)?;
    let folded = analytic_outcomes(source, mu * eta, DetectorPair::ideal(), policy)?;
    Ok(lossy.max_abs_deviation(&folded))
}

/// Raw bit rate: `p_gen · gate_rate`.
pub fn throughput(p_gen: f64, gate_rate: f64) -> Result<f64> {
    check_unit_interval("p_gen", p_gen)?;
    check_positive("gate_rate", gate_rate)?;
    Ok(p_gen * gate_rate)
}
