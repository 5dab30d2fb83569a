//! Photon-number statistics at the output ports of a symmetric beam splitter.
//!
//! Input modes are `a`, `b`; output modes are `c` (read by the bit-0
//! detector) and `d` (bit-1 detector). The random phases of the weak
//! coherent states make every source diagonal in the photon-number basis, so
//! a source is fully described by Poisson weights over Fock inputs `|m, n⟩`.

mod distribution;
mod splitter;

use std::fmt;
use std::str::FromStr;

use crate::error::{check_positive, Error, Result};
use crate::numeric::ln_factorial;

pub use distribution::{
    coincidence_contrast, coincidence_contrast_for, output_joint_distribution, truncation_bound,
    JointPhotonDistribution, MAX_PRODUCT_TOTAL,
};
pub use splitter::{bs_output_amplitudes, output_probabilities, AmplitudeMap, MAX_FOCK_TOTAL};

/// Photon numbers in a pair of spatial modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OccupationPair {
    pub first: u32,
    pub second: u32,
}

impl OccupationPair {
    pub const fn new(first: u32, second: u32) -> Self {
        Self { first, second }
    }

    pub const fn total(self) -> u32 {
        self.first + self.second
    }

    pub const fn swapped(self) -> Self {
        Self::new(self.second, self.first)
    }
}

impl From<(u32, u32)> for OccupationPair {
    fn from((first, second): (u32, u32)) -> Self {
        Self::new(first, second)
    }
}

impl fmt::Display for OccupationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}⟩", self.first, self.second)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SourceKind {
    /// One WCS in mode `a`, vacuum in mode `b`.
    SingleWcs,
    /// Two phase-randomised WCSs matched in every degree of freedom.
    IndistinguishablePair,
    /// Two WCSs in orthogonal modes: no interference.
    DistinguishablePair,
    /// Convex mixture of the two pair models, weighted by `overlap`.
    PartialMixture,
}

/// Which light illuminates the splitter. `mu` always denotes the mean total
/// photon number over both inputs, so a pair splits it as `μ/2` per arm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceModel {
    kind: SourceKind,
    overlap: f64,
}

impl SourceModel {
    pub const fn single() -> Self {
        Self {
            kind: SourceKind::SingleWcs,
            overlap: 0.0,
        }
    }

    pub const fn indistinguishable() -> Self {
        Self {
            kind: SourceKind::IndistinguishablePair,
            overlap: 1.0,
        }
    }

    pub const fn distinguishable() -> Self {
        Self {
            kind: SourceKind::DistinguishablePair,
            overlap: 0.0,
        }
    }

    pub fn mixture(overlap: f64) -> Result<Self> {
        crate::error::check_unit_interval("overlap", overlap)?;
        Ok(Self {
            kind: SourceKind::PartialMixture,
            overlap,
        })
    }

    pub fn kind(&self) -> SourceKind {
        self.kind
    }

    /// Weight of the interfering component: 1 for an indistinguishable pair,
    /// 0 for sources without two-photon interference.
    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    /// Short label used on the command line and in tables.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SourceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SourceKind::SingleWcs => f.write_str("single"),
            SourceKind::IndistinguishablePair => f.write_str("indist"),
            SourceKind::DistinguishablePair => f.write_str("dist"),
            SourceKind::PartialMixture => write!(f, "mix:{}", self.overlap),
        }
    }
}

impl FromStr for SourceModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "single" => Ok(Self::single()),
            "indist" => Ok(Self::indistinguishable()),
            "dist" => Ok(Self::distinguishable()),
            other => {
                let overlap = other
                    .strip_prefix("mix:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "unknown source '{other}' (expected single, indist, dist or mix:<overlap>)"
                        ))
                    })?;
                Self::mixture(overlap)
            }
        }
    }
}

/// How much Poisson tail mass the Fock expansion may drop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    tail_mass: f64,
}

impl TruncationPolicy {
    pub const DEFAULT_TAIL_MASS: f64 = 1e-3;

    pub fn new(tail_mass: f64) -> Result<Self> {
        if tail_mass > 0.0 && tail_mass <= 0.01 {
            Ok(Self { tail_mass })
        } else {
            Err(Error::Domain {
                name: "tail_mass",
                value: tail_mass,
                expected: "in (0, 0.01]",
            })
        }
    }

    /// A tail of 1e-12, for comparisons against closed forms.
    pub const fn precise() -> Self {
        Self { tail_mass: 1e-12 }
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            tail_mass: Self::DEFAULT_TAIL_MASS,
        }
    }
}

/// Joint input pmf of two independent Poisson(μ/2) arms:
/// `e^{-μ} μ^{m+n} / (m! n! 2^{m+n})`.
pub fn poisson_pair_pmf(mu: f64, occ: OccupationPair) -> Result<f64> {
    check_positive("mu", mu)?;
    Ok(pair_pmf_unchecked(mu, occ))
}

pub(crate) fn pair_pmf_unchecked(mu: f64, occ: OccupationPair) -> f64 {
    let k = occ.total() as f64;
    (-mu + k * (mu.ln() - std::f64::consts::LN_2)
        - ln_factorial(occ.first)
        - ln_factorial(occ.second))
    .exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::poisson_pmf;

    #[test]
    fn vacuum_term_is_exp_minus_mu() {
        for mu in [0.01, 1.0, 7.3] {
            let p = poisson_pair_pmf(mu, OccupationPair::new(0, 0)).unwrap();
            assert!((p - (-mu).exp()).abs() < 1e-16);
        }
    }

    #[test]
    fn pair_pmf_is_product_of_half_mean_poissons() {
        let p = poisson_pair_pmf(2.0, OccupationPair::new(1, 1)).unwrap();
        let oracle = poisson_pmf(1.0, 1) * poisson_pmf(1.0, 1);
        assert!((p - oracle).abs() < 1e-15);
        assert!((p - 0.135_335_283_236_612_7).abs() < 1e-12);

        for (m, n) in [(0, 3), (4, 2), (7, 0)] {
            let p = poisson_pair_pmf(3.3, OccupationPair::new(m, n)).unwrap();
            let q = poisson_pmf(1.65, m) * poisson_pmf(1.65, n);
            assert!((p - q).abs() < 1e-15);
        }
    }

    #[test]
    fn pair_pmf_rejects_nonpositive_mu() {
        assert!(poisson_pair_pmf(0.0, OccupationPair::new(1, 0)).is_err());
        assert!(poisson_pair_pmf(-1.0, OccupationPair::new(1, 0)).is_err());
    }

    #[test]
    fn pair_pmf_mass_within_bound_exceeds_rule() {
        let policy = TruncationPolicy::default();
        for mu in [0.05, 1.0, 2.1, 20.0] {
            let k = truncation_bound(mu, policy).unwrap();
            let mass: f64 = (0..=k)
                .flat_map(|t| (0..=t).map(move |m| OccupationPair::new(m, t - m)))
                .map(|o| poisson_pair_pmf(mu, o).unwrap())
                .sum();
            assert!(mass >= 0.999, "mu = {mu}: {mass}");
        }
    }

    #[test]
    fn source_labels_round_trip() {
        for s in ["single", "indist", "dist", "mix:0.98"] {
            let model: SourceModel = s.parse().unwrap();
            assert_eq!(model.to_string(), s);
        }
        assert!("mix:1.5".parse::<SourceModel>().is_err());
        assert!("laser".parse::<SourceModel>().is_err());
    }

    #[test]
    fn truncation_policy_range() {
        assert!(TruncationPolicy::new(0.0).is_err());
        assert!(TruncationPolicy::new(0.02).is_err());
        assert!(TruncationPolicy::new(0.01).is_ok());
        assert_eq!(TruncationPolicy::default().tail_mass(), 1e-3);
    }
}
