use super::splitter::{output_probabilities, MAX_FOCK_TOTAL};
use super::{pair_pmf_unchecked, OccupationPair, SourceKind, SourceModel, TruncationPolicy};
use crate::detection::{coincidence_probability, DetectorPair};
use crate::error::{check_positive, Error, Result};
use crate::numeric::{half_binomial_pmf, poisson_pmf};

/// Photon-total cap for sources without interference, whose statistics need
/// no amplitude sums.
pub const MAX_PRODUCT_TOTAL: u32 = 160;

/// Joint probabilities `P(M, N)` of finding `M` photons in output `c` and
/// `N` in output `d`, for totals `M + N ≤ bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointPhotonDistribution {
    // rows[k][M] = P(M, k − M)
    rows: Vec<Vec<f64>>,
    mu_eff: f64,
    source: SourceModel,
    truncation_mass: f64,
}

impl JointPhotonDistribution {
    pub fn get(&self, occ: OccupationPair) -> f64 {
        self.rows
            .get(occ.total() as usize)
            .map_or(0.0, |row| row[occ.first as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (OccupationPair, f64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(k, row)| {
            row.iter()
                .enumerate()
                .map(move |(c, p)| (OccupationPair::new(c as u32, (k - c) as u32), *p))
        })
    }

    /// Largest photon total kept.
    pub fn bound(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    pub fn mu_eff(&self) -> f64 {
        self.mu_eff
    }

    pub fn source(&self) -> SourceModel {
        self.source
    }

    /// Input probability mass captured by the truncated expansion.
    pub fn truncation_mass(&self) -> f64 {
        self.truncation_mass
    }

    pub fn total_probability(&self) -> f64 {
        self.rows.iter().flatten().sum()
    }

    /// Marginal photon-number distribution of output `c`.
    pub fn marginal_first(&self) -> Vec<f64> {
        let mut marginal = vec![0.0; self.rows.len()];
        for (occ, p) in self.iter() {
            marginal[occ.first as usize] += p;
        }
        marginal
    }
}

/// Smallest photon total `k` whose Poisson(μ) CDF reaches `1 − tail_mass`.
pub fn truncation_bound(mu: f64, policy: TruncationPolicy) -> Result<u32> {
    check_positive("mu", mu)?;
    let target = 1.0 - policy.tail_mass();
    let mut cdf = 0.0;
    let mut k = 0u32;
    loop {
        cdf += poisson_pmf(mu, k);
        if cdf >= target {
            return Ok(k);
        }
        k += 1;
        if k > 100_000 {
            return Err(Error::Range(format!(
                "Poisson CDF for mu = {mu} did not reach {target}"
            )));
        }
    }
}

fn captured_mass(mu: f64, bound: u32) -> f64 {
    (0..=bound).map(|k| poisson_pmf(mu, k)).sum()
}

/// Output statistics `P_{c,d}(M, N)` of the splitter for the given source at
/// mean total photon number `mu_eff`.
///
/// For interfering pairs this is `Σ P_{a,b}(m, n) |⟨M, N|ψ_{m,n}⟩|²`, where
/// photon-number conservation restricts the sum to `m + n = M + N`.
pub fn output_joint_distribution(
    source: SourceModel,
    mu_eff: f64,
    policy: TruncationPolicy,
) -> Result<JointPhotonDistribution> {
    check_positive("mu_eff", mu_eff)?;
    let needed = truncation_bound(mu_eff, policy)?;
    let limit = match source.kind() {
        SourceKind::SingleWcs | SourceKind::DistinguishablePair => MAX_PRODUCT_TOTAL,
        SourceKind::IndistinguishablePair | SourceKind::PartialMixture => MAX_FOCK_TOTAL,
    };
    if needed > limit {
        return Err(Error::Truncation {
            bound: limit,
            mass: captured_mass(mu_eff, limit),
        });
    }
    let rows = match source.kind() {
        SourceKind::SingleWcs => single_rows(mu_eff, needed),
        SourceKind::DistinguishablePair => distinguishable_rows(mu_eff, needed),
        SourceKind::IndistinguishablePair => indistinguishable_rows(mu_eff, needed)?,
        SourceKind::PartialMixture => {
            let w = source.overlap();
            let indist = indistinguishable_rows(mu_eff, needed)?;
            let dist = distinguishable_rows(mu_eff, needed);
            indist
                .iter()
                .zip(&dist)
                .map(|(ri, rd)| {
                    ri.iter()
                        .zip(rd)
                        .map(|(pi, pd)| w * pi + (1.0 - w) * pd)
                        .collect()
                })
                .collect()
        }
    };
    let truncation_mass = captured_mass(mu_eff, needed);
    debug_assert!(truncation_mass >= 1.0 - policy.tail_mass() - 1e-12);
    Ok(JointPhotonDistribution {
        rows,
        mu_eff,
        source,
        truncation_mass,
    })
}

fn single_rows(mu: f64, bound: u32) -> Vec<Vec<f64>> {
    (0..=bound)
        .map(|k| {
            (0..=k)
                .map(|c| pair_pmf_unchecked(mu, OccupationPair::new(c, k - c)))
                .collect()
        })
        .collect()
}

/// Each arm's photons are routed independently by fair coins: no
/// interference term between the two inputs.
fn distinguishable_rows(mu: f64, bound: u32) -> Vec<Vec<f64>> {
    (0..=bound)
        .map(|k| {
            let mut row = vec![0.0; k as usize + 1];
            for m in 0..=k {
                let n = k - m;
                let w = pair_pmf_unchecked(mu, OccupationPair::new(m, n));
                for i in 0..=m {
                    let wi = w * half_binomial_pmf(m, i);
                    for l in 0..=n {
                        row[(i + l) as usize] += wi * half_binomial_pmf(n, l);
                    }
                }
            }
            row
        })
        .collect()
}

fn indistinguishable_rows(mu: f64, bound: u32) -> Result<Vec<Vec<f64>>> {
    (0..=bound)
        .map(|k| {
            let mut row = vec![0.0; k as usize + 1];
            for m in 0..=k {
                let input = OccupationPair::new(m, k - m);
                let w = pair_pmf_unchecked(mu, input);
                for (slot, p) in row.iter_mut().zip(output_probabilities(input)?) {
                    *slot += w * p;
                }
            }
            Ok(row)
        })
        .collect()
}

/// Fractional suppression of coincidences by two-photon interference:
/// `1 − P_cc(indistinguishable) / P_cc(distinguishable)`.
///
/// Coincidences are an `O(μ²)` effect, far below the default 1e-3 tail at
/// small `μ`, so both distributions use [`TruncationPolicy::precise`].
pub fn coincidence_contrast(mu_eff: f64, detectors: DetectorPair) -> Result<f64> {
    coincidence_contrast_for(SourceModel::indistinguishable(), mu_eff, detectors)
}

/// Coincidence contrast of an arbitrary source against the distinguishable
/// pair at the same mean photon number.
pub fn coincidence_contrast_for(
    source: SourceModel,
    mu_eff: f64,
    detectors: DetectorPair,
) -> Result<f64> {
    let policy = TruncationPolicy::precise();
    let reference = output_joint_distribution(SourceModel::distinguishable(), mu_eff, policy)?;
    let p_ref = coincidence_probability(&reference, detectors);
    if !(p_ref > 1e-300) {
        return Err(Error::Range(format!(
            "coincidence probability underflows at mu_eff = {mu_eff}"
        )));
    }
    let dist = output_joint_distribution(source, mu_eff, policy)?;
    let p = coincidence_probability(&dist, detectors);
    Ok((1.0 - p / p_ref).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::poisson_pmf;

    fn all_sources() -> [SourceModel; 4] {
        [
            SourceModel::single(),
            SourceModel::indistinguishable(),
            SourceModel::distinguishable(),
            SourceModel::mixture(0.6).unwrap(),
        ]
    }

    #[test]
    fn truncation_bound_small_mu() {
        let policy = TruncationPolicy::default();
        assert_eq!(truncation_bound(1e-4, policy).unwrap(), 0);
        assert!(truncation_bound(0.01, policy).unwrap() <= 1);
    }

    #[test]
    fn truncation_bound_matches_cdf_summation() {
        // P(X ≤ 4) = 0.99634, P(X ≤ 5) = 0.99941 for X ~ Poisson(1)
        assert_eq!(
            truncation_bound(1.0, TruncationPolicy::default()).unwrap(),
            5
        );
        let cdf = |k: u32| (0..=k).map(|i| poisson_pmf(1.0, i)).sum::<f64>();
        assert!(cdf(4) < 0.999 && cdf(5) >= 0.999);
    }

    #[test]
    fn truncation_bound_is_monotone() {
        let policy = TruncationPolicy::default();
        let mut prev = 0;
        for i in 1..400 {
            let k = truncation_bound(i as f64 * 0.05, policy).unwrap();
            assert!(k >= prev);
            prev = k;
        }
    }

    #[test]
    fn coincidence_terms_at_second_order() {
        let policy = TruncationPolicy::default();
        for mu in [0.1, 1.0, 3.0] {
            let indist =
                output_joint_distribution(SourceModel::indistinguishable(), mu, policy).unwrap();
            let single = output_joint_distribution(SourceModel::single(), mu, policy).unwrap();
            let oracle = (-mu).exp() * mu * mu / 8.0;
            assert!((indist.get((1, 1).into()) - oracle).abs() < 1e-15);
            assert!((single.get((1, 1).into()) - 2.0 * oracle).abs() < 1e-15);
        }
    }

    #[test]
    fn distinguishable_equals_single() {
        let policy = TruncationPolicy::default();
        for mu in [0.1, 1.0, 5.0] {
            let d = output_joint_distribution(SourceModel::distinguishable(), mu, policy).unwrap();
            let s = output_joint_distribution(SourceModel::single(), mu, policy).unwrap();
            assert_eq!(d.bound(), s.bound());
            for (occ, p) in d.iter() {
                assert!((p - s.get(occ)).abs() < 1e-12, "{occ}");
            }
        }
    }

    #[test]
    fn mixture_endpoints() {
        let policy = TruncationPolicy::default();
        let mu = 2.1;
        let one =
            output_joint_distribution(SourceModel::mixture(1.0).unwrap(), mu, policy).unwrap();
        let zero =
            output_joint_distribution(SourceModel::mixture(0.0).unwrap(), mu, policy).unwrap();
        let indist =
            output_joint_distribution(SourceModel::indistinguishable(), mu, policy).unwrap();
        let dist = output_joint_distribution(SourceModel::distinguishable(), mu, policy).unwrap();
        for (occ, p) in indist.iter() {
            assert!((one.get(occ) - p).abs() < 1e-12);
            assert!((zero.get(occ) - dist.get(occ)).abs() < 1e-12);
        }
    }

    #[test]
    fn mass_matches_truncation_and_symmetry() {
        let policy = TruncationPolicy::default();
        for source in all_sources() {
            for mu in [0.05, 1.4, 2.1, 20.0] {
                let d = output_joint_distribution(source, mu, policy).unwrap();
                assert!(d.truncation_mass() >= 0.999);
                assert!((d.total_probability() - d.truncation_mass()).abs() < 1e-10);
                for (occ, p) in d.iter() {
                    assert!((0.0..=1.0).contains(&p));
                    assert!((p - d.get(occ.swapped())).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn single_marginal_is_half_mean_poisson() {
        let mu = 3.0;
        let d = output_joint_distribution(SourceModel::single(), mu, TruncationPolicy::precise())
            .unwrap();
        for (c, p) in d.marginal_first().into_iter().enumerate().take(12) {
            assert!(
                (p - poisson_pmf(mu / 2.0, c as u32)).abs() < 1e-11,
                "c = {c}"
            );
        }
    }

    #[test]
    fn excessive_mu_reports_truncation() {
        let err = output_joint_distribution(
            SourceModel::indistinguishable(),
            80.0,
            TruncationPolicy::default(),
        )
        .unwrap_err();
        match err {
            Error::Truncation { bound, mass } => {
                assert_eq!(bound, MAX_FOCK_TOTAL);
                assert!(mass < 0.999);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(
            output_joint_distribution(SourceModel::single(), 0.0, TruncationPolicy::default())
                .is_err()
        );
    }

    #[test]
    fn contrast_limits() {
        let det = DetectorPair::ideal();
        let c = coincidence_contrast(0.01, det).unwrap();
        assert!((0.49..=0.50).contains(&c), "{c}");
        let same = coincidence_contrast_for(SourceModel::distinguishable(), 1.0, det).unwrap();
        assert_eq!(same, 0.0);
        let mut prev = 1.0;
        for mu in [0.01, 0.1, 1.0, 2.0, 5.0, 10.0, 20.0] {
            let c = coincidence_contrast(mu, det).unwrap();
            assert!(c < prev, "mu = {mu}");
            prev = c;
        }
    }

    #[test]
    fn contrast_underflow_is_a_range_error() {
        let err = coincidence_contrast(1e-200, DetectorPair::ideal()).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }
}
