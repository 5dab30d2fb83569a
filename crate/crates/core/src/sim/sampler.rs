use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::stream::{gate_stream, GateRng};
use super::{Outcome, SimConfig};
use crate::fock::{output_probabilities, OccupationPair, SourceKind, MAX_FOCK_TOTAL};

/// How the photons present at the splitter are distributed over the outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Routing {
    /// Two-photon interference: outputs drawn from the squared amplitudes.
    Interfering,
    /// Each photon takes an independent fair-coin path.
    Independent,
}

/// Draws the output occupation for one Fock input.
///
/// Interfering inputs are sampled by inverse CDF over a cached table of
/// squared amplitudes. Inputs past [`MAX_FOCK_TOTAL`] have no table and fall
/// back to independent routing; [`SimConfig::validate`] keeps their
/// probability below 1e-12 per gate.
pub fn sample_bs_outcome(
    input: OccupationPair,
    routing: Routing,
    rng: &mut GateRng,
) -> OccupationPair {
    let total = input.total();
    if total == 0 {
        return input;
    }
    let first = match routing {
        Routing::Interfering if total <= MAX_FOCK_TOTAL => {
            let row = output_probabilities(input).expect("total checked against table size");
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = row.len() - 1;
            for (c, p) in row.iter().enumerate() {
                acc += p;
                if u < acc {
                    pick = c;
                    break;
                }
            }
            pick as u32
        }
        _ => coin_count(input.first, rng) + coin_count(input.second, rng),
    };
    OccupationPair::new(first, total - first)
}

/// Number of heads in `n` fair coins.
fn coin_count(mut n: u32, rng: &mut GateRng) -> u32 {
    let mut heads = 0;
    while n > 0 {
        let take = n.min(64);
        let word: u64 = rng.random();
        let mask = if take == 64 {
            u64::MAX
        } else {
            (1u64 << take) - 1
        };
        heads += (word & mask).count_ones();
        n -= take;
    }
    heads
}

/// Threshold detection by per-photon Bernoulli thinning.
fn detects(eta: f64, photons: u32, rng: &mut GateRng) -> bool {
    if photons == 0 || eta <= 0.0 {
        return false;
    }
    if eta >= 1.0 {
        return true;
    }
    (0..photons).any(|_| rng.random::<f64>() < eta)
}

/// Precomputed per-run state; sampling a gate only needs the gate index.
#[derive(Clone, Debug)]
pub struct GateSampler {
    seed: u64,
    kind: SourceKind,
    overlap: f64,
    arm: Poisson<f64>,
    eta0: f64,
    eta1: f64,
}

impl GateSampler {
    /// Expects a validated configuration.
    pub fn new(cfg: &SimConfig) -> Self {
        let kind = cfg.source.kind();
        let arm_mean = match kind {
            SourceKind::SingleWcs => cfg.mu,
            _ => cfg.mu / 2.0,
        };
        Self {
            seed: cfg.seed,
            kind,
            overlap: cfg.source.overlap(),
            arm: Poisson::new(arm_mean).expect("mu validated positive"),
            eta0: cfg.detectors.eta0(),
            eta1: cfg.detectors.eta1(),
        }
    }

    pub fn sample(&self, gate_index: u64) -> Outcome {
        let mut rng = gate_stream(self.seed, gate_index);
        self.sample_with(&mut rng)
    }

    /// One gate: source photons, splitter routing, detection, classification.
    pub fn sample_with(&self, rng: &mut GateRng) -> Outcome {
        let input = match self.kind {
            SourceKind::SingleWcs => OccupationPair::new(self.arm.sample(rng) as u32, 0),
            _ => OccupationPair::new(self.arm.sample(rng) as u32, self.arm.sample(rng) as u32),
        };
        let routing = match self.kind {
            SourceKind::IndistinguishablePair => Routing::Interfering,
            SourceKind::PartialMixture if rng.random::<f64>() < self.overlap => {
                Routing::Interfering
            }
            _ => Routing::Independent,
        };
        let output = sample_bs_outcome(input, routing, rng);
        let click0 = detects(self.eta0, output.first, rng);
        let click1 = detects(self.eta1, output.second, rng);
        Outcome::classify(click0, click1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frequencies(input: OccupationPair, routing: Routing, draws: u64) -> Vec<f64> {
        let mut counts = vec![0u64; input.total() as usize + 1];
        for i in 0..draws {
            let mut rng = gate_stream(99, i);
            let out = sample_bs_outcome(input, routing, &mut rng);
            assert_eq!(out.total(), input.total());
            counts[out.first as usize] += 1;
        }
        counts.iter().map(|&c| c as f64 / draws as f64).collect()
    }

    #[test]
    fn vacuum_stays_vacuum() {
        let mut rng = gate_stream(1, 1);
        for routing in [Routing::Interfering, Routing::Independent] {
            assert_eq!(
                sample_bs_outcome(OccupationPair::new(0, 0), routing, &mut rng),
                OccupationPair::new(0, 0)
            );
        }
    }

    #[test]
    fn interfering_pair_never_splits() {
        let f = frequencies(OccupationPair::new(1, 1), Routing::Interfering, 40_000);
        assert_eq!(f[1], 0.0);
        // σ = √(0.25/40000) = 0.0025
        assert!((f[0] - 0.5).abs() < 0.0125 && (f[2] - 0.5).abs() < 0.0125);
    }

    #[test]
    fn independent_pair_follows_two_coins() {
        let f = frequencies(OccupationPair::new(1, 1), Routing::Independent, 40_000);
        assert!((f[1] - 0.5).abs() < 0.0125);
        assert!((f[0] - 0.25).abs() < 0.011 && (f[2] - 0.25).abs() < 0.011);
    }

    #[test]
    fn interfering_matches_table() {
        let input = OccupationPair::new(3, 2);
        let f = frequencies(input, Routing::Interfering, 100_000);
        let row = output_probabilities(input).unwrap();
        for (p_hat, p) in f.iter().zip(row) {
            let sigma = (p * (1.0 - p) / 100_000.0).sqrt();
            assert!((p_hat - p).abs() <= 5.0 * sigma + 1e-12);
        }
    }

    #[test]
    fn coin_count_handles_large_inputs() {
        let mut rng = gate_stream(3, 3);
        let heads = coin_count(200, &mut rng);
        assert!(heads <= 200 && heads > 50);
    }

    #[test]
    fn thinning_matches_click_probability() {
        let eta = 0.3;
        let photons = 3;
        let n = 100_000;
        let hits = (0..n)
            .filter(|&i| detects(eta, photons, &mut gate_stream(5, i)))
            .count() as f64
            / n as f64;
        let p = crate::detection::click_probability(eta, photons);
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits - p).abs() < 5.0 * sigma);
    }
}
