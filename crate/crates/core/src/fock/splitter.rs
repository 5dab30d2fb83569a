use std::sync::OnceLock;

use num_complex::Complex64;

use super::OccupationPair;
use crate::error::{Error, Result};
use crate::numeric::ln_factorial;

/// Largest total photon number for which output amplitudes are evaluated.
///
/// The alternating sum behind each amplitude cancels terms as large as
/// `C(m/2)·C(n/2)`; at 64 photons the unitarity defect is still below 1e-7,
/// past that it degrades quickly.
pub const MAX_FOCK_TOTAL: u32 = 64;

/// Output state of the splitter for one Fock input. All kets share the input
/// photon total, so the map is stored densely by the photon count in mode `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeMap {
    total: u32,
    amps: Vec<Complex64>,
}

impl AmplitudeMap {
    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn get(&self, occ: OccupationPair) -> Complex64 {
        if occ.total() != self.total {
            return Complex64::new(0.0, 0.0);
        }
        self.amps[occ.first as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (OccupationPair, Complex64)> + '_ {
        let total = self.total;
        self.amps
            .iter()
            .enumerate()
            .map(move |(c, a)| (OccupationPair::new(c as u32, total - c as u32), *a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Expands `|m, n⟩` through the symmetric splitter:
///
/// ```text
/// Σ_u Σ_v  j^{u+v} √(m! n! (m−u+v)! (n−v+u)!) / (2^{(m+n)/2} (m−u)! u! (n−v)! v!)  |m−u+v, n−v+u⟩
/// ```
///
/// Coefficients are built in log space and terms landing on the same ket are
/// summed before the amplitude is materialised.
pub fn bs_output_amplitudes(input: OccupationPair) -> Result<AmplitudeMap> {
    let total = input.total();
    if total > MAX_FOCK_TOTAL {
        return Err(Error::FockOverflow {
            total,
            limit: MAX_FOCK_TOTAL,
        });
    }
    let amps = (0..=total)
        .map(|out_c| ket_amplitude(input, out_c))
        .collect();
    Ok(AmplitudeMap { total, amps })
}

fn ket_amplitude(input: OccupationPair, out_c: u32) -> Complex64 {
    let (m, n) = (input.first as i64, input.second as i64);
    let big_m = out_c as i64;
    let big_n = m + n - big_m;
    let shared = 0.5
        * (ln_factorial(m as u32)
            + ln_factorial(n as u32)
            + ln_factorial(big_m as u32)
            + ln_factorial(big_n as u32))
        - 0.5 * (m + n) as f64 * std::f64::consts::LN_2;

    // u − v = m − M is fixed on this ket, so j^{u+v} = j^{m−M} (−1)^v and the
    // remaining sum is real.
    let mut sum = 0.0_f64;
    let mut compensation = 0.0_f64;
    let v_lo = (big_m - m).max(0);
    let v_hi = n.min(big_m);
    for v in v_lo..=v_hi {
        let u = m - big_m + v;
        let ln_mag = shared
            - ln_factorial((m - u) as u32)
            - ln_factorial(u as u32)
            - ln_factorial((n - v) as u32)
            - ln_factorial(v as u32);
        let term = if v % 2 == 0 {
            ln_mag.exp()
        } else {
            -ln_mag.exp()
        };
        // Neumaier summation
        let t = sum + term;
        if sum.abs() >= term.abs() {
            compensation += (sum - t) + term;
        } else {
            compensation += (term - t) + sum;
        }
        sum = t;
    }
    let real = sum + compensation;
    match (m - big_m).rem_euclid(4) {
        0 => Complex64::new(real, 0.0),
        1 => Complex64::new(0.0, real),
        2 => Complex64::new(-real, 0.0),
        _ => Complex64::new(0.0, -real),
    }
}

struct ProbabilityTable {
    rows: Vec<Vec<f64>>,
}

impl ProbabilityTable {
    fn index(input: OccupationPair) -> usize {
        let k = input.total() as usize;
        k * (k + 1) / 2 + input.first as usize
    }

    fn build() -> Self {
        let mut rows = Vec::new();
        for k in 0..=MAX_FOCK_TOTAL {
            for m in 0..=k {
                let amps = bs_output_amplitudes(OccupationPair::new(m, k - m))
                    .expect("table stays within MAX_FOCK_TOTAL");
                rows.push(amps.amps.iter().map(|a| a.norm_sqr()).collect());
            }
        }
        Self { rows }
    }
}

fn table() -> &'static ProbabilityTable {
    static TABLE: OnceLock<ProbabilityTable> = OnceLock::new();
    TABLE.get_or_init(ProbabilityTable::build)
}

/// `|⟨M, N | ψ_{m,n}⟩|²` for every output `M = 0..=m+n`, from a table built
/// once per process.
pub fn output_probabilities(input: OccupationPair) -> Result<&'static [f64]> {
    if input.total() > MAX_FOCK_TOTAL {
        return Err(Error::FockOverflow {
            total: input.total(),
            limit: MAX_FOCK_TOTAL,
        });
    }
    Ok(&table().rows[ProbabilityTable::index(input)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    /// Independent route: apply the mode transforms a† → (c† + j d†)/√2 and
    /// b† → (j c† + d†)/√2 one creation operator at a time.
    fn ladder_oracle(m: u32, n: u32) -> Vec<Complex64> {
        let k = (m + n) as usize;
        // state[c] = amplitude on |c, t − c⟩ after t creations
        let mut state = vec![Complex64::new(0.0, 0.0); k + 1];
        state[0] = Complex64::new(1.0, 0.0);
        let j = Complex64::new(0.0, 1.0);
        for (created, step) in (0..(m + n)).enumerate() {
            let (to_c, to_d) = if step < m {
                (Complex64::new(FRAC_1_SQRT_2, 0.0), j * FRAC_1_SQRT_2)
            } else {
                (j * FRAC_1_SQRT_2, Complex64::new(FRAC_1_SQRT_2, 0.0))
            };
            let mut next = vec![Complex64::new(0.0, 0.0); k + 1];
            for c in 0..=created {
                let d = created - c;
                let amp = state[c];
                next[c + 1] += amp * to_c * ((c + 1) as f64).sqrt();
                next[c] += amp * to_d * ((d + 1) as f64).sqrt();
            }
            // normalise by √(number of this operator applied so far)
            let count = if step < m { step + 1 } else { step - m + 1 };
            for a in next.iter_mut() {
                *a /= (count as f64).sqrt();
            }
            state = next;
        }
        state
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn vacuum_is_invariant() {
        let out = bs_output_amplitudes(OccupationPair::new(0, 0)).unwrap();
        assert_eq!(out.get(OccupationPair::new(0, 0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn single_photon_splits_evenly() {
        let out = bs_output_amplitudes(OccupationPair::new(1, 0)).unwrap();
        assert!(close(
            out.get((1, 0).into()),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            1e-15
        ));
        assert!(close(
            out.get((0, 1).into()),
            Complex64::new(0.0, FRAC_1_SQRT_2),
            1e-15
        ));
    }

    #[test]
    fn two_photon_bunching_has_exact_null() {
        let out = bs_output_amplitudes(OccupationPair::new(1, 1)).unwrap();
        assert_eq!(out.get((1, 1).into()), Complex64::new(0.0, 0.0));
        assert!(close(
            out.get((2, 0).into()),
            Complex64::new(0.0, FRAC_1_SQRT_2),
            1e-15
        ));
        assert!(close(
            out.get((0, 2).into()),
            Complex64::new(0.0, FRAC_1_SQRT_2),
            1e-15
        ));
    }

    #[test]
    fn two_photons_in_one_arm() {
        // (c† + j d†)² / 2 |0⟩ = (|2,0⟩ + j√2 |1,1⟩ − |0,2⟩) / 2
        let out = bs_output_amplitudes(OccupationPair::new(2, 0)).unwrap();
        assert!((out.get((1, 1).into()).norm_sqr() - 0.5).abs() < 1e-15);
        assert!(close(
            out.get((2, 0).into()),
            Complex64::new(0.5, 0.0),
            1e-15
        ));
        assert!(close(
            out.get((0, 2).into()),
            Complex64::new(-0.5, 0.0),
            1e-15
        ));
    }

    #[test]
    fn matches_ladder_operator_route() {
        for k in 0..=16u32 {
            for m in 0..=k {
                let out = bs_output_amplitudes(OccupationPair::new(m, k - m)).unwrap();
                let oracle = ladder_oracle(m, k - m);
                for (occ, amp) in out.iter() {
                    assert!(
                        close(amp, oracle[occ.first as usize], 1e-11),
                        "input ({m},{}) ket {occ}: {amp} vs {}",
                        k - m,
                        oracle[occ.first as usize]
                    );
                }
            }
        }
    }

    #[test]
    fn unitarity_holds_at_the_table_limit() {
        for m in 0..=MAX_FOCK_TOTAL {
            let row = output_probabilities(OccupationPair::new(m, MAX_FOCK_TOTAL - m)).unwrap();
            let s: f64 = row.iter().sum();
            assert!((s - 1.0).abs() < 1e-6, "m = {m}: {s}");
        }
    }

    #[test]
    fn overflow_guard() {
        let err = bs_output_amplitudes(OccupationPair::new(40, 30)).unwrap_err();
        assert!(matches!(err, Error::FockOverflow { total: 70, .. }));
        assert!(output_probabilities(OccupationPair::new(65, 0)).is_err());
    }

    #[test]
    fn table_agrees_with_direct_expansion() {
        let direct = bs_output_amplitudes(OccupationPair::new(3, 5)).unwrap();
        let row = output_probabilities(OccupationPair::new(3, 5)).unwrap();
        for (occ, amp) in direct.iter() {
            assert_eq!(row[occ.first as usize], amp.norm_sqr());
        }
    }
}
