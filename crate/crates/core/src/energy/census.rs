use num_bigint::BigInt;
use num_traits::One;

use super::{energy_spectrum, EnergySpectrum};
use crate::error::{Error, Result};
use crate::exact::{big, pow, Rational};
use crate::sets::FpSet;

/// Dyadic bucket counts of the energy spectrum at threshold parameter `K`.
///
/// Bucket `i` (1-based) holds the `ξ` with `|A|³/2^i < E_+(A, ξA) ≤ |A|³/2^{i-1}`,
/// for `i = 1..=k` where `2^{k-1} < K ≤ 2^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub k_param: Rational,
    pub k: u32,
    pub bucket_sizes: Vec<usize>,
    /// `#{ξ : E ≤ |A|³/2^k}`.
    pub remainder: usize,
    /// `#{ξ : E > |A|³/K}`.
    pub over_threshold_count: usize,
    /// `K ≤ p/|A|`.
    pub k_le_p_over_a: bool,
    /// `K ≤ |A|^{1/2}`.
    pub k_le_sqrt_a: bool,
}

impl CensusReport {
    /// `over_threshold_count / K⁴`, for comparison against `O(K⁴)`.
    pub fn over_threshold_per_k4(&self) -> f64 {
        let k4 = num_traits::pow(self.k_param.clone(), 4);
        crate::exact::to_f64(
            &(Rational::from_integer(BigInt::from(self.over_threshold_count)) / k4),
        )
    }
}

/// Smallest `k ≥ 0` with `K ≤ 2^k`.
fn dyadic_exponent(k_param: &Rational) -> u32 {
    let mut k = 0u32;
    let mut two_k = Rational::one();
    while *k_param > two_k {
        two_k *= BigInt::from(2);
        k += 1;
    }
    k
}

fn validate(k_param: &Rational) -> Result<()> {
    if *k_param < Rational::one() {
        return Err(Error::BadParameter(format!(
            "census needs K >= 1, got {k_param}"
        )));
    }
    Ok(())
}

fn flags(k_param: &Rational, p: u64, n: usize) -> (bool, bool) {
    let n_big = BigInt::from(n);
    let k_le_p_over_a =
        k_param * Rational::from_integer(n_big.clone()) <= Rational::from_integer(BigInt::from(p));
    let k_le_sqrt_a = k_param * k_param <= Rational::from_integer(n_big);
    (k_le_p_over_a, k_le_sqrt_a)
}

pub fn dyadic_census(a: &FpSet, k_param: &Rational) -> Result<CensusReport> {
    energy_spectrum(a)?.census(k_param)
}

impl EnergySpectrum {
    /// Buckets via `i = bitlength(⌊|A|³ / E⌋)`, which is exact because
    /// `⌊log₂ x⌋ = ⌊log₂ ⌊x⌋⌋` for rational `x ≥ 1`.
    pub fn census(&self, k_param: &Rational) -> Result<CensusReport> {
        validate(k_param)?;
        let n = self.set_size() as u128;
        let cube = n * n * n;
        let k = dyadic_exponent(k_param);
        let mut bucket_sizes = vec![0usize; k as usize];
        let mut remainder = 0;
        let mut over = 0;
        let num = k_param.numer();
        let den = k_param.denom();
        let cube_den = big(cube) * den;
        for &e in self.energies() {
            let i = (cube / e).ilog2() + 1;
            if i <= k {
                bucket_sizes[i as usize - 1] += 1;
            } else {
                remainder += 1;
            }
            if big(e) * num > cube_den {
                over += 1;
            }
        }
        let (k_le_p_over_a, k_le_sqrt_a) = flags(k_param, self.p(), self.set_size());
        Ok(CensusReport {
            k_param: k_param.clone(),
            k,
            bucket_sizes,
            remainder,
            over_threshold_count: over,
            k_le_p_over_a,
            k_le_sqrt_a,
        })
    }
}

/// Census from an explicit list of energies (one per `ξ ≠ 0`), testing every
/// bucket inequality directly in cross-multiplied form.
pub fn brute_census(
    energies: &[u128],
    p: u64,
    set_size: usize,
    k_param: &Rational,
) -> Result<CensusReport> {
    validate(k_param)?;
    let n = set_size as u128;
    let cube = pow(n, 3);
    let k = dyadic_exponent(k_param);
    let mut bucket_sizes = vec![0usize; k as usize];
    let mut remainder = 0;
    let mut over = 0;
    for &e in energies {
        let e_big = big(e);
        let mut placed = false;
        for i in 1..=k {
            let lower = &e_big * num_traits::pow(BigInt::from(2), i as usize) > cube;
            let upper = &e_big * num_traits::pow(BigInt::from(2), i as usize - 1) <= cube;
            if lower && upper {
                bucket_sizes[i as usize - 1] += 1;
                placed = true;
            }
        }
        if !placed {
            remainder += 1;
        }
        if Rational::from_integer(e_big) > Rational::from_integer(cube.clone()) / k_param {
            over += 1;
        }
    }
    let (k_le_p_over_a, k_le_sqrt_a) = flags(k_param, p, set_size);
    Ok(CensusReport {
        k_param: k_param.clone(),
        k,
        bucket_sizes,
        remainder,
        over_threshold_count: over,
        k_le_p_over_a,
        k_le_sqrt_a,
    })
}
