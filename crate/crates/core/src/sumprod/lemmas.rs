//! Exact checks of the inequalities that lead from energies to solution counts.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{diff_product_rep, solution_count, Method, Signs};
use crate::energy::{energy_spectrum, EnergySpectrum};
use crate::error::{Error, Result};
use crate::exact::{big, integer, pow, ratio, to_f64, Rational};
use crate::field::FieldElement;
use crate::sets::FpSet;

#[derive(Debug, Clone, PartialEq)]
pub struct AddenRecord {
    /// Solutions with both sides nonzero, for `B, C, D` affine images of `A`.
    pub n_nonzero: u128,
    /// `Σ_{ξ ≠ 0} E_+(A, ξA)²`.
    pub energy_sum: BigInt,
    pub holds: bool,
    /// Solutions with both sides zero.
    pub zero_term: u128,
    /// `zero_term / |A|⁶`.
    pub zero_term_ratio: Rational,
}

/// Checks `N* ≤ Σ_{ξ≠0} E_+(A, ξA)²` for `(A - B)(C - D)`; each of `B, C, D`
/// must be of the form `c + λA` with `λ ≠ 0`.
pub fn adden_check(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet) -> Result<AddenRecord> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    for s in [b, c, d] {
        s.find_affine_map(a)?;
    }
    let rec = solution_count(a, b, c, d, Signs::MM, Method::Transform)?;
    let energy_sum = energy_spectrum(a)?.sum_of_squares();
    let n6 = pow(a.len() as u128, 6);
    Ok(AddenRecord {
        n_nonzero: rec.n_nonzero,
        holds: big(rec.n_nonzero) <= energy_sum,
        energy_sum,
        zero_term: rec.n_zero,
        zero_term_ratio: Rational::new(big(rec.n_zero), n6),
    })
}

/// [`adden_check`] with `B, C, D` built from `(λ, c)` pairs.
pub fn adden_check_with_maps(
    a: &FpSet,
    maps: [(FieldElement, FieldElement); 3],
) -> Result<AddenRecord> {
    let [b, c, d] = maps.map(|(lambda, shift)| a.affine_image(lambda, shift));
    adden_check(a, &b?, &c?, &d?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exi2Record {
    /// `Σ_{ξ≠0} (E - |A|⁴/p)²`.
    pub lhs_deviation_sum: Rational,
    /// `Σ E² - |A|⁸/p - 2|A|⁶ + 4|A|⁷/p - |A|⁸/p²`.
    pub rhs_exact: Rational,
    pub identity_holds: bool,
    /// `Σ E² ≤ |A|⁸/p + 2|A|⁶ + Σ (E - |A|⁴/p)²`.
    pub lemma_bound_holds: bool,
}

pub fn exi2_check(a: &FpSet) -> Result<Exi2Record> {
    Ok(energy_spectrum(a)?.exi2_check())
}

impl EnergySpectrum {
    pub fn exi2_check(&self) -> Exi2Record {
        let n = self.set_size() as u128;
        let p = BigInt::from(self.p());
        let sq = Rational::from_integer(self.sum_of_squares());
        let (n6, n7, n8) = (integer(pow(n, 6)), integer(pow(n, 7)), integer(pow(n, 8)));
        let lhs = self.deviation_sum_of_squares();
        let over_p = |x: &Rational| x / Rational::from_integer(p.clone());
        let rhs =
            &sq - over_p(&n8) - integer(2) * &n6 + integer(4) * over_p(&n7) - over_p(&over_p(&n8));
        let lemma_rhs = over_p(&n8) + integer(2) * &n6 + &lhs;
        Exi2Record {
            identity_holds: lhs == rhs,
            lemma_bound_holds: sq <= lemma_rhs,
            lhs_deviation_sum: lhs,
            rhs_exact: rhs,
        }
    }
}

/// Threshold `K` for the small/large split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitThreshold {
    Given(Rational),
    /// `K = (p/|A|)^{1/3}`, compared exactly through `K³ = p/|A|`.
    CubeRoot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicSplitReport {
    pub threshold: SplitThreshold,
    /// `K³`, exact in both cases.
    pub k_cubed: Rational,
    pub k: f64,
    /// Deviation sum over `E ≤ |A|^{5/2}`.
    pub very_small_sum: Rational,
    /// Deviation sum over `E ≤ |A|³/K`.
    pub small_sum: Rational,
    /// Deviation sum over `E > |A|³/K`.
    pub large_sum: Rational,
    pub total: Rational,
    /// `p |A|^{9/2}`.
    pub very_small_term: f64,
    /// `p |A|⁵ / K`.
    pub small_term: f64,
    /// `K² |A|⁶`.
    pub large_term: f64,
}

impl DyadicSplitReport {
    pub fn very_small_ratio(&self) -> f64 {
        to_f64(&self.very_small_sum) / self.very_small_term
    }

    pub fn small_ratio(&self) -> f64 {
        to_f64(&self.small_sum) / self.small_term
    }

    pub fn large_ratio(&self) -> f64 {
        to_f64(&self.large_sum) / self.large_term
    }

    /// `total / (p^{2/3} |A|^{16/3} + p |A|^{9/2})`.
    pub fn total_ratio(&self, p: u64, n: usize) -> f64 {
        let (p, n) = (p as f64, n as f64);
        to_f64(&self.total) / (p.powf(2.0 / 3.0) * n.powf(16.0 / 3.0) + p * n.powf(4.5))
    }
}

pub fn proposition_split(a: &FpSet, k: Option<Rational>) -> Result<DyadicSplitReport> {
    energy_spectrum(a)?.proposition_split(k)
}

impl EnergySpectrum {
    pub fn proposition_split(&self, k: Option<Rational>) -> Result<DyadicSplitReport> {
        let n = self.set_size();
        if n < 2 {
            return Err(Error::BadParameter(format!(
                "the split needs |A| >= 2, got {n}"
            )));
        }
        let (threshold, k_cubed) = match k {
            Some(k) if k <= Rational::zero() => {
                return Err(Error::BadParameter(format!("K must be positive, got {k}")));
            }
            Some(k) => (SplitThreshold::Given(k.clone()), num_traits::pow(k, 3)),
            None => (SplitThreshold::CubeRoot, ratio(self.p(), n)),
        };
        let nb = n as u128;
        let n5 = pow(nb, 5);
        // E ≤ |A|³/K  ⇔  E³ K³ ≤ |A|⁹  ⇔  E³ num ≤ |A|⁹ den.
        let n9_den = pow(nb, 9) * k_cubed.denom();
        let mut sums = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for &e in self.energies() {
            let d = self.scaled_deviation(e);
            let d2 = &d * &d;
            let eb = big(e);
            if &eb * &eb <= n5 {
                sums[0] += &d2;
            }
            if &eb * &eb * &eb * k_cubed.numer() <= n9_den {
                sums[1] += &d2;
            } else {
                sums[2] += &d2;
            }
        }
        let p2 = BigInt::from(self.p()) * BigInt::from(self.p());
        let [vs, s, l] = sums.map(|x| Rational::new(x, p2.clone()));
        let k_f = to_f64(&k_cubed).cbrt();
        let (pf, nf) = (self.p() as f64, n as f64);
        Ok(DyadicSplitReport {
            threshold,
            k: k_f,
            total: &s + &l,
            very_small_sum: vs,
            small_sum: s,
            large_sum: l,
            very_small_term: pf * nf.powf(4.5),
            small_term: pf * nf.powi(5) / k_f,
            large_term: k_f * k_f * nf.powi(6),
            k_cubed,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRecord {
    pub p: u64,
    pub support_size: usize,
    /// `(|A||B||C||D|)² / N`.
    pub cs_bound: Rational,
    /// `|(A ± B)(C ± D)| > p/2`.
    pub above_half_p: bool,
}

impl CoverageRecord {
    pub fn coverage_fraction(&self) -> f64 {
        self.support_size as f64 / self.p as f64
    }
}

pub fn coverage_lower_bound(
    a: &FpSet,
    b: &FpSet,
    c: &FpSet,
    d: &FpSet,
    signs: Signs,
) -> Result<CoverageRecord> {
    let r = diff_product_rep(a, b, c, d, signs)?;
    let n = r.sum_of_squares()?;
    let mass = big(r.total());
    let support_size = r.support_size();
    Ok(CoverageRecord {
        p: a.p(),
        support_size,
        cs_bound: Rational::new(&mass * &mass, big(n)),
        above_half_p: 2 * support_size as u64 > a.p(),
    })
}

impl AddenRecord {
    pub fn zero_term_ratio_f64(&self) -> f64 {
        self.zero_term_ratio.to_f64().unwrap_or(f64::NAN)
    }
}
