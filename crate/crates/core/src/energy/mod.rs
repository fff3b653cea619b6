//! Additive energies `E_+(A, ξA)` and everything computed from the spectrum
//! `ξ ↦ E_+(A, ξA)`.
//!
//! The spectrum is produced by a single multiplicative autocorrelation of
//! `r = r_{A-A}` restricted to `F_p^*`:
//!
//! ```text
//! E_+(A, ξA) = |A|² + Σ_{t ≠ 0} r(t) r(t ξ^{-1})
//! ```
//!
//! where `|A|²` counts the quadruples with `a1 = a2` and `a3 = a4`.

mod bounds;
mod census;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

pub use bounds::{
    aymrs_bound, line_solution_count, mult_energy, murphy_lhs_rhs, naive_line_solution_count,
    naive_mult_energy, rudnev_lhs_rhs, BoundComparison,
};
pub use census::{brute_census, dyadic_census, CensusReport};

use crate::error::{Error, Result};
use crate::exact::{big, pow, ratio, Rational};
use crate::field::{FieldElement, PrimeField};
use crate::sets::{FpSet, Sign};
use crate::transform::{self, naive_additive_rep};

/// `E_+(A, ξA) = Σ_x r_{A-ξA}(x)^2`.
pub fn additive_energy(a: &FpSet, xi: FieldElement) -> Result<u128> {
    let dilate = a.dilate(xi)?;
    transform::additive_rep(a, &dilate, Sign::Minus)?.sum_of_squares()
}

/// Same quantity via pair enumeration; the per-ξ reference for the spectrum.
pub fn naive_additive_energy(a: &FpSet, xi: FieldElement) -> Result<u128> {
    let dilate = a.dilate(xi)?;
    naive_additive_rep(a, &dilate, Sign::Minus)?.sum_of_squares()
}

/// Exact `E_+(A, ξA)` for every `ξ ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergySpectrum {
    field: Arc<PrimeField>,
    set_size: usize,
    /// Indexed by `ξ`; entry 0 is unused.
    values: Vec<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BktCheck {
    pub lhs: u128,
    pub rhs: u128,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryCheck {
    /// `Σ_{ξ ∈ S} (E_+(A, ξA) - |A|⁴/p)`.
    pub lhs: Rational,
    /// `p |A|²`.
    pub bound: u128,
    pub holds: bool,
}

/// `|A|⁴ + p|A|² - 2|A|³`.
pub fn bkt_closed_form(p: u64, n: usize) -> u128 {
    let (p, n) = (p as u128, n as u128);
    n * n * (n * n + p - 2 * n)
}

pub fn energy_spectrum(a: &FpSet) -> Result<EnergySpectrum> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let r = transform::additive_rep(a, a, Sign::Minus)?;
    let auto = transform::mult_autocorrelation(&r.nonzero_part())?;
    let diag = (a.len() * a.len()) as u128;
    let values = auto
        .into_iter()
        .enumerate()
        .map(|(xi, v)| if xi == 0 { 0 } else { v + diag })
        .collect();
    Ok(EnergySpectrum {
        field: a.field().clone(),
        set_size: a.len(),
        values,
    })
}

/// Spectrum assembled from per-ξ pair enumeration.
pub fn naive_energy_spectrum(a: &FpSet) -> Result<EnergySpectrum> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let field = a.field();
    let mut values = vec![0u128; field.size()];
    for xi in field.units() {
        values[xi.index()] = naive_additive_energy(a, xi)?;
    }
    Ok(EnergySpectrum {
        field: field.clone(),
        set_size: a.len(),
        values,
    })
}

pub fn bkt_check(a: &FpSet) -> Result<BktCheck> {
    Ok(energy_spectrum(a)?.bkt_check())
}

pub fn bkt_corollary_check(a: &FpSet, s: &FpSet) -> Result<CorollaryCheck> {
    energy_spectrum(a)?.bkt_corollary_check(s)
}

impl EnergySpectrum {
    pub fn field(&self) -> &Arc<PrimeField> {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    #[inline]
    pub fn get(&self, xi: FieldElement) -> u128 {
        assert!(!xi.is_zero(), "the spectrum is defined on F_p^*");
        self.values[xi.index()]
    }

    /// `(ξ, E_+(A, ξA))` for `ξ = 1, ..., p - 1`.
    pub fn iter(&self) -> impl Iterator<Item = (FieldElement, u128)> + '_ {
        self.field
            .units()
            .map(move |xi| (xi, self.values[xi.index()]))
    }

    pub fn energies(&self) -> &[u128] {
        &self.values[1..]
    }

    /// `E_+(A) = E_+(A, 1·A)`.
    pub fn additive_energy(&self) -> u128 {
        self.values[1]
    }

    /// `μ = |A|⁴ / p`.
    pub fn mean_floor(&self) -> Rational {
        ratio(pow(self.set_size as u128, 4), self.p())
    }

    pub fn total(&self) -> u128 {
        self.energies().iter().sum()
    }

    /// `Σ_{ξ ≠ 0} E_+(A, ξA)²`.
    pub fn sum_of_squares(&self) -> BigInt {
        self.energies()
            .iter()
            .map(|&e| {
                let e = big(e);
                &e * &e
            })
            .sum()
    }

    /// `p E - |A|⁴`, the deviation from the mean scaled by `p`.
    pub(crate) fn scaled_deviation(&self, e: u128) -> BigInt {
        big(e) * BigInt::from(self.p()) - pow(self.set_size as u128, 4)
    }

    /// `Σ_{ξ ≠ 0} (E_+(A, ξA) - |A|⁴/p)²`.
    pub fn deviation_sum_of_squares(&self) -> Rational {
        let num: BigInt = self
            .energies()
            .iter()
            .map(|&e| {
                let d = self.scaled_deviation(e);
                &d * &d
            })
            .sum();
        ratio(num, BigInt::from(self.p()) * BigInt::from(self.p()))
    }

    pub fn bkt_check(&self) -> BktCheck {
        let lhs = self.total();
        let rhs = bkt_closed_form(self.p(), self.set_size);
        BktCheck {
            lhs,
            rhs,
            equal: lhs == rhs,
        }
    }

    pub fn bkt_corollary_check(&self, s: &FpSet) -> Result<CorollaryCheck> {
        if s.p() != self.p() {
            return Err(Error::FieldMismatch(self.p(), s.p()));
        }
        if s.contains(FieldElement::ZERO) {
            return Err(Error::ZeroInS);
        }
        let num: BigInt = s
            .elements()
            .iter()
            .map(|&xi| self.scaled_deviation(self.get(xi)))
            .sum();
        let lhs = ratio(num, self.p());
        let n = self.set_size as u128;
        let bound = self.p() as u128 * n * n;
        let holds = lhs <= Rational::from_integer(big(bound));
        Ok(CorollaryCheck { lhs, bound, holds })
    }

    /// `|A|² ≤ E ≤ |A|³` and `pE ≥ |A|⁴` for every `ξ`; returns the first
    /// offending `ξ`, if any.
    pub fn first_bound_violation(&self) -> Option<FieldElement> {
        let n = self.set_size as u128;
        self.iter()
            .find(|&(_, e)| e < n * n || e > n * n * n || self.scaled_deviation(e) < BigInt::zero())
            .map(|(xi, _)| xi)
    }
}
