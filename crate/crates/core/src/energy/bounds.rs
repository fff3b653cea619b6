//! Measured sides of the dilate-energy and translate-energy sum bounds.
//!
//! Each comparison reports the exact left-hand side and the bound expressions
//! with implied constant 1, as floats. Nothing here asserts the bounds; the
//! constants involved are not known.

use rayon::prelude::*;

use super::{energy_spectrum, EnergySpectrum};
use crate::error::{Error, Result};
use crate::exact::ratio_f64;
use crate::field::FieldElement;
use crate::sets::{FpSet, Sign};
use crate::transform::{self, naive_additive_rep, RepFn};

#[derive(Debug, Clone, PartialEq)]
pub struct BoundComparison {
    /// Exact `Σ_{x ∈ X} E(x)`.
    pub lhs: u128,
    /// `E(A)` for the undeformed energy (ξ = 1 or x = 0).
    pub base_energy: u128,
    pub set_size: usize,
    pub x_size: usize,
    /// `E^{1/2} (|A|^{3/2} |X|^{3/4} + |A| |X|)`.
    pub bound_a: f64,
    /// `|A|³ |X|^{3/4} + |A|^{5/2} |X|`.
    pub bound_b: f64,
    pub ratio_a: f64,
    pub ratio_b: f64,
    /// `|A|² |X| / p²`.
    pub precondition_ratio: f64,
}

impl BoundComparison {
    fn new(lhs: u128, base_energy: u128, p: u64, n: usize, m: usize) -> Self {
        let (nf, mf, pf) = (n as f64, m as f64, p as f64);
        let bound_a = (base_energy as f64).sqrt() * (nf.powf(1.5) * mf.powf(0.75) + nf * mf);
        let bound_b = nf.powi(3) * mf.powf(0.75) + nf.powf(2.5) * mf;
        BoundComparison {
            lhs,
            base_energy,
            set_size: n,
            x_size: m,
            bound_a,
            bound_b,
            ratio_a: ratio_f64(lhs as f64, bound_a),
            ratio_b: ratio_f64(lhs as f64, bound_b),
            precondition_ratio: nf * nf * mf / (pf * pf),
        }
    }
}

pub fn rudnev_lhs_rhs(a: &FpSet, x: &FpSet) -> Result<BoundComparison> {
    a.same_field(x)?;
    energy_spectrum(a)?.rudnev(x)
}

impl EnergySpectrum {
    /// `Σ_{x ∈ X} E_+(A, xA)` against its bound expressions.
    pub fn rudnev(&self, x: &FpSet) -> Result<BoundComparison> {
        if x.p() != self.p() {
            return Err(Error::FieldMismatch(self.p(), x.p()));
        }
        if x.contains(FieldElement::ZERO) {
            return Err(Error::ZeroInX);
        }
        let lhs = x.elements().iter().map(|&xi| self.get(xi)).sum();
        Ok(BoundComparison::new(
            lhs,
            self.additive_energy(),
            self.p(),
            self.set_size(),
            x.len(),
        ))
    }
}

/// `|A|³ |X|^{3/2} + |A|² |X|²`.
pub fn aymrs_bound(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    n.powi(3) * m.powf(1.5) + n * n * m * m
}

/// `#{(a1, a2, a3, a4, x1, x2) : x1 (a1 - a2) = x2 (a3 - a4)}`, computed as
/// `Σ_t r_{X(A-A)}(t)²`.
pub fn line_solution_count(a: &FpSet, x: &FpSet) -> Result<u128> {
    a.same_field(x)?;
    if x.contains(FieldElement::ZERO) {
        return Err(Error::ZeroInX);
    }
    let diffs = transform::additive_rep(a, a, Sign::Minus)?.nonzero_part();
    let rep = transform::mult_convolution(&RepFn::indicator(x).nonzero_part(), &diffs)?;
    // t = 0 arises exactly from a1 = a2, with any x.
    let zero = (x.len() * a.len()) as u128;
    let nonzero = rep.sum_of_squares()?;
    zero.checked_mul(zero)
        .and_then(|z| z.checked_add(nonzero))
        .ok_or(Error::ArithmeticOverflow("line solution count"))
}

/// Six-fold enumeration reference for [`line_solution_count`].
pub fn naive_line_solution_count(a: &FpSet, x: &FpSet) -> Result<u128> {
    a.same_field(x)?;
    if x.contains(FieldElement::ZERO) {
        return Err(Error::ZeroInX);
    }
    let f = a.field();
    let d = naive_additive_rep(a, a, Sign::Minus)?;
    let mut rep = vec![0u128; f.size()];
    for &xi in x.elements() {
        for t in f.elements() {
            rep[f.mul(xi, t).index()] += d.get(t);
        }
    }
    Ok(rep.iter().map(|&v| v * v).sum())
}

/// `E_×(A, A + x) = #{a1 (a2 + x) = a3 (a4 + x)}`.
pub fn mult_energy(a: &FpSet, x: FieldElement) -> Result<u128> {
    let f = a.field();
    let shifted = a.affine_image(FieldElement::ONE, x)?;
    let nonzero = transform::mult_convolution(
        &RepFn::indicator(a).nonzero_part(),
        &RepFn::indicator(&shifted).nonzero_part(),
    )?;
    let n = a.len() as u128;
    let a_zero = u128::from(a.contains(FieldElement::ZERO));
    let b_zero = u128::from(shifted.contains(FieldElement::ZERO));
    debug_assert_eq!(shifted.contains(FieldElement::ZERO), a.contains(f.neg(x)));
    let zero = a_zero * n + n * b_zero - a_zero * b_zero;
    Ok(zero * zero + nonzero.sum_of_squares()?)
}

/// Product-histogram reference for [`mult_energy`].
pub fn naive_mult_energy(a: &FpSet, x: FieldElement) -> u128 {
    let f = a.field();
    let mut hist = vec![0u128; f.size()];
    for &a1 in a.elements() {
        for &a2 in a.elements() {
            hist[f.mul(a1, f.add(a2, x)).index()] += 1;
        }
    }
    hist.iter().map(|&v| v * v).sum()
}

/// `Σ_{x ∈ X} E_×(A, A + x)` against its bound expressions.
pub fn murphy_lhs_rhs(a: &FpSet, x: &FpSet) -> Result<BoundComparison> {
    a.same_field(x)?;
    let energies: Vec<u128> = x
        .elements()
        .par_iter()
        .map(|&xi| mult_energy(a, xi))
        .collect::<Result<_>>()?;
    let base = mult_energy(a, FieldElement::ZERO)?;
    Ok(BoundComparison::new(
        energies.iter().sum(),
        base,
        a.p(),
        a.len(),
        x.len(),
    ))
}
