//! Subsets of `F_p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use bitvec::prelude::*;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::rng::rng_from_seed;

/// Sign in `A + B` / `A - B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A subset of `F_p`, stored both as a sorted element list and as a bit vector.
#[derive(Clone)]
pub struct FpSet {
    field: Arc<PrimeField>,
    elems: Vec<FieldElement>,
    bits: BitVec<u64, Lsb0>,
}

impl fmt::Debug for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpSet(p={}, ", self.field.p())?;
        f.debug_set()
            .entries(self.elems.iter().map(|e| e.value()))
            .finish()?;
        write!(f, ")")
    }
}

impl PartialEq for FpSet {
    fn eq(&self, other: &Self) -> bool {
        self.field.p() == other.field.p() && self.elems == other.elems
    }
}

impl Eq for FpSet {}

impl FpSet {
    fn from_bits(field: Arc<PrimeField>, bits: BitVec<u64, Lsb0>) -> Self {
        let elems = bits
            .iter_ones()
            .map(|i| FieldElement::from_raw(i as u32))
            .collect();
        FpSet { field, elems, bits }
    }

    pub fn empty(field: &Arc<PrimeField>) -> Self {
        Self::from_bits(field.clone(), bitvec![u64, Lsb0; 0; field.size()])
    }

    /// The whole field.
    pub fn full(field: &Arc<PrimeField>) -> Self {
        Self::from_bits(field.clone(), bitvec![u64, Lsb0; 1; field.size()])
    }

    /// Reduces every value mod `p`, deduplicating.
    pub fn from_elements<I>(field: &Arc<PrimeField>, values: I) -> Self
    where
        I: IntoIterator<Item = u64>,
    {
        let mut bits = bitvec![u64, Lsb0; 0; field.size()];
        for v in values {
            bits.set(field.elem(v).index(), true);
        }
        Self::from_bits(field.clone(), bits)
    }

    pub fn from_field_elements<I>(field: &Arc<PrimeField>, values: I) -> Self
    where
        I: IntoIterator<Item = FieldElement>,
    {
        let mut bits = bitvec![u64, Lsb0; 0; field.size()];
        for v in values {
            bits.set(v.index(), true);
        }
        Self::from_bits(field.clone(), bits)
    }

    /// Uniformly random `n`-subset, deterministic in `seed`.
    ///
    /// Uses a sparse partial Fisher-Yates shuffle over `[0, p)`; when
    /// `n > p / 2` the complement is sampled instead.
    pub fn random_uniform(field: &Arc<PrimeField>, n: usize, seed: u64) -> Result<Self> {
        let p = field.size();
        if n > p {
            return Err(Error::SizeTooLarge {
                n: n as u64,
                p: p as u64,
            });
        }
        let complement = n > p / 2;
        let draw = if complement { p - n } else { n };
        let mut rng = rng_from_seed(seed);
        let mut displaced: HashMap<usize, usize> = HashMap::with_capacity(2 * draw);
        let mut bits: BitVec<u64, Lsb0> = BitVec::repeat(complement, p);
        for i in 0..draw {
            let j = rng.gen_range(i..p);
            let at_j = *displaced.get(&j).unwrap_or(&j);
            let at_i = *displaced.get(&i).unwrap_or(&i);
            displaced.insert(j, at_i);
            bits.set(at_j, !complement);
        }
        Ok(Self::from_bits(field.clone(), bits))
    }

    /// `{a0, a0 + 1, ..., a0 + n - 1}`.
    pub fn interval(field: &Arc<PrimeField>, a0: FieldElement, n: usize) -> Result<Self> {
        if n > field.size() {
            return Err(Error::BadParameter(format!(
                "interval of length {n} does not fit in F_{}",
                field.p()
            )));
        }
        Ok(Self::from_elements(
            field,
            (0..n as u64).map(|i| a0.value() as u64 + i),
        ))
    }

    /// `{a0, a0 r, ..., a0 r^{n-1}}`; requires `r` of multiplicative order at least `n`.
    pub fn geometric(
        field: &Arc<PrimeField>,
        ratio: FieldElement,
        a0: FieldElement,
        n: usize,
    ) -> Result<Self> {
        if ratio.is_zero() || a0.is_zero() {
            return Err(Error::BadParameter(
                "geometric progression needs non-zero ratio and start".into(),
            ));
        }
        let order = field.order_of(ratio)?;
        if (n as u64) > order {
            return Err(Error::BadParameter(format!(
                "ratio {ratio} has order {order} < {n}"
            )));
        }
        let mut out = Vec::with_capacity(n);
        let mut x = a0;
        for _ in 0..n {
            out.push(x);
            x = field.mul(x, ratio);
        }
        Ok(Self::from_field_elements(field, out))
    }

    /// The multiplicative subgroup of order `d`.
    pub fn subgroup(field: &Arc<PrimeField>, d: usize) -> Result<Self> {
        let order = field.group_order();
        if d == 0 || !order.is_multiple_of(d) {
            return Err(Error::BadParameter(format!(
                "{d} does not divide p - 1 = {order}"
            )));
        }
        let step = order / d;
        Ok(Self::from_field_elements(
            field,
            (0..d).map(|i| field.exp(i * step)),
        ))
    }

    pub fn field(&self) -> &Arc<PrimeField> {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elems
    }

    pub fn values(&self) -> Vec<u32> {
        self.elems.iter().map(|e| e.value()).collect()
    }

    pub fn bits(&self) -> &BitSlice<u64, Lsb0> {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, x: FieldElement) -> bool {
        self.bits[x.index()]
    }

    pub fn same_field(&self, other: &FpSet) -> Result<()> {
        if self.p() == other.p() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.p(), other.p()))
        }
    }

    /// `{c + λa : a ∈ A}`.
    pub fn affine_image(&self, lambda: FieldElement, c: FieldElement) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroDilation);
        }
        let f = &self.field;
        Ok(Self::from_field_elements(
            f,
            self.elems.iter().map(|&a| f.add(c, f.mul(lambda, a))),
        ))
    }

    pub fn dilate(&self, xi: FieldElement) -> Result<Self> {
        self.affine_image(xi, FieldElement::ZERO)
    }

    /// Support of `A + B` or `A - B`.
    pub fn pointwise_sum(&self, other: &FpSet, sign: Sign) -> Result<Self> {
        self.same_field(other)?;
        let f = &self.field;
        let mut bits = bitvec![u64, Lsb0; 0; f.size()];
        for &a in &self.elems {
            for &b in &other.elems {
                let x = match sign {
                    Sign::Plus => f.add(a, b),
                    Sign::Minus => f.sub(a, b),
                };
                bits.set(x.index(), true);
            }
        }
        Ok(Self::from_bits(f.clone(), bits))
    }

    /// `S T = {st}`.
    pub fn pointwise_product(&self, other: &FpSet) -> Result<Self> {
        self.same_field(other)?;
        let f = &self.field;
        let mut bits = bitvec![u64, Lsb0; 0; f.size()];
        for &s in &self.elems {
            for &t in &other.elems {
                bits.set(f.mul(s, t).index(), true);
            }
        }
        Ok(Self::from_bits(f.clone(), bits))
    }

    /// Finds `(λ, c)` with `self = c + λ base`, if any.
    pub fn find_affine_map(&self, base: &FpSet) -> Result<(FieldElement, FieldElement)> {
        self.same_field(base)?;
        let f = &self.field;
        let n = base.len();
        if n != self.len() {
            return Err(Error::NotAffineImage);
        }
        if n == 0 {
            return Ok((FieldElement::ONE, FieldElement::ZERO));
        }
        if n == f.size() {
            return Ok((FieldElement::ONE, FieldElement::ZERO));
        }
        // Summing c + λa over A pins c = (ΣB - λΣA) / n for each λ.
        let sum_a = base
            .elems
            .iter()
            .fold(FieldElement::ZERO, |s, &a| f.add(s, a));
        let sum_b = self
            .elems
            .iter()
            .fold(FieldElement::ZERO, |s, &b| f.add(s, b));
        let inv_n = f.mod_inverse(f.elem(n as u64))?;
        for lambda in f.units() {
            let c = f.mul(f.sub(sum_b, f.mul(lambda, sum_a)), inv_n);
            if base
                .elems
                .iter()
                .all(|&a| self.contains(f.add(c, f.mul(lambda, a))))
            {
                return Ok((lambda, c));
            }
        }
        Err(Error::NotAffineImage)
    }
}
