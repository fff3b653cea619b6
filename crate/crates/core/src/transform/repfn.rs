use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::sets::FpSet;

/// Which group a representation function is convolved over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Indexed by `F_p`, convolved over `(F_p, +)`.
    Additive,
    /// Supported on `F_p^*`, convolved over `(F_p^*, *)`; the entry at 0 is always 0.
    Multiplicative,
}

/// An exact non-negative integer function on `F_p`.
///
/// Values are indexed by field element in both domains; in the multiplicative
/// domain the entry at 0 is pinned to zero and [`RepFn::to_dlog_coords`] gives
/// the `Z_{p-1}` view.
#[derive(Clone, PartialEq, Eq)]
pub struct RepFn {
    field: Arc<PrimeField>,
    domain: Domain,
    values: Vec<u128>,
    total: u128,
}

impl std::fmt::Debug for RepFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RepFn")
            .field("p", &self.field.p())
            .field("domain", &self.domain)
            .field("values", &self.values)
            .field("total", &self.total)
            .finish()
    }
}

impl RepFn {
    pub fn new(field: &Arc<PrimeField>, domain: Domain, values: Vec<u128>) -> Result<Self> {
        if values.len() != field.size() {
            return Err(Error::BadParameter(format!(
                "expected {} values, got {}",
                field.size(),
                values.len()
            )));
        }
        if domain == Domain::Multiplicative && values[0] != 0 {
            return Err(Error::BadParameter(
                "multiplicative-domain function must vanish at 0".into(),
            ));
        }
        let total = values
            .iter()
            .try_fold(0u128, |acc, &v| acc.checked_add(v))
            .ok_or(Error::ArithmeticOverflow("RepFn total"))?;
        Ok(RepFn {
            field: field.clone(),
            domain,
            values,
            total,
        })
    }

    pub fn zero(field: &Arc<PrimeField>, domain: Domain) -> Self {
        RepFn {
            field: field.clone(),
            domain,
            values: vec![0; field.size()],
            total: 0,
        }
    }

    /// Indicator function of a set, in the additive domain.
    pub fn indicator(set: &FpSet) -> Self {
        let mut values = vec![0u128; set.field().size()];
        for &x in set.elements() {
            values[x.index()] = 1;
        }
        RepFn {
            field: set.field().clone(),
            domain: Domain::Additive,
            values,
            total: set.len() as u128,
        }
    }

    /// Builds a multiplicative-domain function from values on `F_p^*` listed
    /// in dlog order (`values[k] = f(g^k)`).
    pub fn from_dlog_coords(field: &Arc<PrimeField>, dlog_values: &[u128]) -> Result<Self> {
        let mut values = vec![0u128; field.size()];
        for (k, &v) in dlog_values.iter().enumerate() {
            values[field.exp(k).index()] = v;
        }
        Self::new(field, Domain::Multiplicative, values)
    }

    pub fn field(&self) -> &Arc<PrimeField> {
        &self.field
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[u128] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: FieldElement) -> u128 {
        self.values[x.index()]
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn max(&self) -> u128 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    /// Restriction to `F_p^*`, re-tagged as multiplicative.
    pub fn nonzero_part(&self) -> Self {
        let mut values = self.values.clone();
        let dropped = values[0];
        values[0] = 0;
        RepFn {
            field: self.field.clone(),
            domain: Domain::Multiplicative,
            values,
            total: self.total - dropped,
        }
    }

    /// `Σ_x f(x)^2`, overflow-checked.
    pub fn sum_of_squares(&self) -> Result<u128> {
        self.values.iter().try_fold(0u128, |acc, &v| {
            v.checked_mul(v)
                .and_then(|sq| acc.checked_add(sq))
                .ok_or(Error::ArithmeticOverflow("sum of squares"))
        })
    }

    /// Values on `F_p^*` in dlog order: entry `k` is `f(g^k)`.
    pub fn to_dlog_coords(&self) -> Vec<u128> {
        self.field
            .exp_table()
            .iter()
            .map(|&x| self.values[x as usize])
            .collect()
    }

    pub(crate) fn check_same_field(&self, other: &RepFn) -> Result<()> {
        if self.field.p() == other.field.p() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field.p(), other.field.p()))
        }
    }
}
