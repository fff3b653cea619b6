//! Prime-field arithmetic with discrete-logarithm tables.
//!
//! A [`PrimeField`] owns the exponential table `k -> g^k` and its inverse,
//! the discrete logarithm, for the smallest primitive root `g`. Both tables
//! use 32-bit entries, so construction is capped at `p <= 2^26` by default.

use std::fmt;

use crate::error::{Error, Result};

/// Default upper bound on `p` for table construction.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 26;

/// Witnesses making Miller-Rabin deterministic for every `n < 2^64`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^e mod m` for any 64-bit modulus `m >= 1`.
pub fn pow_mod_u64(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod_u64(result, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    result
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`, ascending, by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least `g >= 1` generating the multiplicative group of `Z/pZ`.
pub fn smallest_primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let order = p - 1;
    let factors = distinct_prime_factors(order);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod_u64(g, order / q, p) != 1))
        .ok_or(Error::NotPrime(p))
}

/// An element of `F_p`, always reduced into `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Caller guarantees `v < p`.
    #[inline]
    pub(crate) fn from_raw(v: u32) -> Self {
        FieldElement(v)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `F_p` together with its primitive root and log tables.
///
/// Immutable after construction and therefore `Sync`.
pub struct PrimeField {
    p: u64,
    generator: u32,
    exp_table: Vec<u32>,
    dlog_table: Vec<u32>,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeField")
            .field("p", &self.p)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

impl PrimeField {
    /// Builds the log tables with the default cap.
    pub fn new(p: u64) -> Result<Self> {
        Self::with_cap(p, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(p: u64, cap: u64) -> Result<Self> {
        if p > cap {
            return Err(Error::TooLarge { p, cap });
        }
        let g = smallest_primitive_root(p)?;
        let order = (p - 1) as usize;
        let mut exp_table = Vec::with_capacity(order);
        let mut dlog_table = vec![0u32; p as usize];
        let mut x = 1u64;
        for k in 0..order {
            exp_table.push(x as u32);
            dlog_table[x as usize] = k as u32;
            x = x * g % p;
        }
        Ok(PrimeField {
            p,
            generator: g as u32,
            exp_table,
            dlog_table,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.p as usize
    }

    /// Order of the multiplicative group, `p - 1`.
    #[inline]
    pub fn group_order(&self) -> usize {
        self.p as usize - 1
    }

    pub fn generator(&self) -> FieldElement {
        FieldElement(self.generator)
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp_table
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn elem(&self, x: u64) -> FieldElement {
        FieldElement((x % self.p) as u32)
    }

    /// Reduces a signed integer into the field.
    #[inline]
    pub fn elem_signed(&self, x: i64) -> FieldElement {
        FieldElement(x.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 as u64 + b.0 as u64;
        FieldElement(if s >= self.p { s - self.p } else { s } as u32)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (a, b) = (a.0 as u64, b.0 as u64);
        FieldElement(if a >= b { a - b } else { a + self.p - b } as u32)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement((a.0 as u64 * b.0 as u64 % self.p) as u32)
    }

    pub fn mod_pow(&self, base: FieldElement, e: u64) -> FieldElement {
        FieldElement(pow_mod_u64(base.0 as u64, e, self.p) as u32)
    }

    pub fn mod_inverse(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let n = self.group_order();
        let k = self.dlog_table[a.index()] as usize;
        Ok(FieldElement(self.exp_table[(n - k) % n]))
    }

    /// `a / b`, i.e. `a * b^{-1}`.
    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.mod_inverse(b)?))
    }

    /// Discrete log base `g`. Panics on zero.
    #[inline]
    pub fn dlog(&self, x: FieldElement) -> usize {
        assert!(!x.is_zero(), "dlog of zero");
        self.dlog_table[x.index()] as usize
    }

    /// `g^k` for `k` taken modulo `p - 1`.
    #[inline]
    pub fn exp(&self, k: usize) -> FieldElement {
        FieldElement(self.exp_table[k % self.group_order()])
    }

    /// Multiplicative order of a non-zero element.
    pub fn order_of(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let n = self.group_order() as u64;
        let k = self.dlog(x) as u64;
        Ok(n / num_integer::gcd(n, k))
    }

    /// All elements of the field in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.p as u32).map(FieldElement)
    }

    /// Non-zero elements in increasing order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.p as u32).map(FieldElement)
    }
}
