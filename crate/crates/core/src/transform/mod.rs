//! Exact integer convolution over `(F_p, +)` and `(F_p^*, *)`.
//!
//! Every convolution first computes a certified bound on its output entries,
//! `min(total(f) max(h), total(h) max(f))`, then runs number-theoretic
//! transforms modulo just enough of the primes in [`ntt::NTT_PRIMES`] for
//! their product to exceed that bound, and reconstructs by CRT. Outputs are
//! therefore exact whenever the bound is below `2^127`; otherwise the call
//! fails with [`Error::OverflowGuard`].

pub mod dft;
pub mod ntt;
mod repfn;

use rayon::prelude::*;

pub use repfn::{Domain, RepFn};

use crate::error::{Error, Result};
use crate::field::{mul_mod_u64, pow_mod_u64};
use crate::sets::{FpSet, Sign};
use ntt::{NttField, NTT_PRIMES};

/// Supports smaller than this go through the sparse quadratic path.
pub const DEFAULT_CUTOVER: usize = 64;

const EXACT_LIMIT: u128 = 1 << 127;

/// Convolution driver. `cutover = 0` forces the transform path.
#[derive(Debug, Clone, Copy)]
pub struct ConvolutionEngine {
    pub cutover: usize,
}

impl Default for ConvolutionEngine {
    fn default() -> Self {
        ConvolutionEngine {
            cutover: DEFAULT_CUTOVER,
        }
    }
}

/// `min(total(f) max(h), total(h) max(f))`, or `None` if both overflow.
fn output_bound(f: &[u128], h: &[u128]) -> Option<u128> {
    let stats = |v: &[u128]| {
        let total = v.iter().try_fold(0u128, |a, &x| a.checked_add(x));
        let max = v.iter().copied().max().unwrap_or(0);
        (total, max)
    };
    let (tf, mf) = stats(f);
    let (th, mh) = stats(h);
    let a = tf.and_then(|t| t.checked_mul(mh));
    let b = th.and_then(|t| t.checked_mul(mf));
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (x, y) => x.or(y),
    }
}

fn guard(f: &[u128], h: &[u128]) -> Result<u128> {
    match output_bound(f, h) {
        Some(b) if b < EXACT_LIMIT => Ok(b),
        Some(b) => Err(Error::OverflowGuard {
            bound: b.to_string(),
        }),
        None => Err(Error::OverflowGuard {
            bound: ">= 2^128".into(),
        }),
    }
}

/// Garner reconstruction from residues modulo the first `k` NTT primes.
struct Crt {
    k: usize,
    q: [u64; 3],
    inv_q1_mod_q2: u64,
    q1_mod_q3: u64,
    inv_q1q2_mod_q3: u64,
}

impl Crt {
    fn new(k: usize) -> Self {
        let q = [NTT_PRIMES[0].0, NTT_PRIMES[1].0, NTT_PRIMES[2].0];
        let inv = |a: u64, m: u64| pow_mod_u64(a % m, m - 2, m);
        let q1_mod_q3 = q[0] % q[2];
        let q1q2_mod_q3 = mul_mod_u64(q1_mod_q3, q[1] % q[2], q[2]);
        Crt {
            k,
            q,
            inv_q1_mod_q2: inv(q[0], q[1]),
            q1_mod_q3,
            inv_q1q2_mod_q3: inv(q1q2_mod_q3, q[2]),
        }
    }

    /// Number of primes whose product exceeds `bound`.
    fn primes_needed(bound: u128) -> usize {
        let q1 = NTT_PRIMES[0].0 as u128;
        let q2 = NTT_PRIMES[1].0 as u128;
        if bound < q1 {
            1
        } else if bound < q1 * q2 {
            2
        } else {
            3
        }
    }

    fn reconstruct(&self, r: &[u64]) -> Result<u128> {
        let [q1, q2, q3] = self.q;
        let x1 = r[0];
        if self.k == 1 {
            return Ok(x1 as u128);
        }
        let d2 = (r[1] as u128 + q2 as u128 - (x1 % q2) as u128) as u64 % q2;
        let x2 = mul_mod_u64(d2, self.inv_q1_mod_q2, q2);
        let low = x1 as u128 + q1 as u128 * x2 as u128;
        if self.k == 2 {
            return Ok(low);
        }
        let sub = (x1 % q3 + mul_mod_u64(self.q1_mod_q3, x2 % q3, q3)) % q3;
        let d3 = (r[2] as u128 + q3 as u128 - sub as u128) as u64 % q3;
        let x3 = mul_mod_u64(d3, self.inv_q1q2_mod_q3, q3);
        (q1 as u128 * q2 as u128)
            .checked_mul(x3 as u128)
            .and_then(|hi| hi.checked_add(low))
            .ok_or(Error::ArithmeticOverflow("CRT reconstruction"))
    }
}

/// Dense quadratic cyclic convolution: `out[k] = Σ_{i+j ≡ k} f[i] h[j]`.
pub fn naive_cyclic_convolution(f: &[u128], h: &[u128]) -> Result<Vec<u128>> {
    let n = f.len();
    assert_eq!(n, h.len());
    let mut out = vec![0u128; n];
    for (i, &a) in f.iter().enumerate().filter(|(_, &a)| a != 0) {
        for (j, &b) in h.iter().enumerate().filter(|(_, &b)| b != 0) {
            let k = (i + j) % n;
            out[k] = a
                .checked_mul(b)
                .and_then(|ab| out[k].checked_add(ab))
                .ok_or(Error::ArithmeticOverflow("naive convolution"))?;
        }
    }
    Ok(out)
}

impl ConvolutionEngine {
    pub fn with_cutover(cutover: usize) -> Self {
        ConvolutionEngine { cutover }
    }

    /// Exact cyclic convolution of two equal-length vectors.
    pub fn cyclic_convolution(&self, f: &[u128], h: &[u128]) -> Result<Vec<u128>> {
        assert_eq!(f.len(), h.len());
        let n = f.len();
        let bound = guard(f, h)?;
        if bound == 0 {
            return Ok(vec![0; n]);
        }
        let support = |v: &[u128]| v.iter().filter(|&&x| x != 0).count();
        if support(f).min(support(h)) < self.cutover {
            return naive_cyclic_convolution(f, h);
        }
        let k = Crt::primes_needed(bound);
        let residues: Vec<Vec<u64>> = NTT_PRIMES[..k]
            .par_iter()
            .map(|&(q, g)| {
                let field = NttField::from_primitive_root(q, g);
                let reduce = |v: &[u128]| {
                    v.iter()
                        .map(|&x| (x % q as u128) as u64)
                        .collect::<Vec<_>>()
                };
                field.cyclic_convolution(&reduce(f), &reduce(h))
            })
            .collect();
        let crt = Crt::new(k);
        let mut out = Vec::with_capacity(n);
        let mut r = [0u64; 3];
        for i in 0..n {
            for (slot, res) in r.iter_mut().zip(&residues) {
                *slot = res[i];
            }
            let v = crt.reconstruct(&r[..k])?;
            debug_assert!(v <= bound);
            out.push(v);
        }
        Ok(out)
    }

    /// `r(x) = #{(a, b) ∈ A × B : a ± b = x}`.
    pub fn additive_rep(&self, a: &FpSet, b: &FpSet, sign: Sign) -> Result<RepFn> {
        a.same_field(b)?;
        let field = a.field();
        let f = RepFn::indicator(a);
        let mut h = vec![0u128; field.size()];
        for &y in b.elements() {
            let idx = match sign {
                Sign::Plus => y,
                Sign::Minus => field.neg(y),
            };
            h[idx.index()] = 1;
        }
        let values = self.cyclic_convolution(f.values(), &h)?;
        RepFn::new(field, Domain::Additive, values)
    }

    /// `(f * h)(x) = Σ_{st = x, s,t ≠ 0} f(s) h(t)` for `x ∈ F_p^*`; the
    /// values of `f` and `h` at 0 are ignored.
    pub fn mult_convolution(&self, f: &RepFn, h: &RepFn) -> Result<RepFn> {
        f.check_same_field(h)?;
        let field = f.field();
        let conv = self.cyclic_convolution(&f.to_dlog_coords(), &h.to_dlog_coords())?;
        RepFn::from_dlog_coords(field, &conv)
    }

    /// `C(ξ) = Σ_{t ≠ 0} f(t) f(t ξ^{-1})` for every `ξ ∈ F_p^*`, indexed by
    /// field element (entry 0 is unused and zero).
    pub fn mult_autocorrelation(&self, f: &RepFn) -> Result<Vec<u128>> {
        let field = f.field();
        let n = field.group_order();
        let fwd = f.to_dlog_coords();
        // With ξ = g^j: Σ_k F(k) F(k - j) = (F ⊛ F(-·))(j).
        let rev: Vec<u128> = (0..n).map(|m| fwd[(n - m) % n]).collect();
        let conv = self.cyclic_convolution(&fwd, &rev)?;
        let mut out = vec![0u128; field.size()];
        for (j, v) in conv.into_iter().enumerate() {
            out[field.exp(j).index()] = v;
        }
        Ok(out)
    }
}

pub fn additive_rep(a: &FpSet, b: &FpSet, sign: Sign) -> Result<RepFn> {
    ConvolutionEngine::default().additive_rep(a, b, sign)
}

pub fn mult_convolution(f: &RepFn, h: &RepFn) -> Result<RepFn> {
    ConvolutionEngine::default().mult_convolution(f, h)
}

pub fn mult_autocorrelation(f: &RepFn) -> Result<Vec<u128>> {
    ConvolutionEngine::default().mult_autocorrelation(f)
}

/// Pair-enumeration reference for [`additive_rep`].
pub fn naive_additive_rep(a: &FpSet, b: &FpSet, sign: Sign) -> Result<RepFn> {
    a.same_field(b)?;
    let field = a.field();
    let mut values = vec![0u128; field.size()];
    for &x in a.elements() {
        for &y in b.elements() {
            let s = match sign {
                Sign::Plus => field.add(x, y),
                Sign::Minus => field.sub(x, y),
            };
            values[s.index()] += 1;
        }
    }
    RepFn::new(field, Domain::Additive, values)
}

/// Pair-enumeration reference for [`mult_convolution`].
pub fn naive_mult_convolution(f: &RepFn, h: &RepFn) -> Result<RepFn> {
    f.check_same_field(h)?;
    let field = f.field();
    let mut values = vec![0u128; field.size()];
    for s in field.units().filter(|&s| f.get(s) != 0) {
        for t in field.units().filter(|&t| h.get(t) != 0) {
            let x = field.mul(s, t).index();
            values[x] = f
                .get(s)
                .checked_mul(h.get(t))
                .and_then(|v| values[x].checked_add(v))
                .ok_or(Error::ArithmeticOverflow(
                    "naive multiplicative convolution",
                ))?;
        }
    }
    RepFn::new(field, Domain::Multiplicative, values)
}

/// Direct reference for [`mult_autocorrelation`].
pub fn naive_mult_autocorrelation(f: &RepFn) -> Result<Vec<u128>> {
    let field = f.field();
    let mut out = vec![0u128; field.size()];
    for xi in field.units() {
        let xi_inv = field.mod_inverse(xi)?;
        let mut acc = 0u128;
        for t in field.units().filter(|&t| f.get(t) != 0) {
            acc = f
                .get(t)
                .checked_mul(f.get(field.mul(t, xi_inv)))
                .and_then(|v| acc.checked_add(v))
                .ok_or(Error::ArithmeticOverflow("naive autocorrelation"))?;
        }
        out[xi.index()] = acc;
    }
    Ok(out)
}

/// Values of a function at the listed points, for compact assertions.
pub fn values_at(f: &RepFn, xs: &[u64]) -> Vec<u128> {
    xs.iter().map(|&x| f.get(f.field().elem(x))).collect()
}
