//! Exact length-`n` discrete Fourier transforms modulo word-size primes.
//!
//! For a cyclic group of order `n` (here `F_p^*` in dlog coordinates) the
//! characters are `k ↦ ω^{jk}` with `ω` a primitive `n`-th root of unity.
//! Working modulo a prime `q ≡ 1 (mod 2n)` keeps every character value exact.
//! Arbitrary `n` is handled by Bluestein's chirp identity
//! `jk = (j² + k² - (j - k)²) / 2`, which needs a primitive `2n`-th root `ψ`
//! and a power-of-two convolution, so `q` is chosen `≡ 1` modulo both.

use crate::error::{Error, Result};
use crate::field::{distinct_prime_factors, is_prime, pow_mod_u64};
use crate::transform::ntt::NttField;

const Q_LIMIT: u64 = 1 << 63;

#[derive(Debug, Clone, Copy)]
pub struct DftPrime {
    ntt: NttField,
    n: usize,
    conv_len: usize,
    /// Primitive `2n`-th root of unity.
    psi: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// The `count` largest primes below `2^63` supporting length-`n` transforms.
pub fn dft_primes(n: usize, count: usize) -> Result<Vec<DftPrime>> {
    assert!(n >= 1);
    let two_n = 2 * n as u64;
    let conv_len = (2 * n - 1).next_power_of_two();
    let modulus_step = (two_n / gcd(two_n, conv_len as u64))
        .checked_mul(conv_len as u64)
        .filter(|&m| m < Q_LIMIT)
        .ok_or_else(|| Error::BadParameter(format!("no transform primes for length {n}")))?;
    let mut factors = distinct_prime_factors(two_n);
    if !factors.contains(&2) {
        factors.push(2);
    }

    let mut out = Vec::with_capacity(count);
    let mut c = (Q_LIMIT - 2) / modulus_step;
    while out.len() < count && c > 0 {
        let q = c * modulus_step + 1;
        c -= 1;
        if !is_prime(q) {
            continue;
        }
        let cofactor = (q - 1) / modulus_step;
        // Any h whose projection onto the order-M subgroup has full order works.
        let z = (2..q)
            .map(|h| pow_mod_u64(h, cofactor, q))
            .find(|&z| {
                factors
                    .iter()
                    .all(|&l| pow_mod_u64(z, modulus_step / l, q) != 1)
            })
            .expect("cyclic group has a generator");
        let psi = pow_mod_u64(z, modulus_step / two_n, q);
        let ntt_root = pow_mod_u64(z, modulus_step / conv_len as u64, q);
        out.push(DftPrime {
            ntt: NttField::new(q, ntt_root, conv_len.trailing_zeros()),
            n,
            conv_len,
            psi,
        });
    }
    if out.len() < count {
        return Err(Error::BadParameter(format!(
            "found only {} of {count} transform primes for length {n}",
            out.len()
        )));
    }
    Ok(out)
}

impl DftPrime {
    pub fn q(&self) -> u64 {
        self.ntt.q()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Primitive `n`-th root of unity `ω = ψ²`.
    pub fn omega(&self) -> u64 {
        self.ntt.mont.mul_plain(self.psi, self.psi)
    }

    fn chirp(&self, k: usize, inverse: bool) -> u64 {
        let two_n = 2 * self.n as u128;
        let mut e = (k as u128 * k as u128 % two_n) as u64;
        if inverse {
            e = (two_n as u64 - e) % two_n as u64;
        }
        pow_mod_u64(self.psi, e, self.q())
    }

    /// `X_j = Σ_k x_k ω^{jk}` for `j < n`; inputs must be reduced mod `q`.
    pub fn dft(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.n);
        let m = &self.ntt.mont;
        let big = self.conv_len;
        let mut a = vec![0u64; big];
        let mut b = vec![0u64; big];
        for (k, &xk) in x.iter().enumerate() {
            a[k] = m.mul_plain(xk, self.chirp(k, false));
        }
        for k in 0..self.n {
            let c = self.chirp(k, true);
            b[k] = c;
            if k > 0 {
                b[big - k] = c;
            }
        }
        let conv = self.ntt.cyclic_convolution_pow2(a, b);
        (0..self.n)
            .map(|j| m.mul_plain(conv[j], self.chirp(j, false)))
            .collect()
    }

    /// Quadratic reference for [`DftPrime::dft`].
    pub fn naive_dft(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.n);
        let q = self.q();
        let m = &self.ntt.mont;
        let omega = self.omega();
        (0..self.n)
            .map(|j| {
                let w = pow_mod_u64(omega, j as u64, q);
                let mut acc = 0u64;
                let mut wk = 1u64;
                for &xk in x {
                    acc = m.add(acc, m.mul_plain(xk, wk));
                    wk = m.mul_plain(wk, w);
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.ntt.mont.mul_plain(a, b)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.ntt.mont.add(a, b)
    }

    pub fn inverse(&self, a: u64) -> u64 {
        pow_mod_u64(a, self.q() - 2, self.q())
    }
}
