//! Number-theoretic transforms over word-size primes.
//!
//! Data is kept in ordinary residue form; twiddles are stored in Montgomery
//! form so a single `mul` yields an ordinary residue.

use crate::field::pow_mod_u64;

/// Three primes `q < 2^63` with `2^32 | q - 1`, paired with a primitive root.
pub const NTT_PRIMES: [(u64, u64); 3] = [
    (9_223_372_006_790_004_737, 3),
    (9_223_371_938_070_528_001, 19),
    (9_223_371_877_940_985_857, 5),
];

/// Montgomery arithmetic modulo an odd `q < 2^63` with `R = 2^64`.
#[derive(Debug, Clone, Copy)]
pub struct Montgomery {
    q: u64,
    q_neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub fn new(q: u64) -> Self {
        assert!(
            q % 2 == 1 && q < 1 << 63,
            "modulus must be odd and below 2^63"
        );
        // Newton iteration doubles the number of correct low bits each step.
        let mut inv = q;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(q.wrapping_mul(inv)));
        }
        debug_assert_eq!(q.wrapping_mul(inv), 1);
        let r = ((1u128 << 64) % q as u128) as u64;
        let r2 = (r as u128 * r as u128 % q as u128) as u64;
        Montgomery {
            q,
            q_neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.q_neg_inv);
        let u = ((t + m as u128 * self.q as u128) >> 64) as u64;
        if u >= self.q {
            u - self.q
        } else {
            u
        }
    }

    /// `a b R^{-1} mod q`.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.q, self.r2)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    /// Ordinary-form `a * b mod q`.
    #[inline]
    pub fn mul_plain(&self, a: u64, b: u64) -> u64 {
        self.mul(self.mul(a, b), self.r2)
    }
}

/// A prime together with an element of order `2^max_log`.
#[derive(Debug, Clone, Copy)]
pub struct NttField {
    pub mont: Montgomery,
    root: u64,
    max_log: u32,
}

impl NttField {
    /// `root` must have multiplicative order exactly `2^max_log` modulo `q`.
    pub fn new(q: u64, root: u64, max_log: u32) -> Self {
        NttField {
            mont: Montgomery::new(q),
            root,
            max_log,
        }
    }

    /// Uses the full 2-power part of `q - 1`, given a primitive root of `q`.
    pub fn from_primitive_root(q: u64, g: u64) -> Self {
        let max_log = (q - 1).trailing_zeros();
        let root = pow_mod_u64(g, (q - 1) >> max_log, q);
        Self::new(q, root, max_log)
    }

    pub fn q(&self) -> u64 {
        self.mont.modulus()
    }

    pub fn max_len(&self) -> usize {
        1usize << self.max_log.min(usize::BITS - 1)
    }

    /// Primitive `n`-th root of unity for `n = 2^log_n`.
    fn root_of_order(&self, log_n: u32) -> u64 {
        assert!(log_n <= self.max_log, "transform length exceeds 2-adicity");
        pow_mod_u64(self.root, 1u64 << (self.max_log - log_n), self.q())
    }

    fn twiddles(&self, n: usize, inverse: bool) -> Vec<u64> {
        let log_n = n.trailing_zeros();
        let mut w = self.root_of_order(log_n);
        if inverse {
            w = pow_mod_u64(w, self.q() - 2, self.q());
        }
        let w_m = self.mont.to_mont(w);
        let mut out = Vec::with_capacity(n / 2);
        let mut cur = self.mont.to_mont(1);
        for _ in 0..n / 2 {
            out.push(cur);
            cur = self.mont.mul(cur, w_m);
        }
        out
    }

    /// Decimation in frequency: natural order in, bit-reversed order out.
    fn forward(&self, a: &mut [u64], tw: &[u64]) {
        let n = a.len();
        let m = &self.mont;
        let mut len = n;
        while len >= 2 {
            let half = len / 2;
            let step = n / len;
            for block in a.chunks_exact_mut(len) {
                let (lo, hi) = block.split_at_mut(half);
                for (j, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let u = *x;
                    let v = *y;
                    *x = m.add(u, v);
                    *y = m.mul(m.sub(u, v), tw[j * step]);
                }
            }
            len = half;
        }
    }

    /// Decimation in time: bit-reversed order in, natural order out (unscaled).
    fn inverse(&self, a: &mut [u64], itw: &[u64]) {
        let n = a.len();
        let m = &self.mont;
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            for block in a.chunks_exact_mut(len) {
                let (lo, hi) = block.split_at_mut(half);
                for (j, (x, y)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let u = *x;
                    let v = m.mul(*y, itw[j * step]);
                    *x = m.add(u, v);
                    *y = m.sub(u, v);
                }
            }
            len *= 2;
        }
    }

    /// Cyclic convolution of two residue vectors of the same power-of-two length.
    pub fn cyclic_convolution_pow2(&self, mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
        let n = a.len();
        assert!(n.is_power_of_two() && b.len() == n);
        if n == 1 {
            return vec![self.mont.mul_plain(a[0], b[0])];
        }
        let tw = self.twiddles(n, false);
        let itw = self.twiddles(n, true);
        self.forward(&mut a, &tw);
        self.forward(&mut b, &tw);
        let m = &self.mont;
        // mul leaves a factor R^{-1}; the final scale restores it together with 1/n.
        for (x, y) in a.iter_mut().zip(&b) {
            *x = m.mul(*x, *y);
        }
        self.inverse(&mut a, &itw);
        let n_inv = pow_mod_u64(n as u64 % self.q(), self.q() - 2, self.q());
        let scale = m.to_mont(m.to_mont(n_inv));
        for x in a.iter_mut() {
            *x = m.mul(*x, scale);
        }
        a
    }

    /// Cyclic convolution of length `n` (any `n`), via zero-padded linear
    /// convolution and folding.
    pub fn cyclic_convolution(&self, f: &[u64], h: &[u64]) -> Vec<u64> {
        let n = f.len();
        assert_eq!(n, h.len());
        if n == 0 {
            return Vec::new();
        }
        let size = (2 * n - 1).next_power_of_two();
        let mut a = vec![0u64; size];
        let mut b = vec![0u64; size];
        a[..n].copy_from_slice(f);
        b[..n].copy_from_slice(h);
        let lin = self.cyclic_convolution_pow2(a, b);
        let mut out = lin[..n].to_vec();
        for (k, &v) in lin[n..2 * n - 1].iter().enumerate() {
            out[k] = self.mont.add(out[k], v);
        }
        out
    }
}
