use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::pow_mod_u64;
use crate::sets::{FpSet, Sign};
use crate::transform::additive_rep;
use crate::transform::dft::{dft_primes, DftPrime};

/// `(p - 1)^{-1} Σ_χ |Σ_{a, a'} χ(a - a')|⁴` over multiplicative characters
/// with `χ(0) = 0`.
///
/// Characters are evaluated exactly: in dlog coordinates `χ_j(g^k) = ω^{jk}`,
/// so the character sums are a length-`(p - 1)` DFT of `r_{A-A}` taken modulo
/// several primes that contain `ω`. As `r` is real, `|S_j|² = S_j S_{-j}` and
/// the moment is `(p - 1)^{-1} Σ_j S_j² S_{-j}²`, recovered by CRT.
pub fn char_fourth_moment(a: &FpSet) -> Result<u128> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let f = additive_rep(a, a, Sign::Minus)?
        .nonzero_part()
        .to_dlog_coords();
    let mass: u128 = f.iter().sum();
    if mass == 0 {
        return Ok(0);
    }
    // The moment counts solutions of xy = x'y' with nonzero sides, so it is
    // at most (Σ f)⁴.
    let bound = num_traits::pow(BigInt::from(mass), 4);
    let n = f.len();
    let mut count = (bound.bits() as usize) / 62 + 1;
    let primes = loop {
        let primes = dft_primes(n, count)?;
        let modulus: BigInt = primes.iter().map(|q| BigInt::from(q.q())).product();
        if modulus > bound {
            break primes;
        }
        count += 1;
    };
    let residues: Vec<u64> = primes.par_iter().map(|q| moment_mod(q, &f)).collect();
    let value = crt(
        &primes.iter().map(DftPrime::q).collect::<Vec<_>>(),
        &residues,
    );
    debug_assert!(value <= bound);
    value
        .to_u128()
        .ok_or(Error::ArithmeticOverflow("character moment"))
}

fn moment_mod(prime: &DftPrime, f: &[u128]) -> u64 {
    let q = prime.q();
    let n = prime.len();
    let x: Vec<u64> = f.iter().map(|&v| (v % q as u128) as u64).collect();
    let s = prime.dft(&x);
    let mut acc = 0u64;
    for j in 0..n {
        let sj = prime.mul(s[j], s[j]);
        let sneg = s[(n - j) % n];
        acc = prime.add(acc, prime.mul(sj, prime.mul(sneg, sneg)));
    }
    prime.mul(acc, prime.inverse(n as u64 % q))
}

fn crt(moduli: &[u64], residues: &[u64]) -> BigInt {
    let mut x = BigInt::from(residues[0]);
    let mut m = BigInt::from(moduli[0]);
    for (&q, &r) in moduli.iter().zip(residues).skip(1) {
        let qb = BigInt::from(q);
        let m_mod = (&m % &qb).to_u64().expect("reduced below q");
        let inv = pow_mod_u64(m_mod, q - 2, q);
        let mut diff = (BigInt::from(r) - &x) % &qb;
        if diff < BigInt::zero() {
            diff += &qb;
        }
        let t = (diff * BigInt::from(inv)) % &qb;
        x += &m * t;
        m *= qb;
    }
    x
}
