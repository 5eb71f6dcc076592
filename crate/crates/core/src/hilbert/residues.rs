//! The coefficients `c_ℓ(i)` entering the symbol `[1 + π^(ℓ−2), 1 − ζ^i]_ℓ`.

use super::HilbertError;
use crate::arith::{inv_mod, OddPrime};
use crate::padic::binom_mod_ell;
use crate::series::TruncatedSeries;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

/// `Σ_{r=0..n} (−1)^r C(n, r) f(r)` for `f` given by its coefficients (constant first).
pub fn difference_sum(coeffs: &[BigInt], n: u64) -> BigInt {
    let eval = |x: u64| {
        let x = BigInt::from(x);
        coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    };
    let mut binom = BigInt::one();
    let mut total = BigInt::zero();
    for r in 0..=n {
        if r > 0 {
            binom = binom * BigInt::from(n - r + 1) / BigInt::from(r);
        }
        let term = &binom * eval(r);
        if r % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn require_level(level: u32) -> Result<(), HilbertError> {
    if level < 2 {
        return Err(HilbertError::LevelTooSmall(level));
    }
    Ok(())
}

/// The representative of `i^(−1)` modulo `ℓ^N` in `[1, ℓ^N)`.
pub fn inverse_index(i: &BigInt, prime: OddPrime, level: u32) -> Result<BigUint, HilbertError> {
    let modulus = prime.pow(level);
    let i_mod = crate::arith::reduce(i, &modulus);
    inv_mod(&i_mod, &modulus).ok_or_else(|| HilbertError::BadIndex(i.clone()))
}

/// `c_ℓ` for an explicit representative `j` of `i^(−1)`: the double sum
/// `Σ_{r,s=0..ℓ−2} (−1)^r C(ℓ−2, r) C(ℓ−2, s) C(j(r + s(ℓ^N − 1)), ℓ) mod ℓ`.
pub fn c_ell_for_j(j: &BigUint, prime: OddPrime, level: u32) -> u64 {
    let l = prime.get();
    let t = l - 2;
    let ell_big = prime.big();
    let stride = prime.pow(level) - 1u32;
    let small = |n: u64, k: u64| binom_mod_ell(&BigUint::from(n), &BigUint::from(k), prime);
    let mut total = 0u64;
    for r in 0..=t {
        for s in 0..=t {
            let upper = j * (BigUint::from(r) + BigUint::from(s) * &stride);
            let term = small(t, r) * small(t, s) % l * binom_mod_ell(&upper, &ell_big, prime) % l;
            total = if r % 2 == 0 { (total + term) % l } else { (total + l - term) % l };
        }
    }
    total
}

/// `c_ℓ(i)` by the double sum with Lucas-theorem binomials.
pub fn c_ell_coeff(i: &BigInt, prime: OddPrime, level: u32) -> Result<u64, HilbertError> {
    require_level(level)?;
    let j = inverse_index(i, prime, level)?;
    Ok(c_ell_for_j(&j, prime, level))
}

/// `c_ℓ(i)` as `[X^ℓ] (1 + (1+X)^(j(ℓ^N−1)))^(ℓ−2) (1 − (1+X)^j)^(ℓ−2)` over `𝔽_ℓ`.
///
/// Shares nothing with [`c_ell_coeff`] beyond the inverse `j`, so the two
/// serve as mutual oracles.
pub fn c_ell_series_route(i: &BigInt, prime: OddPrime, level: u32) -> Result<u64, HilbertError> {
    require_level(level)?;
    let j = BigInt::from(inverse_index(i, prime, level)?);
    let l = prime.get();
    let trunc = l as usize;
    let one = TruncatedSeries::one(prime, 1, trunc)?;
    let stride = BigInt::from(prime.pow(level)) - 1;
    let d = one.add(&TruncatedSeries::binomial(&(&j * stride), prime, 1, trunc)?)?;
    let e = one.sub(&TruncatedSeries::binomial(&j, prime, 1, trunc)?)?;
    let product = d.pow(l - 2).mul(&e.pow(l - 2))?;
    Ok(product.coeff(trunc)?)
}

/// `Σ_{i ∈ (ℤ/ℓ^N)^×} c_ℓ(i) mod ℓ`.
pub fn c_ell_total(prime: OddPrime, level: u32) -> Result<u64, HilbertError> {
    Ok(c_ell_class_sums(prime, level)?.iter().fold(0, |acc, (_, s)| (acc + s) % prime.get()))
}

/// Sums of `c_ℓ(i)` over each residue class `i ≡ a mod ℓ`, for `a = 1..ℓ−1`.
pub fn c_ell_class_sums(prime: OddPrime, level: u32) -> Result<Vec<(u64, u64)>, HilbertError> {
    require_level(level)?;
    let l = prime.get();
    let modulus = prime.pow(level).to_u64().ok_or(HilbertError::LevelTooSmall(level))?;
    let mut sums = vec![0u64; l as usize];
    for i in (1..modulus).filter(|i| i % l != 0) {
        let c = c_ell_coeff(&BigInt::from(i), prime, level)?;
        let slot = &mut sums[(i % l) as usize];
        *slot = (*slot + c) % l;
    }
    Ok((1..l).map(|a| (a, sums[a as usize])).collect())
}
