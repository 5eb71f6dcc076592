//! Residue harness for `[1 + π^(ℓ−2), 1 − ζ^i]_ℓ` through the power series
//! `ε(X) = 1 + ((1−X)^j − 1)^(ℓ−2) (1 + (1−X)^(j(ℓ^N−1)))^(ℓ−2)` over `ℤ/ℓ²`.
//!
//! The harness records the raw coefficients rather than asserting the
//! expected identity `[X^ℓ] ε^ℓ = ℓ c_ℓ`: at ℓ = 3 the terms `k ≥ 2` of
//! `Σ_k C(ℓ,k) [X^ℓ] C^k` do not vanish and are reported as corrections.

use super::residues::c_ell_for_j;
use super::HilbertError;
use crate::arith::OddPrime;
use crate::series::TruncatedSeries;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VostokovReport {
    pub j: u64,
    pub prime: OddPrime,
    pub level: u32,
    /// `ε(X)` modulo `(ℓ², X^(ℓ+2))`.
    pub epsilon: TruncatedSeries,
    /// `[X^ℓ] ε^ℓ mod ℓ²`.
    pub a_ell: u64,
    /// `[X^ℓ] ε(X^ℓ) mod ℓ²`.
    pub frobenius_coeff: u64,
    /// `[X^ℓ] (ε^ℓ − ε(X^ℓ)) mod ℓ²`.
    pub residue_coeff: u64,
    /// `ℓ · c_ℓ mod ℓ²`.
    pub ell_c_ell: u64,
    /// Whether `[X^n](ε − 1) ≡ 0 mod ℓ²` for every `n < ℓ − 2`.
    pub low_order_vanishes: bool,
    /// `C(ℓ, k) · [X^ℓ] C(X)^k` for `k = 1..=ℓ`, with `C = ε − 1` lifted to
    /// symmetric integer coefficients. Their sum is `a_ell` modulo `ℓ²`.
    pub corrections: Vec<BigInt>,
}

impl VostokovReport {
    pub fn matches(&self) -> bool {
        self.a_ell == self.ell_c_ell
    }
}

/// `(1 − X)^n` as a truncated series.
fn one_minus_x_pow(n: &BigInt, prime: OddPrime, digits: u32, trunc: usize) -> Result<TruncatedSeries, HilbertError> {
    let plus = TruncatedSeries::binomial(n, prime, digits, trunc)?;
    let signs: Vec<i64> = (0..=trunc).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
    let alternating = plus.lift_symmetric().into_iter().zip(signs).map(|(c, s)| c * s).collect::<Vec<_>>();
    Ok(TruncatedSeries::from_big(prime, digits, trunc, &alternating)?)
}

/// Integer polynomial product truncated at degree `trunc`.
fn mul_truncated(a: &[BigInt], b: &[BigInt], trunc: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); trunc + 1];
    for (i, x) in a.iter().enumerate().take(trunc + 1) {
        if x.is_zero() {
            continue;
        }
        for (k, y) in b.iter().enumerate().take(trunc + 1 - i) {
            out[i + k] += x * y;
        }
    }
    out
}

pub fn vostokov_check(j: u64, prime: OddPrime, level: u32) -> Result<VostokovReport, HilbertError> {
    if level < 2 {
        return Err(HilbertError::LevelTooSmall(level));
    }
    let l = prime.get();
    if j.is_multiple_of(l) {
        return Err(HilbertError::BadIndex(BigInt::from(j)));
    }
    let trunc = l as usize + 1;
    let ell = l as usize;
    let t = l - 2;
    let jb = BigInt::from(j);
    let one = TruncatedSeries::one(prime, 2, trunc)?;
    let a = one_minus_x_pow(&jb, prime, 2, trunc)?.sub(&one)?;
    let stride = BigInt::from(prime.pow(level)) - 1;
    let b = one.add(&one_minus_x_pow(&(&jb * stride), prime, 2, trunc)?)?;
    let c_series = a.pow(t).mul(&b.pow(t))?;
    let epsilon = one.add(&c_series)?;

    let a_ell = epsilon.pow(l).coeff(ell)?;
    let frobenius_coeff = epsilon.frobenius_substitute().coeff(ell)?;
    let modulus = epsilon.modulus();
    let residue_coeff = (a_ell + modulus - frobenius_coeff) % modulus;
    let ell_c_ell = l * c_ell_for_j(&BigUint::from(j), prime, level) % modulus;
    let low_order_vanishes = c_series.coeffs()[..(l - 2) as usize].iter().all(|&x| x == 0);

    let lifted: Vec<BigInt> = c_series.lift_symmetric()[..=ell].to_vec();
    let mut power = {
        let mut unit = vec![BigInt::zero(); ell + 1];
        unit[0] = BigInt::one();
        unit
    };
    let mut binom = BigInt::one();
    let mut corrections = Vec::with_capacity(ell);
    for k in 1..=l {
        power = mul_truncated(&power, &lifted, ell);
        binom = binom * BigInt::from(l - k + 1) / BigInt::from(k);
        corrections.push(&binom * &power[ell]);
    }

    Ok(VostokovReport {
        j,
        prime,
        level,
        epsilon,
        a_ell,
        frobenius_coeff,
        residue_coeff,
        ell_c_ell,
        low_order_vanishes,
        corrections,
    })
}
