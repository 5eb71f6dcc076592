//! Truncated power series over `ℤ/ℓ^M`, i.e. the ring `(ℤ/ℓ^M)[X]/(X^(T+1))`.

use crate::arith::{inv_mod, pow_mod, OddPrime};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("shape mismatch: modulus {0} / truncation {1} vs modulus {2} / truncation {3}")]
    ShapeMismatch(u64, usize, u64, usize),
    #[error("coefficient index {index} beyond truncation {trunc}")]
    OutOfRange { index: usize, trunc: usize },
    #[error("division by {divisor} is not exact at coefficient {index}")]
    InexactDivision { divisor: BigInt, index: usize },
    #[error("ℓ^M = {0}^{1} does not fit in 64 bits")]
    ModulusTooLarge(u64, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    prime: OddPrime,
    digits: u32,
    modulus: u64,
    coeffs: Vec<u64>,
}

fn modulus_for(prime: OddPrime, digits: u32) -> Result<u64, SeriesError> {
    prime.checked_pow(digits).filter(|m| *m < 1 << 62).ok_or(SeriesError::ModulusTooLarge(prime.get(), digits))
}

impl TruncatedSeries {
    pub fn zero(prime: OddPrime, digits: u32, trunc: usize) -> Result<Self, SeriesError> {
        let modulus = modulus_for(prime, digits)?;
        Ok(TruncatedSeries { prime, digits, modulus, coeffs: vec![0; trunc + 1] })
    }

    pub fn one(prime: OddPrime, digits: u32, trunc: usize) -> Result<Self, SeriesError> {
        let mut s = Self::zero(prime, digits, trunc)?;
        s.coeffs[0] = 1 % s.modulus;
        Ok(s)
    }

    /// Builds a series from signed integer coefficients; missing ones are zero,
    /// those past the truncation are dropped.
    pub fn from_signed(prime: OddPrime, digits: u32, trunc: usize, coeffs: &[i64]) -> Result<Self, SeriesError> {
        let mut s = Self::zero(prime, digits, trunc)?;
        let m = s.modulus as i128;
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = (c as i128).rem_euclid(m) as u64;
        }
        Ok(s)
    }

    pub fn from_big(prime: OddPrime, digits: u32, trunc: usize, coeffs: &[BigInt]) -> Result<Self, SeriesError> {
        let mut s = Self::zero(prime, digits, trunc)?;
        let m = BigInt::from(s.modulus);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c.mod_floor(&m).to_u64().expect("reduced");
        }
        Ok(s)
    }

    /// `(1 + X)^upper`, with `C(upper, k)` from the exact multiplicative recurrence.
    pub fn binomial(upper: &BigInt, prime: OddPrime, digits: u32, trunc: usize) -> Result<Self, SeriesError> {
        let mut out = Vec::with_capacity(trunc + 1);
        let mut c = BigInt::one();
        for k in 0..=trunc {
            if k > 0 {
                c = c * (upper - BigInt::from(k - 1)) / BigInt::from(k);
            }
            out.push(c.clone());
        }
        Self::from_big(prime, digits, trunc, &out)
    }

    pub fn prime(&self) -> OddPrime {
        self.prime
    }

    /// `M`, so that coefficients live in `ℤ/ℓ^M`.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `T`, the largest retained exponent.
    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `[X^n] f`.
    pub fn coeff(&self, n: usize) -> Result<u64, SeriesError> {
        self.coeffs.get(n).copied().ok_or(SeriesError::OutOfRange { index: n, trunc: self.trunc() })
    }

    /// Coefficients lifted to the symmetric range `(−ℓ^M/2, ℓ^M/2]`.
    pub fn lift_symmetric(&self) -> Vec<BigInt> {
        let m = self.modulus;
        self.coeffs
            .iter()
            .map(|&c| if c > m / 2 { BigInt::from(c) - BigInt::from(m) } else { BigInt::from(c) })
            .collect()
    }

    fn check_shape(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.modulus != rhs.modulus || self.coeffs.len() != rhs.coeffs.len() {
            return Err(SeriesError::ShapeMismatch(self.modulus, self.trunc(), rhs.modulus, rhs.trunc()));
        }
        Ok(())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self, SeriesError> {
        self.check_shape(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Ok(TruncatedSeries { coeffs, ..self.clone() })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        let m = self.modulus;
        self.zip_with(rhs, |a, b| ((a as u128 + b as u128) % m as u128) as u64)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        let m = self.modulus;
        self.zip_with(rhs, |a, b| ((a as u128 + (m - b) as u128) % m as u128) as u64)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_shape(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let m = self.modulus as u128;
        let n = self.coeffs.len();
        let mut out = vec![0u128; n];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &b) in rhs.coeffs[..n - i].iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % m;
            }
        }
        TruncatedSeries { coeffs: out.into_iter().map(|c| c as u64).collect(), ..self.clone() }
    }

    pub fn arith(&self, rhs: &Self, op: SeriesOp) -> Result<Self, SeriesError> {
        match op {
            SeriesOp::Add => self.add(rhs),
            SeriesOp::Sub => self.sub(rhs),
            SeriesOp::Mul => self.mul(rhs),
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        TruncatedSeries { coeffs: self.coeffs.iter().map(|&c| (m - c) % m).collect(), ..self.clone() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let m = BigInt::from(self.modulus);
        let k = k.mod_floor(&m).to_u64().unwrap() as u128;
        let mm = self.modulus as u128;
        TruncatedSeries { coeffs: self.coeffs.iter().map(|&c| (c as u128 * k % mm) as u64).collect(), ..self.clone() }
    }

    /// `f^e` by square-and-multiply, truncating after every product.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.prime, self.digits, self.trunc()).expect("same modulus");
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `f(X^ℓ)`; coefficients are left alone.
    pub fn frobenius_substitute(&self) -> Self {
        let l = self.prime.get() as usize;
        let mut coeffs = vec![0; self.coeffs.len()];
        for (k, &c) in self.coeffs.iter().enumerate() {
            match k.checked_mul(l) {
                Some(idx) if idx < coeffs.len() => coeffs[idx] = c,
                _ => break,
            }
        }
        TruncatedSeries { coeffs, ..self.clone() }
    }

    /// Raises every coefficient to the power `e`.
    pub fn map_coeffs_pow(&self, e: u64) -> Self {
        let m = self.modulus;
        TruncatedSeries { coeffs: self.coeffs.iter().map(|&c| pow_mod(c, e, m)).collect(), ..self.clone() }
    }

    /// Divides every coefficient by `d`, only when the quotient is certified.
    ///
    /// Writing `d = ℓ^k u`, each coefficient must be divisible by `ℓ^k`; the
    /// quotient is then known modulo `ℓ^(M−k)` and the result has `M − k` digits.
    pub fn div_exact(&self, d: &BigInt) -> Result<Self, SeriesError> {
        let inexact = |index| SeriesError::InexactDivision { divisor: d.clone(), index };
        if d.is_zero() {
            return Err(inexact(0));
        }
        let p = BigInt::from(self.prime.get());
        let mut k = 0u32;
        let mut u = d.clone();
        while (&u % &p).is_zero() {
            u /= &p;
            k += 1;
        }
        if k >= self.digits {
            return Err(inexact(0));
        }
        let shift = self.prime.get().pow(k);
        let digits = self.digits - k;
        let new_mod = self.modulus / shift;
        let u_inv = inv_mod(&u.mod_floor(&BigInt::from(new_mod)).to_biguint().unwrap(), &BigUint::from(new_mod))
            .and_then(|x| x.to_u64())
            .unwrap_or(0);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c % shift != 0 {
                return Err(inexact(i));
            }
            coeffs.push(((c / shift) as u128 * u_inv as u128 % new_mod as u128) as u64);
        }
        Ok(TruncatedSeries { prime: self.prime, digits, modulus: new_mod, coeffs })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.lift_symmetric().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}X")?,
                _ => write!(f, "{c}X^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " (mod {}, X^{})", self.modulus, self.coeffs.len())
    }
}
