//! Small-integer number theory: primality, factorization, modular inverses.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

/// Trial division bound used before the cofactor primality check.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// An odd rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(p: u64) -> Option<Self> {
        (p > 2 && is_prime(p)).then_some(OddPrime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigUint {
        BigUint::from(self.0)
    }

    /// `ℓ^e` as a big integer.
    pub fn pow(self, e: u32) -> BigUint {
        num_traits::pow(self.big(), e as usize)
    }

    /// `ℓ^e` if it fits in a `u64`.
    pub fn checked_pow(self, e: u32) -> Option<u64> {
        self.0.checked_pow(e)
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("cannot factor zero")]
    Zero,
    #[error("cofactor {0} has no prime factor below {TRIAL_DIVISION_BOUND} and is composite")]
    Unfactored(u64),
}

/// Prime factorization by trial division up to [`TRIAL_DIVISION_BOUND`],
/// followed by a deterministic primality check on what remains.
pub fn factorize(mut n: u64) -> Result<Vec<(u64, u32)>, FactorError> {
    if n == 0 {
        return Err(FactorError::Zero);
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_BOUND && p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if is_prime(n) {
            out.push((n, 1));
        } else {
            return Err(FactorError::Unfactored(n));
        }
    }
    Ok(out)
}

/// Inverse of `a` modulo `m`, via the extended Euclidean algorithm.
pub fn inv_mod(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let a = BigInt::from(a % m);
    let m = BigInt::from(m.clone());
    let g = a.extended_gcd(&m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative"))
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce(x: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from(m.clone());
    x.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative")
}

/// Symmetric representative of `x mod m` in `(-m/2, m/2]`.
pub fn symmetric(x: &BigUint, m: &BigUint) -> BigInt {
    let x = BigInt::from(x % m);
    let m = BigInt::from(m.clone());
    if &x * 2 > m {
        x - m
    } else {
        x
    }
}
