//! Admissible parameters `(ℓ, N, r, s, t, δ)` of the curve `y^(ℓ^N) = x^r (δ − x)^s`.

use crate::arith::{factorize, FactorError, OddPrime};
use crate::padic::{decompose_product, PadicError, UnitDecomposition};
use num_bigint::BigInt;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("ℓ = {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("N must be at least 1")]
    ZeroLevel,
    #[error("ℓ^N overflows 64 bits (ℓ = {0}, N = {1})")]
    LevelTooLarge(u64, u32),
    #[error("{0} must be a positive integer")]
    NotPositive(&'static str),
    #[error("r + s + t = {sum} but ℓ^N = {expected}")]
    SumMismatch { sum: u64, expected: u64 },
    #[error("ℓ^(N-1) = {0} does not divide r = {1}")]
    RNotDivisible(u64, u64),
    #[error("ℓ = {0} divides s = {1}")]
    SDivisible(u64, u64),
    #[error("ℓ = {0} divides t = {1}")]
    TDivisible(u64, u64),
    #[error("ℓ = {0} divides δ = {1}")]
    DeltaDivisible(u64, u64),
    #[error("δ = {delta} is divisible by {prime}^{exponent}, so it is not ℓ^N-th-power-free")]
    DeltaNotPowerFree { delta: u64, prime: u64, exponent: u32 },
    #[error("cannot factor δ = {0}: {1}")]
    DeltaUnfactored(u64, FactorError),
}

/// Validated curve parameters in the regime `ℓ^(N−1) ‖ r`, `ℓ ∤ s t δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveParams {
    ell: OddPrime,
    level: u32,
    r: u64,
    s: u64,
    t: u64,
    delta: u64,
    r_prime: u64,
    delta_primes: Vec<(u64, u32)>,
}

impl CurveParams {
    pub fn new(ell: u64, level: u32, r: u64, s: u64, t: u64, delta: u64) -> Result<Self, ParamError> {
        let prime = OddPrime::new(ell).ok_or(ParamError::NotOddPrime(ell))?;
        if level == 0 {
            return Err(ParamError::ZeroLevel);
        }
        let ell_n = prime.checked_pow(level).ok_or(ParamError::LevelTooLarge(ell, level))?;
        for (name, v) in [("r", r), ("s", s), ("t", t), ("δ", delta)] {
            if v == 0 {
                return Err(ParamError::NotPositive(name));
            }
        }
        let sum = r.checked_add(s).and_then(|x| x.checked_add(t)).unwrap_or(u64::MAX);
        if sum != ell_n {
            return Err(ParamError::SumMismatch { sum, expected: ell_n });
        }
        let lower = ell_n / ell;
        if !r.is_multiple_of(lower) {
            return Err(ParamError::RNotDivisible(lower, r));
        }
        // r < ℓ^N follows from the sum, so ℓ ∤ r′ holds automatically.
        if s.is_multiple_of(ell) {
            return Err(ParamError::SDivisible(ell, s));
        }
        if t.is_multiple_of(ell) {
            return Err(ParamError::TDivisible(ell, t));
        }
        if delta.is_multiple_of(ell) {
            return Err(ParamError::DeltaDivisible(ell, delta));
        }
        let delta_primes = factorize(delta).map_err(|e| ParamError::DeltaUnfactored(delta, e))?;
        if let Some(&(p, e)) = delta_primes.iter().find(|(_, e)| *e as u64 >= ell_n) {
            return Err(ParamError::DeltaNotPowerFree { delta, prime: p, exponent: e });
        }
        Ok(CurveParams { ell: prime, level, r, s, t, delta, r_prime: r / lower, delta_primes })
    }

    pub fn ell(&self) -> OddPrime {
        self.ell
    }

    /// The level `N`.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// `r / ℓ^(N−1)`, prime to ℓ.
    pub fn r_prime(&self) -> u64 {
        self.r_prime
    }

    /// `ℓ^N`.
    pub fn ell_n(&self) -> u64 {
        self.ell.get().pow(self.level)
    }

    /// Distinct prime divisors of δ with multiplicity.
    pub fn delta_primes(&self) -> &[(u64, u32)] {
        &self.delta_primes
    }

    /// `b = ℓ^(N−1) (N − 1) r′`, the exponent of ℓ in `a`.
    pub fn expected_b(&self) -> BigInt {
        BigInt::from(self.ell_n() / self.ell.get()) * BigInt::from(self.level - 1) * BigInt::from(self.r_prime)
    }

    /// The same curve with a different twist δ.
    pub fn with_delta(&self, delta: u64) -> Result<Self, ParamError> {
        Self::new(self.ell.get(), self.level, self.r, self.s, self.t, delta)
    }
}

impl fmt::Display for CurveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ℓ={}, N={}, r={}, s={}, t={}, δ={})", self.ell, self.level, self.r, self.s, self.t, self.delta)
    }
}

/// Decomposition of `a = r^r s^s (ℓ^N − t)^t δ^(r+s)` at `m` digits.
///
/// `a` is never formed; see [`decompose_product`]. The valuation is checked
/// against the closed form `ℓ^(N−1)(N−1)r′`.
pub fn value_of_a(params: &CurveParams, m: u32) -> Result<UnitDecomposition, PadicError> {
    let big = |x: u64| BigInt::from(x);
    let factors = [
        (big(params.r), params.r),
        (big(params.s), params.s),
        (big(params.ell_n() - params.t), params.t),
        (big(params.delta), params.r + params.s),
    ];
    let d = decompose_product(&factors, params.ell, m)?;
    let expected = params.expected_b();
    if d.b != expected {
        return Err(PadicError::InternalInconsistency(format!(
            "ord(a) = {} but ℓ^(N-1)(N-1)r' = {expected} for {params}",
            d.b
        )));
    }
    Ok(d)
}
