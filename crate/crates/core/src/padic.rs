//! Exact ℓ-adic arithmetic over ℚ_ℓ at fixed precision.
//!
//! Values are carried as a valuation plus a unit residue modulo `ℓ^M`, where
//! `M` counts the retained digits of the unit part. Nothing here rounds: when
//! a quantity cannot be resolved at the working precision the result says so
//! explicitly ([`Measured::Exhausted`]) and callers retry with more digits.

use crate::arith::{inv_mod, reduce, OddPrime};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is divisible by {1}; expected a unit")]
    NonUnit(BigUint, u64),
    #[error("zero has no unit decomposition")]
    ZeroInput,
    #[error("precision exhausted at {precision} digits ({what})")]
    PrecisionExhausted { precision: u32, what: &'static str },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("precision must be positive")]
    ZeroPrecision,
}

/// An ℓ-adic valuation; zero has valuation [`Valuation::Infinite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Valuation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "INFINITY" | "∞" => Ok(Valuation::Infinite),
            other => other.parse::<i64>().map(Valuation::Finite).map_err(|e| format!("bad valuation {other:?}: {e}")),
        }
    }
}

/// A valuation read off a residue at finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measured {
    Exact(Valuation),
    /// The residue vanished at the working precision; only a lower bound is known.
    Exhausted {
        at_least: i64,
    },
}

impl Measured {
    pub fn exact(self) -> Option<Valuation> {
        match self {
            Measured::Exact(v) => Some(v),
            Measured::Exhausted { .. } => None,
        }
    }

    /// `min(self, other)`; resolved whenever the known side is below the other's bound.
    pub fn min_with(self, other: Valuation) -> Measured {
        match self {
            Measured::Exact(v) => Measured::Exact(v.min(other)),
            Measured::Exhausted { at_least } => match other {
                Valuation::Finite(o) if o < at_least => Measured::Exact(other),
                _ => Measured::Exhausted { at_least },
            },
        }
    }
}

impl fmt::Display for Measured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measured::Exact(v) => v.fmt(f),
            Measured::Exhausted { at_least } => write!(f, ">={at_least}"),
        }
    }
}

/// Values with a well-defined exact ℓ-adic valuation.
pub trait Valued {
    fn valuation_at(&self, prime: u64) -> Valuation;
}

fn ord_biguint(x: &BigUint, prime: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigUint::from(prime);
    let mut v = 0;
    let mut cur = x.clone();
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        cur = q;
        v += 1;
    }
    Valuation::Finite(v)
}

impl Valued for BigUint {
    fn valuation_at(&self, prime: u64) -> Valuation {
        ord_biguint(self, prime)
    }
}

impl Valued for BigInt {
    fn valuation_at(&self, prime: u64) -> Valuation {
        ord_biguint(self.magnitude(), prime)
    }
}

impl Valued for i64 {
    fn valuation_at(&self, prime: u64) -> Valuation {
        ord_biguint(&BigUint::from(self.unsigned_abs()), prime)
    }
}

impl Valued for u64 {
    fn valuation_at(&self, prime: u64) -> Valuation {
        ord_biguint(&BigUint::from(*self), prime)
    }
}

impl Valued for BigRational {
    fn valuation_at(&self, prime: u64) -> Valuation {
        match (ord_biguint(self.numer().magnitude(), prime), ord_biguint(self.denom().magnitude(), prime)) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
            _ => Valuation::Infinite,
        }
    }
}

/// Exponent of ℓ in `x`; [`Valuation::Infinite`] for zero.
pub fn ord<T: Valued + ?Sized>(x: &T, prime: OddPrime) -> Valuation {
    x.valuation_at(prime.get())
}

/// Splits a nonzero integer as `ℓ^v · rest` with ℓ ∤ rest.
fn split_int(x: &BigInt, prime: u64) -> (i64, BigInt) {
    let p = BigInt::from(prime);
    let mut v = 0;
    let mut cur = x.clone();
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            return (v, cur);
        }
        cur = q;
        v += 1;
    }
}

/// An element of ℚ_ℓ: valuation plus a unit known modulo `ℓ^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    prime: OddPrime,
    precision: u32,
    valuation: Valuation,
    unit: BigUint,
}

impl PadicScalar {
    pub fn zero(prime: OddPrime, precision: u32) -> Self {
        PadicScalar { prime, precision, valuation: Valuation::Infinite, unit: BigUint::zero() }
    }

    /// Builds `ℓ^valuation · unit`, reducing the unit modulo `ℓ^precision`.
    pub fn new(prime: OddPrime, precision: u32, valuation: i64, unit: &BigInt) -> Result<Self, PadicError> {
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        let modulus = prime.pow(precision);
        let unit = reduce(unit, &modulus);
        if (&unit % prime.big()).is_zero() {
            return Err(PadicError::NonUnit(unit, prime.get()));
        }
        Ok(PadicScalar { prime, precision, valuation: Valuation::Finite(valuation), unit })
    }

    pub fn from_integer(x: &BigInt, prime: OddPrime, precision: u32) -> Result<Self, PadicError> {
        Self::from_rational(&BigRational::from_integer(x.clone()), prime, precision)
    }

    pub fn from_rational(x: &BigRational, prime: OddPrime, precision: u32) -> Result<Self, PadicError> {
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        if x.is_zero() {
            return Ok(Self::zero(prime, precision));
        }
        let (vn, un) = split_int(x.numer(), prime.get());
        let (vd, ud) = split_int(x.denom(), prime.get());
        let modulus = prime.pow(precision);
        let inv = inv_mod(&reduce(&ud, &modulus), &modulus).expect("ℓ-free denominator");
        let unit = (reduce(&un, &modulus) * inv) % &modulus;
        Ok(PadicScalar { prime, precision, valuation: Valuation::Finite(vn - vd), unit })
    }

    /// Reads a residue `x mod ℓ^m` (absolute precision `m`) as a scalar.
    ///
    /// Returns `None` when `x ≡ 0 mod ℓ^m`, since then not even the valuation is known.
    pub fn from_residue(x: &BigUint, prime: OddPrime, m: u32) -> Option<Self> {
        let modulus = prime.pow(m);
        let x = x % &modulus;
        let v = ord_biguint(&x, prime.get()).finite()?;
        let rel = m - v as u32;
        let unit = (&x / prime.pow(v as u32)) % prime.pow(rel);
        Some(PadicScalar { prime, precision: rel, valuation: Valuation::Finite(v), unit })
    }

    pub fn prime(&self) -> OddPrime {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_infinite()
    }

    fn modulus(&self) -> BigUint {
        self.prime.pow(self.precision)
    }

    pub fn mul(&self, rhs: &PadicScalar) -> PadicScalar {
        debug_assert_eq!(self.prime, rhs.prime);
        let precision = self.precision.min(rhs.precision);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.prime, precision);
        }
        let m = self.prime.pow(precision);
        PadicScalar {
            prime: self.prime,
            precision,
            valuation: self.valuation + rhs.valuation,
            unit: (&self.unit * &rhs.unit) % m,
        }
    }

    pub fn neg(&self) -> PadicScalar {
        if self.is_zero() {
            return self.clone();
        }
        let m = self.modulus();
        PadicScalar { unit: (&m - &self.unit) % &m, ..self.clone() }
    }

    pub fn inverse(&self) -> Result<PadicScalar, PadicError> {
        let Valuation::Finite(v) = self.valuation else {
            return Err(PadicError::ZeroInput);
        };
        let m = self.modulus();
        let unit = inv_mod(&self.unit, &m).expect("stored units are invertible");
        Ok(PadicScalar { valuation: Valuation::Finite(-v), unit, ..self.clone() })
    }

    /// Sum with precision tracking; fails only if cancellation consumes every digit.
    pub fn add(&self, rhs: &PadicScalar) -> Result<PadicScalar, PadicError> {
        let (lo, hi) = match (self.valuation, rhs.valuation) {
            (Valuation::Infinite, _) => return Ok(rhs.clone()),
            (_, Valuation::Infinite) => return Ok(self.clone()),
            (Valuation::Finite(a), Valuation::Finite(b)) if a <= b => (self, rhs),
            _ => (rhs, self),
        };
        let vlo = lo.valuation.finite().unwrap();
        let vhi = hi.valuation.finite().unwrap();
        let gap = (vhi - vlo) as u32;
        let precision = lo.precision.min(gap.saturating_add(hi.precision));
        let m = self.prime.pow(precision);
        let sum = (&lo.unit + &hi.unit * self.prime.pow(gap)) % &m;
        let k = match ord_biguint(&sum, self.prime.get()) {
            Valuation::Finite(k) => k as u32,
            Valuation::Infinite => {
                return Err(PadicError::PrecisionExhausted { precision, what: "cancellation in ℓ-adic sum" })
            }
        };
        let rel = precision - k;
        Ok(PadicScalar {
            prime: self.prime,
            precision: rel,
            valuation: Valuation::Finite(vlo + k as i64),
            unit: (sum / self.prime.pow(k)) % self.prime.pow(rel),
        })
    }

    /// Residue modulo `ℓ^n`, for scalars of nonnegative valuation known to enough digits.
    pub fn residue_mod(&self, n: u32) -> Result<BigUint, PadicError> {
        let target = self.prime.pow(n);
        match self.valuation {
            Valuation::Infinite => Ok(BigUint::zero()),
            Valuation::Finite(v) if v < 0 => {
                Err(PadicError::InternalInconsistency(format!("negative valuation {v} has no residue")))
            }
            Valuation::Finite(v) if v >= n as i64 => Ok(BigUint::zero()),
            Valuation::Finite(v) => {
                if (self.precision as i64) + v < n as i64 {
                    return Err(PadicError::PrecisionExhausted {
                        precision: self.precision,
                        what: "residue requested beyond known digits",
                    });
                }
                Ok((&self.unit * self.prime.pow(v as u32)) % target)
            }
        }
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            Valuation::Infinite => f.write_str("0"),
            Valuation::Finite(v) => {
                write!(f, "{}^{} * {} (mod {}^{})", self.prime, v, self.unit, self.prime, self.precision)
            }
        }
    }
}

/// Teichmüller representative of a unit modulo `ℓ^M` by Frobenius iteration.
pub fn teichmuller(u: &BigUint, prime: OddPrime, m: u32) -> Result<BigUint, PadicError> {
    if m == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    let p = prime.big();
    if (u % &p).is_zero() {
        return Err(PadicError::NonUnit(u.clone(), prime.get()));
    }
    let modulus = prime.pow(m);
    let mut x = u % &modulus;
    for _ in 0..4 * m {
        let next = x.modpow(&p, &modulus);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(PadicError::InternalInconsistency(format!("Teichmüller iteration did not converge within {} steps", 4 * m)))
}

/// The decomposition `x = ε · ℓ^b · (1 + c)` with ε a Teichmüller unit and `c ∈ ℓℤ_ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub prime: OddPrime,
    pub precision: u32,
    pub epsilon: BigUint,
    pub b: BigInt,
    /// `c mod ℓ^precision`.
    pub c: BigUint,
    pub ord_c: Measured,
    pub ord_b: Valuation,
    pub ord_b_plus_c: Measured,
    pub w: Measured,
}

impl UnitDecomposition {
    pub fn modulus(&self) -> BigUint {
        self.prime.pow(self.precision)
    }

    /// `ε(1 + c) mod ℓ^M`, the unit part of the decomposed value.
    pub fn unit_residue(&self) -> BigUint {
        let m = self.modulus();
        (&self.epsilon * (BigUint::one() + &self.c)) % m
    }

    /// `ε · ℓ^b · (1 + c) mod ℓ^(b+M)`, for `b ≥ 0`.
    pub fn reconstruct(&self) -> Option<BigUint> {
        let b = self.b.to_u32()?;
        Some(self.unit_residue() * self.prime.pow(b))
    }

    /// `c` as an ℓ-adic scalar; `None` when `c` is exactly zero.
    pub fn c_scalar(&self) -> Result<Option<PadicScalar>, PadicError> {
        match self.ord_c {
            Measured::Exact(Valuation::Infinite) => Ok(None),
            Measured::Exact(Valuation::Finite(_)) => Ok(PadicScalar::from_residue(&self.c, self.prime, self.precision)),
            Measured::Exhausted { .. } => {
                Err(PadicError::PrecisionExhausted { precision: self.precision, what: "ord(c)" })
            }
        }
    }

    /// Fails with `PrecisionExhausted` unless `ord(c)`, `ord(b+c)` and `w` are all exact.
    pub fn require_resolved(&self) -> Result<(), PadicError> {
        let exhausted = |what| PadicError::PrecisionExhausted { precision: self.precision, what };
        self.ord_c.exact().ok_or_else(|| exhausted("ord(c)"))?;
        self.ord_b_plus_c.exact().ok_or_else(|| exhausted("ord(b+c)"))?;
        self.w.exact().ok_or_else(|| exhausted("w"))?;
        Ok(())
    }
}

/// Shared tail of [`decompose`] and [`decompose_product`].
///
/// `unit` is the unit part modulo `ℓ^m`; `unit_is_root_of_unity` is set when the
/// caller knows exactly that the unit part is ±1, so that `c = 0` exactly.
fn decompose_parts(
    b: BigInt,
    unit: BigUint,
    unit_is_root_of_unity: bool,
    prime: OddPrime,
    m: u32,
) -> Result<UnitDecomposition, PadicError> {
    let modulus = prime.pow(m);
    let epsilon = teichmuller(&unit, prime, m)?;
    let eps_inv = inv_mod(&epsilon, &modulus).expect("Teichmüller units are invertible");
    let one_plus_c = (&unit * eps_inv) % &modulus;
    let c = (&one_plus_c + &modulus - BigUint::one()) % &modulus;
    let ord_b = ord(&b, prime);
    let (ord_c, ord_b_plus_c) = if unit_is_root_of_unity {
        debug_assert!(c.is_zero());
        (Measured::Exact(Valuation::Infinite), Measured::Exact(ord_b))
    } else {
        let measure = |x: &BigUint| match ord_biguint(x, prime.get()) {
            Valuation::Infinite => Measured::Exhausted { at_least: m as i64 },
            v => Measured::Exact(v),
        };
        let b_plus_c = (reduce(&b, &modulus) + &c) % &modulus;
        (measure(&c), measure(&b_plus_c))
    };
    let w = ord_c.min_with(ord_b);
    Ok(UnitDecomposition { prime, precision: m, epsilon, b, c, ord_c, ord_b, ord_b_plus_c, w })
}

/// Decomposes a nonzero rational as `ε · ℓ^b · (1 + c)` at `m` digits.
pub fn decompose(x: &BigRational, prime: OddPrime, m: u32) -> Result<UnitDecomposition, PadicError> {
    if x.is_zero() {
        return Err(PadicError::ZeroInput);
    }
    let scalar = PadicScalar::from_rational(x, prime, m)?;
    let b = scalar.valuation().finite().expect("nonzero");
    let (_, un) = split_int(x.numer(), prime.get());
    let (_, ud) = split_int(x.denom(), prime.get());
    let root_of_unity = un.magnitude().is_one() && ud.magnitude().is_one();
    decompose_parts(BigInt::from(b), scalar.unit, root_of_unity, prime, m)
}

/// Decomposes `Π base^exp` without materializing the product.
///
/// The valuation is the sum of per-base valuations times exponents, and the
/// unit residue is multiplied factor by factor modulo `ℓ^m`.
pub fn decompose_product(factors: &[(BigInt, u64)], prime: OddPrime, m: u32) -> Result<UnitDecomposition, PadicError> {
    if m == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    let modulus = prime.pow(m);
    let mut b = BigInt::zero();
    let mut unit = BigUint::one() % &modulus;
    let mut root_of_unity = true;
    for (base, exp) in factors {
        if *exp == 0 {
            continue;
        }
        if base.is_zero() {
            return Err(PadicError::ZeroInput);
        }
        let (v, rest) = split_int(base, prime.get());
        b += BigInt::from(v) * BigInt::from(*exp);
        root_of_unity &= rest.magnitude().is_one();
        let rest = reduce(&rest, &modulus);
        unit = (unit * rest.modpow(&BigUint::from(*exp), &modulus)) % &modulus;
    }
    decompose_parts(b, unit, root_of_unity, prime, m)
}

/// Legendre symbol `(n/ℓ)` by Euler's criterion.
pub fn legendre(n: &BigInt, prime: OddPrime) -> i8 {
    let p = prime.get();
    let r = n.mod_floor(&BigInt::from(p)).to_u64().expect("reduced below ℓ");
    if r == 0 {
        return 0;
    }
    match crate::arith::pow_mod(r, (p - 1) / 2, p) {
        1 => 1,
        x if x == p - 1 => -1,
        x => unreachable!("Euler criterion produced {x}"),
    }
}

/// `C(n, k) mod ℓ` for small `n, k < ℓ`.
fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * crate::arith::pow_mod(den, p - 2, p) % p
}

/// `C(n, k) mod ℓ` by Lucas' theorem; `n` may be arbitrarily large.
pub fn binom_mod_ell(n: &BigUint, k: &BigUint, prime: OddPrime) -> u64 {
    let p = prime.big();
    let pl = prime.get();
    let mut n = n.clone();
    let mut k = k.clone();
    let mut acc = 1u64;
    while !k.is_zero() {
        let (nq, nd) = n.div_rem(&p);
        let (kq, kd) = k.div_rem(&p);
        let nd = nd.to_u64().unwrap();
        let kd = kd.to_u64().unwrap();
        acc = acc * small_binom_mod(nd, kd, pl) % pl;
        if acc == 0 {
            return 0;
        }
        n = nq;
        k = kq;
    }
    acc
}

/// `C(n, k) mod ℓ` for any integer upper index, using `C(−j, k) = (−1)^k C(j+k−1, k)`.
pub fn binom_int_mod_ell(n: &BigInt, k: u64, prime: OddPrime) -> u64 {
    let kb = BigUint::from(k);
    match n.sign() {
        Sign::Minus => {
            let j = n.magnitude();
            let v = binom_mod_ell(&(j + &kb - 1u32), &kb, prime);
            if k % 2 == 1 && v != 0 {
                prime.get() - v
            } else {
                v
            }
        }
        _ => binom_mod_ell(n.magnitude(), &kb, prime),
    }
}
