//! Exponents of the wild symbols `(1 + π^(f−1), 1 + c)_{ℓ^N}` and `(1 + π^(f−1), a)_{ℓ^N}`.

use super::jtable::{JKey, JTable, JValue};
use super::HilbertError;
use crate::arith::OddPrime;
use crate::conductor::{Branch, ConductorClassification};
use crate::padic::{PadicScalar, UnitDecomposition, Valuation};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

/// Extra digits carried beyond `N` while evaluating symbol exponents.
const GUARD_DIGITS: u32 = 4;

/// An exponent `k` of `ζ_{ℓ^N}^k`, reduced modulo `ℓ^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolExponent {
    pub value: BigUint,
    pub prime: OddPrime,
    pub level: u32,
}

impl SymbolExponent {
    /// The exponent of `ζ_ℓ = ζ_{ℓ^N}^(ℓ^(N−1))`, when the value is a multiple of `ℓ^(N−1)`.
    pub fn to_zeta_ell(&self) -> Option<u64> {
        let step = self.prime.pow(self.level - 1);
        if !(&self.value % &step).is_zero() {
            return None;
        }
        (&self.value / step).to_u64()
    }
}

/// `(1 − f) · (2c/ℓ) · J · Σ_{k=1..N} (−1)^(k+1) c^(k−1)/k  mod ℓ^N`.
///
/// Intermediate quantities are ℓ-adic scalars, so the `1/k` factors are
/// exact; the total valuation must be nonnegative.
pub fn unit_symbol_exponent(
    c: &PadicScalar,
    f: u64,
    j: Option<JValue>,
    level: u32,
) -> Result<SymbolExponent, HilbertError> {
    let prime = c.prime();
    let zero = || SymbolExponent { value: BigUint::zero(), prime, level };
    match c.valuation() {
        Valuation::Finite(v) if v >= 1 => {}
        v => return Err(HilbertError::CNotInMaximalIdeal(v)),
    }
    let Some(j) = j else { return Ok(zero()) };
    if f == 1 {
        return Ok(zero());
    }
    let w = level + GUARD_DIGITS;
    let int = |x: i64| PadicScalar::from_integer(&BigInt::from(x), prime, w);

    let mut series = PadicScalar::zero(prime, w);
    let mut c_pow = int(1)?;
    for k in 1..=level as i64 {
        let term = c_pow.mul(&int(k)?.inverse()?);
        let term = if k % 2 == 1 { term } else { term.neg() };
        series = series.add(&term)?;
        c_pow = c_pow.mul(c);
    }
    let ell = int(prime.get() as i64)?;
    let total = int(1 - f as i64)?.mul(&int(2)?).mul(c).mul(&ell.inverse()?).mul(&j.to_scalar(prime, w)?).mul(&series);
    if let Valuation::Finite(v) = total.valuation() {
        if v < 0 {
            return Err(HilbertError::InexactDivision(v));
        }
    }
    Ok(SymbolExponent { value: total.residue_mod(level)?, prime, level })
}

/// The sign `±` and factor `e` attached to a ramified branch, folded into one
/// multiplier: `−1` when `w = N`, `2` when `w = N − 1` on the greater branch,
/// `1` otherwise.
pub fn branch_multiplier(branch: Branch, level: u32) -> Option<i64> {
    match branch {
        Branch::RamifiedEqual(w) if w == level => Some(-1),
        Branch::RamifiedEqual(_) => Some(1),
        Branch::RamifiedGreater(w) if w + 1 == level => Some(2),
        Branch::RamifiedGreater(_) => Some(1),
        _ => None,
    }
}

/// Key `(N, f)` of the `J` value consulted on a ramified branch.
pub fn j_key(cls: &ConductorClassification, level: u32) -> Option<JKey> {
    cls.branch.is_ramified().then_some((level, cls.f))
}

/// Outcome of [`symbol_with_a`]: the exponent of `ζ_ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolValue {
    /// Exponent in `[0, ℓ)`.
    pub exponent: u64,
    /// Valuation of the argument `(±2ce/ℓ^N)·J`; zero unless the lenient path was taken.
    pub valuation: i64,
    pub lenient: bool,
    pub key: JKey,
}

/// The ℓ-adic argument `(m · 2c / ℓ^N) · J` on a ramified branch, `m` the branch multiplier.
pub fn symbol_argument(
    d: &UnitDecomposition,
    cls: &ConductorClassification,
    j: JValue,
    level: u32,
) -> Result<PadicScalar, HilbertError> {
    let prime = d.prime;
    let multiplier = branch_multiplier(cls.branch, level).ok_or(HilbertError::NotRamified(cls.branch))?;
    let Some(c) = d.c_scalar()? else {
        return Ok(PadicScalar::zero(prime, d.precision));
    };
    let w = c.precision().max(1);
    let inv_ell_n = PadicScalar::new(prime, w, -(level as i64), &BigInt::from(1))?;
    let factor = PadicScalar::from_integer(&BigInt::from(2 * multiplier), prime, w)?;
    Ok(factor.mul(&c).mul(&inv_ell_n).mul(&j.to_scalar(prime, w)?))
}

/// The exponent `l` with `(1 + π^(f−1), a)_{ℓ^N} = ζ_ℓ^l` on a ramified branch.
///
/// The argument `(±2ce/ℓ^N)·J` must be an ℓ-adic unit. Otherwise the strict
/// path fails with [`HilbertError::DegenerateArgument`]; with `lenient` set
/// the unit part is used and its valuation is recorded.
pub fn symbol_with_a(
    d: &UnitDecomposition,
    cls: &ConductorClassification,
    table: &JTable,
    level: u32,
    lenient: bool,
) -> Result<SymbolValue, HilbertError> {
    let key = j_key(cls, level).ok_or(HilbertError::NotRamified(cls.branch))?;
    let j = table.get(key).ok_or(HilbertError::MissingJ(key.0, key.1))?;
    let arg = symbol_argument(d, cls, j, level)?;
    let valuation = match arg.valuation() {
        Valuation::Finite(v) => v,
        Valuation::Infinite => return Err(HilbertError::DegenerateArgument(Valuation::Infinite)),
    };
    if valuation != 0 && !lenient {
        return Err(HilbertError::DegenerateArgument(Valuation::Finite(valuation)));
    }
    let exponent = (arg.unit() % d.prime.big()).to_u64().expect("below ℓ");
    Ok(SymbolValue { exponent, valuation, lenient: valuation != 0, key })
}
