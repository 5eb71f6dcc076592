//! Local and global root numbers of the twisted Fermat-quotient Hecke characters.
//!
//! `W_ℓ` is evaluated twice: once through the relative root number and the
//! symbol exponent `l` (with the `i`-power kept as a [`FourthRoot`]), and
//! once through the closed form in terms of Legendre symbols of `c/ℓ^N`.
//! The two must agree on every input.

use crate::arith::OddPrime;
use crate::conductor::{conductor_phi_of, sharifi_conductor, Branch, ConductorClassification, ConductorError};
use crate::hilbert::symbol::{branch_multiplier, j_key, symbol_with_a, SymbolValue};
use crate::hilbert::{HilbertError, JKey, JTable, JValue};
use crate::padic::{legendre, Measured, PadicError, UnitDecomposition, Valuation};
use crate::params::{value_of_a, CurveParams};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

/// Retries allowed by the precision-doubling loop.
pub const PRECISION_RETRIES: u32 = 6;

/// Default working precision `2N + 8`.
pub fn default_precision(level: u32) -> u32 {
    2 * level + 8
}

/// `i^exponent`, exponent mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot(0);
    pub const I: FourthRoot = FourthRoot(1);
    pub const MINUS_ONE: FourthRoot = FourthRoot(2);
    pub const MINUS_I: FourthRoot = FourthRoot(3);

    pub fn from_exponent(e: i64) -> Self {
        FourthRoot(e.rem_euclid(4) as u8)
    }

    pub fn from_sign(s: i8) -> Self {
        match s {
            1 => Self::ONE,
            -1 => Self::MINUS_ONE,
            _ => panic!("sign must be ±1, got {s}"),
        }
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    /// `Some(±1)` when real.
    pub fn sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn pow(self, e: u64) -> Self {
        FourthRoot(((self.0 as u64 * (e % 4)) % 4) as u8)
    }
}

impl Mul for FourthRoot {
    type Output = FourthRoot;

    fn mul(self, rhs: FourthRoot) -> FourthRoot {
        FourthRoot((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for FourthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["1", "i", "-1", "-i"][self.0 as usize])
    }
}

impl FromStr for FourthRoot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1" | "+1" => Ok(Self::ONE),
            "i" => Ok(Self::I),
            "-1" => Ok(Self::MINUS_ONE),
            "-i" => Ok(Self::MINUS_I),
            other => Err(format!("not a fourth root of unity: {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootNumberError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Conductor(#[from] ConductorError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error("precision exhausted after raising to {precision} digits: {reason}")]
    PrecisionExhausted { precision: u32, reason: String },
    #[error("W_ℓ routes disagree for {params}: relative route {relative}, closed form {closed}")]
    TwoRouteDisagreement { params: String, relative: String, closed: String },
    #[error("global root number {0} is not real")]
    NotReal(FourthRoot),
    #[error("p = {0} equals ℓ")]
    PrimeIsEll(u64),
}

/// `ℓ^(N−1)(ℓ−1)/2 mod 4`.
pub fn eta_exponent(prime: OddPrime, level: u32) -> u64 {
    let half = ((prime.get() - 1) / 2) % 4;
    let power = crate::arith::pow_mod(prime.get() % 4, (level - 1) as u64, 4);
    half * power % 4
}

/// `W_∞ = i^(−ℓ^(N−1)(ℓ−1)/2)`.
pub fn w_infinity(prime: OddPrime, level: u32) -> FourthRoot {
    FourthRoot::from_exponent(-(eta_exponent(prime, level) as i64))
}

/// `W_p` for a prime `p ≠ ℓ`: `(p/ℓ)` when `p | δ`, else `1`.
pub fn w_finite(p: u64, params: &CurveParams) -> Result<i8, RootNumberError> {
    if p == params.ell().get() {
        return Err(RootNumberError::PrimeIsEll(p));
    }
    Ok(if params.delta().is_multiple_of(p) { legendre(&BigInt::from(p), params.ell()) } else { 1 })
}

/// How a local factor at ℓ was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    MissingJ(JKey),
    Degenerate { key: JKey, valuation: Valuation },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::MissingJ((n, ff)) => write!(f, "no J({n},{ff}) available"),
            Diagnostic::Degenerate { key: (n, ff), valuation } => {
                write!(f, "symbol argument with J({n},{ff}) has valuation {valuation}")
            }
        }
    }
}

fn diagnostic_of(err: HilbertError, key: JKey) -> Result<Diagnostic, RootNumberError> {
    match err {
        HilbertError::MissingJ(n, f) => Ok(Diagnostic::MissingJ((n, f))),
        HilbertError::DegenerateArgument(valuation) => Ok(Diagnostic::Degenerate { key, valuation }),
        other => Err(other.into()),
    }
}

/// Outcome of the relative route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeRootNumber {
    pub f_prime: u64,
    pub value: Result<i8, Diagnostic>,
    pub symbol: Option<SymbolValue>,
}

/// Relative root number through `l`, the exponent of `(1 + π^(f′−1), a)`:
/// `(2/ℓ)` when `f′ = 1`, else `−(−2r′st·l / ℓ) · i^(ℓ^(N−1)(ℓ−1) f′/2)`.
pub fn relative_root_number(
    params: &CurveParams,
    d: &UnitDecomposition,
    cls: &ConductorClassification,
    table: &JTable,
    lenient: bool,
) -> Result<RelativeRootNumber, RootNumberError> {
    let prime = params.ell();
    let level = params.level();
    let f_prime = conductor_phi_of(cls, prime, level);
    if f_prime == 1 {
        let value = legendre(&BigInt::from(2), prime);
        return Ok(RelativeRootNumber { f_prime, value: Ok(value), symbol: None });
    }
    let key = j_key(cls, level).expect("f′ > 1 only on ramified branches");
    let symbol = match symbol_with_a(d, cls, table, level, lenient) {
        Ok(s) => s,
        Err(e) => {
            let diag = diagnostic_of(e, key)?;
            return Ok(RelativeRootNumber { f_prime, value: Err(diag), symbol: None });
        }
    };
    let rst = BigInt::from(params.r_prime()) * params.s() * params.t();
    let inner = -2 * rst * symbol.exponent;
    let sign = -legendre(&inner, prime);
    let twist = FourthRoot::from_exponent(eta_exponent(prime, level) as i64).pow(f_prime);
    let value = (FourthRoot::from_sign(sign) * twist)
        .sign()
        .ok_or(RootNumberError::NotReal(FourthRoot::from_sign(sign) * twist))?;
    Ok(RelativeRootNumber { f_prime, value: Ok(value), symbol: Some(symbol) })
}

/// `W_ℓ` by the closed form, reading `c/ℓ^N` and `J` directly.
pub fn w_ell_closed_form(
    params: &CurveParams,
    d: &UnitDecomposition,
    cls: &ConductorClassification,
    j: Option<JValue>,
    lenient: bool,
) -> Result<Result<FourthRoot, Diagnostic>, RootNumberError> {
    let prime = params.ell();
    let level = params.level();
    let twist = FourthRoot::from_exponent(eta_exponent(prime, level) as i64);
    let Some(multiplier) = branch_multiplier(cls.branch, level) else {
        return Ok(Ok(FourthRoot::from_sign(legendre(&BigInt::from(2), prime)) * twist));
    };
    let key = (level, cls.f);
    let Some(j) = j else { return Ok(Err(Diagnostic::MissingJ(key))) };
    let ord_c = match d.ord_c {
        Measured::Exact(Valuation::Finite(v)) => v,
        Measured::Exact(Valuation::Infinite) => {
            return Ok(Err(Diagnostic::Degenerate { key, valuation: Valuation::Infinite }))
        }
        Measured::Exhausted { .. } => {
            return Err(PadicError::PrecisionExhausted { precision: d.precision, what: "ord(c)" }.into())
        }
    };
    let valuation = ord_c + j.valuation - level as i64;
    if valuation != 0 && !lenient {
        return Ok(Err(Diagnostic::Degenerate { key, valuation: Valuation::Finite(valuation) }));
    }
    let ell = BigUint::from(prime.get());
    let c_unit = &d.c / ell.pow(ord_c as u32);
    let arg = BigInt::from(multiplier) * params.r_prime() * params.s() * params.t() * BigInt::from(c_unit) * j.unit;
    let sign = -legendre(&arg, prime);
    Ok(Ok(FourthRoot::from_sign(sign) * twist))
}

/// Decomposition and classification of `a`, resolved at sufficient precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prepared {
    pub params: CurveParams,
    pub decomposition: UnitDecomposition,
    pub classification: ConductorClassification,
    pub f_prime: u64,
}

fn is_precision_failure(e: &RootNumberError) -> bool {
    matches!(
        e,
        RootNumberError::Padic(PadicError::PrecisionExhausted { .. })
            | RootNumberError::Conductor(ConductorError::Unresolved(_))
    )
}

/// Runs `value_of_a` and the classifier, doubling the precision on exhaustion.
pub fn prepare(params: &CurveParams, precision: Option<u32>) -> Result<Prepared, RootNumberError> {
    let mut m = precision.unwrap_or_else(|| default_precision(params.level()));
    let mut last = String::new();
    for _ in 0..=PRECISION_RETRIES {
        let attempt = (|| {
            let d = value_of_a(params, m)?;
            d.require_resolved()?;
            let cls = sharifi_conductor(&d, params.level())?;
            Ok::<_, RootNumberError>((d, cls))
        })();
        match attempt {
            Ok((decomposition, classification)) => {
                let f_prime = conductor_phi_of(&classification, params.ell(), params.level());
                return Ok(Prepared { params: params.clone(), decomposition, classification, f_prime });
            }
            Err(e) if is_precision_failure(&e) => {
                last = e.to_string();
                m *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(RootNumberError::PrecisionExhausted { precision: m / 2, reason: last })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootNumberReport {
    pub params: CurveParams,
    pub decomposition: UnitDecomposition,
    pub classification: ConductorClassification,
    pub f_prime: u64,
    pub local_infinity: FourthRoot,
    /// `(p, W_p)` for each prime `p | δ`, ascending.
    pub local_factors: Vec<(u64, i8)>,
    /// `None` marks a diagnostic factor.
    pub relative: Option<i8>,
    pub local_ell: Option<FourthRoot>,
    pub global: Option<i8>,
    pub j_usage: Vec<JKey>,
    pub symbol: Option<SymbolValue>,
    pub notes: Vec<String>,
}

impl Prepared {
    pub fn evaluate(&self, table: &JTable, lenient: bool) -> Result<RootNumberReport, RootNumberError> {
        let params = &self.params;
        let prime = params.ell();
        let level = params.level();
        let d = &self.decomposition;
        let cls = &self.classification;
        let mut notes = Vec::new();

        let local_infinity = w_infinity(prime, level);
        let local_factors = params
            .delta_primes()
            .iter()
            .map(|&(p, _)| w_finite(p, params).map(|w| (p, w)))
            .collect::<Result<Vec<_>, _>>()?;

        let rel = relative_root_number(params, d, cls, table, lenient)?;
        let twist = FourthRoot::from_exponent(eta_exponent(prime, level) as i64);
        let via_relative = rel.value.clone().map(|v| FourthRoot::from_sign(v) * twist);
        let j_usage: Vec<JKey> = j_key(cls, level).into_iter().collect();
        let j = j_usage.first().and_then(|&k| table.get(k));
        let closed = w_ell_closed_form(params, d, cls, j, lenient)?;
        if via_relative != closed {
            let show = |r: &Result<FourthRoot, Diagnostic>| match r {
                Ok(w) => w.to_string(),
                Err(diag) => format!("DIAGNOSTIC({diag})"),
            };
            return Err(RootNumberError::TwoRouteDisagreement {
                params: params.to_string(),
                relative: show(&via_relative),
                closed: show(&closed),
            });
        }

        if cls.branch == Branch::TameTwo {
            notes.push("w = N = ord(c) < ord(b+c): conductor exponent 2, closed form in the otherwise branch".into());
        }
        if let Some(s) = &rel.symbol {
            if s.lenient {
                notes.push(format!(
                    "lenient: symbol argument for J({},{}) has valuation {}, unit part used",
                    s.key.0, s.key.1, s.valuation
                ));
            }
        }
        if let Err(diag) = &closed {
            notes.push(diag.to_string());
        }

        let local_ell = closed.ok();
        let global = match local_ell {
            Some(w_ell) => {
                let product =
                    local_factors.iter().fold(local_infinity * w_ell, |acc, &(_, w)| acc * FourthRoot::from_sign(w));
                Some(product.sign().ok_or(RootNumberError::NotReal(product))?)
            }
            None => None,
        };
        Ok(RootNumberReport {
            params: params.clone(),
            decomposition: d.clone(),
            classification: *cls,
            f_prime: self.f_prime,
            local_infinity,
            local_factors,
            relative: rel.value.ok(),
            local_ell,
            global,
            j_usage,
            symbol: rel.symbol,
            notes,
        })
    }
}

/// Full pipeline: `value_of_a`, classification, local factors and their product.
pub fn global_root_number(
    params: &CurveParams,
    table: &JTable,
    precision: Option<u32>,
    lenient: bool,
) -> Result<RootNumberReport, RootNumberError> {
    prepare(params, precision)?.evaluate(table, lenient)
}

/// `W` predicted for a single `J` value at the key the classification consults.
pub fn predict_with(prepared: &Prepared, j: Option<JValue>, lenient: bool) -> Result<Option<i8>, RootNumberError> {
    let p = &prepared.params;
    let closed = w_ell_closed_form(p, &prepared.decomposition, &prepared.classification, j, lenient)?;
    let Ok(w_ell) = closed else { return Ok(None) };
    let product = p
        .delta_primes()
        .iter()
        .map(|&(q, _)| w_finite(q, p))
        .try_fold(w_infinity(p.ell(), p.level()) * w_ell, |acc, w| w.map(|w| acc * FourthRoot::from_sign(w)))?;
    Ok(Some(product.sign().ok_or(RootNumberError::NotReal(product))?))
}

/// `(c / ℓ^ord(c)) mod ℓ`, the leading digit of `c`.
pub fn c_leading_digit(d: &UnitDecomposition) -> Option<u64> {
    let Measured::Exact(Valuation::Finite(v)) = d.ord_c else { return None };
    let ell = BigUint::from(d.prime.get());
    (&d.c / ell.pow(v as u32)).mod_floor(&ell).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Provenance;

    fn p(x: u64) -> OddPrime {
        OddPrime::new(x).unwrap()
    }

    #[test]
    fn infinity_examples() {
        assert_eq!(w_infinity(p(3), 2), FourthRoot::I);
        assert_eq!(w_infinity(p(3), 1), FourthRoot::MINUS_I);
        assert_eq!(w_infinity(p(5), 1), FourthRoot::MINUS_ONE);
    }

    #[test]
    fn finite_examples() {
        let params = |delta| CurveParams::new(3, 2, 3, 5, 1, delta).unwrap();
        assert_eq!(w_finite(2, &params(2)).unwrap(), -1);
        assert_eq!(w_finite(7, &params(5)).unwrap(), 1);
        assert_eq!(w_finite(2, &params(4)).unwrap(), -1);
        assert_eq!(w_finite(3, &params(4)), Err(RootNumberError::PrimeIsEll(3)));
    }

    #[test]
    fn fourth_root_arithmetic() {
        assert_eq!(FourthRoot::I * FourthRoot::I, FourthRoot::MINUS_ONE);
        assert_eq!(FourthRoot::I.pow(3), FourthRoot::MINUS_I);
        for e in 0..4 {
            let x = FourthRoot::from_exponent(e);
            assert_eq!(x.to_string().parse::<FourthRoot>().unwrap(), x);
        }
    }

    #[test]
    fn otherwise_branch_w_ell() {
        let params = CurveParams::new(3, 2, 3, 5, 1, 1).unwrap();
        let prepared = prepare(&params, None).unwrap();
        let twist = FourthRoot::from_exponent(eta_exponent(p(3), 2) as i64);
        let cls = ConductorClassification { branch: Branch::TrivialTail, w: Valuation::Finite(3), f: 0 };
        let w = w_ell_closed_form(&params, &prepared.decomposition, &cls, None, false).unwrap().unwrap();
        assert_eq!(w, FourthRoot::MINUS_ONE * twist);
        assert_eq!(w, FourthRoot::I);
        assert_eq!((w_infinity(p(3), 2) * w).sign(), Some(-1));
    }

    #[test]
    fn table_one_delta_one_depends_on_j_unit() {
        let params = CurveParams::new(3, 2, 3, 5, 1, 1).unwrap();
        let prepared = prepare(&params, None).unwrap();
        assert_eq!(prepared.classification.branch, Branch::RamifiedGreater(1));
        assert_eq!(prepared.f_prime, 2);
        let run = |u| {
            let mut t = JTable::new(p(3));
            t.insert((2, 2), JValue::new(1, u), Provenance::UserSupplied).unwrap();
            prepared.evaluate(&t, false).unwrap()
        };
        let (a, b) = (run(1), run(2));
        assert_eq!(a.local_ell.map(|w| w.exponent() % 2), Some(1));
        assert_ne!(a.global, b.global);
        assert!(a.global.is_some() && b.global.is_some());
    }

    #[test]
    fn missing_j_is_diagnostic() {
        let params = CurveParams::new(3, 2, 3, 5, 1, 1).unwrap();
        let report = global_root_number(&params, &JTable::new(p(3)), None, false).unwrap();
        assert_eq!(report.global, None);
        assert_eq!(report.j_usage, vec![(2, 2)]);
        assert!(report.notes.iter().any(|n| n.contains("J(2,2)")));
    }
}
