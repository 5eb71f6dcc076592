//! Values of the invariant `J(N, f)` as supplied by the user or fitted against tables.
//!
//! File format, one entry per line:
//!
//! ```text
//! # comment
//! N f valuation unit  # CALIBRATED
//! ```
//!
//! The trailing comment carries the provenance; entries without one are
//! read as `USER_SUPPLIED`.

use crate::arith::OddPrime;
use crate::padic::{PadicError, PadicScalar};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JTableError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("J({level}, {f}): valuation {valuation} outside [-{level}, {level}]")]
    ValuationOutOfRange { level: u32, f: u64, valuation: i64 },
    #[error("J({level}, {f}): unit {unit} is divisible by ℓ = {prime}")]
    NonUnit { level: u32, f: u64, unit: u64, prime: u64 },
    #[error("duplicate entry for J({0}, {1})")]
    Duplicate(u32, u64),
}

/// An exact ℓ-adic value `ℓ^valuation · unit` with `unit` a representative in `[1, ℓ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JValue {
    pub valuation: i64,
    pub unit: u64,
}

impl JValue {
    pub fn new(valuation: i64, unit: u64) -> Self {
        JValue { valuation, unit }
    }

    /// The value as a scalar at `precision` digits, the unit read as an exact integer.
    pub fn to_scalar(self, prime: OddPrime, precision: u32) -> Result<PadicScalar, PadicError> {
        PadicScalar::new(prime, precision, self.valuation, &BigInt::from(self.unit))
    }
}

impl fmt::Display for JValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(v={}, u={})", self.valuation, self.unit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Calibrated,
    UserSupplied,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Calibrated => "CALIBRATED",
            Provenance::UserSupplied => "USER_SUPPLIED",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "CALIBRATED" => Ok(Provenance::Calibrated),
            "USER_SUPPLIED" => Ok(Provenance::UserSupplied),
            other => Err(format!("unknown provenance {other:?}")),
        }
    }
}

/// Key `(N, f)`.
pub type JKey = (u32, u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JTable {
    prime: OddPrime,
    entries: BTreeMap<JKey, (JValue, Provenance)>,
}

impl JTable {
    pub fn new(prime: OddPrime) -> Self {
        JTable { prime, entries: BTreeMap::new() }
    }

    pub fn prime(&self) -> OddPrime {
        self.prime
    }

    pub fn insert(&mut self, key: JKey, value: JValue, provenance: Provenance) -> Result<(), JTableError> {
        let (level, f) = key;
        if value.valuation.unsigned_abs() > level as u64 {
            return Err(JTableError::ValuationOutOfRange { level, f, valuation: value.valuation });
        }
        if value.unit.is_multiple_of(self.prime.get()) {
            return Err(JTableError::NonUnit { level, f, unit: value.unit, prime: self.prime.get() });
        }
        self.entries.insert(key, (value, provenance));
        Ok(())
    }

    pub fn get(&self, key: JKey) -> Option<JValue> {
        self.entries.get(&key).map(|(v, _)| *v)
    }

    pub fn provenance(&self, key: JKey) -> Option<Provenance> {
        self.entries.get(&key).map(|(_, p)| *p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (JKey, JValue, Provenance)> + '_ {
        self.entries.iter().map(|(k, (v, p))| (*k, *v, *p))
    }

    pub fn parse(text: &str, prime: OddPrime) -> Result<Self, JTableError> {
        let mut table = JTable::new(prime);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let (body, comment) = match raw.split_once('#') {
                Some((b, c)) => (b.trim(), Some(c.trim())),
                None => (raw.trim(), None),
            };
            if body.is_empty() {
                continue;
            }
            let err = |msg: String| JTableError::Parse { line, msg };
            let fields: Vec<&str> = body.split_whitespace().collect();
            let [n, f, v, u] = fields[..] else {
                return Err(err(format!("expected 4 fields `N f valuation unit`, got {}", fields.len())));
            };
            let level: u32 = n.parse().map_err(|e| err(format!("N: {e}")))?;
            let f: u64 = f.parse().map_err(|e| err(format!("f: {e}")))?;
            let valuation: i64 = v.parse().map_err(|e| err(format!("valuation: {e}")))?;
            let unit: u64 = u.parse().map_err(|e| err(format!("unit: {e}")))?;
            let provenance = match comment.filter(|c| !c.is_empty()) {
                Some(c) => c.parse().map_err(err)?,
                None => Provenance::UserSupplied,
            };
            if table.entries.contains_key(&(level, f)) {
                return Err(JTableError::Duplicate(level, f));
            }
            table.insert((level, f), JValue::new(valuation, unit), provenance)?;
        }
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# J(N, f) for ell = {}: N f valuation unit\n", self.prime);
        for ((n, f), v, p) in self.iter() {
            out.push_str(&format!("{n} {f} {} {}  # {p}\n", v.valuation, v.unit));
        }
        out
    }
}
