//! Fitting `J(N, f)` against observed global root numbers.
//!
//! Each observation consults at most one key `(N, f)`, so the search splits
//! into independent exhaustive searches per key. Within a key, every
//! candidate `(valuation, unit)` is scored by the number of observations it
//! reproduces; the lexicographically smallest best candidate wins.

use super::jtable::{JKey, JTable, JValue, Provenance};
use crate::params::CurveParams;
use crate::root_number::{predict_with, prepare, Prepared, RootNumberError};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Lowest valuation searched.
pub const MIN_VALUATION: i64 = -2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub label: String,
    pub params: CurveParams,
    /// Expected global root number, ±1.
    pub expected: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationOutcome {
    pub label: String,
    pub key: Option<JKey>,
    pub expected: i8,
    /// `None` when the chosen `J` leaves the prediction undefined.
    pub predicted: Option<i8>,
    /// Whether some candidate `J` at this key reproduces the observation.
    pub satisfiable: bool,
}

impl ObservationOutcome {
    pub fn matched(&self) -> bool {
        self.predicted == Some(self.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyFit {
    pub key: JKey,
    pub observations: usize,
    pub best_count: usize,
    pub chosen: JValue,
    /// Every candidate reaching `best_count`, in search order (includes `chosen`).
    pub ties: Vec<JValue>,
}

/// Two observations at one key, each reproducible on its own, that no single `J` reproduces together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub key: JKey,
    pub first: String,
    pub second: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationReport {
    pub table: JTable,
    pub outcomes: Vec<ObservationOutcome>,
    pub fits: Vec<KeyFit>,
    pub conflicts: Vec<Conflict>,
}

impl CalibrationReport {
    pub fn matched(&self) -> usize {
        self.outcomes.iter().filter(|o| o.matched()).count()
    }

    pub fn total(&self) -> usize {
        self.outcomes.len()
    }

    /// Matches attainable if every observation could be fitted independently.
    pub fn satisfiable(&self) -> usize {
        self.outcomes.iter().filter(|o| o.satisfiable || (o.key.is_none() && o.matched())).count()
    }
}

/// Candidates at level `N` in lexicographic `(valuation, unit)` order.
pub fn candidates(prime: u64, level: u32) -> Vec<JValue> {
    let lo = MIN_VALUATION.max(-(level as i64));
    (lo..=level as i64).flat_map(|v| (1..prime).map(move |u| JValue::new(v, u))).collect()
}

pub fn calibrate_j(
    observations: &[Observation],
    precision: Option<u32>,
    lenient: bool,
) -> Result<CalibrationReport, RootNumberError> {
    let prepared: Vec<Prepared> =
        observations.par_iter().map(|o| prepare(&o.params, precision)).collect::<Result<_, _>>()?;
    let prime = observations
        .first()
        .map(|o| o.params.ell())
        .or_else(|| crate::arith::OddPrime::new(3))
        .expect("3 is an odd prime");

    let keys: Vec<Option<JKey>> =
        prepared.iter().map(|p| crate::hilbert::symbol::j_key(&p.classification, p.params.level())).collect();
    let mut groups: BTreeMap<JKey, Vec<usize>> = BTreeMap::new();
    for (i, key) in keys.iter().enumerate() {
        if let Some(k) = key {
            groups.entry(*k).or_default().push(i);
        }
    }

    let mut table = JTable::new(prime);
    let mut fits = Vec::new();
    let mut conflicts = Vec::new();
    let mut satisfiable = vec![false; observations.len()];
    for (&key, members) in &groups {
        let grid = candidates(prime.get(), key.0);
        // hits[c][m]: candidate c reproduces member m.
        let hits: Vec<Vec<bool>> = grid
            .par_iter()
            .map(|&j| {
                members
                    .iter()
                    .map(|&i| Ok(predict_with(&prepared[i], Some(j), lenient)? == Some(observations[i].expected)))
                    .collect::<Result<Vec<bool>, RootNumberError>>()
            })
            .collect::<Result<_, _>>()?;
        let counts: Vec<usize> = hits.iter().map(|h| h.iter().filter(|&&x| x).count()).collect();
        let best_count = counts.iter().copied().max().unwrap_or(0);
        let ties: Vec<JValue> = grid.iter().zip(&counts).filter(|(_, &c)| c == best_count).map(|(j, _)| *j).collect();
        let chosen = ties[0];
        table.insert(key, chosen, Provenance::Calibrated).expect("candidates lie in the table's valuation range");

        let solo: Vec<bool> = (0..members.len()).map(|m| hits.iter().any(|h| h[m])).collect();
        for (m, &i) in members.iter().enumerate() {
            satisfiable[i] = solo[m];
        }
        for a in 0..members.len() {
            for b in a + 1..members.len() {
                if solo[a] && solo[b] && !hits.iter().any(|h| h[a] && h[b]) {
                    conflicts.push(Conflict {
                        key,
                        first: observations[members[a]].label.clone(),
                        second: observations[members[b]].label.clone(),
                    });
                }
            }
        }
        fits.push(KeyFit { key, observations: members.len(), best_count, chosen, ties });
    }

    let outcomes = observations
        .iter()
        .zip(&prepared)
        .zip(&keys)
        .enumerate()
        .map(|(i, ((o, p), key))| {
            let j = key.and_then(|k| table.get(k));
            Ok(ObservationOutcome {
                label: o.label.clone(),
                key: *key,
                expected: o.expected,
                predicted: predict_with(p, j, lenient)?,
                satisfiable: satisfiable[i],
            })
        })
        .collect::<Result<_, RootNumberError>>()?;
    Ok(CalibrationReport { table, outcomes, fits, conflicts })
}
