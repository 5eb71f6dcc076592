//! Flat, serializable records emitted by the CLI.

use rootnum::curves::{PlaneModelReport, RationalityReport};
use rootnum::hilbert::calibrate::ObservationOutcome;
use rootnum::root_number::Prepared;
use rootnum::tables::Row;
use rootnum::{JValue, RootNumberReport, UnitDecomposition};
use serde::{Deserialize, Serialize};

/// One evaluated parameter point. `W_p` is written `p:sign` joined by `;`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub ell: u64,
    #[serde(rename = "N")]
    pub level: u32,
    pub r: u64,
    pub s: u64,
    pub t: u64,
    pub delta: u64,
    pub b: String,
    pub ord_b: String,
    pub ord_c: String,
    pub ord_b_plus_c: String,
    pub branch: Option<String>,
    pub f: Option<u64>,
    pub f_prime: Option<u64>,
    #[serde(rename = "W_inf")]
    pub w_inf: Option<String>,
    #[serde(rename = "W_p")]
    pub w_p: String,
    #[serde(rename = "W_ell")]
    pub w_ell: Option<String>,
    #[serde(rename = "W_global")]
    pub w_global: Option<i8>,
    pub notes: String,
}

impl ReportRecord {
    fn base(p: &Prepared) -> Self {
        let params = &p.params;
        let d = &p.decomposition;
        ReportRecord {
            ell: params.ell().get(),
            level: params.level(),
            r: params.r(),
            s: params.s(),
            t: params.t(),
            delta: params.delta(),
            b: d.b.to_string(),
            ord_b: d.ord_b.to_string(),
            ord_c: d.ord_c.to_string(),
            ord_b_plus_c: d.ord_b_plus_c.to_string(),
            branch: None,
            f: None,
            f_prime: None,
            w_inf: None,
            w_p: String::new(),
            w_ell: None,
            w_global: None,
            notes: String::new(),
        }
    }

    /// Decomposition fields, plus the classification when `classify` is set.
    pub fn from_prepared(p: &Prepared, classify: bool) -> Self {
        let mut rec = Self::base(p);
        if classify {
            rec.branch = Some(p.classification.branch.to_string());
            rec.f = Some(p.classification.f);
            rec.f_prime = Some(p.f_prime);
        }
        rec
    }

    pub fn from_report(report: &RootNumberReport) -> Self {
        let prepared = Prepared {
            params: report.params.clone(),
            decomposition: report.decomposition.clone(),
            classification: report.classification,
            f_prime: report.f_prime,
        };
        let factors: Vec<String> = report.local_factors.iter().map(|(p, w)| format!("{p}:{w}")).collect();
        ReportRecord {
            w_inf: Some(report.local_infinity.to_string()),
            w_p: factors.join(";"),
            w_ell: report.local_ell.map(|w| w.to_string()),
            w_global: report.global,
            notes: report.notes.join("; "),
            ..Self::from_prepared(&prepared, true)
        }
    }
}

/// A reference-table row against the computed valuations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCheck {
    pub table: String,
    pub delta: u64,
    pub expected_ord: String,
    pub computed_ord: String,
    pub valuations: String,
    pub expected_w: i8,
    /// Prediction under the J fitted to this table alone.
    pub calibrated_w: Option<i8>,
    pub w: String,
}

impl TableCheck {
    pub fn new(row: &Row, d: &UnitDecomposition, calibrated_w: Option<i8>) -> Self {
        let status = |ok: bool| if ok { "PASS" } else { "FAIL" }.to_string();
        TableCheck {
            table: row.table.to_string(),
            delta: row.params.delta(),
            expected_ord: format!("{}/{}/{}", row.ord_b, row.ord_c, row.ord_b_plus_c),
            computed_ord: format!("{}/{}/{}", d.ord_b, d.ord_c, d.ord_b_plus_c),
            valuations: status(row.matches(d)),
            expected_w: row.global,
            calibrated_w,
            w: match calibrated_w {
                None => "UNDEFINED".into(),
                Some(w) => status(w == row.global),
            },
        }
    }
}

/// One calibration observation under the fitted table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationRecord {
    pub label: String,
    /// `N,f`, empty when no J is consulted.
    pub key: String,
    pub j: String,
    pub expected: i8,
    pub predicted: Option<i8>,
    pub matched: bool,
    pub satisfiable: bool,
    /// Observations at the same key that no common J reproduces together with this one.
    pub conflicts_with: String,
}

impl ObservationRecord {
    pub fn new(o: &ObservationOutcome, j: Option<JValue>, conflicts: &[&str]) -> Self {
        ObservationRecord {
            label: o.label.clone(),
            key: o.key.map(|(n, f)| format!("{n},{f}")).unwrap_or_default(),
            j: j.map(|j| format!("{},{}", j.valuation, j.unit)).unwrap_or_default(),
            expected: o.expected,
            predicted: o.predicted,
            matched: o.matched(),
            satisfiable: o.satisfiable,
            conflicts_with: conflicts.join(";"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixRecord {
    pub ell: u64,
    #[serde(rename = "N")]
    pub level: u32,
    pub genus: u64,
    pub rationality: bool,
    pub shortcut_holds: bool,
    pub plane_exact: bool,
    pub plane_randomized: bool,
    pub error_bound_bits: u32,
    /// Negative controls that (wrongly) held, joined by `;`.
    pub controls_holding: String,
    pub verified: bool,
}

impl AppendixRecord {
    pub fn new(rational: &RationalityReport, plane: &PlaneModelReport, genus: u64) -> Self {
        let holding: Vec<&str> = rational
            .controls
            .iter()
            .chain(plane.control_summary().iter())
            .filter(|c| c.holds)
            .map(|c| c.name)
            .collect();
        AppendixRecord {
            ell: rational.ell,
            level: rational.level,
            genus,
            rationality: rational.relation_holds && rational.inverse_holds,
            shortcut_holds: rational.shortcut_holds,
            plane_exact: plane.identity.exact_holds,
            plane_randomized: plane.identity.randomized.holds(),
            error_bound_bits: plane.identity.randomized.error_bound_bits,
            controls_holding: holding.join(";"),
            verified: rational.verified() && plane.verified(),
        }
    }
}
