//! Reference tables for `ℓ = 3`, `N = 2`: valuation rows and global root numbers
//! for the three essential `(r, s, t)` over `δ ∈ {1, 2, 4, 5, 7, 8}`.

use crate::hilbert::calibrate::Observation;
use crate::padic::{Measured, UnitDecomposition, Valuation};
use crate::params::CurveParams;

pub const ELL: u64 = 3;
pub const LEVEL: u32 = 2;
pub const DELTAS: [u64; 6] = [1, 2, 4, 5, 7, 8];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceTable {
    pub name: &'static str,
    pub rst: (u64, u64, u64),
    pub ord_b: [i64; 6],
    pub ord_c: [i64; 6],
    pub ord_b_plus_c: [i64; 6],
    pub global: [i8; 6],
}

pub const TABLES: [ReferenceTable; 3] = [
    ReferenceTable {
        name: "T1",
        rst: (3, 5, 1),
        ord_b: [1; 6],
        ord_c: [1, 3, 1, 1, 2, 1],
        ord_b_plus_c: [3, 1, 1, 1, 1, 2],
        global: [-1, 1, -1, -1, -1, 1],
    },
    ReferenceTable {
        name: "T2",
        rst: (3, 4, 2),
        ord_b: [1; 6],
        ord_c: [1, 1, 5, 2, 1, 1],
        ord_b_plus_c: [2, 1, 1, 1, 1, 2],
        global: [-1, -1, 1, 1, 1, 1],
    },
    ReferenceTable {
        name: "T3",
        rst: (6, 2, 1),
        ord_b: [1; 6],
        ord_c: [1, 1, 4, 2, 1, 1],
        ord_b_plus_c: [2, 1, 1, 1, 1, 2],
        global: [1, 1, 1, -1, -1, -1],
    },
];

/// One column of a reference table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub table: &'static str,
    pub params: CurveParams,
    pub ord_b: i64,
    pub ord_c: i64,
    pub ord_b_plus_c: i64,
    pub global: i8,
}

impl Row {
    pub fn label(&self) -> String {
        format!("{} δ={}", self.table, self.params.delta())
    }

    /// Whether a decomposition reproduces the three valuations exactly.
    pub fn matches(&self, d: &UnitDecomposition) -> bool {
        let exact = |v: i64| Measured::Exact(Valuation::Finite(v));
        d.ord_b == Valuation::Finite(self.ord_b)
            && d.ord_c == exact(self.ord_c)
            && d.ord_b_plus_c == exact(self.ord_b_plus_c)
    }

    pub fn observation(&self) -> Observation {
        Observation { label: self.label(), params: self.params.clone(), expected: self.global }
    }
}

impl ReferenceTable {
    pub fn rows(&self) -> Vec<Row> {
        let (r, s, t) = self.rst;
        DELTAS
            .iter()
            .enumerate()
            .map(|(i, &delta)| Row {
                table: self.name,
                params: CurveParams::new(ELL, LEVEL, r, s, t, delta).expect("reference parameters are valid"),
                ord_b: self.ord_b[i],
                ord_c: self.ord_c[i],
                ord_b_plus_c: self.ord_b_plus_c[i],
                global: self.global[i],
            })
            .collect()
    }

    pub fn observations(&self) -> Vec<Observation> {
        self.rows().iter().map(Row::observation).collect()
    }
}

pub fn table(name: &str) -> Option<&'static ReferenceTable> {
    TABLES.iter().find(|t| t.name.eq_ignore_ascii_case(name))
}

pub fn all_rows() -> Vec<Row> {
    TABLES.iter().flat_map(ReferenceTable::rows).collect()
}
