//! Exact computation of local and global root numbers of the Hecke characters
//! attached to twisted Fermat quotient curves `y^(ℓ^N) = x^r (δ − x)^s` with
//! `ℓ^(N−1) ‖ r` and `ℓ ∤ s t δ`.
//!
//! Everything is exact: ℓ-adic quantities are valuations plus unit residues,
//! fourth roots of unity are exponents mod 4, and the appendix identities are
//! checked as polynomial identities with δ kept symbolic.

pub mod arith;
pub mod conductor;
pub mod curves;
pub mod hilbert;
pub mod padic;
pub mod params;
pub mod root_number;
pub mod series;
pub mod tables;

pub use arith::OddPrime;
pub use conductor::{Branch, ConductorClassification};
pub use hilbert::{JTable, JValue};
pub use padic::{Measured, PadicScalar, UnitDecomposition, Valuation};
pub use params::{value_of_a, CurveParams};
pub use root_number::{global_root_number, FourthRoot, RootNumberReport};
pub use series::TruncatedSeries;
