//! Wild Hilbert-symbol computations: the `c_ℓ(i)` residues, the residue
//! harness behind them, `J`-weighted symbol exponents and `J` calibration.

pub mod calibrate;
pub mod jtable;
pub mod residues;
pub mod symbol;
pub mod vostokov;

use crate::conductor::{Branch, ConductorError};
use crate::padic::{PadicError, Valuation};
use crate::series::SeriesError;
use num_bigint::BigInt;

pub use calibrate::{calibrate_j, CalibrationReport, Observation};
pub use jtable::{JKey, JTable, JTableError, JValue, Provenance};
pub use residues::{c_ell_coeff, c_ell_series_route, c_ell_total, difference_sum};
pub use symbol::{symbol_with_a, unit_symbol_exponent, SymbolExponent, SymbolValue};
pub use vostokov::{vostokov_check, VostokovReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HilbertError {
    #[error("index {0} is not a unit modulo ℓ")]
    BadIndex(BigInt),
    #[error("level N = {0} is below 2")]
    LevelTooSmall(u32),
    #[error("c has valuation {0}, expected at least 1")]
    CNotInMaximalIdeal(Valuation),
    #[error("symbol exponent has negative valuation {0}")]
    InexactDivision(i64),
    #[error("symbol argument is not a unit: valuation {0}")]
    DegenerateArgument(Valuation),
    #[error("no J value for (N, f) = ({0}, {1})")]
    MissingJ(u32, u64),
    #[error("branch {0} has no wild symbol")]
    NotRamified(Branch),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Conductor(#[from] ConductorError),
}
