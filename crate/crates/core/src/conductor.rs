//! Conductor exponents of `(·, a)_{ℓ^N}` over ℚ_ℓ(ζ_{ℓ^N}) and of the local character.
//!
//! The five cases depend only on `w = min(ord b, ord c)` and `ord(b + c)`:
//!
//! | case                               | f                 |
//! |------------------------------------|-------------------|
//! | `w = 0`                            | `ℓ^(N−1)(ℓ+1)`    |
//! | `1 ≤ w < N`, `ord(b+c) = w`        | `2ℓ^(N−w)`        |
//! | `1 ≤ w < N`, `ord(b+c) > w`        | `ℓ^(N−w−1)(ℓ−1)`  |
//! | `w = N = ord c`                    | `2`               |
//! | otherwise                          | `0`               |

use crate::arith::OddPrime;
use crate::padic::{Measured, UnitDecomposition, Valuation};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConductorError {
    #[error("{0} is unresolved at the working precision")]
    Unresolved(&'static str),
    #[error("valuations violate the ultrametric inequality: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    WZero,
    /// `1 ≤ w ≤ N` and `ord(b+c) = w`; includes `w = N = ord c`.
    RamifiedEqual(u32),
    /// `1 ≤ w < N` and `ord(b+c) > w`.
    RamifiedGreater(u32),
    /// `w = N = ord c` but `ord(b+c) > N`, which needs `ord b = ord c = N`.
    TameTwo,
    TrivialTail,
}

impl Branch {
    pub fn is_ramified(self) -> bool {
        matches!(self, Branch::RamifiedEqual(_) | Branch::RamifiedGreater(_))
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::WZero => f.write_str("W_ZERO"),
            Branch::RamifiedEqual(w) => write!(f, "RAMIFIED_EQUAL({w})"),
            Branch::RamifiedGreater(w) => write!(f, "RAMIFIED_GREATER({w})"),
            Branch::TameTwo => f.write_str("TAME_TWO"),
            Branch::TrivialTail => f.write_str("TRIVIAL_TAIL"),
        }
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let arg = |prefix: &str| -> Option<Result<u32, String>> {
            s.strip_prefix(prefix)?.strip_suffix(')').map(|x| x.parse::<u32>().map_err(|e| e.to_string()))
        };
        match s {
            "W_ZERO" => Ok(Branch::WZero),
            "TAME_TWO" => Ok(Branch::TameTwo),
            "TRIVIAL_TAIL" => Ok(Branch::TrivialTail),
            _ => {
                if let Some(w) = arg("RAMIFIED_EQUAL(") {
                    Ok(Branch::RamifiedEqual(w?))
                } else if let Some(w) = arg("RAMIFIED_GREATER(") {
                    Ok(Branch::RamifiedGreater(w?))
                } else {
                    Err(format!("unknown branch {s:?}"))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConductorClassification {
    pub branch: Branch,
    pub w: Valuation,
    pub f: u64,
}

/// Case analysis on raw valuations; `ord_c` is never zero since `c ∈ ℓℤ_ℓ`.
pub fn classify(
    ord_b: Valuation,
    ord_c: Measured,
    ord_b_plus_c: Measured,
    prime: OddPrime,
    level: u32,
) -> Result<ConductorClassification, ConductorError> {
    let l = prime.get();
    let n = level as i64;
    if ord_c == Measured::Exact(Valuation::Finite(0)) {
        return Err(ConductorError::Inconsistent("ord(c) = 0 but c ∈ ℓℤ_ℓ".into()));
    }
    if let (Measured::Exact(oc), Measured::Exact(obc)) = (ord_c, ord_b_plus_c) {
        let w = ord_b.min(oc);
        if ord_b != oc && obc != w {
            return Err(ConductorError::Inconsistent(format!(
                "ord(b) = {ord_b}, ord(c) = {oc} differ but ord(b+c) = {obc}"
            )));
        }
        if obc < w {
            return Err(ConductorError::Inconsistent(format!("ord(b+c) = {obc} < w = {w}")));
        }
    }
    let w = ord_c.min_with(ord_b).exact().ok_or(ConductorError::Unresolved("w"))?;
    let need_bc = || ord_b_plus_c.exact().ok_or(ConductorError::Unresolved("ord(b+c)"));
    let classified = |branch, f| Ok(ConductorClassification { branch, w, f });
    let wv = match w {
        Valuation::Infinite => return classified(Branch::TrivialTail, 0),
        Valuation::Finite(v) => v,
    };
    if wv == 0 {
        return classified(Branch::WZero, l.pow(level - 1) * (l + 1));
    }
    if wv < n {
        let wu = wv as u32;
        let obc = need_bc()?;
        return if obc == w {
            classified(Branch::RamifiedEqual(wu), 2 * l.pow(level - wu))
        } else {
            classified(Branch::RamifiedGreater(wu), l.pow(level - wu - 1) * (l - 1))
        };
    }
    if wv == n {
        // w = N is carried by c exactly when ord(c) is not above it.
        let carried_by_c = match ord_c {
            Measured::Exact(oc) => oc == w,
            Measured::Exhausted { at_least } => {
                if at_least > n {
                    false
                } else {
                    return Err(ConductorError::Unresolved("ord(c)"));
                }
            }
        };
        if carried_by_c {
            let obc = need_bc()?;
            return if obc == w { classified(Branch::RamifiedEqual(level), 2) } else { classified(Branch::TameTwo, 2) };
        }
    }
    classified(Branch::TrivialTail, 0)
}

pub fn sharifi_conductor(d: &UnitDecomposition, level: u32) -> Result<ConductorClassification, ConductorError> {
    classify(d.ord_b, d.ord_c, d.ord_b_plus_c, d.prime, level)
}

/// Conductor exponent `f′` of the local character at ℓ.
pub fn conductor_phi_of(cls: &ConductorClassification, prime: OddPrime, level: u32) -> u64 {
    let l = prime.get();
    match cls.branch {
        Branch::RamifiedEqual(w) => 2 * l.pow(level - w),
        Branch::RamifiedGreater(w) => l.pow(level - w - 1) * (l - 1),
        _ => 1,
    }
}

pub fn conductor_phi(d: &UnitDecomposition, level: u32) -> Result<u64, ConductorError> {
    let cls = sharifi_conductor(d, level)?;
    Ok(conductor_phi_of(&cls, d.prime, level))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: i64) -> Valuation {
        Valuation::Finite(v)
    }

    fn ex(v: i64) -> Measured {
        Measured::Exact(fin(v))
    }

    fn three() -> OddPrime {
        OddPrime::new(3).unwrap()
    }

    #[test]
    fn table_one_rows() {
        let c = classify(fin(1), ex(1), ex(3), three(), 2).unwrap();
        assert_eq!((c.branch, c.f), (Branch::RamifiedGreater(1), 2));
        assert_eq!(conductor_phi_of(&c, three(), 2), 2);
        let c = classify(fin(1), ex(3), ex(1), three(), 2).unwrap();
        assert_eq!((c.branch, c.f), (Branch::RamifiedEqual(1), 6));
        assert_eq!(conductor_phi_of(&c, three(), 2), 6);
    }

    #[test]
    fn w_zero_and_trivial_tail() {
        // b = 1 has ord 0, whatever c is.
        let c = classify(fin(0), ex(2), ex(0), three(), 2).unwrap();
        assert_eq!((c.branch, c.f, c.w), (Branch::WZero, 12, fin(0)));
        assert_eq!(conductor_phi_of(&c, three(), 2), 1);
        // b = 27, ord(c) = 4: w = 3 > N.
        let c = classify(fin(3), ex(4), ex(3), three(), 2).unwrap();
        assert_eq!((c.branch, c.f), (Branch::TrivialTail, 0));
        assert_eq!(conductor_phi_of(&c, three(), 2), 1);
    }

    #[test]
    fn w_equals_level() {
        let c = classify(Valuation::Infinite, ex(1), ex(1), three(), 1).unwrap();
        assert_eq!((c.branch, c.f), (Branch::RamifiedEqual(1), 2));
        assert_eq!(conductor_phi_of(&c, three(), 1), 2);
        let c = classify(fin(2), ex(2), ex(3), three(), 2).unwrap();
        assert_eq!((c.branch, c.f), (Branch::TameTwo, 2));
        assert_eq!(conductor_phi_of(&c, three(), 2), 1);
        let c = classify(fin(2), ex(5), ex(2), three(), 2).unwrap();
        assert_eq!((c.branch, c.f), (Branch::TrivialTail, 0));
    }

    #[test]
    fn unresolved_and_inconsistent() {
        let exhausted = Measured::Exhausted { at_least: 8 };
        assert_eq!(classify(fin(1), ex(1), exhausted, three(), 2), Err(ConductorError::Unresolved("ord(b+c)")));
        // w is pinned by b even though c is invisible, and w > N needs nothing else.
        assert_eq!(classify(fin(3), exhausted, exhausted, three(), 2).unwrap().branch, Branch::TrivialTail);
        assert_eq!(
            classify(Valuation::Infinite, exhausted, exhausted, three(), 2),
            Err(ConductorError::Unresolved("w"))
        );
        assert!(matches!(classify(fin(1), ex(2), ex(2), three(), 2), Err(ConductorError::Inconsistent(_))));
        assert!(matches!(classify(fin(1), ex(0), ex(0), three(), 2), Err(ConductorError::Inconsistent(_))));
    }

    #[test]
    fn branch_names_round_trip() {
        for b in
            [Branch::WZero, Branch::RamifiedEqual(3), Branch::RamifiedGreater(1), Branch::TameTwo, Branch::TrivialTail]
        {
            assert_eq!(b.to_string().parse::<Branch>().unwrap(), b);
        }
    }
}
