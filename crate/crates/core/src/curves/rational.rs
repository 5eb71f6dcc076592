//! Rationality of `Y^m = δ^(−s−2t) X^s (δ−X)^t` for `m = ℓ^(N−1)`, `(s, t) = (1, m − 1)`.
//!
//! With `K = δ^(s+2t)` and `T = Y/(δ − X)` the curve is parametrized by
//! `X = δKT^m / (1 + KT^m)`, `Y = δT / (1 + KT^m)`. The check substitutes
//! this parametrization into the cleared relation `K·Y^m − X^s(δ−X)^t` with
//! δ kept symbolic, and confirms that `T` is recovered as `Y/(δ−X)`.
//!
//! The shortcut `(Y/(δ−X))^m = δ^(−s−2t) X` is evaluated on the same
//! parametrization and reported; it omits a factor `1/(δ−X)` and does not hold.

use super::poly::{MultivariatePolynomial as Poly, RationalFunction};
use super::{Control, CurveError};
use crate::arith::OddPrime;

const VARS: [&str; 4] = ["X", "Y", "T", "d"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalityReport {
    pub ell: u64,
    pub level: u32,
    pub s: u64,
    pub t: u64,
    /// The relation vanishes identically on the parametrization.
    pub relation_holds: bool,
    /// `Y/(δ−X) = T` on the parametrization.
    pub inverse_holds: bool,
    /// Whether `(Y/(δ−X))^m = δ^(−s−2t) X` holds on the curve.
    pub shortcut_holds: bool,
    pub controls: Vec<Control>,
}

impl RationalityReport {
    pub fn verified(&self) -> bool {
        self.relation_holds && self.inverse_holds && self.controls.iter().all(|c| !c.holds)
    }
}

fn v(name: &str) -> Poly {
    Poly::var(&VARS, name)
}

fn int(c: i64) -> Poly {
    Poly::integer(&VARS, c)
}

/// Zero after substituting the parametrization for `X` and `Y`.
fn vanishes_on(p: &Poly, x: &RationalFunction, y: &RationalFunction) -> bool {
    let after_x = p.substitute(0, x);
    after_x.substitute(1, y).is_zero()
}

/// `K·Y^m − sign·X^s·(δ−X)^t_exp` with `K = δ^k_exp`.
fn relation(m: u32, s: u32, t_exp: u32, k_exp: u32, sign: i64) -> Poly {
    let lhs = v("d").pow(k_exp).mul(&v("Y").pow(m));
    let rhs = v("X").pow(s).mul(&v("d").sub(&v("X")).pow(t_exp)).mul(&int(sign));
    lhs.sub(&rhs)
}

pub fn verify_rationality(ell: u64, level: u32) -> Result<RationalityReport, CurveError> {
    let prime =
        OddPrime::new(ell).ok_or_else(|| CurveError::PreconditionViolated(format!("{ell} is not an odd prime")))?;
    if level < 2 {
        return Err(CurveError::PreconditionViolated(format!("N = {level} must be at least 2")));
    }
    let m = prime.checked_pow(level - 1).ok_or_else(|| CurveError::PreconditionViolated("ℓ^(N−1) overflows".into()))?;
    verify_rationality_with(ell, level, 1, m - 1)
}

/// As [`verify_rationality`], rejecting any `(s, t)` other than `(1, ℓ^(N−1) − 1)`.
pub fn verify_rationality_with(ell: u64, level: u32, s: u64, t: u64) -> Result<RationalityReport, CurveError> {
    let prime =
        OddPrime::new(ell).ok_or_else(|| CurveError::PreconditionViolated(format!("{ell} is not an odd prime")))?;
    if level < 2 {
        return Err(CurveError::PreconditionViolated(format!("N = {level} must be at least 2")));
    }
    let m = prime
        .checked_pow(level - 1)
        .filter(|&m| m <= 10_000)
        .ok_or_else(|| CurveError::PreconditionViolated("ℓ^(N−1) too large".into()))?;
    if (s, t) != (1, m - 1) {
        return Err(CurveError::PreconditionViolated(format!("(s, t) = ({s}, {t}), expected (1, {})", m - 1)));
    }
    let (m, s, t) = (m as u32, s as u32, t as u32);
    let k_exp = s + 2 * t;

    let k_tm = v("d").pow(k_exp).mul(&v("T").pow(m));
    let den = int(1).add(&k_tm);
    let x = RationalFunction::new(v("d").mul(&k_tm), den.clone());
    let y = RationalFunction::new(v("d").mul(&v("T")), den);

    let relation_holds = vanishes_on(&relation(m, s, t, k_exp, 1), &x, &y);
    let inverse_holds = vanishes_on(&v("T").mul(&v("d").sub(&v("X"))).sub(&v("Y")), &x, &y);
    let shortcut = v("d").pow(k_exp).mul(&v("Y").pow(m)).sub(&v("X").mul(&v("d").sub(&v("X")).pow(m)));
    let shortcut_holds = vanishes_on(&shortcut, &x, &y);

    let controls = vec![
        Control { name: "exponent t+1", holds: vanishes_on(&relation(m, s, t + 1, k_exp, 1), &x, &y) },
        Control { name: "sign flip", holds: vanishes_on(&relation(m, s, t, k_exp, -1), &x, &y) },
        Control { name: "delta power s+2t+1", holds: vanishes_on(&relation(m, s, t, k_exp + 1, 1), &x, &y) },
    ];
    Ok(RationalityReport {
        ell,
        level,
        s: s as u64,
        t: t as u64,
        relation_holds,
        inverse_holds,
        shortcut_holds,
        controls,
    })
}
