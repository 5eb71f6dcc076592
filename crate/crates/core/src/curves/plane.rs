//! The plane model `δ^(s+2t) u + u^(ℓ+1) = δ v^ℓ` of the level-2 curve, `(s, t) = (1, ℓ − 1)`.
//!
//! Under `X = (Ku − u^(ℓ+1) + δv^ℓ)/(2v^ℓ)`, `Y = u/v` with `K = δ^(s+2t)`,
//! the target `K^(−1) X (δ−X)^(ℓ−1) − Y^(ℓ²)` must vanish on the relation.
//! With `P = Ku − u^(ℓ+1) + δv^ℓ` and `Q = 2δv^ℓ − P` (so `δ − X = Q/(2v^ℓ)`)
//! the cleared form is `P·Q^(ℓ−1) − 2^ℓ K u^(ℓ²)`.
//!
//! Two independent checks: the remainder on division by the relation (monic
//! in `u`), and evaluation at random points of the relation over a prime
//! field `𝔽_p` with `ℓ ∤ p − 1`, where `v` is the unique `ℓ`-th root of
//! `(Ku + u^(ℓ+1))/δ`. Since the cleared form only involves `v^ℓ`, it becomes
//! a polynomial in the free coordinates `(u, δ)` on the relation, and the
//! Schwartz–Zippel bound applies to that polynomial's degree.

use super::poly::{two_pow, MultivariatePolynomial as Poly};
use super::{Control, CurveError};
use crate::arith::{inv_mod, is_prime, pow_mod, OddPrime};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const VARS: [&str; 3] = ["u", "v", "d"];

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_TRIALS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomizedCheck {
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
    /// Trials at which the target vanished.
    pub passed: u32,
    /// Total degree bound of the target as a polynomial in `(u, δ)`.
    pub degree_bound: u32,
    /// A nonvanishing target survives all trials with probability at most `2^(−error_bound_bits)`.
    pub error_bound_bits: u32,
}

impl RandomizedCheck {
    pub fn holds(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCase {
    pub name: &'static str,
    pub exact_holds: bool,
    pub randomized: RandomizedCheck,
    /// Number of terms left after reduction by the relation.
    pub remainder_terms: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneModelReport {
    pub ell: u64,
    pub genus: u64,
    pub identity: PlaneCase,
    /// Negative controls; the first uses the middle factor `(−Ku + u^(ℓ+1) − δv^ℓ)/(2v^ℓ)`
    /// in place of `δ − X`.
    pub controls: Vec<PlaneCase>,
    /// Remainder of the displayed-factor variant on division by the relation.
    pub displayed_factor_remainder: Poly,
}

impl PlaneModelReport {
    pub fn verified(&self) -> bool {
        let agree = |c: &PlaneCase| c.exact_holds == c.randomized.holds();
        self.identity.exact_holds && agree(&self.identity) && self.controls.iter().all(|c| !c.exact_holds && agree(c))
    }

    pub fn control_summary(&self) -> Vec<Control> {
        self.controls.iter().map(|c| Control { name: c.name, holds: c.exact_holds || c.randomized.holds() }).collect()
    }
}

fn v(name: &str) -> Poly {
    Poly::var(&VARS, name)
}

fn int(c: i64) -> Poly {
    Poly::integer(&VARS, c)
}

/// Relation `α u^(ℓ+1) + δ^k u − δ v^ℓ`.
#[derive(Clone, Copy)]
struct Relation {
    alpha: i64,
    k: u32,
}

impl Relation {
    fn poly(self, ell: u32) -> Poly {
        v("u")
            .pow(ell + 1)
            .mul(&int(self.alpha))
            .add(&v("d").pow(self.k).mul(&v("u")))
            .sub(&v("d").mul(&v("v").pow(ell)))
    }
}

/// Largest prime below `2^62` with `ℓ ∤ p − 1`.
pub fn field_prime(ell: u64) -> u64 {
    let mut p = (1u64 << 62) - 1;
    while !(is_prime(p) && !(p - 1).is_multiple_of(ell)) {
        p -= 2;
    }
    p
}

fn ceil_log2(x: u64) -> u32 {
    64 - x.saturating_sub(1).leading_zeros()
}

/// Degree of `δ^B · target(u, w(u, δ), δ)` where `v^ℓ = w = (αu^(ℓ+1) + δ^k u)/δ`.
fn degree_on_relation(target: &Poly, ell: u32, rel: Relation) -> u32 {
    let w_deg = (ell + 1).max(rel.k + 1);
    let b_max = target.terms().map(|(e, _)| e[1] / ell).max().unwrap_or(0);
    target
        .terms()
        .map(|(e, _)| {
            assert_eq!(e[1] % ell, 0, "target depends on v only through v^ℓ");
            let b = e[1] / ell;
            e[0] + b * w_deg + e[2] + (b_max - b)
        })
        .max()
        .unwrap_or(0)
}

fn randomized(target: &Poly, ell: u32, rel: Relation, seed: u64, trials: u32) -> RandomizedCheck {
    let l = ell as u64;
    let p = field_prime(l);
    let root_exp = inv_mod(&BigUint::from(l), &BigUint::from(p - 1))
        .and_then(|x| x.to_u64())
        .expect("ℓ is invertible modulo p − 1");
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ l);
    let mut passed = 0;
    for _ in 0..trials {
        let point = loop {
            let u = rng.gen_range(1..p);
            let d = rng.gen_range(1..p);
            let alpha = if rel.alpha < 0 { p - 1 } else { 1 };
            let num = (alpha as u128 * pow_mod(u, l + 1, p) as u128 + pow_mod(d, rel.k as u64, p) as u128 * u as u128)
                % p as u128;
            let w = (num * pow_mod(d, p - 2, p) as u128 % p as u128) as u64;
            if w != 0 {
                break [u, pow_mod(w, root_exp, p), d];
            }
        };
        if target.eval_mod(&point, p) == Some(0) {
            passed += 1;
        }
    }
    let degree_bound = degree_on_relation(target, ell, rel);
    // p − 1 > 2^61 sample values per coordinate; one bit is kept back for rejected samples.
    let per_trial = 60u32.saturating_sub(ceil_log2(degree_bound as u64));
    RandomizedCheck { prime: p, seed, trials, passed, degree_bound, error_bound_bits: per_trial * trials }
}

fn check(name: &'static str, target: &Poly, ell: u32, rel: Relation, seed: u64, trials: u32) -> (PlaneCase, Poly) {
    let remainder = target.remainder_monic(&rel.poly(ell), 0);
    let case = PlaneCase {
        name,
        exact_holds: remainder.is_zero(),
        randomized: randomized(target, ell, rel, seed, trials),
        remainder_terms: remainder.term_count(),
    };
    (case, remainder)
}

pub fn verify_plane_model(ell: u64, seed: u64, trials: u32) -> Result<PlaneModelReport, CurveError> {
    OddPrime::new(ell).ok_or_else(|| CurveError::PreconditionViolated(format!("{ell} is not an odd prime")))?;
    if ell > 97 {
        return Err(CurveError::PreconditionViolated(format!("ℓ = {ell} is beyond the supported range")));
    }
    let l = ell as u32;
    let (s, t) = (1, l - 1);
    let k = s + 2 * t;
    let rel = Relation { alpha: 1, k };

    let kk = v("d").pow(k);
    let p = kk.mul(&v("u")).sub(&v("u").pow(l + 1)).add(&v("d").mul(&v("v").pow(l)));
    let q = int(2).mul(&v("d")).mul(&v("v").pow(l)).sub(&p);
    let rhs = kk.mul(&v("u").pow(l * l)).scale(&two_pow(l));
    let target = p.mul(&q.pow(l - 1)).sub(&rhs);

    let displayed = kk.neg().mul(&v("u")).add(&v("u").pow(l + 1)).sub(&v("d").mul(&v("v").pow(l)));
    let displayed_target = p.mul(&displayed.pow(l - 1)).sub(&rhs);
    let exponent_target = p.mul(&q.pow(l)).sub(&kk.mul(&v("u").pow(l * l)).mul(&v("v").pow(l)).scale(&two_pow(l + 1)));

    let (identity, _) = check("identity", &target, l, rel, seed, trials);
    let (displayed_case, displayed_factor_remainder) =
        check("displayed middle factor", &displayed_target, l, rel, seed, trials);
    let controls = vec![
        displayed_case,
        check("exponent ℓ on δ−X", &exponent_target, l, rel, seed, trials).0,
        check("relation sign flip", &target, l, Relation { alpha: -1, k }, seed, trials).0,
        check("delta power s+2t+1", &target, l, Relation { alpha: 1, k: k + 1 }, seed, trials).0,
    ];
    Ok(PlaneModelReport { ell, genus: super::genus_plane_model(ell), identity, controls, displayed_factor_remainder })
}
