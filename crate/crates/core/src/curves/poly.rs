//! Sparse multivariate polynomials with exact rational coefficients.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultivariatePolynomial {
    variables: Vec<String>,
    terms: BTreeMap<Exponents, BigRational>,
}

impl MultivariatePolynomial {
    pub fn zero(variables: &[&str]) -> Self {
        MultivariatePolynomial { variables: variables.iter().map(|s| s.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(variables: &[&str], c: BigRational) -> Self {
        let mut p = Self::zero(variables);
        p.add_term(vec![0; variables.len()], c);
        p
    }

    pub fn integer(variables: &[&str], c: i64) -> Self {
        Self::constant(variables, BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable `name`; panics if it is not among `variables`.
    pub fn var(variables: &[&str], name: &str) -> Self {
        let idx = variables.iter().position(|v| *v == name).unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut e = vec![0; variables.len()];
        e[idx] = 1;
        let mut p = Self::zero(variables);
        p.add_term(e, BigRational::one());
        p
    }

    pub fn variables(&self) -> Vec<&str> {
        self.variables.iter().map(String::as_str).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(self.variables, other.variables, "polynomials over different variable lists");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self { variables: self.variables.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = Self { variables: self.variables.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::integer(&self.variables(), 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, var: usize, k: u32) -> Self {
        let mut out = Self { variables: self.variables.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e = e.clone();
                e[var] = 0;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// Remainder of division by `divisor`, whose leading coefficient in `var`
    /// must be a nonzero constant.
    pub fn remainder_monic(&self, divisor: &Self, var: usize) -> Self {
        self.same_ring(divisor);
        let d = divisor.degree_in(var).expect("nonzero divisor");
        let lead = divisor.coefficient_of(var, d);
        assert!(
            lead.term_count() == 1 && lead.total_degree() == Some(0),
            "divisor is not monic up to a unit in the chosen variable"
        );
        let lead_inv = lead.terms.values().next().expect("nonzero").recip();
        let mut rem = self.clone();
        loop {
            let Some((e, c)) = rem
                .terms
                .iter()
                .filter(|(e, _)| e[var] >= d)
                .max_by_key(|(e, _)| e[var])
                .map(|(e, c)| (e.clone(), c.clone()))
            else {
                return rem;
            };
            let mut shift = e;
            shift[var] -= d;
            let mut quotient = Self { variables: self.variables.clone(), terms: BTreeMap::new() };
            quotient.add_term(shift, c * &lead_inv);
            rem = rem.sub(&quotient.mul(divisor));
        }
    }

    /// Value at `point` modulo the prime `p`; `None` if a denominator vanishes mod `p`.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Option<u64> {
        assert_eq!(point.len(), self.variables.len());
        let pb = BigInt::from(p);
        let mut acc: u128 = 0;
        for (e, c) in &self.terms {
            let num = c.numer().mod_floor(&pb).to_u64().expect("reduced");
            let den = c.denom().mod_floor(&pb).to_u64().expect("reduced");
            if den == 0 {
                return None;
            }
            let den_inv = crate::arith::pow_mod(den, p - 2, p);
            let mut term = (num as u128 * den_inv as u128) % p as u128;
            for (x, k) in point.iter().zip(e) {
                term = term * crate::arith::pow_mod(*x % p, *k as u64, p) as u128 % p as u128;
            }
            acc = (acc + term) % p as u128;
        }
        Some(acc as u64)
    }

    /// Substitutes a rational function for the variable `var`.
    pub fn substitute(&self, var: usize, value: &RationalFunction) -> RationalFunction {
        let vars = self.variables();
        let deg = self.degree_in(var).unwrap_or(0);
        let num_pows = powers(&value.num, deg);
        let den_pows = powers(&value.den, deg);
        let mut out = Self::zero(&vars);
        for k in 0..=deg {
            let coeff = self.coefficient_of(var, k);
            if coeff.is_zero() {
                continue;
            }
            out = out.add(&coeff.mul(&num_pows[k as usize]).mul(&den_pows[(deg - k) as usize]));
        }
        RationalFunction { num: out, den: den_pows[deg as usize].clone() }
    }
}

fn powers(p: &MultivariatePolynomial, n: u32) -> Vec<MultivariatePolynomial> {
    let mut out = vec![MultivariatePolynomial::integer(&p.variables(), 1)];
    for _ in 0..n {
        let next = out.last().expect("nonempty").mul(p);
        out.push(next);
    }
    out
}

impl fmt::Display for MultivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mono: Vec<String> = self
                .variables
                .iter()
                .zip(e)
                .filter(|(_, k)| **k > 0)
                .map(|(v, k)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A quotient of polynomials, kept unreduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: MultivariatePolynomial,
    pub den: MultivariatePolynomial,
}

impl RationalFunction {
    pub fn new(num: MultivariatePolynomial, den: MultivariatePolynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RationalFunction { num, den }
    }

    pub fn from_poly(p: MultivariatePolynomial) -> Self {
        let one = MultivariatePolynomial::integer(&p.variables(), 1);
        RationalFunction { num: p, den: one }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalFunction { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&RationalFunction { num: o.num.neg(), den: o.den.clone() })
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunction { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn div(&self, o: &Self) -> Self {
        RationalFunction::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Substitutes into numerator and denominator.
    pub fn substitute(&self, var: usize, value: &RationalFunction) -> RationalFunction {
        self.num.substitute(var, value).div(&self.den.substitute(var, value))
    }
}

/// `2^k` as a rational.
pub fn two_pow(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(BigUint::one() << k))
}

#[cfg(test)]
mod tests {
    use super::*;

    const V: [&str; 2] = ["x", "y"];

    fn x() -> MultivariatePolynomial {
        MultivariatePolynomial::var(&V, "x")
    }

    fn y() -> MultivariatePolynomial {
        MultivariatePolynomial::var(&V, "y")
    }

    #[test]
    fn difference_of_squares() {
        let lhs = x().add(&y()).mul(&x().sub(&y()));
        assert_eq!(lhs, x().pow(2).sub(&y().pow(2)));
        assert_eq!(lhs.to_string(), "x^2 - y^2");
    }

    #[test]
    fn remainder_by_monic() {
        // x^3 mod (x^2 - y) = x*y.
        let r = x().pow(3).remainder_monic(&x().pow(2).sub(&y()), 0);
        assert_eq!(r, x().mul(&y()));
        let zero = x().pow(2).sub(&y()).mul(&x().add(&y())).remainder_monic(&x().pow(2).sub(&y()), 0);
        assert!(zero.is_zero());
    }

    #[test]
    fn substitution_and_evaluation() {
        // x ↦ y/(1+y) in x^2 + x gives (y^2 + y(1+y)) / (1+y)^2.
        let one = MultivariatePolynomial::integer(&V, 1);
        let value = RationalFunction::new(y(), one.add(&y()));
        let r = x().pow(2).add(&x()).substitute(0, &value);
        let expect_num = y().pow(2).add(&y().mul(&one.add(&y())));
        assert_eq!(r.num, expect_num);
        assert_eq!(r.den, one.add(&y()).pow(2));
        let p = 1_000_000_007;
        assert_eq!(x().pow(2).sub(&y()).eval_mod(&[3, 10], p), Some(p - 1));
    }
}
