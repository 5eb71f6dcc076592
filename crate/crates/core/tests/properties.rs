use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rootnum::arith::OddPrime;
use rootnum::conductor::{classify, conductor_phi_of, Branch};
use rootnum::hilbert::residues::{c_ell_class_sums, c_ell_coeff, c_ell_series_route, difference_sum};
use rootnum::hilbert::symbol::branch_multiplier;
use rootnum::padic::{binom_mod_ell, decompose, legendre, ord, teichmuller, Measured, Valuation};
use rootnum::params::{value_of_a, CurveParams};
use rootnum::root_number::{eta_exponent, global_root_number, w_infinity, FourthRoot};
use rootnum::series::TruncatedSeries;
use rootnum::JTable;

fn prime() -> impl Strategy<Value = OddPrime> {
    prop_oneof![Just(3u64), Just(5), Just(7)].prop_map(|p| OddPrime::new(p).unwrap())
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (-100_000i64..100_000, 1i64..50_000)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #[test]
    fn reconstruct_recovers_integer(x in 1u64..10_000_000, p in prime(), m in 1u32..10) {
        let d = decompose(&BigRational::from_integer(BigInt::from(x)), p, m).unwrap();
        let b = d.b.to_u32().unwrap();
        let modulus = p.pow(b + m);
        prop_assert_eq!(d.reconstruct().unwrap() % &modulus, BigUint::from(x) % &modulus);
    }

    #[test]
    fn teichmuller_is_root_of_unity(u in 1u64..100_000, p in prime(), m in 1u32..=12) {
        prop_assume!(u % p.get() != 0);
        let t = teichmuller(&BigUint::from(u), p, m).unwrap();
        let modulus = p.pow(m);
        prop_assert_eq!(t.modpow(&BigUint::from(p.get() - 1), &modulus), BigUint::one() % &modulus);
        prop_assert_eq!(&t % p.big(), BigUint::from(u % p.get()));
    }

    #[test]
    fn ord_is_a_valuation(x in nonzero_rational(), y in nonzero_rational(), p in prime()) {
        prop_assert_eq!(ord(&(&x * &y), p), ord(&x, p) + ord(&y, p));
        let sum = &x + &y;
        let (ox, oy) = (ord(&x, p), ord(&y, p));
        let os = ord(&sum, p);
        prop_assert!(os >= ox.min(oy));
        if ox != oy {
            prop_assert_eq!(os, ox.min(oy));
        }
    }

    #[test]
    fn series_ring_axioms(
        p in prime(),
        digits in 1u32..=2,
        trunc in 0usize..=8,
        a in proptest::collection::vec(-50i64..50, 9),
        b in proptest::collection::vec(-50i64..50, 9),
        c in proptest::collection::vec(-50i64..50, 9),
    ) {
        let s = |v: &[i64]| TruncatedSeries::from_signed(p, digits, trunc, v).unwrap();
        let (a, b, c) = (s(&a), s(&b), s(&c));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.frobenius_substitute().mul(&b.frobenius_substitute()).unwrap(),
            a.mul(&b).unwrap().frobenius_substitute()
        );
    }

    #[test]
    fn series_pow_matches_repeated_product(
        p in prime(),
        a in proptest::collection::vec(-20i64..20, 6),
        e in 0u64..=8,
    ) {
        let f = TruncatedSeries::from_signed(p, 2, 5, &a).unwrap();
        let mut acc = TruncatedSeries::one(p, 2, 5).unwrap();
        for _ in 0..e {
            acc = acc.mul(&f).unwrap();
        }
        prop_assert_eq!(f.pow(e), acc);
    }

    #[test]
    fn binomial_series_is_exponential(p in prime(), a in -60i64..=60, b in -60i64..=60) {
        let s = |x: i64| TruncatedSeries::binomial(&BigInt::from(x), p, 2, 7).unwrap();
        prop_assert_eq!(s(a).mul(&s(b)).unwrap(), s(a + b));
    }

    #[test]
    fn frobenius_identity_mod_ell(p in prime(), a in proptest::collection::vec(0i64..50, 8)) {
        let f = TruncatedSeries::from_signed(p, 1, 7, &a).unwrap();
        prop_assert_eq!(f.pow(p.get()), f.map_coeffs_pow(p.get()).frobenius_substitute());
    }

    #[test]
    fn difference_sum_kills_low_degree(n in 1u64..=8, coeffs in proptest::collection::vec(-5i64..=5, 8)) {
        let deg = (n - 1) as usize;
        let f: Vec<BigInt> = coeffs[..=deg].iter().map(|&c| BigInt::from(c)).collect();
        prop_assert!(difference_sum(&f, n).is_zero());
    }

    #[test]
    fn square_prime_factor_adds_one_local_factor(
        rst in prop_oneof![Just((3u64, 5u64, 1u64)), Just((3, 4, 2)), Just((6, 2, 1))],
        delta in prop_oneof![Just(1u64), Just(2), Just(5), Just(10)],
        q in prop_oneof![Just(7u64), Just(11), Just(13), Just(17)],
        u in 1u64..3,
    ) {
        let base = CurveParams::new(3, 2, rst.0, rst.1, rst.2, delta).unwrap();
        let twisted = base.with_delta(delta * q * q).unwrap();
        let p = OddPrime::new(3).unwrap();
        let mut table = JTable::new(p);
        for f in [2u64, 6] {
            table.insert((2, f), rootnum::JValue::new(0, u), rootnum::hilbert::Provenance::UserSupplied).unwrap();
        }
        let a = global_root_number(&base, &table, None, true).unwrap();
        let b = global_root_number(&twisted, &table, None, true).unwrap();
        // δ ↦ δq² also changes a (by q^(2(r+s))), so W_ℓ may move; only W_q is new.
        let expected_q = legendre(&BigInt::from(q), p);
        prop_assert_eq!(b.local_factors.iter().find(|(r, _)| *r == q).map(|x| x.1), Some(expected_q));
        let without_q: Vec<_> = b.local_factors.iter().filter(|(r, _)| *r != q).cloned().collect();
        prop_assert_eq!(without_q, a.local_factors.clone());
        if let (Some(ga), Some(gb), Some(la), Some(lb)) = (a.global, b.global, a.local_ell, b.local_ell) {
            // Global ratio is W_q times the change at ℓ.
            let ratio_ell = (la * lb).exponent() % 4;
            let ell_sign = if ratio_ell == (2 * eta_exponent(p, 2) % 4) as u8 { 1 } else { -1 };
            prop_assert_eq!(ga * gb, expected_q * ell_sign);
        }
    }
}

#[test]
fn lucas_matches_exact_binomials() {
    for l in [3u64, 5, 7] {
        let p = OddPrime::new(l).unwrap();
        for n in 0u64..=200 {
            let mut exact = BigUint::one();
            for k in 0..=n {
                if k > 0 {
                    exact = exact * BigUint::from(n - k + 1) / BigUint::from(k);
                }
                let want = (&exact % BigUint::from(l)).to_u64().unwrap();
                assert_eq!(binom_mod_ell(&BigUint::from(n), &BigUint::from(k), p), want, "C({n},{k}) mod {l}");
            }
        }
    }
}

#[test]
fn legendre_matches_euler() {
    for l in (3u64..=97).filter(|&l| rootnum::arith::is_prime(l)) {
        let p = OddPrime::new(l).unwrap();
        for n in 0..l {
            let e = rootnum::arith::pow_mod(n, (l - 1) / 2, l);
            let want = match e {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            assert_eq!(legendre(&BigInt::from(n), p), want);
            assert_eq!(legendre(&(BigInt::from(n) - BigInt::from(5 * l)), p), want);
        }
    }
}

#[test]
fn valuation_of_a_matches_closed_form() {
    let mut checked = 0;
    for (l, n) in [(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (11, 1)] {
        let ln = l.pow(n);
        if ln > 125 {
            continue;
        }
        let step = l.pow(n - 1);
        for r in (step..ln).step_by(step as usize) {
            for s in 1..ln - r {
                let t = ln - r - s;
                for delta in [1u64, 2, 4, 6, 10] {
                    let Ok(params) = CurveParams::new(l, n, r, s, t, delta) else { continue };
                    let d = value_of_a(&params, 2 * n + 8).unwrap();
                    assert_eq!(d.b, params.expected_b());
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 300, "{checked}");
}

#[test]
fn c_ell_routes_agree_and_class_sums_vanish() {
    for (l, n) in [(3u64, 2u32), (3, 3), (5, 2)] {
        let p = OddPrime::new(l).unwrap();
        for i in (1..l.pow(n)).filter(|i| i % l != 0) {
            let i = BigInt::from(i);
            assert_eq!(c_ell_coeff(&i, p, n).unwrap(), c_ell_series_route(&i, p, n).unwrap());
        }
    }
    for (l, n) in [(3u64, 2u32), (3, 3), (5, 2), (7, 2)] {
        let p = OddPrime::new(l).unwrap();
        for (a, s) in c_ell_class_sums(p, n).unwrap() {
            assert_eq!(s, 0, "class {a} at ({l},{n})");
        }
    }
}

#[test]
fn classifier_is_total_on_consistent_triples() {
    let vals: Vec<Valuation> = (0..=7).map(Valuation::Finite).chain([Valuation::Infinite]).collect();
    for l in [3u64, 5] {
        let p = OddPrime::new(l).unwrap();
        for n in 1..=3u32 {
            for &ob in &vals {
                for &oc in vals.iter().filter(|v| **v != Valuation::Finite(0)) {
                    for &obc in &vals {
                        let w = ob.min(oc);
                        let consistent = obc >= w && (ob == oc || obc == w);
                        let got = classify(ob, Measured::Exact(oc), Measured::Exact(obc), p, n);
                        assert_eq!(got.is_ok(), consistent, "{ob} {oc} {obc}");
                        if let Ok(cls) = got {
                            if cls.branch.is_ramified() {
                                assert_eq!(conductor_phi_of(&cls, p, n), cls.f);
                            } else {
                                assert_eq!(conductor_phi_of(&cls, p, n), 1);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn fourth_roots_cancel() {
    for l in [3u64, 5, 7, 11, 13] {
        let p = OddPrime::new(l).unwrap();
        for n in 1..=4u32 {
            let eta = (l.pow(n - 1) * (l - 1) / 2) % 4;
            assert_eq!(eta_exponent(p, n), eta);
            assert_eq!((w_infinity(p, n) * FourthRoot::from_exponent(eta as i64)).sign(), Some(1));
        }
    }
}

#[test]
fn prefactor_encodes_sign_and_e() {
    for l in [3u64, 5, 7] {
        for n in 1..=4u32 {
            for w in 1..=n {
                let branches: Vec<Branch> = if w < n {
                    vec![Branch::RamifiedEqual(w), Branch::RamifiedGreater(w)]
                } else {
                    vec![Branch::RamifiedEqual(w)]
                };
                for b in branches {
                    let f = match b {
                        Branch::RamifiedEqual(_) => 2 * l.pow(n - w),
                        _ => l.pow(n - w - 1) * (l - 1),
                    };
                    let prefactor = BigInt::from(1i64 - f as i64).mod_floor(&BigInt::from(l));
                    let m = BigInt::from(branch_multiplier(b, n).unwrap()).mod_floor(&BigInt::from(l));
                    // (1 − f) ≡ −1 iff f = 2, ≡ 2 iff f = ℓ − 1, ≡ 1 iff ℓ | f.
                    assert_eq!(prefactor, m, "ℓ={l} N={n} {b}");
                    assert!(!m.is_negative());
                }
            }
        }
    }
}
