use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::ff::{sandwich_check, DoubleProbe};
use super::vector::{ghost, int_vector, integer_witt_digits, is_alpha_bounded, reduce_digits};
use super::*;
use crate::error::Error;
use crate::norm::NormValue;
use crate::perfectoid::{Lattice, PuiseuxPoly};
use crate::rational::{int, rat, Rat};
use crate::scalars::Padic;

const LAT: Lattice = Lattice::PPower { bound: 8 };

fn c(p: u64, v: i64) -> PuiseuxPoly {
    PuiseuxPoly::constant(p, LAT, v)
}

fn t(p: u64, q: Rat) -> PuiseuxPoly {
    PuiseuxPoly::monomial(p, LAT, 1, q).unwrap()
}

fn nv(n: i64, d: i64) -> NormValue {
    NormValue::from_rat(&rat(n, d)).unwrap()
}

#[test]
fn witt_addition_examples() {
    let one = WittVector::new(2, vec![c(2, 1), c(2, 0)]).unwrap();
    assert_eq!(one.add(&one).unwrap().digits(), &[c(2, 0), c(2, 1)]);
    assert_eq!(one.add(&one.zero_like()).unwrap(), one);
    let half = teichmuller(2, t(2, rat(1, 2)), 2);
    assert_eq!(half.add(&half).unwrap().digits(), &[c(2, 0), t(2, int(1))]);
}

#[test]
fn teichmuller_examples() {
    assert_eq!(teichmuller(3, c(3, 1), 3).digits(), &[c(3, 1), c(3, 0), c(3, 0)]);
    assert!(teichmuller(3, c(3, 0), 3).is_zero());
    let h = teichmuller(2, t(2, rat(1, 2)), 3);
    assert_eq!(h.mul(&h).unwrap(), teichmuller(2, t(2, int(1)), 3));
}

#[test]
fn alpha_norm_examples() {
    let r = nv(1, 2);
    let x = WittVector::new(2, vec![c(2, 0), c(2, 1), c(2, 0)]).unwrap();
    assert_eq!(witt_alpha_norm(&x, &nv(1, 2), &r).unwrap().to_rat(), Some(rat(1, 2)));
    assert!(witt_alpha_norm(&x.zero_like(), &nv(1, 2), &r).unwrap().is_zero());
    let y = WittVector::new(2, vec![c(2, 1), t(2, int(1)), c(2, 0)]).unwrap();
    assert_eq!(witt_alpha_norm(&y, &nv(1, 3), &r).unwrap().to_rat(), Some(int(1)));
    assert!(matches!(witt_alpha_norm(&y, &NormValue::zero(), &r), Err(Error::InvalidRadii(_))));
}

#[test]
fn integer_digits_two_routes() {
    for p in [2u64, 3, 5] {
        for m in 0..150i64 {
            let m = BigInt::from(m);
            let direct = witt_from_integer(&m, p, 4).unwrap();
            let via_ghost = reduce_digits(p, &integer_witt_digits(&m, p, 4).unwrap()).unwrap();
            assert_eq!(direct, via_ghost, "m = {m}, p = {p}");
        }
    }
}

#[test]
fn integers_add_like_integers() {
    for p in [2u64, 3] {
        for (a, b) in [(1i64, 1i64), (5, 7), (13, 30), (26, 1)] {
            let (x, y) = (witt_from_integer(&a.into(), p, 3).unwrap(), witt_from_integer(&b.into(), p, 3).unwrap());
            assert_eq!(x.add(&y).unwrap(), witt_from_integer(&(a + b).into(), p, 3).unwrap());
            assert_eq!(x.mul(&y).unwrap(), witt_from_integer(&(a * b).into(), p, 3).unwrap());
        }
    }
}

#[test]
fn zp_isometry_small() {
    for p in [2u64, 3] {
        for m in 1..=200i64 {
            let x = witt_from_integer(&m.into(), p, 8).unwrap();
            let alpha = NormValue::from_rat(&rat(1, p as i64)).unwrap();
            let v = crate::rational::valuation(&m.into(), p).unwrap() as i64;
            let expected = NormValue::power(&int(p as i64), &int(-v)).unwrap();
            assert_eq!(witt_alpha_norm(&x, &alpha, &nv(1, 2)).unwrap().exact_eq(&expected), Some(true));
        }
    }
}

#[test]
fn alpha_above_one_grows_with_top_digit() {
    let alpha = nv(3, 1);
    let big = NormValue::from_rat(&int(100)).unwrap();
    for n in 1..6usize {
        let mut digits = vec![c(2, 0); n];
        digits[n - 1] = c(2, 1);
        let x = WittVector::new(2, digits).unwrap();
        let norm = witt_alpha_norm(&x, &alpha, &nv(1, 2)).unwrap();
        assert_eq!(norm.to_rat(), Some(int(3).pow(n as i32 - 1)));
        assert_eq!(is_alpha_bounded(&x, &alpha, &nv(1, 2), &big).unwrap(), n <= 5);
    }
    // Support fixed at digit 0: bounded for every truncation length.
    for n in 1..6usize {
        let x = teichmuller(2, c(2, 1), n);
        assert!(is_alpha_bounded(&x, &alpha, &nv(1, 2), &NormValue::one()).unwrap());
    }
}

#[test]
fn negation_and_mismatch() {
    let x = WittVector::new(3, vec![t(3, rat(1, 3)), c(3, 2), t(3, int(2))]).unwrap();
    assert!(x.add(&x.neg().unwrap()).unwrap().is_zero());
    let y = WittVector::new(3, vec![c(3, 1), c(3, 1)]).unwrap();
    assert!(matches!(x.add(&y), Err(Error::TagMismatch(_))));
    assert!(matches!(WittVector::new(2, vec![c(3, 1)]), Err(Error::TagMismatch(_))));
}

#[test]
fn frobenius_examples() {
    let x = WittVector::new(2, vec![t(2, rat(1, 2)), c(2, 1)]).unwrap();
    assert_eq!(x.frobenius(1).unwrap().digits()[0], t(2, int(1)));
    assert_eq!(x.frobenius(0).unwrap(), x);
    assert_eq!(x.frobenius(1).unwrap().frobenius(-1).unwrap(), x);
    let f = FFElement::term(0, t(2, int(1))).unwrap();
    let r = nv(1, 2);
    let lhs = ff_gauss_norm(&f.frobenius(1).unwrap(), &int(2), &r).unwrap();
    assert_eq!(lhs.to_rat(), Some(rat(1, 4)));
    assert!(lhs.approx_eq(&ff_gauss_norm(&f, &int(1), &r).unwrap().pow_int(2).unwrap()));
}

#[test]
fn ff_norm_examples() {
    let r = nv(1, 2);
    let x = FFElement::new(2, [(-1, t(2, int(2))), (0, c(2, 1))]).unwrap();
    assert_eq!(ff_gauss_norm(&x, &int(1), &r).unwrap().to_rat(), Some(int(1)));
    let one = FFElement::term(0, c(2, 1)).unwrap();
    let tt = FFElement::term(0, t(2, int(1))).unwrap();
    for rho in [rat(1, 3), int(1), int(5)] {
        assert_eq!(ff_gauss_norm(&one, &rho, &r).unwrap().to_rat(), Some(int(1)));
        assert_eq!(ff_gauss_norm(&tt, &rho, &r).unwrap().to_rat(), Some(rat(1, 2)));
    }
    let p1 = FFElement::term(1, c(2, 1)).unwrap();
    let expected = NormValue::power(&int(2), &rat(-1, 2)).unwrap();
    assert!(ff_two_sided_norm(&p1, &int(2), &r).unwrap().approx_eq(&expected));
    assert!(ff_two_sided_norm(&FFElement::zero(2), &int(2), &r).unwrap().is_zero());
    let pm1 = FFElement::term(-1, c(2, 1)).unwrap();
    assert_eq!(ff_two_sided_norm(&pm1, &int(2), &r).unwrap().to_rat(), Some(int(4)));
    assert!(matches!(ff_two_sided_norm(&pm1, &rat(1, 2), &r), Err(Error::InvalidRadii(_))));
}

#[test]
fn ff_arithmetic() {
    let one = FFElement::term(0, c(2, 1)).unwrap();
    assert_eq!(one.add(&one, 1).unwrap(), FFElement::term(1, c(2, 1)).unwrap());
    let a = FFElement::term(-1, t(2, rat(1, 2))).unwrap();
    let b = FFElement::term(2, t(2, int(3))).unwrap();
    let ab = a.mul(&b, 1).unwrap();
    assert_eq!(ab, FFElement::term(1, t(2, rat(7, 2))).unwrap());
    let r = nv(1, 2);
    for rho in [rat(1, 2), int(1), int(2)] {
        let lhs = ff_gauss_norm(&ab, &rho, &r).unwrap();
        let rhs = ff_gauss_norm(&a, &rho, &r).unwrap().mul(&ff_gauss_norm(&b, &rho, &r).unwrap());
        assert_eq!(lhs.exact_eq(&rhs), Some(true));
    }
    // The two-sided norm takes a max over ρ and 1/ρ, so only the bound holds.
    let two = |x: &FFElement| ff_two_sided_norm(x, &int(2), &r).unwrap();
    assert!(two(&ab).le(&two(&a).mul(&two(&b))));
    assert!(!two(&ab).approx_eq(&two(&a).mul(&two(&b))));
    let json = ab.to_json();
    assert_eq!(FFElement::from_json(&json).unwrap(), ab);
}

#[test]
fn sandwich_example() {
    let mut coeffs = BTreeMap::new();
    coeffs.insert((rat(1, 2), 0), 1);
    coeffs.insert((int(2), -1), 1);
    coeffs.insert((int(2), 3), 1);
    let probe = DoubleProbe { p: 2, coeffs };
    let rep = sandwich_check(&probe, &int(2), &rat(1, 2), &rat(1, 4)).unwrap();
    assert!(rep.ff_sup.le(&rep.l1));
    assert!(rep.l1_shrunk.le(&rep.ff_sup.mul(&rep.cofinality.constant)));
}

#[test]
fn key_transform_examples() {
    let s = key_exponent_transform(&int(1), &nv(1, 2), &nv(1, 4)).unwrap();
    assert_eq!(s.exact, Some(rat(1, 2)));
    let s = key_exponent_transform(&rat(3, 2), &nv(1, 3), &nv(1, 3)).unwrap();
    assert_eq!(s.exact, Some(rat(3, 2)));
    let r = NormValue::power(&int(2), &rat(-1, 2)).unwrap();
    let s = key_exponent_transform(&int(2), &nv(1, 2), &r).unwrap();
    assert_eq!(s.exact, Some(int(4)));
    assert!(matches!(key_exponent_transform(&int(1), &NormValue::one(), &r), Err(Error::InvalidRadii(_))));
    assert!(matches!(key_exponent_transform(&int(1), &r, &NormValue::one()), Err(Error::InvalidRadii(_))));
    let irr = key_exponent_transform(&int(1), &nv(1, 2), &nv(1, 3)).unwrap();
    assert!(irr.exact.is_none());
    assert!((irr.value - 1.0 / 3f64.log2()).abs() < 1e-12);
}

#[test]
fn key_inequality_examples() {
    let qp = |m: i64| Padic::from_i64(m, 2, 32);
    let (big_r, r1, r2) = (nv(1, 2), nv(1, 4), nv(3, 4));
    let delta: BTreeMap<Rat, Padic> = [(int(1), qp(1))].into();
    let rep = key_inequality_check(&delta, &int(1), &big_r, &r1, &r2).unwrap();
    assert!(rep.displayed_hold() && rep.exchanged_hold());
    assert_eq!(rep.left_pair.0.to_rat(), Some(rat(1, 4)));
    assert_eq!(rep.right_pair.0.to_rat(), Some(rat(1, 2)));

    let rep = key_inequality_check(&BTreeMap::new(), &int(1), &big_r, &r1, &r2).unwrap();
    assert!(rep.left_pair.0.is_zero() && rep.right_pair.1.is_zero());

    // |a_{1/2}| = 1/2: with s_1 = 1/2 the left side is 1/2, the right side
    // (1/2)(3/4)^(1/2) ≈ 0.433.
    let a: BTreeMap<Rat, Padic> = [(rat(1, 2), qp(2))].into();
    let rep = key_inequality_check(&a, &int(1), &big_r, &r1, &r2).unwrap();
    let case = &rep.cases[0];
    assert_eq!(case.support, 1);
    assert!(!case.as_displayed.holds);
    assert_eq!(case.as_displayed.lhs.to_rat(), Some(rat(1, 2)));
    assert!(case.exchanged.holds);
    assert!(matches!(
        key_inequality_check(&a, &int(1), &r1, &big_r, &r2),
        Err(Error::InvalidRadii(_))
    ));
}

fn small_digits(p: u64, n: usize) -> impl Strategy<Value = Vec<i64>> {
    let b = p as i64 * 3;
    proptest::collection::vec(-b..=b, n)
}

fn puiseux(p: u64) -> impl Strategy<Value = PuiseuxPoly> {
    let den = (p * p) as i64;
    proptest::collection::vec((0i64..3 * den, 0i64..p as i64), 0..3).prop_map(move |terms| {
        PuiseuxPoly::from_terms(p, LAT, terms.into_iter().map(|(n, c)| (rat(n, den), c))).unwrap()
    })
}

fn witt3(p: u64) -> impl Strategy<Value = WittVector<PuiseuxPoly>> {
    proptest::collection::vec(puiseux(p), 3).prop_map(move |d| WittVector::new(p, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ghost_is_a_ring_map(x in small_digits(3, 3), y in small_digits(3, 3)) {
        let (x, y) = (int_vector(3, &x).unwrap(), int_vector(3, &y).unwrap());
        let (gx, gy) = (ghost(&x), ghost(&y));
        let gs = ghost(&x.add(&y).unwrap());
        let gp = ghost(&x.mul(&y).unwrap());
        for k in 0..3 {
            prop_assert_eq!(&gs[k], &(&gx[k] + &gy[k]));
            prop_assert_eq!(&gp[k], &(&gx[k] * &gy[k]));
        }
    }

    #[test]
    fn ring_axioms_in_char_p(x in witt3(2), y in witt3(2), z in witt3(2)) {
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(
            x.mul(&y.add(&z).unwrap()).unwrap(),
            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
        );
        prop_assert_eq!(x.mul(&x.one_like()).unwrap(), x.clone());
        let s = x.add(&y).unwrap();
        prop_assert_eq!(&s.digits()[0], &x.digits()[0].add(&y.digits()[0]).unwrap());
        let m = x.mul(&y).unwrap();
        prop_assert_eq!(&m.digits()[0], &x.digits()[0].mul(&y.digits()[0]).unwrap());
    }

    #[test]
    fn ring_axioms_mod_three(x in witt3(3), y in witt3(3)) {
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert!(x.add(&x.neg().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn frobenius_norm_law(a in puiseux(2), b in puiseux(2), n in -2i64..3, rho in prop_oneof![Just(rat(1, 2)), Just(int(1)), Just(int(2))]) {
        let x = FFElement::new(2, [(n, a), (n + 1, b)]).unwrap();
        let r = nv(1, 2);
        let lhs = ff_gauss_norm(&x.frobenius(1).unwrap(), &(&rho * int(2)), &r).unwrap();
        let rhs = ff_gauss_norm(&x, &rho, &r).unwrap().pow_int(2).unwrap();
        prop_assert!(lhs.approx_eq(&rhs));
    }

    #[test]
    fn ff_product_is_submultiplicative(a in puiseux(2), b in puiseux(2), d in puiseux(2)) {
        let x = FFElement::new(2, [(0, a), (1, b)]).unwrap();
        let y = FFElement::new(2, [(0, d)]).unwrap();
        let xy = x.mul(&y, 1).unwrap();
        let r = nv(1, 2);
        for rho in [int(1), int(2)] {
            let lhs = ff_two_sided_norm(&xy, &rho, &r).unwrap();
            let rhs = ff_two_sided_norm(&x, &rho, &r).unwrap().mul(&ff_two_sided_norm(&y, &rho, &r).unwrap());
            prop_assert!(lhs.le(&rhs));
        }
    }
}
