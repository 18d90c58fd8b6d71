#![allow(dead_code)]

use mindisc::{Monomial, Polynomial, Rational, Ring};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn ring(arity: usize) -> Ring {
    let names: Vec<String> = (1..=arity).map(|i| format!("x{i}")).collect();
    Ring::new(&names).unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn coeff() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| q(n, d))
}

/// Exponent vector with total degree at most `max_deg`.
pub fn exponents(arity: usize, max_deg: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max_deg, arity).prop_map(move |mut e| {
        while e.iter().sum::<u32>() > max_deg {
            let i = (0..e.len()).max_by_key(|&i| e[i]).unwrap();
            e[i] -= 1;
        }
        e
    })
}

pub fn poly(arity: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((exponents(arity, max_deg), coeff()), 0..=max_terms).prop_map(move |terms| {
        Polynomial::from_terms(
            &ring(arity),
            terms.into_iter().map(|(e, c)| (Monomial::new(e), c)),
        )
    })
}

pub fn nonzero_poly(arity: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    poly(arity, max_terms.max(1), max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// A polynomial with no constant term, in `arity` variables.
pub fn germ(arity: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((exponents(arity, max_deg), coeff()), 1..=max_terms)
        .prop_map(move |terms| {
            Polynomial::from_terms(
                &ring(arity),
                terms
                    .into_iter()
                    .filter(|(e, _)| e.iter().any(|&x| x > 0))
                    .map(|(e, c)| (Monomial::new(e), c)),
            )
        })
        .prop_filter("nonzero", |p| !p.is_zero())
}

/// Affine form `c₀ + Σ cᵢxᵢ` with some `cᵢ ≠ 0`.
pub fn affine(arity: usize) -> impl Strategy<Value = Polynomial> {
    (
        prop::collection::vec(-3i64..=3, arity),
        -3i64..=3,
    )
        .prop_filter("nonconstant", |(c, _)| c.iter().any(|&x| x != 0))
        .prop_map(move |(c, c0)| {
            let r = ring(arity);
            let mut p = Polynomial::constant(&r, q(c0, 1));
            for (i, ci) in c.into_iter().enumerate() {
                p = &p + &Polynomial::var(&r, i).scale(&q(ci, 1));
            }
            p
        })
}

/// `a` divides `b` exactly.
pub fn divides(a: &Polynomial, b: &Polynomial) -> bool {
    b.exact_div(a).is_ok()
}

/// `a = c·b` for some nonzero rational `c`.
pub fn proportional(a: &Polynomial, b: &Polynomial) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let (ma, ca) = a.leading_term().unwrap();
    let (mb, cb) = b.leading_term().unwrap();
    ma == mb && a.scale(&(cb / ca)) == *b
}
