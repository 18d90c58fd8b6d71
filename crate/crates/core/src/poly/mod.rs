//! Exact sparse multivariate polynomials over the rationals.
//!
//! A [`Polynomial`] is a map from [`Monomial`] exponent vectors to nonzero
//! [`Rational`] coefficients, tied to a [`Ring`] that fixes the variable
//! names and their order. Terms are kept in graded-lexicographic order, so two
//! polynomials are equal exactly when their term maps are equal.

mod gcd;
mod squarefree;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use gcd::{content_in, gcd, gcd_all, normalize};
pub use squarefree::{exponent_one_part, squarefree_decompose, SquarefreeDecomposition};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("ring mismatch: [{left}] vs [{right}]")]
    RingMismatch { left: String, right: String },
    #[error("division is not exact")]
    NotDivisible,
    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("variable index {index} out of range for a ring with {arity} variables")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("invalid ring declaration: {0}")]
    InvalidRing(String),
}

/// Ordered list of variable names.
#[derive(Clone)]
pub struct Ring(Arc<[String]>);

impl Ring {
    /// Builds a ring, checking that the names are nonempty identifiers
    /// (`[a-zA-Z][a-zA-Z0-9_]*`) without duplicates.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Ring, PolyError> {
        if names.is_empty() {
            return Err(PolyError::InvalidRing("no variables declared".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in names {
            let name = name.as_ref();
            let mut chars = name.chars();
            let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(PolyError::InvalidRing(format!(
                    "`{name}` is not a valid identifier"
                )));
            }
            if !seen.insert(name) {
                return Err(PolyError::InvalidRing(format!("duplicate variable `{name}`")));
            }
        }
        Ok(Ring(names.iter().map(|s| s.as_ref().to_string()).collect()))
    }

    /// Parses a comma-separated declaration such as `y1,y2,y3,t`.
    pub fn parse(decl: &str) -> Result<Ring, PolyError> {
        let names: Vec<&str> = decl.split(',').map(str::trim).collect();
        Ring::new(&names)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, index: usize) -> &str {
        &self.0[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring[{}]", self.0.join(","))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(","))
    }
}

/// Exponent vector. Ordered graded-lexicographically: higher total degree is
/// greater, ties broken lexicographically with the first variable most
/// significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial(exponents)
    }

    pub fn one(arity: usize) -> Monomial {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, index: usize) -> Monomial {
        let mut e = vec![0; arity];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn with_exponent(&self, var: usize, e: u32) -> Monomial {
        let mut m = self.0.clone();
        m[var] = e;
        Monomial(m)
    }

    /// Weighted degree `Σ wᵢ·eᵢ`.
    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Rational>,
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn mismatch(a: &Ring, b: &Ring) -> PolyError {
    PolyError::RingMismatch {
        left: a.to_string(),
        right: b.to_string(),
    }
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Polynomial {
        Polynomial::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, c: Rational) -> Polynomial {
        Polynomial::monomial(ring, Monomial::one(ring.arity()), c)
    }

    pub fn var(ring: &Ring, index: usize) -> Polynomial {
        Polynomial::monomial(ring, Monomial::var(ring.arity(), index), Rational::one())
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Rational) -> Polynomial {
        assert_eq!(m.arity(), ring.arity(), "monomial arity differs from ring");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Sums the given terms; repeated monomials are combined and zero
    /// coefficients dropped.
    pub fn from_terms<I>(ring: &Ring, terms: I) -> Polynomial
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            assert_eq!(m.arity(), ring.arity(), "monomial arity differs from ring");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// True for the zero polynomial and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.ring.arity()))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    /// Leading term under graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Result<u32, PolyError> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .max()
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn degree_in(&self, var: usize) -> Result<u32, PolyError> {
        self.check_var(var)?;
        self.terms
            .keys()
            .map(|m| m.exponent(var))
            .max()
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Whether `var` occurs in some term.
    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(var) > 0)
    }

    fn check_var(&self, var: usize) -> Result<(), PolyError> {
        if var < self.ring.arity() {
            Ok(())
        } else {
            Err(PolyError::VariableOutOfRange {
                index: var,
                arity: self.ring.arity(),
            })
        }
    }

    fn same_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(mismatch(&self.ring, &other.ring))
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    /// Returns `r` with `r·q = self`, or [`PolyError::NotDivisible`].
    ///
    /// Runs the one-divisor division algorithm under graded-lex order. When
    /// `q` divides `self` every intermediate remainder is again a multiple of
    /// `q`, so its leading monomial is divisible by that of `q`; the first
    /// time that fails the division cannot be exact.
    pub fn exact_div(&self, q: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(q)?;
        let (lm_q, lc_q) = q.leading_term().ok_or(PolyError::ZeroPolynomial)?;
        let (lm_q, lc_q) = (lm_q.clone(), lc_q.clone());
        if let Some(c) = q.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term() {
            let Some(shift) = m.div(&lm_q) else {
                return Err(PolyError::NotDivisible);
            };
            let coef = c / &lc_q;
            for (qm, qc) in &q.terms {
                rem.add_term(qm.mul(&shift), -(qc * &coef));
            }
            quot.add_term(shift, coef);
        }
        Ok(quot)
    }

    pub fn partial_derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                out.add_term(m.with_exponent(var, e - 1), c * rat(e as i64));
            }
        }
        out
    }

    /// Replaces variable `var` by `replacement` everywhere.
    pub fn substitute(&self, var: usize, replacement: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(replacement)?;
        self.check_var(var)?;
        let max_e = self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(Polynomial::one(&self.ring));
        for k in 1..=max_e as usize {
            let next = &powers[k - 1] * replacement;
            powers.push(next);
        }
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let rest = m.with_exponent(var, 0);
            for (pm, pc) in &powers[m.exponent(var) as usize].terms {
                out.add_term(rest.mul(pm), c * pc);
            }
        }
        Ok(out)
    }

    /// Sets variable `var` to a constant.
    pub fn evaluate_var(&self, var: usize, value: &Rational) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let factor = if e == 0 {
                Rational::one()
            } else {
                num_traits::pow(value.clone(), e as usize)
            };
            out.add_term(m.with_exponent(var, 0), c * factor);
        }
        out
    }

    /// Sum of the terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Polynomial {
        self.filter_terms(|m, _| m.degree() == k)
    }

    /// Sum of the terms accepted by `keep`.
    pub fn filter_terms<F>(&self, mut keep: F) -> Polynomial
    where
        F: FnMut(&Monomial, &Rational) -> bool,
    {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Smallest total degree of a term; an error on zero.
    pub fn multiplicity(&self) -> Result<u32, PolyError> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .min()
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Moves the polynomial into `ring` by mapping each variable index
    /// through `map` (old index → new index). Unmapped variables must not
    /// occur.
    pub fn remap(&self, ring: &Ring, map: &[Option<usize>]) -> Polynomial {
        let mut out = Polynomial::zero(ring);
        for (m, c) in &self.terms {
            let mut e = vec![0; ring.arity()];
            for (old, &x) in m.exponents().iter().enumerate() {
                if x > 0 {
                    let new = map[old].expect("remap drops a variable that occurs");
                    e[new] += x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Multiplies through by the common denominator and removes the integer
    /// content; returns `(scale, p)` with `self = scale · p`, `p` having
    /// coprime integer coefficients (sign untouched).
    pub(crate) fn integer_primitive(&self) -> (Rational, Polynomial) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let scale = Rational::new(num, den);
        (scale.clone(), self.scale(&scale.recip()))
    }

    /// True if the leading coefficient is negative.
    pub(crate) fn leading_negative(&self) -> bool {
        self.leading_coefficient().is_some_and(|c| c.is_negative())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::render(self))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.ring, crate::parse::render(self))
    }
}

// Operator forms panic on ring mismatch; use the `checked_*` methods when the
// operands may come from different rings.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch in +")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch in -")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch in *")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
