//! Multivariate GCD. A heuristic evaluation/interpolation gcd handles the
//! common case; when it gives up, recursive content/primitive-part
//! splitting with subresultant remainder sequences finishes the job.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError, Polynomial, Rational};

const HEURISTIC_TRIES: usize = 6;
const HEURISTIC_MAX_BITS: u64 = 1_000_000;

/// Canonical associate: integer coefficients with gcd 1 and positive
/// graded-lex leading coefficient. Zero maps to zero.
pub fn normalize(p: &Polynomial) -> Polynomial {
    let (_, q) = p.integer_primitive();
    if q.leading_negative() {
        -&q
    } else {
        q
    }
}

/// Greatest common divisor, normalized as in [`normalize`];
/// `gcd(p, 0) = normalize(p)`.
pub fn gcd(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    p.same_ring(q)?;
    Ok(gcd_rec(p, q))
}

/// GCD of a list of polynomials sharing a ring.
pub fn gcd_all<'a, I>(ring: &super::Ring, polys: I) -> Result<Polynomial, PolyError>
where
    I: IntoIterator<Item = &'a Polynomial>,
{
    let mut acc = Polynomial::zero(ring);
    for p in polys {
        acc = gcd(&acc, p)?;
        if acc.is_one() {
            break;
        }
    }
    Ok(acc)
}

/// Content of `p` viewed as a polynomial in `var`: the normalized gcd of its
/// coefficients, each of which is free of `var`.
pub fn content_in(p: &Polynomial, var: usize) -> Polynomial {
    let coeffs = to_univariate(p, var);
    content_of(&p.ring, &coeffs, true)
}

fn content_of(ring: &super::Ring, coeffs: &[Polynomial], heuristic: bool) -> Polynomial {
    let mut acc = Polynomial::zero(ring);
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        acc = gcd_with(&acc, c, heuristic);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn main_variable(p: &Polynomial, q: &Polynomial) -> Option<usize> {
    (0..p.ring.arity())
        .rev()
        .find(|&v| p.contains_var(v) || q.contains_var(v))
}

pub(super) fn gcd_rec(p: &Polynomial, q: &Polynomial) -> Polynomial {
    gcd_with(p, q, true)
}

fn gcd_with(p: &Polynomial, q: &Polynomial, heuristic: bool) -> Polynomial {
    if p.is_zero() {
        return normalize(q);
    }
    if q.is_zero() {
        return normalize(p);
    }
    if p.is_constant() || q.is_constant() {
        return Polynomial::one(&p.ring);
    }
    if heuristic {
        let (_, pi) = p.integer_primitive();
        let (_, qi) = q.integer_primitive();
        if let Some(g) = heuristic_gcd(&pi, &qi) {
            return normalize(&g);
        }
    }
    let v = main_variable(p, q).expect("nonconstant operands");
    if !p.contains_var(v) {
        return gcd_with(p, &content_of(&q.ring, &to_univariate(q, v), heuristic), heuristic);
    }
    if !q.contains_var(v) {
        return gcd_with(&content_of(&p.ring, &to_univariate(p, v), heuristic), q, heuristic);
    }
    let pu = to_univariate(p, v);
    let qu = to_univariate(q, v);
    let pc = content_of(&p.ring, &pu, heuristic);
    let qc = content_of(&p.ring, &qu, heuristic);
    let c = gcd_with(&pc, &qc, heuristic);
    let pp = divide_coeffs(&pu, &pc);
    let qp = divide_coeffs(&qu, &qc);
    let g = subresultant_gcd(&p.ring, pp, qp, heuristic);
    normalize(&(&c * &from_univariate(&p.ring, &g, v)))
}

fn integer_content(p: &Polynomial) -> BigInt {
    p.terms
        .values()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
}

fn max_norm(p: &Polynomial) -> BigInt {
    p.terms
        .values()
        .map(|c| c.numer().abs())
        .max()
        .unwrap_or_default()
}

fn map_integers(p: &Polynomial, f: impl Fn(&BigInt) -> BigInt) -> Polynomial {
    let mut out = Polynomial::zero(&p.ring);
    for (m, c) in &p.terms {
        out.add_term(m.clone(), Rational::from_integer(f(c.numer())));
    }
    out
}

fn evaluate_at(p: &Polynomial, var: usize, x: &BigInt) -> Polynomial {
    let deg = p.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0) as usize;
    let mut powers = Vec::with_capacity(deg + 1);
    powers.push(BigInt::one());
    for i in 0..deg {
        powers.push(&powers[i] * x);
    }
    let mut out = Polynomial::zero(&p.ring);
    for (m, c) in &p.terms {
        let k = m.exponent(var) as usize;
        out.add_term(m.with_exponent(var, 0), Rational::from_integer(c.numer() * &powers[k]));
    }
    out
}

/// Symmetric remainder in `(−x/2, x/2]`.
fn symmetric_mod(n: &BigInt, x: &BigInt) -> BigInt {
    let r = n.mod_floor(x);
    if &r * 2 > *x {
        r - x
    } else {
        r
    }
}

/// Rebuilds a polynomial in `var` from its image at `var = x`, reading the
/// integer coefficients as balanced base-`x` digits.
fn interpolate_adic(image: &Polynomial, var: usize, x: &BigInt) -> Polynomial {
    let mut rest = image.clone();
    let mut out = Polynomial::zero(&image.ring);
    let mut e = 0u32;
    while !rest.is_zero() {
        let digit = map_integers(&rest, |n| symmetric_mod(n, x));
        for (m, c) in &digit.terms {
            out.add_term(m.with_exponent(var, e), c.clone());
        }
        rest = map_integers(&(&rest - &digit), |n| n / x);
        e += 1;
    }
    out
}

/// Heuristic gcd of integer-coefficient polynomials, after Char, Geddes and
/// Gonnet. A candidate is accepted only if it divides both inputs, which
/// with the chosen evaluation points makes it the true gcd. `None` means
/// the heuristic gave up.
fn heuristic_gcd(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    if a.is_zero() || b.is_zero() {
        let g = if a.is_zero() { b } else { a };
        return Some(if g.leading_negative() { -g } else { g.clone() });
    }
    let ca = integer_content(a);
    let cb = integer_content(b);
    let c = Rational::from_integer(ca.gcd(&cb));
    let a = map_integers(a, |n| n / &ca);
    let b = map_integers(b, |n| n / &cb);
    if a.is_constant() || b.is_constant() {
        return Some(Polynomial::constant(&a.ring, c));
    }
    let v = main_variable(&a, &b)?;
    let deg = u64::from(a.degree_in(v).ok()?.max(b.degree_in(v).ok()?)).max(1);
    let mut x: BigInt = max_norm(&a).min(max_norm(&b)) * 2 + 2;
    for _ in 0..HEURISTIC_TRIES {
        if x.bits() * deg > HEURISTIC_MAX_BITS {
            return None;
        }
        if let Some(image) = heuristic_gcd(&evaluate_at(&a, v, &x), &evaluate_at(&b, v, &x)) {
            let g = interpolate_adic(&image, v, &x);
            if !g.is_zero() {
                let content = integer_content(&g);
                let g = map_integers(&g, |n| n / &content);
                if a.exact_div(&g).is_ok() && b.exact_div(&g).is_ok() {
                    return Some(g.scale(&c));
                }
            }
        }
        x = x * 73794 / 27011;
    }
    None
}

/// Coefficients of `p` in `var`, index = exponent of `var`.
pub(super) fn to_univariate(p: &Polynomial, var: usize) -> Vec<Polynomial> {
    let deg = p.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0) as usize;
    let mut out = vec![Polynomial::zero(&p.ring); deg + 1];
    for (m, c) in &p.terms {
        let e = m.exponent(var) as usize;
        out[e].add_term(m.with_exponent(var, 0), c.clone());
    }
    trim(&mut out);
    out
}

pub(super) fn from_univariate(ring: &super::Ring, coeffs: &[Polynomial], var: usize) -> Polynomial {
    let mut out = Polynomial::zero(ring);
    for (e, c) in coeffs.iter().enumerate() {
        let shift = Monomial::one(ring.arity()).with_exponent(var, e as u32);
        for (m, a) in &c.terms {
            out.add_term(m.mul(&shift), a.clone());
        }
    }
    out
}

fn trim(u: &mut Vec<Polynomial>) {
    while u.last().is_some_and(Polynomial::is_zero) {
        u.pop();
    }
}

fn divide_coeffs(u: &[Polynomial], d: &Polynomial) -> Vec<Polynomial> {
    u.iter()
        .map(|c| c.exact_div(d).expect("content divides every coefficient"))
        .collect()
}

fn degree(u: &[Polynomial]) -> usize {
    u.len() - 1
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`.
fn pseudo_remainder(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let n = degree(b);
    let lc = b[n].clone();
    let mut r = a.to_vec();
    let mut e = degree(a) - n + 1;
    while !r.is_empty() && degree(&r) >= n {
        let dr = degree(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * &lc;
        }
        let shift = dr - n;
        for (i, bc) in b.iter().enumerate() {
            let t = bc * &lr;
            r[i + shift] = &r[i + shift] - &t;
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lc.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// GCD of two polynomials primitive in the main variable, via the
/// subresultant PRS; the result is primitive in that variable.
fn subresultant_gcd(
    ring: &super::Ring,
    mut a: Vec<Polynomial>,
    mut b: Vec<Polynomial>,
    heuristic: bool,
) -> Vec<Polynomial> {
    if degree(&a) < degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = Polynomial::one(ring);
    let mut h = Polynomial::one(ring);
    loop {
        let delta = degree(&a) - degree(&b);
        let r = pseudo_remainder(&a, &b);
        if r.is_empty() {
            let c = content_of(ring, &b, heuristic);
            return divide_coeffs(&b, &c);
        }
        if degree(&r) == 0 {
            return vec![Polynomial::one(ring)];
        }
        let divisor = &g * &h.pow(delta as u32);
        a = b;
        b = divide_coeffs(&r, &divisor);
        g = a[degree(&a)].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta as u32)
                .exact_div(&h.pow(delta as u32 - 1))
                .expect("subresultant h update is exact"),
        };
    }
}
