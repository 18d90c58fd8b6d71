use std::collections::BTreeMap;

use super::gcd::{content_in, gcd_rec, normalize};
use super::{PolyError, Polynomial, Rational};

/// `unit · ∏ factorᵏ`, factors normalized, squarefree and pairwise coprime,
/// multiplicities strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: Rational,
    pub parts: Vec<(Polynomial, u32)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self, ring: &super::Ring) -> Polynomial {
        let mut acc = Polynomial::constant(ring, self.unit.clone());
        for (f, k) in &self.parts {
            acc = &acc * &f.pow(*k);
        }
        acc
    }

    /// True when every multiplicity is a multiple of `k` (a perfect k-th
    /// power up to a constant).
    pub fn is_perfect_power(&self, k: u32) -> bool {
        self.parts.iter().all(|(_, m)| m % k == 0)
    }

    pub fn factor_with_multiplicity(&self, k: u32) -> Option<&Polynomial> {
        self.parts.iter().find(|(_, m)| *m == k).map(|(f, _)| f)
    }
}

/// Yun's algorithm, applied variable by variable: the primitive part in the
/// main variable is split with derivatives in that variable, the content is
/// decomposed recursively, and parts of equal multiplicity are merged.
pub fn squarefree_decompose(p: &Polynomial) -> Result<SquarefreeDecomposition, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
    decompose_into(&normalize(p), &mut parts);
    let parts: Vec<(Polynomial, u32)> = parts
        .into_iter()
        .map(|(k, f)| (normalize(&f), k))
        .collect();
    let mut product = Polynomial::one(p.ring());
    for (f, k) in &parts {
        product = &product * &f.pow(*k);
    }
    let unit = p.leading_coefficient().unwrap() / product.leading_coefficient().unwrap();
    debug_assert_eq!(&product.scale(&unit), p);
    Ok(SquarefreeDecomposition { unit, parts })
}

fn decompose_into(p: &Polynomial, acc: &mut BTreeMap<u32, Polynomial>) {
    if p.is_constant() {
        return;
    }
    let v = (0..p.ring().arity())
        .rev()
        .find(|&v| p.contains_var(v))
        .unwrap();
    let content = content_in(p, v);
    let primitive = normalize(&p.exact_div(&content).expect("content divides"));
    for (f, k) in yun(&primitive, v) {
        let entry = acc
            .entry(k)
            .or_insert_with(|| Polynomial::one(p.ring()));
        *entry = &*entry * &f;
    }
    decompose_into(&content, acc);
}

/// Yun's squarefree decomposition with respect to `var` of a polynomial
/// primitive in `var`.
fn yun(f: &Polynomial, var: usize) -> Vec<(Polynomial, u32)> {
    let df = f.partial_derivative(var);
    let a0 = gcd_rec(f, &df);
    let mut b = f.exact_div(&a0).unwrap();
    let c = df.exact_div(&a0).unwrap();
    let mut d = &c - &b.partial_derivative(var);
    let mut out = Vec::new();
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd_rec(&b, &d);
        let next_b = b.exact_div(&a).unwrap();
        let next_c = d.exact_div(&a).unwrap();
        if !a.is_constant() {
            out.push((a, i));
        }
        d = &next_c - &next_b.partial_derivative(var);
        b = next_b;
        i += 1;
    }
    out
}

/// Product of the irreducible factors of `p` of multiplicity exactly one,
/// found without factoring: with `g = gcd(p, ∂p/∂x₁, …)` and `s = p / g`, the
/// answer is `s / gcd(s, g)`. Normalized.
pub fn exponent_one_part(p: &Polynomial) -> Result<Polynomial, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut g = normalize(p);
    for v in 0..p.ring().arity() {
        if g.is_one() {
            break;
        }
        let dv = p.partial_derivative(v);
        if !dv.is_zero() {
            g = gcd_rec(&g, &dv);
        }
    }
    let s = p.exact_div(&g)?;
    let f1 = s.exact_div(&gcd_rec(&s, &g))?;
    Ok(normalize(&f1))
}
