//! Weighted initial forms and the discrepancy bound they certify.
//!
//! For a hypersurface germ `G = 0` with one coordinate singled out as `t`
//! and positive weights `aᵢ` on the others, substituting `yᵢ = t^{aᵢ}·uᵢ`
//! gives `t^A·φ(u) + t^{A+1}·ψ(u, t)`. When `φ` has an irreducible factor of
//! multiplicity one the minimal discrepancy at the origin is at most
//! `d = Σaᵢ − A`.

mod rank;
mod search;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{exponent_one_part, Monomial, PolyError, Polynomial, Ring};

pub use rank::{quadratic_rank, rank2_shortcut};
pub use search::{weight_search, weight_search_with_t};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InitialFormError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the zero polynomial has no initial form")]
    ZeroInput,
    #[error("input has a nonzero constant term; the origin is not on the hypersurface")]
    ConstantTerm,
    #[error("t index {t_index} is out of range for a ring with {arity} variables")]
    BadTIndex { t_index: usize, arity: usize },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weights must be positive integers")]
    NonPositiveWeight,
    #[error("expected multiplicity 2, found {0}")]
    Multiplicity(u32),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Positive integer weights for every coordinate except the one playing
/// `t`, which implicitly has weight 1. `weights[k]` belongs to the k-th
/// non-`t` variable in ring order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightAssignment {
    pub t_index: usize,
    pub weights: Vec<u32>,
}

impl WeightAssignment {
    pub fn new(t_index: usize, weights: Vec<u32>) -> WeightAssignment {
        WeightAssignment { t_index, weights }
    }

    /// All weights equal to one.
    pub fn uniform(arity: usize, t_index: usize) -> WeightAssignment {
        WeightAssignment::new(t_index, vec![1; arity.saturating_sub(1)])
    }

    pub fn validate(&self, arity: usize) -> Result<(), InitialFormError> {
        if self.t_index >= arity {
            return Err(InitialFormError::BadTIndex {
                t_index: self.t_index,
                arity,
            });
        }
        if self.weights.len() + 1 != arity {
            return Err(InitialFormError::WeightCount {
                expected: arity - 1,
                got: self.weights.len(),
            });
        }
        if self.weights.contains(&0) {
            return Err(InitialFormError::NonPositiveWeight);
        }
        Ok(())
    }

    pub fn sum(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).sum()
    }

    /// Weight of every ring variable, `t` included.
    pub fn full(&self) -> Vec<u32> {
        let mut w = self.weights.clone();
        w.insert(self.t_index, 1);
        w
    }

    /// Ring index → u-index (`None` for `t`).
    pub fn u_positions(&self, arity: usize) -> Vec<Option<usize>> {
        (0..arity)
            .map(|i| match i.cmp(&self.t_index) {
                std::cmp::Ordering::Less => Some(i),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(i - 1),
            })
            .collect()
    }
}

/// The ring `u1, …, un` in which initial forms live.
pub fn u_ring(n: usize) -> Ring {
    let names: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    if names.is_empty() {
        // a one-variable germ leaves no u-coordinates; keep a dummy so
        // constants still have a ring
        return Ring::new(&["u"]).unwrap();
    }
    Ring::new(&names).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialForm {
    /// Minimal weighted order `A`.
    pub order: u64,
    pub phi: Polynomial,
    /// `Σaᵢ − A`.
    pub d: i64,
    /// Terms of the input that reach the minimal order.
    pub contributing: Vec<Monomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate {
    pub weights: WeightAssignment,
    pub order: u64,
    pub phi: Polynomial,
    /// Exponent-one part of `phi`; nonconstant.
    pub f1: Polynomial,
    pub d: i64,
}

fn check_germ(g: &Polynomial) -> Result<(), InitialFormError> {
    if g.is_zero() {
        return Err(InitialFormError::ZeroInput);
    }
    if !g.constant_term().is_zero() {
        return Err(InitialFormError::ConstantTerm);
    }
    Ok(())
}

/// Minimal weighted order `A` and initial form `φ` of `g` under `w`.
pub fn weighted_order_and_initial(
    g: &Polynomial,
    w: &WeightAssignment,
) -> Result<InitialForm, InitialFormError> {
    check_germ(g)?;
    let arity = g.ring().arity();
    w.validate(arity)?;
    let full = w.full();
    let order = g
        .terms()
        .map(|(m, _)| m.weighted_degree(&full))
        .min()
        .expect("nonzero");
    let positions = w.u_positions(arity);
    let ring = u_ring(arity - 1);
    let mut contributing = Vec::new();
    let mut phi_terms = Vec::new();
    for (m, c) in g.terms().filter(|(m, _)| m.weighted_degree(&full) == order) {
        contributing.push(m.clone());
        let mut e = vec![0; ring.arity()];
        for (i, &x) in m.exponents().iter().enumerate() {
            if let Some(u) = positions[i] {
                e[u] = x;
            }
        }
        phi_terms.push((Monomial::new(e), c.clone()));
    }
    let phi = Polynomial::from_terms(&ring, phi_terms);
    debug_assert_eq!(phi.len(), contributing.len());
    Ok(InitialForm {
        order,
        phi,
        d: w.sum() as i64 - order as i64,
        contributing,
    })
}

/// Applies the multiplicity-one test to the initial form; `None` when the
/// hypothesis fails for this weight.
pub fn theorem1_bound(
    g: &Polynomial,
    w: &WeightAssignment,
) -> Result<Option<BoundCertificate>, InitialFormError> {
    let init = weighted_order_and_initial(g, w)?;
    let f1 = exponent_one_part(&init.phi)?;
    if f1.is_constant() {
        return Ok(None);
    }
    Ok(Some(BoundCertificate {
        weights: w.clone(),
        order: init.order,
        phi: init.phi,
        f1,
        d: init.d,
    }))
}

/// The literal substitution `G(t^{a₁}u₁, …, t^{aₙ}uₙ, t)` in the ring
/// `u1, …, un, t`. Used to cross-check initial forms; the engine itself
/// never expands it.
pub fn expand_weighted(g: &Polynomial, w: &WeightAssignment) -> Result<Polynomial, InitialFormError> {
    let arity = g.ring().arity();
    w.validate(arity)?;
    let n = arity - 1;
    let mut names: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
    names.push("t".into());
    let big = Ring::new(&names).map_err(InitialFormError::Poly)?;
    let positions = w.u_positions(arity);
    // y-variable i goes to slot positions[i]; t goes to slot n
    let map: Vec<Option<usize>> = positions.iter().map(|p| Some(p.unwrap_or(n))).collect();
    let mut out = g.remap(&big, &map);
    let t = Polynomial::var(&big, n);
    for (k, &a) in w.weights.iter().enumerate() {
        let repl = &t.pow(a) * &Polynomial::var(&big, k);
        out = out.substitute(k, &repl)?;
    }
    Ok(out)
}
