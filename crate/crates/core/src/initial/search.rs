use super::{check_germ, theorem1_bound, BoundCertificate, InitialFormError, WeightAssignment};
use crate::poly::Polynomial;

/// Every weight vector of length `len` with entries ≥ 1 and sum ≤ `budget`,
/// in lexicographic order.
fn weight_vectors(len: usize, budget: u64) -> Vec<Vec<u32>> {
    fn rec(len: usize, left: u64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let remaining_slots = (len - prefix.len() - 1) as u64;
        if left < remaining_slots + 1 {
            return;
        }
        for a in 1..=(left - remaining_slots) {
            prefix.push(a as u32);
            rec(len, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, budget, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Tries every choice of `t` and every weight vector with `Σaᵢ ≤ budget`;
/// returns the certificate with the smallest `d`, ties going to the
/// lexicographically smallest `(t_index, weights)`.
pub fn weight_search(g: &Polynomial, budget: u64) -> Result<Option<BoundCertificate>, InitialFormError> {
    weight_search_with_t(g, budget, None)
}

/// As [`weight_search`], optionally pinning the `t` coordinate.
pub fn weight_search_with_t(
    g: &Polynomial,
    budget: u64,
    t_index: Option<usize>,
) -> Result<Option<BoundCertificate>, InitialFormError> {
    check_germ(g)?;
    let arity = g.ring().arity();
    if let Some(t) = t_index {
        if t >= arity {
            return Err(InitialFormError::BadTIndex { t_index: t, arity });
        }
    }
    let vectors = weight_vectors(arity - 1, budget);
    let roles: Vec<usize> = match t_index {
        Some(t) => vec![t],
        None => (0..arity).collect(),
    };
    let candidates: Vec<WeightAssignment> = roles
        .iter()
        .flat_map(|&t| vectors.iter().map(move |w| WeightAssignment::new(t, w.clone())))
        .collect();

    let evaluate = |w: &WeightAssignment| theorem1_bound(g, w).transpose();
    let key = |c: &BoundCertificate| (c.d, c.weights.clone());

    #[cfg(feature = "parallel")]
    let found: Vec<BoundCertificate> = {
        use rayon::prelude::*;
        candidates
            .par_iter()
            .filter_map(evaluate)
            .collect::<Result<_, _>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<BoundCertificate> = candidates
        .iter()
        .filter_map(evaluate)
        .collect::<Result<_, _>>()?;

    Ok(found.into_iter().min_by_key(key))
}
