use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{theorem1_bound, BoundCertificate, InitialFormError, WeightAssignment};
use crate::poly::Polynomial;

/// Rank of the symmetric matrix of the degree-2 part of `g`.
pub fn quadratic_rank(g: &Polynomial) -> usize {
    let n = g.ring().arity();
    let q = g.homogeneous_part(2);
    if q.is_zero() {
        return 0;
    }
    // entries are 2·(symmetric matrix) so off-diagonal halves stay integral
    let mut den = BigInt::one();
    for (_, c) in q.terms() {
        den = den.lcm(c.denom());
    }
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (mono, c) in q.terms() {
        let scaled = (c * crate::poly::Rational::from_integer(den.clone())).to_integer();
        let vars: Vec<usize> = (0..n)
            .flat_map(|i| std::iter::repeat_n(i, mono.exponent(i) as usize))
            .collect();
        let (i, j) = (vars[0], vars[1]);
        if i == j {
            m[i][i] = &scaled * 2;
        } else {
            m[i][j] = scaled.clone();
            m[j][i] = scaled;
        }
    }
    bareiss_rank(m)
}

/// Rank by fraction-free elimination.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = &m[i][j] * &m[rank][col] - &m[i][col] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// For a germ of multiplicity 2 whose quadratic part has rank at least 2,
/// all-ones weights certify `d = n − 2` (n = number of variables minus one)
/// for a suitable choice of `t`. Returns `None` when the rank is below 2.
pub fn rank2_shortcut(g: &Polynomial) -> Result<Option<BoundCertificate>, InitialFormError> {
    if g.is_zero() {
        return Err(InitialFormError::ZeroInput);
    }
    let mult = g.multiplicity()?;
    if mult != 2 {
        return Err(InitialFormError::Multiplicity(mult));
    }
    if quadratic_rank(g) < 2 {
        return Ok(None);
    }
    let arity = g.ring().arity();
    let target = arity as i64 - 3;
    for t_index in 0..arity {
        let w = WeightAssignment::uniform(arity, t_index);
        if let Some(cert) = theorem1_bound(g, &w)? {
            if cert.d == target {
                return Ok(Some(cert));
            }
        }
    }
    Err(InitialFormError::Inconsistent(format!(
        "rank ≥ 2 quadratic part but no t-choice gives d = {target}"
    )))
}
