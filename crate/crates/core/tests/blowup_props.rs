mod common;

use std::collections::BTreeSet;

use common::q;
use mindisc::blowup::{index_cover_discrepancy, BlowupState, CenterSpec, Divisor};
use mindisc::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alpha() -> impl Strategy<Value = Rational> {
    (1i64..=6).prop_flat_map(|d| (-d..=d).prop_map(move |n| q(n, d)))
}

fn closure(sets: &BTreeSet<BTreeSet<u32>>) -> BTreeSet<BTreeSet<u32>> {
    let mut out = BTreeSet::new();
    for s in sets {
        let v: Vec<u32> = s.iter().copied().collect();
        for mask in 1u32..(1 << v.len()) {
            out.insert((0..v.len()).filter(|b| mask & (1 << b) != 0).map(|b| v[b]).collect());
        }
    }
    out
}

/// Random SNC state whose minimal coefficient is exactly `alpha`.
fn random_state(rng: &mut ChaCha8Rng, alpha: &Rational) -> BlowupState {
    let n = rng.gen_range(2..=5usize);
    let k = rng.gen_range(1..=5u32);
    let divisors: Vec<Divisor> = (1..=k)
        .map(|id| {
            let extra = if id == 1 { q(0, 1) } else { q(rng.gen_range(0..=12), rng.gen_range(1..=4)) };
            Divisor::new(id, alpha + extra, rng.gen_bool(0.5))
        })
        .collect();
    let mut meets: BTreeSet<BTreeSet<u32>> = (1..=k).map(|i| BTreeSet::from([i])).collect();
    let ids: Vec<u32> = (1..=k).collect();
    for _ in 0..rng.gen_range(0..=4) {
        let size = rng.gen_range(2..=n.min(k as usize).max(2));
        if size <= k as usize && size <= n {
            meets.insert(ids.choose_multiple(rng, size).copied().collect());
        }
    }
    BlowupState::new(n, divisors, closure(&meets), None).unwrap()
}

fn random_center(rng: &mut ChaCha8Rng, s: &BlowupState) -> CenterSpec {
    let n = s.ambient_dim();
    let mut choices: Vec<BTreeSet<u32>> = s.nonempty().iter().cloned().collect();
    choices.push(BTreeSet::new());
    let touching = choices.choose(rng).unwrap().clone();
    let m = touching.len();
    let can_full = m >= 2;
    let can_partial = m < n;
    if can_full && (!can_partial || rng.gen_bool(0.5)) {
        return CenterSpec::full(touching);
    }
    let r = rng.gen_range((m + 1).max(2)..=n);
    let c = CenterSpec::partial(touching, r);
    if m == 0 {
        c.over_point(rng.gen_bool(0.5))
    } else {
        c
    }
}

fn well_formed(s: &BlowupState) -> Result<(), String> {
    let ids: BTreeSet<u32> = s.divisors().map(|d| d.id).collect();
    for id in &ids {
        if !s.nonempty().contains(&BTreeSet::from([*id])) {
            return Err(format!("singleton {id} missing"));
        }
    }
    if closure(s.nonempty()) != *s.nonempty() {
        return Err("not closed under subsets".into());
    }
    for set in s.nonempty() {
        if set.len() > s.ambient_dim() || !set.is_subset(&ids) {
            return Err(format!("bad stratum {set:?}"));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn blowups_never_go_below_alpha(a in alpha(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = random_state(&mut rng, &a);
        prop_assert_eq!(s.min_coefficient(false), Some(a.clone()));
        for _ in 0..rng.gen_range(1..=8) {
            let c = random_center(&mut rng, &s);
            let expected = c.touching.iter().fold(
                Rational::from_integer(BigInt::from(c.codim as i64 - 1)),
                |acc, id| acc + &s.divisor(*id).unwrap().coeff,
            );
            let (next, id, coeff) = s.blow_up(&c).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&coeff, &expected);
            prop_assert!(coeff >= a, "new coefficient {} below alpha {}", coeff, a);
            if a >= q(0, 1) {
                prop_assert!(coeff >= q(1, 1));
            }
            for d in s.divisors() {
                prop_assert_eq!(&next.divisor(d.id).unwrap().coeff, &d.coeff);
            }
            prop_assert!(next.divisor(id).is_some());
            well_formed(&next).map_err(TestCaseError::fail)?;
            s = next;
        }
        prop_assert!(s.min_coefficient(false).unwrap() >= a);
    }

    #[test]
    fn walk_matches_closed_form(
        (ai, aj) in (alpha(), (1i64..=30, 1i64..=6).prop_map(|(n, d)| q(-1, 1) - q(n, d))),
        k in 1usize..=20,
    ) {
        let s = BlowupState::new(
            3,
            vec![Divisor::new(1, ai.clone(), true), Divisor::new(2, aj.clone(), false)],
            [BTreeSet::from([1]), BTreeSet::from([2]), BTreeSet::from([1, 2])],
            None,
        ).unwrap();
        let (end, coeffs) = s.minus_infinity_walk(1, 2, k).unwrap();
        prop_assert_eq!(coeffs.len(), k);
        for (m, c) in coeffs.iter().enumerate() {
            let m = Rational::from_integer(BigInt::from(m as i64 + 1));
            prop_assert_eq!(c, &(&ai + m * (q(1, 1) + &aj)));
        }
        prop_assert!(end.divisors().filter(|d| d.id > 2).all(|d| d.over_point));
        well_formed(&end).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn index_cover_inequality(num in -400i64..=400, den in 1i64..=40, t in 1u32..=10) {
        let a = q(num, den);
        let b = index_cover_discrepancy(&a, t).unwrap();
        if a >= q(-1, 1) {
            prop_assert!(a <= b);
        } else {
            prop_assert!(b <= a);
        }
        prop_assert_eq!(index_cover_discrepancy(&q(-1, 1), t).unwrap(), q(-1, 1));
    }
}
