//! Combinatorial blow-ups of simple normal crossing configurations.
//!
//! A [`BlowupState`] records, for the divisors over a germ, only what the
//! discrepancy recursion needs: each divisor's coefficient, whether its image
//! is the distinguished point, and which subsets of divisors meet. Every
//! nonempty intersection is treated as one connected stratum.
//!
//! Blowing up a smooth center of codimension `r` lying in exactly the
//! divisors `I` (so `|I| ≤ r`) creates a divisor with coefficient
//! `(r − 1) + Σ_{j∈I} aⱼ`; proper transforms keep their coefficients.

mod script;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::poly::Rational;

pub use script::{parse_rational, parse_script, run_script, Command, ScriptError, ScriptEvent, ScriptRun};

pub type DivisorId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("invalid state: {0}")]
    Structural(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub id: DivisorId,
    pub coeff: Rational,
    /// The divisor maps onto the distinguished point.
    pub over_point: bool,
}

impl Divisor {
    pub fn new(id: DivisorId, coeff: Rational, over_point: bool) -> Divisor {
        Divisor {
            id,
            coeff,
            over_point,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupState {
    ambient_dim: usize,
    divisors: BTreeMap<DivisorId, Divisor>,
    nonempty: BTreeSet<BTreeSet<DivisorId>>,
    index: Option<u32>,
}

/// Center of a blow-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterSpec {
    /// The divisors containing the center.
    pub touching: BTreeSet<DivisorId>,
    /// Codimension `r` of the center in the ambient space.
    pub codim: usize,
    /// The center is the whole stratum `∩_{j∈I} D_j` (then `r = |I|`).
    pub full_stratum: bool,
    /// Over-point flag for a center touching no divisor.
    pub over_point_override: Option<bool>,
}

impl CenterSpec {
    pub fn full(touching: impl IntoIterator<Item = DivisorId>) -> CenterSpec {
        let touching: BTreeSet<_> = touching.into_iter().collect();
        CenterSpec {
            codim: touching.len(),
            touching,
            full_stratum: true,
            over_point_override: None,
        }
    }

    pub fn partial(touching: impl IntoIterator<Item = DivisorId>, codim: usize) -> CenterSpec {
        CenterSpec {
            touching: touching.into_iter().collect(),
            codim,
            full_stratum: false,
            over_point_override: None,
        }
    }

    pub fn over_point(mut self, flag: bool) -> CenterSpec {
        self.over_point_override = Some(flag);
        self
    }
}

fn structural(msg: impl Into<String>) -> BlowupError {
    BlowupError::Structural(msg.into())
}

fn precondition(msg: impl Into<String>) -> BlowupError {
    BlowupError::Precondition(msg.into())
}

pub(crate) fn fmt_set(s: &BTreeSet<DivisorId>) -> String {
    let ids: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", ids.join(","))
}

impl BlowupState {
    /// Validates and builds a state. `nonempty` lists the subsets of
    /// divisors with nonempty intersection; it must contain every singleton
    /// and be closed under taking subsets.
    pub fn new(
        ambient_dim: usize,
        divisors: Vec<Divisor>,
        nonempty: impl IntoIterator<Item = BTreeSet<DivisorId>>,
        index: Option<u32>,
    ) -> Result<BlowupState, BlowupError> {
        if ambient_dim < 2 {
            return Err(structural(format!("ambient dimension {ambient_dim} < 2")));
        }
        let mut map = BTreeMap::new();
        for d in divisors {
            let id = d.id;
            if map.insert(id, d).is_some() {
                return Err(structural(format!("duplicate divisor id {id}")));
            }
        }
        let nonempty: BTreeSet<_> = nonempty.into_iter().filter(|s| !s.is_empty()).collect();
        let state = BlowupState {
            ambient_dim,
            divisors: map,
            nonempty,
            index,
        };
        state.validate()?;
        Ok(state)
    }

    fn validate(&self) -> Result<(), BlowupError> {
        for id in self.divisors.keys() {
            if !self.nonempty.contains(&BTreeSet::from([*id])) {
                return Err(structural(format!("singleton {{{id}}} missing from nonempty")));
            }
        }
        for set in &self.nonempty {
            if let Some(bad) = set.iter().find(|id| !self.divisors.contains_key(id)) {
                return Err(structural(format!("{} names unknown divisor {bad}", fmt_set(set))));
            }
            if set.len() > self.ambient_dim {
                return Err(structural(format!(
                    "{} has more than {} members",
                    fmt_set(set),
                    self.ambient_dim
                )));
            }
            for id in set {
                let mut sub = set.clone();
                sub.remove(id);
                if !sub.is_empty() && !self.nonempty.contains(&sub) {
                    return Err(structural(format!(
                        "{} is nonempty but its subset {} is not",
                        fmt_set(set),
                        fmt_set(&sub)
                    )));
                }
            }
        }
        if let Some(r) = self.index {
            if r == 0 {
                return Err(structural("index must be positive"));
            }
            let r = Rational::from_integer(BigInt::from(r));
            for d in self.divisors.values() {
                if !(&d.coeff * &r).is_integer() {
                    return Err(structural(format!(
                        "coefficient {} of divisor {} is not a multiple of 1/{}",
                        d.coeff, d.id, r
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn divisors(&self) -> impl Iterator<Item = &Divisor> {
        self.divisors.values()
    }

    pub fn divisor(&self, id: DivisorId) -> Option<&Divisor> {
        self.divisors.get(&id)
    }

    pub fn nonempty(&self) -> &BTreeSet<BTreeSet<DivisorId>> {
        &self.nonempty
    }

    pub fn meets(&self, set: &BTreeSet<DivisorId>) -> bool {
        set.is_empty() || self.nonempty.contains(set)
    }

    fn check_center(&self, c: &CenterSpec) -> Result<(), BlowupError> {
        let s = c.touching.len();
        if let Some(bad) = c.touching.iter().find(|id| !self.divisors.contains_key(id)) {
            return Err(precondition(format!("center touches unknown divisor {bad}")));
        }
        if !self.meets(&c.touching) {
            return Err(precondition(format!(
                "divisors {} do not meet",
                fmt_set(&c.touching)
            )));
        }
        if c.codim < 2 {
            return Err(precondition("center codimension must be at least 2"));
        }
        if c.codim > self.ambient_dim {
            return Err(precondition(format!(
                "codimension {} exceeds ambient dimension {}",
                c.codim, self.ambient_dim
            )));
        }
        if c.codim < s {
            return Err(precondition(format!(
                "a codimension {} center lies in at most {} divisors, not {s}",
                c.codim, c.codim
            )));
        }
        if c.full_stratum && c.codim != s {
            return Err(precondition("a full stratum has codimension equal to |touching|"));
        }
        if !c.full_stratum && c.codim == s {
            return Err(precondition(
                "a proper center inside a stratum must have codimension larger than |touching|",
            ));
        }
        Ok(())
    }

    /// Blows up `c`; returns the new state, the new divisor's id and its
    /// coefficient `(r − 1) + Σ_{j∈I} aⱼ`.
    pub fn blow_up(&self, c: &CenterSpec) -> Result<(BlowupState, DivisorId, Rational), BlowupError> {
        self.check_center(c)?;
        let r = c.codim;
        let mut coeff = Rational::from_integer(BigInt::from(r - 1));
        for id in &c.touching {
            coeff += &self.divisors[id].coeff;
        }
        let over_point = if c.touching.is_empty() {
            c.over_point_override.unwrap_or(false)
        } else {
            c.touching.iter().any(|id| self.divisors[id].over_point)
        };
        let new_id = self.divisors.keys().next_back().map_or(1, |m| m + 1);

        let mut nonempty = self.nonempty.clone();
        if c.full_stratum {
            nonempty.retain(|k| !c.touching.is_subset(k));
        }
        for k in subsets_up_to(&c.touching, r - 1) {
            let mut with_new = k;
            with_new.insert(new_id);
            nonempty.insert(with_new);
        }
        let nonempty = downward_closure(nonempty);

        let mut divisors = self.divisors.clone();
        divisors.insert(new_id, Divisor::new(new_id, coeff.clone(), over_point));
        let next = BlowupState {
            ambient_dim: self.ambient_dim,
            divisors,
            nonempty,
            index: self.index,
        };
        debug_assert!(next.validate().is_ok());
        Ok((next, new_id, coeff))
    }

    /// Repeatedly blows up the intersection of the newest divisor with `j`,
    /// starting from `{i, j}`. With `i` over the point and `aⱼ < −1` the
    /// coefficients `aᵢ + m(1 + aⱼ)` decrease without bound.
    pub fn minus_infinity_walk(
        &self,
        i: DivisorId,
        j: DivisorId,
        steps: usize,
    ) -> Result<(BlowupState, Vec<Rational>), BlowupError> {
        let (Some(di), Some(dj)) = (self.divisors.get(&i), self.divisors.get(&j)) else {
            return Err(precondition("walk names an unknown divisor"));
        };
        if i == j || !self.meets(&BTreeSet::from([i, j])) {
            return Err(precondition(format!("divisors {i} and {j} do not meet")));
        }
        if !di.over_point {
            return Err(precondition(format!("divisor {i} does not lie over the point")));
        }
        if dj.coeff >= -Rational::one() {
            return Err(precondition(format!(
                "walk needs a_{j} < -1, found {}",
                dj.coeff
            )));
        }
        let mut state = self.clone();
        let mut current = i;
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            let (next, id, a) = state.blow_up(&CenterSpec::full([current, j]))?;
            state = next;
            current = id;
            out.push(a);
        }
        Ok((state, out))
    }

    /// Smallest coefficient, optionally only among divisors over the point.
    pub fn min_coefficient(&self, over_point_only: bool) -> Option<Rational> {
        self.divisors
            .values()
            .filter(|d| !over_point_only || d.over_point)
            .map(|d| d.coeff.clone())
            .min()
    }
}

fn subsets_up_to(set: &BTreeSet<DivisorId>, max: usize) -> Vec<BTreeSet<DivisorId>> {
    let items: Vec<_> = set.iter().copied().collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << items.len()) {
        if mask.count_ones() as usize <= max {
            out.push(
                items
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask & (1 << b) != 0)
                    .map(|(_, id)| *id)
                    .collect(),
            );
        }
    }
    out
}

pub(crate) fn downward_closure(sets: BTreeSet<BTreeSet<DivisorId>>) -> BTreeSet<BTreeSet<DivisorId>> {
    let mut out = BTreeSet::new();
    for s in &sets {
        for sub in subsets_up_to(s, s.len()) {
            if !sub.is_empty() {
                out.insert(sub);
            }
        }
    }
    out
}

/// Coefficient `t·a + t − 1` of a divisor over an index-one cover of degree
/// `t` whose image has coefficient `a`.
pub fn index_cover_discrepancy(a: &Rational, t: u32) -> Result<Rational, BlowupError> {
    if t < 1 {
        return Err(precondition("cover degree must be at least 1"));
    }
    let t = Rational::from_integer(BigInt::from(t));
    Ok(&t * a + &t - Rational::one())
}
