//! Potential multiplicities, the multiset measure and the multiset order
//! certifying termination of the substitution rule.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::syntax::{free_vars, Term};

/// A finite multiset of naturals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NatMultiset(BTreeMap<BigUint, usize>);

impl NatMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(n: BigUint) -> Self {
        let mut m = Self::new();
        m.insert(n, 1);
        m
    }

    pub fn from_naturals(xs: impl IntoIterator<Item = u64>) -> Self {
        let mut m = Self::new();
        for x in xs {
            m.insert(BigUint::from(x), 1);
        }
        m
    }

    fn insert(&mut self, n: BigUint, k: usize) {
        if k > 0 {
            *self.0.entry(n).or_insert(0) += k;
        }
    }

    pub fn union(mut self, other: &NatMultiset) -> Self {
        for (n, k) in &other.0 {
            self.insert(n.clone(), *k);
        }
        self
    }

    /// `n . M`: every element multiplied by `n`.
    pub fn scale(&self, n: &BigUint) -> Self {
        let mut m = Self::new();
        for (x, k) in &self.0 {
            m.insert(x * n, *k);
        }
        m
    }

    pub fn count(&self, n: &BigUint) -> usize {
        self.0.get(n).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Elements in descending order, with repetitions.
    pub fn descending(&self) -> Vec<BigUint> {
        self.0.iter().rev().flat_map(|(n, k)| std::iter::repeat_n(n.clone(), *k)).collect()
    }

    /// Distinct elements with multiplicities, descending.
    pub fn counts(&self) -> Vec<(BigUint, usize)> {
        self.0.iter().rev().map(|(n, k)| (n.clone(), *k)).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.descending().iter().map(nat_json).collect())
    }
}

impl fmt::Display for NatMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.descending().iter().map(|n| n.to_string()).collect();
        write!(f, "{{{}}}", xs.join(","))
    }
}

/// A natural as a JSON number when it fits, as a decimal string otherwise.
pub fn nat_json(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

/// Dershowitz-Manna strict order: `a` is obtained from `b` by replacing
/// elements with finitely many smaller ones, and `a != b`.
pub fn ms_gt(a: &NatMultiset, b: &NatMultiset) -> bool {
    if a == b {
        return false;
    }
    b.0.iter().all(|(y, &kb)| {
        kb <= a.count(y) || a.0.iter().any(|(x, &ka)| x > y && ka > b.count(x))
    })
}

/// Variable selector: `Free(x)` by name, or the index bound at depth 0.
#[derive(Clone, Copy)]
enum Target<'a> {
    Name(&'a str),
    Index(u32),
}

impl Target<'_> {
    fn hits(&self, t: &Term, depth: u32) -> bool {
        match (self, t) {
            (Target::Name(x), Term::Free(y)) => **y == **x,
            (Target::Index(i), Term::Bound(j)) => *j == i + depth,
            _ => false,
        }
    }
}

fn pot(t: &Term, x: Target, depth: u32) -> BigUint {
    match t {
        Term::Bound(_) | Term::Free(_) => BigUint::from(x.hits(t, depth) as u32),
        Term::Abs(_, b) | Term::Bang(b) | Term::Der(b) => pot(b, x, depth + t.is_abs() as u32),
        Term::App(a, b) => pot(a, x, depth) + pot(b, x, depth),
        Term::Sub(t1, _, t2) => {
            let inner = pot(t2, x, depth);
            let mut r = pot(t1, x, depth + 1);
            if inner > BigUint::ZERO {
                r += multiplier(t1) * inner;
            }
            r
        }
    }
}

/// `max(1, M_y(t1))` for the variable bound by a closure with body `t1`.
fn multiplier(t1: &Term) -> BigUint {
    pot(t1, Target::Index(0), 0).max(BigUint::from(1u32))
}

/// Potential multiplicity of the free variable `x` in `t`.
pub fn pot_mult(x: &str, t: &Term) -> BigUint {
    pot(t, Target::Name(x), 0)
}

/// The multiset measure of `t`.
pub fn multi_size(t: &Term) -> NatMultiset {
    match t {
        Term::Bound(_) | Term::Free(_) => NatMultiset::new(),
        Term::Abs(_, b) | Term::Bang(b) | Term::Der(b) => multi_size(b),
        Term::App(a, b) => multi_size(a).union(&multi_size(b)),
        Term::Sub(t1, _, t2) => {
            let m = pot(t1, Target::Index(0), 0);
            let k = m.clone().max(BigUint::from(1u32));
            NatMultiset::singleton(m).union(&multi_size(t1)).union(&multi_size(t2).scale(&k))
        }
    }
}

/// Potential multiplicities of all free variables of `t`.
pub fn pot_mult_all(t: &Term) -> BTreeMap<String, BigUint> {
    free_vars(t).iter().map(|x| (x.to_string(), pot_mult(x, t))).collect()
}

/// The JSON report printed by the `measure` command.
pub fn measure_report(t: &Term) -> Value {
    let pm: serde_json::Map<String, Value> = pot_mult_all(t).iter().map(|(x, n)| (x.clone(), nat_json(n))).collect();
    json!({ "pot_mult": pm, "multi_size": multi_size(t).to_json() })
}

/// Lexicographic comparison of descending sequences, which coincides with
/// the multiset order on a total order.
pub fn ms_cmp_lex(a: &NatMultiset, b: &NatMultiset) -> Ordering {
    a.descending().cmp(&b.descending())
}
