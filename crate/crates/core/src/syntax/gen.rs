//! Seeded random generation and exhaustive enumeration of terms.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{name, Name, Term};
use crate::cbnv::{embed, Calc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Profile {
    /// Terms biased towards well-formed bang terms.
    Bang,
    /// Embeddings of call-by-name terms.
    CbnImage,
    /// Embeddings of call-by-value terms.
    CbvImage,
    /// Uniform choice among all constructors.
    Raw,
}

const POOL: [&str; 3] = ["x", "y", "z"];

struct Gen {
    rng: ChaCha8Rng,
    profile: Profile,
    free: Vec<Name>,
}

impl Gen {
    fn var(&mut self, depth: u32) -> Term {
        if depth > 0 && self.rng.gen_bool(0.7) {
            Term::Bound(self.rng.gen_range(0..depth))
        } else {
            let i = self.rng.gen_range(0..self.free.len());
            Term::Free(self.free[i].clone())
        }
    }

    fn term(&mut self, size: usize, depth: u32, cterm: bool) -> Term {
        if size <= 1 {
            return self.var(depth);
        }
        // Weights over abs, app, sub, bang, der.
        let w: [u32; 5] = match (cterm, self.profile) {
            (true, _) => [3, 4, 2, 0, 0],
            (false, Profile::Bang) => [3, 4, 2, 4, 1],
            (false, _) => [1, 1, 1, 1, 1],
        };
        let binary = size >= 3;
        let total: u32 = w.iter().enumerate().filter(|(i, _)| binary || matches!(i, 0 | 3 | 4)).map(|(_, x)| x).sum();
        let mut pick = self.rng.gen_range(0..total);
        let mut choice = 0;
        for (i, &x) in w.iter().enumerate() {
            if !binary && matches!(i, 1 | 2) {
                continue;
            }
            if pick < x {
                choice = i;
                break;
            }
            pick -= x;
        }
        let split = |g: &mut Gen| g.rng.gen_range(1..size - 1);
        match choice {
            0 => Term::Abs(name("x"), Arc::new(self.term(size - 1, depth + 1, cterm))),
            1 => {
                let k = split(self);
                let a = self.term(k, depth, cterm);
                Term::App(Arc::new(a), Arc::new(self.term(size - 1 - k, depth, cterm)))
            }
            2 => {
                let k = split(self);
                let a = self.term(k, depth + 1, cterm);
                Term::Sub(Arc::new(a), name("w"), Arc::new(self.term(size - 1 - k, depth, cterm)))
            }
            3 => Term::Bang(Arc::new(self.term(size - 1, depth, cterm))),
            _ => Term::Der(Arc::new(self.term(size - 1, depth, cterm))),
        }
    }
}

fn generator(seed: u64, profile: Profile) -> Gen {
    Gen { rng: ChaCha8Rng::seed_from_u64(seed), profile, free: POOL.iter().map(|s| name(s)).collect() }
}

/// A closed-under-binders term of exactly `size` constructors with free names
/// from `x, y, z`. Image profiles embed a generated call-by-name or
/// call-by-value term, so the size refers to the source term.
pub fn gen_term(seed: u64, size: usize, profile: Profile) -> Term {
    match profile {
        Profile::CbnImage => embed(Calc::Cbn, &gen_cterm(seed, size)),
        Profile::CbvImage => embed(Calc::Cbv, &gen_cterm(seed, size)),
        _ => generator(seed, profile).term(size.max(1), 0, false),
    }
}

/// A bang-free, der-free term of exactly `size` constructors.
pub fn gen_cterm(seed: u64, size: usize) -> Term {
    generator(seed, Profile::Raw).term(size.max(1), 0, true)
}

type Table = HashMap<(usize, u32), Arc<Vec<Arc<Term>>>>;

struct Enumerator {
    pool: Vec<Name>,
    cterm: bool,
    memo: Table,
}

impl Enumerator {
    fn exact(&mut self, n: usize, d: u32) -> Arc<Vec<Arc<Term>>> {
        if let Some(v) = self.memo.get(&(n, d)) {
            return v.clone();
        }
        let mut out: Vec<Arc<Term>> = Vec::new();
        if n == 1 {
            out.extend(self.pool.iter().map(|x| Arc::new(Term::Free(x.clone()))));
            out.extend((0..d).map(|i| Arc::new(Term::Bound(i))));
        } else if n >= 2 {
            for b in self.exact(n - 1, d + 1).iter() {
                out.push(Arc::new(Term::Abs(name("x"), b.clone())));
            }
            if !self.cterm {
                let inner = self.exact(n - 1, d);
                out.extend(inner.iter().map(|b| Arc::new(Term::Bang(b.clone()))));
                out.extend(inner.iter().map(|b| Arc::new(Term::Der(b.clone()))));
            }
            for k in 1..n.saturating_sub(1) {
                let (l, r) = (self.exact(k, d), self.exact(n - 1 - k, d));
                for a in l.iter() {
                    for b in r.iter() {
                        out.push(Arc::new(Term::App(a.clone(), b.clone())));
                    }
                }
                let lb = self.exact(k, d + 1);
                for a in lb.iter() {
                    for b in r.iter() {
                        out.push(Arc::new(Term::Sub(a.clone(), name("w"), b.clone())));
                    }
                }
            }
        }
        let v = Arc::new(out);
        self.memo.insert((n, d), v.clone());
        v
    }

    fn upto(&mut self, bound: usize) -> Vec<Term> {
        (1..=bound).flat_map(|n| self.exact(n, 0).iter().map(|t| (**t).clone()).collect::<Vec<_>>()).collect()
    }
}

/// Every term with at most `bound` constructors and free names from `pool`,
/// once per alpha class, by increasing size.
pub fn enum_terms(bound: usize, pool: &[&str]) -> Vec<Term> {
    Enumerator { pool: pool.iter().map(|s| name(s)).collect(), cterm: false, memo: HashMap::new() }.upto(bound)
}

/// Like `enum_terms`, restricted to bang-free, der-free terms.
pub fn enum_cterms(bound: usize, pool: &[&str]) -> Vec<Term> {
    Enumerator { pool: pool.iter().map(|s| name(s)).collect(), cterm: true, memo: HashMap::new() }.upto(bound)
}
