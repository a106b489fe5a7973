//! Type-directed derivation search with unknowns.
//!
//! Every rule is run against an expected type that may still contain
//! metavariables. Multiset cardinalities are guessed only when the expected
//! multitype is still unknown: up to the card bound for unknowns that end up
//! in the conclusion, up to `cap` for the others.

use std::collections::{BTreeMap, BTreeSet};

use super::deriv::{Derivation, Rule};
use super::types::{Bounds, Env, Multitype, System, Type, Typing};
use crate::syntax::{free_vars, fresh_name, name, open, Name, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum SType {
    Meta(u32),
    Var(Name),
    Multi(Vec<SType>),
    Arrow(Box<SType>, Box<SType>),
}

impl SType {
    pub(crate) fn from_type(t: &Type) -> SType {
        match t {
            Type::Var(a) => SType::Var(a.clone()),
            Type::Multi(m) => SType::from_multi(m),
            Type::Arrow(m, s) => SType::Arrow(Box::new(SType::from_multi(m)), Box::new(SType::from_type(s))),
        }
    }

    fn from_multi(m: &Multitype) -> SType {
        SType::Multi(m.items().iter().map(SType::from_type).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Any,
    Multi,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct State {
    subst: Vec<Option<SType>>,
    kind: Vec<Kind>,
    /// Largest depth the meta may take, for metas reaching the conclusion.
    budget: Vec<Option<usize>>,
}

impl State {
    fn fresh(&mut self, k: Kind) -> SType {
        self.subst.push(None);
        self.kind.push(k);
        self.budget.push(None);
        SType::Meta(self.subst.len() as u32 - 1)
    }

    fn resolve(&self, t: &SType) -> SType {
        let mut cur = t.clone();
        while let SType::Meta(m) = cur {
            match &self.subst[m as usize] {
                Some(u) => cur = u.clone(),
                None => return cur,
            }
        }
        cur
    }

    pub(crate) fn zonk(&self, t: &SType) -> SType {
        match self.resolve(t) {
            SType::Multi(l) => SType::Multi(l.iter().map(|e| self.zonk(e)).collect()),
            SType::Arrow(d, c) => SType::Arrow(Box::new(self.zonk(&d)), Box::new(self.zonk(&c))),
            other => other,
        }
    }

    fn occurs(&self, m: u32, t: &SType) -> bool {
        match self.resolve(t) {
            SType::Meta(n) => n == m,
            SType::Var(_) => false,
            SType::Multi(l) => l.iter().any(|e| self.occurs(m, e)),
            SType::Arrow(d, c) => self.occurs(m, &d) || self.occurs(m, &c),
        }
    }

    fn metas(&self, t: &SType, out: &mut Vec<u32>) {
        match self.resolve(t) {
            SType::Meta(n) => {
                if !out.contains(&n) {
                    out.push(n)
                }
            }
            SType::Var(_) => {}
            SType::Multi(l) => l.iter().for_each(|e| self.metas(e, out)),
            SType::Arrow(d, c) => {
                self.metas(&d, out);
                self.metas(&c, out)
            }
        }
    }
}

pub(crate) type SEnv = BTreeMap<Name, Vec<SType>>;

fn env_add(a: &SEnv, b: &SEnv) -> SEnv {
    let mut out = a.clone();
    for (x, l) in b {
        out.entry(x.clone()).or_default().extend(l.iter().cloned());
    }
    out
}

#[derive(Clone, Debug)]
pub(crate) struct SDeriv {
    rule: Rule,
    term: Term,
    ty: SType,
    binder: Option<Name>,
    premises: Vec<SDeriv>,
}

type Cont<'c> = &'c mut dyn FnMut(State, SEnv, SDeriv) -> bool;
type SeqCont<'c> = &'c mut dyn FnMut(State, SEnv, Vec<SDeriv>) -> bool;

enum Job {
    /// Type a term against an expected type.
    Plain(Term, SType),
    /// Type an opened binder body: the expected type must be an arrow whose
    /// domain is the multitype collected for the binder.
    Body(Term, Name, SType),
}

/// A root result: the state, the environment, the derivation and the root type.
pub(crate) struct Solution {
    pub state: State,
    pub env: SEnv,
    pub deriv: SDeriv,
    pub ty: SType,
}

pub(crate) struct Engine {
    pub sys: System,
    pub card: usize,
    /// Conclusion depth bound; `None` disables pruning.
    pub depth: Option<usize>,
    pub cap: usize,
    taken: BTreeSet<Name>,
}

impl Engine {
    pub fn new(sys: System, t: &Term, card: usize, depth: Option<usize>, cap: usize) -> Engine {
        Engine { sys, card, depth, cap, taken: free_vars(t) }
    }

    fn bind(&self, mut st: State, m: u32, t: SType) -> Option<State> {
        if let SType::Meta(n) = t {
            // Keep the more constrained meta as the representative.
            let (from, to) = if st.kind[m as usize] == Kind::Multi && st.kind[n as usize] == Kind::Any { (n, m) } else { (m, n) };
            let b = match (st.budget[from as usize], st.budget[to as usize]) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            st.subst[from as usize] = Some(SType::Meta(to));
            st.budget[to as usize] = b;
            return if b.is_some_and(|b| b == 0) { None } else { Some(st) };
        }
        if st.kind[m as usize] == Kind::Multi && !matches!(t, SType::Multi(_)) {
            return None;
        }
        if st.occurs(m, &t) {
            return None;
        }
        st.subst[m as usize] = Some(t.clone());
        match st.budget[m as usize] {
            Some(b) => self.constrain(st, &t, b),
            None => Some(st),
        }
    }

    /// Require `t` to fit in depth `b` (and the card bound).
    fn constrain(&self, mut st: State, t: &SType, b: usize) -> Option<State> {
        if b == 0 {
            return None;
        }
        match st.resolve(t) {
            SType::Meta(n) => {
                let cur = st.budget[n as usize].unwrap_or(usize::MAX);
                st.budget[n as usize] = Some(cur.min(b));
                Some(st)
            }
            SType::Var(_) => Some(st),
            SType::Multi(l) => {
                if l.len() > self.card {
                    return None;
                }
                l.iter().try_fold(st, |st, e| self.constrain(st, e, b - 1))
            }
            SType::Arrow(d, c) => {
                let st = self.constrain(st, &d, b - 1)?;
                self.constrain(st, &c, b - 1)
            }
        }
    }

    fn constrain_free(&self, st: State, t: &SType) -> Option<State> {
        match self.depth {
            Some(d) => self.constrain(st, t, d),
            None => Some(st),
        }
    }

    pub(crate) fn unify(&self, st: State, a: &SType, b: &SType) -> Vec<State> {
        let (a, b) = (st.resolve(a), st.resolve(b));
        match (a, b) {
            (SType::Meta(m), SType::Meta(n)) if m == n => vec![st],
            (SType::Meta(m), other) | (other, SType::Meta(m)) => self.bind(st, m, other).into_iter().collect(),
            (SType::Var(x), SType::Var(y)) => {
                if x == y {
                    vec![st]
                } else {
                    vec![]
                }
            }
            (SType::Arrow(d1, c1), SType::Arrow(d2, c2)) => {
                self.unify(st, &d1, &d2).into_iter().flat_map(|st| self.unify(st, &c1, &c2)).collect()
            }
            (SType::Multi(l1), SType::Multi(l2)) => {
                if l1.len() != l2.len() {
                    return vec![];
                }
                if st.zonk(&SType::Multi(l1.clone())) == st.zonk(&SType::Multi(l2.clone())) {
                    return vec![st];
                }
                let mut out = Vec::new();
                self.unify_lists(st, &l1, l2, &mut out);
                out
            }
            _ => vec![],
        }
    }

    /// All matchings of two equally long lists.
    fn unify_lists(&self, st: State, l1: &[SType], l2: Vec<SType>, out: &mut Vec<State>) {
        let Some((first, rest)) = l1.split_first() else {
            out.push(st);
            return;
        };
        let mut tried: Vec<SType> = Vec::new();
        for j in 0..l2.len() {
            let z = st.zonk(&l2[j]);
            if tried.contains(&z) {
                continue;
            }
            tried.push(z);
            for st2 in self.unify(st.clone(), first, &l2[j]) {
                let mut others = l2.clone();
                others.remove(j);
                self.unify_lists(st2, rest, others, out);
            }
        }
    }

    /// Cardinality guesses for an unknown multitype.
    fn guess_multi(&self, st: State, t: &SType) -> Vec<(State, Vec<SType>)> {
        match st.resolve(t) {
            SType::Multi(l) => vec![(st, l)],
            SType::Meta(m) => {
                let cap = match st.budget[m as usize] {
                    Some(b) if b <= 1 => 0,
                    Some(_) => self.cap.min(self.card),
                    None => self.cap,
                };
                let mut out = Vec::new();
                for n in 0..=cap {
                    let mut st2 = st.clone();
                    let elems: Vec<SType> = (0..n).map(|_| st2.fresh(Kind::Any)).collect();
                    if let Some(st3) = self.bind(st2, m, SType::Multi(elems.clone())) {
                        out.push((st3, elems));
                    }
                }
                out
            }
            _ => vec![],
        }
    }

    fn as_arrow(&self, mut st: State, t: &SType) -> Vec<(State, SType, SType)> {
        match st.resolve(t) {
            SType::Arrow(d, c) => vec![(st, *d, *c)],
            SType::Meta(m) if st.kind[m as usize] == Kind::Any => {
                let d = st.fresh(Kind::Multi);
                let c = st.fresh(Kind::Any);
                self.bind(st, m, SType::Arrow(Box::new(d.clone()), Box::new(c.clone())))
                    .map(|st| (st, d, c))
                    .into_iter()
                    .collect()
            }
            _ => vec![],
        }
    }

    fn binder(&self, hint: &str, scope: &[Name]) -> Name {
        name(&fresh_name(hint, |s| self.taken.iter().any(|x| &**x == s) || scope.iter().any(|x| &**x == s)))
    }

    fn node(rule: Rule, t: &Term, ty: &SType, binder: Option<Name>, premises: Vec<SDeriv>) -> SDeriv {
        SDeriv { rule, term: t.clone(), ty: ty.clone(), binder, premises }
    }

    fn run(&self, job: &Job, st: State, scope: &[Name], k: Cont) -> bool {
        match job {
            Job::Plain(t, e) => self.infer(t, e, st, scope, k),
            Job::Body(body, x, e) => {
                let mut inner = scope.to_vec();
                inner.push(x.clone());
                for (st, dom, cod) in self.as_arrow(st, e) {
                    let go = self.infer(body, &cod, st, &inner, &mut |st1, mut env1, d1| {
                        let xs = env1.remove(x).unwrap_or_default();
                        for st2 in self.unify(st1, &dom, &SType::Multi(xs)) {
                            if !k(st2, env1.clone(), d1.clone()) {
                                return false;
                            }
                        }
                        true
                    });
                    if !go {
                        return false;
                    }
                }
                true
            }
        }
    }

    fn seq(&self, jobs: &[Job], st: State, scope: &[Name], env: SEnv, ds: Vec<SDeriv>, k: SeqCont) -> bool {
        match jobs.split_first() {
            None => k(st, env, ds),
            Some((j, rest)) => self.run(j, st, scope, &mut |st1, e1, d1| {
                let mut ds2 = ds.clone();
                ds2.push(d1);
                self.seq(rest, st1, scope, env_add(&env, &e1), ds2, k)
            }),
        }
    }

    fn family(&self, u: &Term, tys: &SType, st: State, scope: &[Name], k: SeqCont) -> bool {
        for (st, elems) in self.guess_multi(st, tys) {
            let jobs: Vec<Job> = elems.into_iter().map(|e| Job::Plain(u.clone(), e)).collect();
            if !self.seq(&jobs, st, scope, SEnv::new(), Vec::new(), k) {
                return false;
            }
        }
        true
    }

    pub(crate) fn infer(&self, t: &Term, exp: &SType, st: State, scope: &[Name], k: Cont) -> bool {
        let sys = self.sys;
        match t {
            Term::Bound(_) => panic!("unopened bound variable"),
            Term::Free(x) => {
                let free = !scope.contains(x);
                let leaf = Self::node(Rule::Var, t, exp, None, vec![]);
                if sys == System::V {
                    for (st, elems) in self.guess_multi(st, exp) {
                        let st = if free { elems.iter().try_fold(st, |st, e| self.constrain_free(st, e)) } else { Some(st) };
                        let Some(st) = st else { continue };
                        let mut env = SEnv::new();
                        if !elems.is_empty() {
                            env.insert(x.clone(), elems);
                        }
                        if !k(st, env, leaf.clone()) {
                            return false;
                        }
                    }
                    true
                } else {
                    let st = if free { self.constrain_free(st, exp) } else { Some(st) };
                    match st {
                        Some(st) => k(st, SEnv::from([(x.clone(), vec![exp.clone()])]), leaf),
                        None => true,
                    }
                }
            }
            Term::Abs(hint, body) => {
                let x = self.binder(hint, scope);
                let opened = open(body, &x);
                if sys == System::V {
                    for (st, elems) in self.guess_multi(st, exp) {
                        let jobs: Vec<Job> = elems.into_iter().map(|e| Job::Body(opened.clone(), x.clone(), e)).collect();
                        let go = self.seq(&jobs, st, scope, SEnv::new(), Vec::new(), &mut |st, env, ds| {
                            k(st, env, Self::node(Rule::Abs, t, exp, Some(x.clone()), ds))
                        });
                        if !go {
                            return false;
                        }
                    }
                    true
                } else {
                    self.run(&Job::Body(opened, x.clone(), exp.clone()), st, scope, &mut |st, env, d| {
                        k(st, env, Self::node(Rule::Abs, t, exp, Some(x.clone()), vec![d]))
                    })
                }
            }
            Term::App(f, a) => {
                let mut st = st;
                let m = st.fresh(Kind::Multi);
                let fty = match sys {
                    System::V => SType::Multi(vec![SType::Arrow(Box::new(m.clone()), Box::new(exp.clone()))]),
                    _ => SType::Arrow(Box::new(m.clone()), Box::new(exp.clone())),
                };
                if sys == System::N {
                    self.infer(f, &fty, st, scope, &mut |st1, e1, d1| {
                        self.family(a, &m, st1, scope, &mut |st2, e2, ds| {
                            let mut ps = vec![d1.clone()];
                            ps.extend(ds);
                            k(st2, env_add(&e1, &e2), Self::node(Rule::App, t, exp, None, ps))
                        })
                    })
                } else {
                    let jobs = [Job::Plain((**f).clone(), fty), Job::Plain((**a).clone(), m)];
                    self.seq(&jobs, st, scope, SEnv::new(), Vec::new(), &mut |st, env, ds| {
                        k(st, env, Self::node(Rule::App, t, exp, None, ds))
                    })
                }
            }
            Term::Sub(body, hint, a) => {
                let x = self.binder(hint, scope);
                let opened = open(body, &x);
                let mut inner = scope.to_vec();
                inner.push(x.clone());
                self.infer(&opened, exp, st, &inner, &mut |st1, mut e1, d1| {
                    let xs = SType::Multi(e1.remove(&x).unwrap_or_default());
                    let mut done = |st2: State, e2: SEnv, ds: Vec<SDeriv>| {
                        let mut ps = vec![d1.clone()];
                        ps.extend(ds);
                        k(st2, env_add(&e1, &e2), Self::node(Rule::Es, t, exp, Some(x.clone()), ps))
                    };
                    if sys == System::N {
                        self.family(a, &xs, st1, scope, &mut done)
                    } else {
                        self.seq(&[Job::Plain((**a).clone(), xs)], st1, scope, SEnv::new(), Vec::new(), &mut done)
                    }
                })
            }
            Term::Bang(u) if sys == System::B => self.family(u, exp, st, scope, &mut |st, env, ds| {
                k(st, env, Self::node(Rule::Bang, t, exp, None, ds))
            }),
            Term::Der(u) if sys == System::B => {
                let single = SType::Multi(vec![exp.clone()]);
                self.infer(u, &single, st, scope, &mut |st, env, d| {
                    k(st, env, Self::node(Rule::Der, t, exp, None, vec![d]))
                })
            }
            Term::Bang(_) | Term::Der(_) => true,
        }
    }

    /// Root search, stopping after `limit` solutions.
    pub(crate) fn search(&self, t: &Term, root: Option<&Type>, limit: usize) -> Vec<Solution> {
        let mut st = State::default();
        let ty = match root {
            Some(r) => SType::from_type(r),
            None => st.fresh(Kind::Any),
        };
        let st = match self.depth {
            Some(d) => match self.constrain(st, &ty, d) {
                Some(st) => st,
                None => return vec![],
            },
            None => st,
        };
        let mut out = Vec::new();
        self.infer(t, &ty, st, &[], &mut |state, env, deriv| {
            if self.depth.is_some() && env.values().any(|l| l.len() > self.card) {
                return true;
            }
            out.push(Solution { state, env, deriv, ty: ty.clone() });
            out.len() < limit
        });
        out
    }

    /// Match a solution's environment against a given one.
    pub(crate) fn match_env(&self, sol: Solution, env: &Env) -> Vec<Solution> {
        if sol.env.keys().any(|x| env.get(x).is_empty() && !sol.env[x].is_empty()) {
            return vec![];
        }
        let mut states = vec![sol.state];
        for (x, m) in env.iter() {
            let have = SType::Multi(sol.env.get(x).cloned().unwrap_or_default());
            let want = SType::from_type(&Type::Multi(m.clone()));
            states = states.into_iter().flat_map(|st| self.unify(st, &have, &want)).collect();
        }
        states
            .into_iter()
            .map(|state| Solution { state, env: sol.env.clone(), deriv: sol.deriv.clone(), ty: sol.ty.clone() })
            .collect()
    }
}

/// Ground a symbolic type; unassigned metas become `a` or `[]`.
fn ground(st: &State, t: &SType, assign: &BTreeMap<u32, Type>) -> Type {
    match st.resolve(t) {
        SType::Meta(m) => assign.get(&m).cloned().unwrap_or_else(|| match st.kind[m as usize] {
            Kind::Any => Type::var("a"),
            Kind::Multi => Type::Multi(Multitype::empty()),
        }),
        SType::Var(a) => Type::Var(a),
        SType::Multi(l) => Type::multi(l.iter().map(|e| ground(st, e, assign)).collect()),
        SType::Arrow(d, c) => match ground(st, &d, assign) {
            Type::Multi(m) => Type::arrow(m, ground(st, &c, assign)),
            other => panic!("arrow domain grounded to {other}"),
        },
    }
}

fn ground_env(st: &State, env: &SEnv, assign: &BTreeMap<u32, Type>) -> Env {
    let mut out = Env::empty();
    for (x, l) in env {
        out.set(x, Multitype::new(l.iter().map(|e| ground(st, e, assign)).collect()));
    }
    out
}

/// Build the concrete derivation, recomputing environments rule by rule.
pub(crate) fn ground_deriv(sys: System, st: &State, d: &SDeriv, assign: &BTreeMap<u32, Type>) -> Derivation {
    let premises: Vec<Derivation> = d.premises.iter().map(|p| ground_deriv(sys, st, p, assign)).collect();
    let ty = ground(st, &d.ty, assign);
    let env = match d.rule {
        Rule::Var => {
            let Term::Free(x) = &d.term else { unreachable!() };
            match (sys, &ty) {
                (System::V, Type::Multi(m)) => Env::single(x, m.clone()),
                _ => Env::single(x, Multitype::new(vec![ty.clone()])),
            }
        }
        Rule::Abs => {
            let y = d.binder.as_deref().unwrap_or("");
            premises.iter().fold(Env::empty(), |acc, p| acc.add(&p.env.without(y)))
        }
        Rule::Es => {
            let y = d.binder.as_deref().unwrap_or("");
            premises.iter().enumerate().fold(Env::empty(), |acc, (i, p)| acc.add(&if i == 0 { p.env.without(y) } else { p.env.clone() }))
        }
        _ => premises.iter().fold(Env::empty(), |acc, p| acc.add(&p.env)),
    };
    Derivation { system: sys, rule: d.rule, env, term: d.term.clone(), ty, binder: d.binder.clone(), premises }
}

/// Upper bound on groundings tried per symbolic solution.
const GROUND_LIMIT: usize = 4_000_000;

/// Enumerate the ground conclusions of a solution within `bounds`, calling
/// `f` with each canonical typing and the assignment producing it.
pub(crate) fn groundings(
    sol: &Solution,
    bounds: &Bounds,
    universe: &[Vec<Type>],
    mut f: impl FnMut(Typing, &BTreeMap<u32, Type>),
) -> bool {
    let st = &sol.state;
    let mut metas = Vec::new();
    st.metas(&sol.ty, &mut metas);
    for l in sol.env.values() {
        l.iter().for_each(|e| st.metas(e, &mut metas));
    }
    let cands: Vec<Vec<&Type>> = metas
        .iter()
        .map(|&m| {
            let b = st.budget[m as usize].unwrap_or(bounds.depth).min(bounds.depth);
            universe[..=b]
                .iter()
                .flatten()
                .filter(|t| st.kind[m as usize] == Kind::Any || matches!(t, Type::Multi(_)))
                .collect()
        })
        .collect();
    if cands.iter().any(Vec::is_empty) {
        return true;
    }
    let total = cands.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
    let complete = total.is_some_and(|n| n <= GROUND_LIMIT);
    let mut idx = vec![0usize; metas.len()];
    let mut tried = 0usize;
    loop {
        let assign: BTreeMap<u32, Type> = metas.iter().zip(&idx).zip(&cands).map(|((&m, &i), c)| (m, c[i].clone())).collect();
        let typing = Typing::new(ground_env(st, &sol.env, &assign), ground(st, &sol.ty, &assign));
        if typing.within(bounds) {
            f(typing, &assign);
        }
        tried += 1;
        if tried >= GROUND_LIMIT {
            return complete;
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return complete;
            }
            idx[i] += 1;
            if idx[i] < cands[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub(crate) fn ground_solution(sys: System, sol: &Solution, assign: &BTreeMap<u32, Type>) -> Derivation {
    ground_deriv(sys, &sol.state, &sol.deriv, assign)
}
