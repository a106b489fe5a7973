//! Bounded inhabitation: witnesses typed in the empty environment, found by
//! goal-directed search and re-checked, and refutations by normal-form shape.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{fresh_name, id_term, Name, Term};
use crate::typesys::{args, check_derivation, derive, Derivation, Env, Multitype, System, Type, Typing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InhBounds {
    /// Largest witness size tried.
    pub size: usize,
    /// Candidates kept per subgoal.
    pub width: usize,
}

impl Default for InhBounds {
    fn default() -> Self {
        InhBounds { size: 9, width: 48 }
    }
}

/// Why a type has no inhabitant. Every case rests on the shape of normal
/// forms typed in the empty environment: abstractions and bangs in B,
/// abstractions in N, values in V.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// A type variable, which no such normal form has.
    Atom { ty: Type },
    /// One bang body would need an abstraction and a bang normal form.
    Conflict { arrow: Type, other: Type },
    /// A member the shared witness cannot satisfy.
    Member { member: Type, because: Box<Refutation> },
    /// An arrow whose domain is empty and whose codomain is uninhabited.
    Codomain { ty: Type, because: Box<Refutation> },
    /// A type no normal form of the system can have.
    Shape { ty: Type },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::Atom { ty } => write!(f, "{ty} is a type variable"),
            Refutation::Conflict { arrow, other } => write!(f, "one witness cannot have both {arrow} and {other}"),
            Refutation::Member { member, because } => write!(f, "member {member}: {because}"),
            Refutation::Codomain { ty, because } => write!(f, "{ty} erases its argument: {because}"),
            Refutation::Shape { ty } => write!(f, "no normal form has type {ty}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum InhResult {
    /// `witness` is typed by each goal in the empty environment, one
    /// derivation per goal.
    Inhabited {
        #[serde(with = "crate::syntax::term_text")]
        witness: Term,
        derivations: Vec<Derivation>,
    },
    NotInhabited { certificate: Refutation },
    Unknown,
}

impl InhResult {
    pub fn witness(&self) -> Option<&Term> {
        match self {
            InhResult::Inhabited { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn is_inhabited(&self) -> bool {
        matches!(self, InhResult::Inhabited { .. })
    }
}

/// Witnesses for a testable typing: one per environment variable and one
/// per argument multitype, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub env: BTreeMap<Name, WitnessTerm>,
    pub args: Vec<WitnessTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WitnessTerm(#[serde(with = "crate::syntax::term_text")] pub Term);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "testable", rename_all = "snake_case")]
pub enum Testability {
    Yes { witnesses: Witnesses },
    No { goal: Multitype, certificate: Refutation },
    Unknown { open: Vec<Multitype> },
}

/// A proof obligation `env + extra |- ? : ty` inside a shared goal.
type Goal = (Env, Type);

/// Search state with memo tables, reusable across queries of one system.
pub struct Prover {
    sys: System,
    bounds: InhBounds,
    memo: HashMap<(Env, Type, usize), Vec<Term>>,
    results: HashMap<Vec<Type>, InhResult>,
}

impl Prover {
    pub fn new(sys: System, bounds: InhBounds) -> Self {
        Prover { sys, bounds, memo: HashMap::new(), results: HashMap::new() }
    }

    pub fn system(&self) -> System {
        self.sys
    }

    /// A witness `t` with `|- t : ty`.
    pub fn inhabit(&mut self, ty: &Type) -> InhResult {
        self.shared(vec![ty.clone()])
    }

    /// A witness passed where the multitype `m` is expected: a term of type
    /// `m` in B and V, a term of every member type in N.
    pub fn inhabit_multi(&mut self, m: &Multitype) -> InhResult {
        match self.sys {
            System::N => self.shared(m.items().to_vec()),
            _ => self.inhabit(&Type::Multi(m.clone())),
        }
    }

    /// `inh(Γ)`, per variable.
    pub fn inhabit_env(&mut self, env: &Env) -> BTreeMap<Name, InhResult> {
        env.iter().map(|(x, m)| (x.clone(), self.inhabit_multi(m))).collect()
    }

    pub fn testable(&mut self, typing: &Typing) -> Testability {
        let mut w = Witnesses::default();
        let mut open = Vec::new();
        let goals = typing
            .env
            .iter()
            .map(|(x, m)| (Some(x.clone()), m.clone()))
            .chain(args(self.sys, &typing.ty).into_iter().map(|m| (None, m)));
        for (x, m) in goals {
            match self.inhabit_multi(&m) {
                InhResult::Inhabited { witness, .. } => match x {
                    Some(x) => {
                        w.env.insert(x, WitnessTerm(witness));
                    }
                    None => w.args.push(WitnessTerm(witness)),
                },
                InhResult::NotInhabited { certificate } => return Testability::No { goal: m, certificate },
                InhResult::Unknown => open.push(m),
            }
        }
        if open.is_empty() {
            Testability::Yes { witnesses: w }
        } else {
            Testability::Unknown { open }
        }
    }

    /// One witness for all of `tys`.
    fn shared(&mut self, tys: Vec<Type>) -> InhResult {
        if let Some(r) = self.results.get(&tys) {
            return r.clone();
        }
        let r = self.solve(&tys);
        self.results.insert(tys, r.clone());
        r
    }

    fn solve(&mut self, tys: &[Type]) -> InhResult {
        for ty in tys {
            if let Some(r) = refute(self.sys, ty) {
                let certificate = if tys.len() == 1 { r } else { member(ty, r) };
                return InhResult::NotInhabited { certificate };
            }
        }
        let goals: Vec<Goal> = tys.iter().map(|t| (Env::empty(), t.clone())).collect();
        for n in 1..=self.bounds.size {
            for t in self.together(&Env::empty(), &goals, n) {
                let ds: Option<Vec<Derivation>> = tys
                    .iter()
                    .map(|ty| derive(self.sys, &t, &Typing::new(Env::empty(), ty.clone())))
                    .collect();
                if let Some(ds) = ds {
                    if ds.iter().all(|d| check_derivation(d).is_ok()) {
                        return InhResult::Inhabited { witness: t, derivations: ds };
                    }
                }
            }
        }
        InhResult::Unknown
    }

    /// Terms of size at most `n` with `env |- t : ty`, using all of `env`.
    fn gen(&mut self, env: &Env, ty: &Type, n: usize) -> Vec<Term> {
        if n == 0 {
            return Vec::new();
        }
        let key = (env.clone(), ty.clone(), n);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut out = Found::new(self.bounds.width);
        self.eliminate(env, ty, n, &mut out);
        self.introduce(env, ty, n, &mut out);
        let v = out.items;
        self.memo.insert(key, v.clone());
        v
    }

    fn introduce(&mut self, env: &Env, ty: &Type, n: usize, out: &mut Found) {
        match (self.sys, ty) {
            (System::B | System::N, Type::Arrow(m, body)) => {
                let y = binder(env);
                let inner = env.add(&Env::single(&y, m.clone()));
                for b in self.gen(&inner, body, n - 1) {
                    out.push(Term::abs(&y, b));
                }
            }
            (System::B, Type::Multi(m)) => {
                let goals: Vec<Goal> = m.items().iter().map(|s| (Env::empty(), s.clone())).collect();
                for s in self.together(env, &goals, n - 1) {
                    out.push(Term::bang(s));
                }
            }
            (System::V, Type::Multi(m)) if m.is_empty() && env.is_empty() && n >= 2 => out.push(id_term()),
            (System::V, Type::Multi(m)) => {
                let y = binder(env);
                let mut goals = Vec::new();
                for s in m.items() {
                    match s {
                        Type::Arrow(dom, cod) => goals.push((Env::single(&y, dom.clone()), (**cod).clone())),
                        _ => return,
                    }
                }
                for b in self.together(env, &goals, n - 1) {
                    out.push(Term::abs(&y, b));
                }
            }
            _ => {}
        }
    }

    fn eliminate(&mut self, env: &Env, ty: &Type, n: usize, out: &mut Found) {
        let heads: Vec<(Name, Multitype)> = env.iter().map(|(x, m)| (x.clone(), m.clone())).collect();
        for (y, m) in heads {
            if self.sys == System::V {
                self.spine(Term::var(&y), Type::Multi(m.clone()), &env.without(&y), ty, n - 1, out);
                continue;
            }
            let mut seen = HashSet::new();
            for rho in m.items() {
                if !seen.insert(rho.clone()) {
                    continue;
                }
                let mut rest = env.clone();
                rest.set(&y, remove_one(&m, rho));
                self.spine(Term::var(&y), rho.clone(), &rest, ty, n - 1, out);
            }
        }
    }

    /// Extend the head `e : cur` by arguments and derelictions until it has
    /// type `goal` and has used all of `rest`; `r` nodes remain.
    fn spine(&mut self, e: Term, cur: Type, rest: &Env, goal: &Type, r: usize, out: &mut Found) {
        if out.full() {
            return;
        }
        if cur == *goal && rest.is_empty() {
            out.push(e.clone());
        }
        if r == 0 {
            return;
        }
        let step = match (self.sys, &cur) {
            (System::B | System::N, Type::Arrow(dom, cod)) => Some((dom.clone(), (**cod).clone())),
            (System::V, Type::Multi(m)) if m.len() == 1 => match &m.items()[0] {
                Type::Arrow(dom, cod) => Some((dom.clone(), (**cod).clone())),
                _ => None,
            },
            _ => None,
        };
        if let Some((dom, cod)) = step {
            for (part, rem) in splits(rest) {
                let args = match self.sys {
                    System::N => {
                        let goals: Vec<Goal> = dom.items().iter().map(|s| (Env::empty(), s.clone())).collect();
                        self.together(&part, &goals, r - 1)
                    }
                    _ => self.gen(&part, &Type::Multi(dom.clone()), r - 1),
                };
                for a in args {
                    let used = 1 + a.size();
                    if used <= r {
                        self.spine(Term::app(e.clone(), a), cod.clone(), &rem, goal, r - used, out);
                    }
                }
            }
        }
        if self.sys == System::B {
            if let Type::Multi(m) = &cur {
                if m.len() == 1 {
                    self.spine(Term::der(e), m.items()[0].clone(), rest, goal, r - 1, out);
                }
            }
        }
    }

    /// Terms of size at most `n` typed by every goal, the goals splitting
    /// `env` between them.
    fn together(&mut self, env: &Env, goals: &[Goal], n: usize) -> Vec<Term> {
        let Some(((extra, first), others)) = goals.split_first() else {
            return if env.is_empty() && n >= 2 { vec![id_term()] } else { Vec::new() };
        };
        let mut out = Found::new(self.bounds.width);
        for (part, rest) in splits(env) {
            for t in self.gen(&part.add(extra), first, n) {
                if out.full() {
                    return out.items;
                }
                if self.verify(&t, &rest, others) {
                    out.push(t);
                }
            }
        }
        out.items
    }

    fn verify(&self, t: &Term, env: &Env, goals: &[Goal]) -> bool {
        let Some(((extra, ty), others)) = goals.split_first() else {
            return env.is_empty();
        };
        splits(env).into_iter().any(|(part, rest)| {
            derive(self.sys, t, &Typing::new(part.add(extra), ty.clone())).is_some() && self.verify(t, &rest, others)
        })
    }
}

struct Found {
    items: Vec<Term>,
    seen: HashSet<Term>,
    cap: usize,
}

impl Found {
    fn new(cap: usize) -> Self {
        Found { items: Vec::new(), seen: HashSet::new(), cap }
    }

    fn full(&self) -> bool {
        self.items.len() >= self.cap
    }

    fn push(&mut self, t: Term) {
        if !self.full() && self.seen.insert(t.clone()) {
            self.items.push(t);
        }
    }
}

fn binder(env: &Env) -> String {
    let taken = |x: &str| env.dom().any(|y| &**y == x);
    ["x", "y", "z", "w", "v"]
        .into_iter()
        .find(|x| !taken(x))
        .map(String::from)
        .unwrap_or_else(|| fresh_name("x", taken))
}

fn remove_one(m: &Multitype, t: &Type) -> Multitype {
    let mut items = m.items().to_vec();
    if let Some(i) = items.iter().position(|s| s == t) {
        items.remove(i);
    }
    Multitype::new(items)
}

/// All ways of writing `env` as a sum of two environments.
fn splits(env: &Env) -> Vec<(Env, Env)> {
    let mut out = vec![(Env::empty(), Env::empty())];
    for (x, m) in env.iter() {
        let mut next = Vec::new();
        for (sub, rest) in sub_multisets(m) {
            for (a, b) in &out {
                let (mut a, mut b) = (a.clone(), b.clone());
                a.set(x, sub.clone());
                b.set(x, rest.clone());
                next.push((a, b));
            }
        }
        out = next;
    }
    out
}

fn sub_multisets(m: &Multitype) -> Vec<(Multitype, Multitype)> {
    let mut groups: Vec<(Type, usize)> = Vec::new();
    for t in m.items() {
        match groups.last_mut() {
            Some((s, k)) if s == t => *k += 1,
            _ => groups.push((t.clone(), 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new())];
    for (t, k) in groups {
        let mut next = Vec::new();
        for (a, b) in &out {
            for i in 0..=k {
                let mut a: Vec<Type> = a.clone();
                let mut b: Vec<Type> = b.clone();
                a.extend(std::iter::repeat_n(t.clone(), i));
                b.extend(std::iter::repeat_n(t.clone(), k - i));
                next.push((a, b));
            }
        }
        out = next;
    }
    out.into_iter().map(|(a, b)| (Multitype::new(a), Multitype::new(b))).collect()
}

fn member(ty: &Type, because: Refutation) -> Refutation {
    Refutation::Member { member: ty.clone(), because: Box::new(because) }
}

/// An arrow and a non-arrow among the goals of one witness.
fn conflict(tys: &[Type]) -> Option<Refutation> {
    let arrow = tys.iter().find(|t| t.is_arrow())?;
    let other = tys.iter().find(|t| !t.is_arrow())?;
    Some(Refutation::Conflict { arrow: arrow.clone(), other: other.clone() })
}

/// A shape argument that `ty` has no inhabitant in `sys`.
pub fn refute(sys: System, ty: &Type) -> Option<Refutation> {
    match (sys, ty) {
        (_, Type::Var(_)) => Some(Refutation::Atom { ty: ty.clone() }),
        (System::B | System::N, Type::Arrow(m, cod)) if m.is_empty() => {
            refute(sys, cod).map(|r| Refutation::Codomain { ty: ty.clone(), because: Box::new(r) })
        }
        (System::B, Type::Multi(m)) => conflict(m.items()).or_else(|| {
            m.items().iter().find_map(|s| refute(sys, s).map(|r| member(s, r)))
        }),
        (System::N, Type::Multi(_)) | (System::V, Type::Arrow(..)) => Some(Refutation::Shape { ty: ty.clone() }),
        (System::V, Type::Multi(m)) => m.items().iter().find_map(|s| match s {
            Type::Arrow(dom, cod) if dom.is_empty() => refute(sys, cod).map(|r| member(s, r)),
            Type::Arrow(..) => None,
            _ => Some(member(s, Refutation::Shape { ty: s.clone() })),
        }),
        _ => None,
    }
}

pub fn inhabit(sys: System, ty: &Type, bounds: &InhBounds) -> InhResult {
    Prover::new(sys, *bounds).inhabit(ty)
}

pub fn inhabit_env(sys: System, env: &Env, bounds: &InhBounds) -> BTreeMap<Name, InhResult> {
    Prover::new(sys, *bounds).inhabit_env(env)
}

pub fn testable(sys: System, typing: &Typing, bounds: &InhBounds) -> Testability {
    Prover::new(sys, *bounds).testable(typing)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> Type {
        Type::parse(s)
    }

    fn witness(sys: System, s: &str) -> Term {
        match inhabit(sys, &ty(s), &InhBounds::default()) {
            InhResult::Inhabited { witness, derivations } => {
                for d in &derivations {
                    check_derivation(d).unwrap();
                    assert!(d.env.is_empty());
                    assert_eq!(d.term, witness);
                }
                witness
            }
            r => panic!("{s}: {r:?}"),
        }
    }

    #[test]
    fn canonical_witnesses() {
        assert_eq!(witness(System::B, "[]"), Term::parse("!(\\z.z)"));
        assert_eq!(witness(System::B, "[a]->[a]"), Term::parse("\\x.!x"));
        assert_eq!(witness(System::B, "[[]]"), Term::parse("!!(\\z.z)"));
        assert_eq!(witness(System::B, "[a]->a"), Term::parse("\\x.x"));
        assert_eq!(witness(System::N, "[[a]->a]->[a]->a"), Term::parse("\\x.x"));
        assert_eq!(witness(System::N, "[a]->a"), Term::parse("\\x.x"));
        assert_eq!(witness(System::V, "[]"), Term::parse("\\z.z"));
        assert_eq!(witness(System::B, "[[a]->[a], [b]->[b]]"), Term::parse("!(\\x.!x)"));
        witness(System::B, "[[[a]]->a]");
        witness(System::B, "[[]->[]]");
        witness(System::V, "[[a]->[a]]");
    }

    #[test]
    fn shape_refutations() {
        let b = InhBounds::default();
        let no = |sys, s: &str| matches!(inhabit(sys, &ty(s), &b), InhResult::NotInhabited { .. });
        assert!(no(System::B, "[[a]->b, [a]]"));
        assert!(matches!(
            refute(System::B, &ty("[[a]->b, [a]]")),
            Some(Refutation::Conflict { .. })
        ));
        assert!(no(System::B, "a"));
        assert!(no(System::B, "[a]"));
        assert!(no(System::B, "[]->a"));
        assert!(no(System::N, "[]"));
        assert!(no(System::V, "[a]->[a]"));
        assert!(!no(System::B, "[a]->a"));
    }

    #[test]
    fn environments() {
        let b = InhBounds::default();
        assert!(inhabit_env(System::B, &Env::empty(), &b).is_empty());
        let r = inhabit_env(System::B, &Env::parse("x:[[a]->b, [a]]").unwrap(), &b);
        assert!(matches!(r["x"], InhResult::NotInhabited { .. }));
        let r = inhabit_env(System::N, &Env::parse("x:[[a]->a, [b]->b]").unwrap(), &b);
        assert_eq!(r["x"].witness(), Some(&Term::parse("\\x.x")));
    }

    #[test]
    fn testability() {
        let b = InhBounds::default();
        let t = |env: &str, s: &str| Typing::new(Env::parse(env).unwrap(), ty(s));
        assert!(matches!(testable(System::B, &t("", "[]"), &b), Testability::Yes { .. }));
        assert!(matches!(testable(System::B, &t("", "[[a]->b, [a]]->b"), &b), Testability::No { .. }));
        assert!(matches!(testable(System::B, &t("x:[]", "[a]->[a]"), &b), Testability::No { .. }));
        match testable(System::B, &t("x:[[]->[]]", "[[]]->[]"), &b) {
            Testability::Yes { witnesses } => {
                assert_eq!(witnesses.args.len(), 1);
                assert_eq!(witnesses.args[0].0, Term::parse("!!(\\z.z)"));
                assert!(witnesses.env.contains_key("x"));
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn larger_bounds_keep_witnesses() {
        let small = InhBounds { size: 5, width: 8 };
        for s in ["[]", "[a]->[a]", "[[]]", "[a]->a", "[[]->[]]", "[[a]->b]->[a]->b"] {
            let r = inhabit(System::B, &ty(s), &small);
            if r.is_inhabited() {
                assert!(inhabit(System::B, &ty(s), &InhBounds::default()).is_inhabited(), "{s}");
            }
        }
    }
}
