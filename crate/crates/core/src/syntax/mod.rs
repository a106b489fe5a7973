//! Terms of the bang calculus, binders, substitution and generation.
//!
//! Bound variables are de Bruijn indices and free variables are names, so two
//! alpha-equivalent terms are structurally equal. Binder names are kept only as
//! printing hints and are ignored by `==` and hashing.

mod ctx;
mod gen;
mod named;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use ctx::{Ctx, CtxError, CtxKind};
pub use gen::{enum_cterms, enum_terms, gen_cterm, gen_term, Profile};
pub use named::NTerm;
pub use parse::{parse_term, ParseError};

/// Variable names. Cheap to clone and shareable across threads.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// A term. `Abs` and `Sub` bind index 0 in their body.
#[derive(Clone, Debug)]
pub enum Term {
    Bound(u32),
    Free(Name),
    Abs(Name, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    /// The closure `body[x<-arg]`.
    Sub(Arc<Term>, Name, Arc<Term>),
    Bang(Arc<Term>),
    Der(Arc<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        use Term::*;
        match (self, other) {
            (Bound(i), Bound(j)) => i == j,
            (Free(x), Free(y)) => x == y,
            (Abs(_, a), Abs(_, b)) => same(a, b),
            (App(a, b), App(c, d)) => same(a, c) && same(b, d),
            (Sub(a, _, b), Sub(c, _, d)) => same(a, c) && same(b, d),
            (Bang(a), Bang(b)) | (Der(a), Der(b)) => same(a, b),
            _ => false,
        }
    }
}

fn same(a: &Arc<Term>, b: &Arc<Term>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, h: &mut H) {
        match self {
            Term::Bound(i) => {
                0u8.hash(h);
                i.hash(h)
            }
            Term::Free(x) => {
                1u8.hash(h);
                x.hash(h)
            }
            Term::Abs(_, b) => {
                2u8.hash(h);
                b.hash(h)
            }
            Term::App(a, b) => {
                3u8.hash(h);
                a.hash(h);
                b.hash(h)
            }
            Term::Sub(a, _, b) => {
                4u8.hash(h);
                a.hash(h);
                b.hash(h)
            }
            Term::Bang(a) => {
                5u8.hash(h);
                a.hash(h)
            }
            Term::Der(a) => {
                6u8.hash(h);
                a.hash(h)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Free(name(x))
    }

    /// `\x.body`, binding the free occurrences of `x` in `body`.
    pub fn abs(x: &str, body: Term) -> Term {
        Term::Abs(name(x), Arc::new(close(&body, x)))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    /// `body[x<-arg]`, binding the free occurrences of `x` in `body`.
    pub fn sub(body: Term, x: &str, arg: Term) -> Term {
        Term::Sub(Arc::new(close(&body, x)), name(x), Arc::new(arg))
    }

    pub fn bang(t: Term) -> Term {
        Term::Bang(Arc::new(t))
    }

    pub fn der(t: Term) -> Term {
        Term::Der(Arc::new(t))
    }

    /// Left-nested application `f a1 ... an`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// Parse, panicking on malformed input. Meant for tests and fixed corpora.
    pub fn parse(src: &str) -> Term {
        match parse_term(src) {
            Ok(t) => t,
            Err(e) => panic!("bad term {src:?}: {e}"),
        }
    }

    pub fn children(&self) -> Vec<&Arc<Term>> {
        match self {
            Term::Bound(_) | Term::Free(_) => vec![],
            Term::Abs(_, b) | Term::Bang(b) | Term::Der(b) => vec![b],
            Term::App(a, b) | Term::Sub(a, _, b) => vec![a, b],
        }
    }

    /// Number of constructors; variables count 1.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn is_abs(&self) -> bool {
        matches!(self, Term::Abs(..))
    }

    pub fn is_bang(&self) -> bool {
        matches!(self, Term::Bang(_))
    }

    /// Variables and abstractions, the values of the call-by-value calculus.
    pub fn is_value(&self) -> bool {
        matches!(self, Term::Bound(_) | Term::Free(_) | Term::Abs(..))
    }

    /// True when no node is a `Bang` or a `Der`.
    pub fn is_cterm(&self) -> bool {
        match self {
            Term::Bang(_) | Term::Der(_) => false,
            _ => self.children().iter().all(|c| c.is_cterm()),
        }
    }

    /// True when every de Bruijn index is bound by an enclosing binder.
    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &Term, depth: u32) -> bool {
            match t {
                Term::Bound(i) => *i < depth,
                Term::Free(_) => true,
                Term::Abs(_, b) | Term::Bang(b) | Term::Der(b) => {
                    go(b, depth + matches!(t, Term::Abs(..)) as u32)
                }
                Term::App(a, b) => go(a, depth) && go(b, depth),
                Term::Sub(a, _, b) => go(a, depth + 1) && go(b, depth),
            }
        }
        go(self, 0)
    }

    /// Subterm at a root-to-node path of child indices.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            cur = cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Replace the subterm at `path`. Loose indices in `new` must match the depth.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => {
                let r = |c: &Arc<Term>| Arc::new(c.replace_at(rest, new.clone()));
                match (self, i) {
                    (Term::Abs(x, b), 0) => Term::Abs(x.clone(), r(b)),
                    (Term::Bang(b), 0) => Term::Bang(r(b)),
                    (Term::Der(b), 0) => Term::Der(r(b)),
                    (Term::App(a, b), 0) => Term::App(r(a), b.clone()),
                    (Term::App(a, b), 1) => Term::App(a.clone(), r(b)),
                    (Term::Sub(a, x, b), 0) => Term::Sub(r(a), x.clone(), b.clone()),
                    (Term::Sub(a, x, b), 1) => Term::Sub(a.clone(), x.clone(), r(b)),
                    _ => panic!("invalid path"),
                }
            }
        }
    }
}

/// Rebuild a node with new children, keeping binder hints.
fn rebuild(t: &Term, kids: Vec<Arc<Term>>) -> Term {
    let mut k = kids.into_iter();
    let mut next = || k.next().expect("arity");
    match t {
        Term::Bound(_) | Term::Free(_) => t.clone(),
        Term::Abs(x, _) => Term::Abs(x.clone(), next()),
        Term::Bang(_) => Term::Bang(next()),
        Term::Der(_) => Term::Der(next()),
        Term::App(..) => {
            let a = next();
            Term::App(a, next())
        }
        Term::Sub(_, x, _) => {
            let a = next();
            Term::Sub(a, x.clone(), next())
        }
    }
}

/// Binder depth added when entering child `i` of `t`.
fn binds(t: &Term, i: usize) -> u32 {
    match t {
        Term::Abs(..) => 1,
        Term::Sub(..) if i == 0 => 1,
        _ => 0,
    }
}

/// Generic structural map. `leaf` returns `Some` to replace a variable node at
/// the given depth; untouched subterms are shared.
fn map_leaves(t: &Arc<Term>, depth: u32, leaf: &dyn Fn(&Term, u32) -> Option<Term>) -> Option<Arc<Term>> {
    match &**t {
        Term::Bound(_) | Term::Free(_) => leaf(t, depth).map(Arc::new),
        _ => {
            let kids = t.children();
            let mapped: Vec<Option<Arc<Term>>> = kids
                .iter()
                .enumerate()
                .map(|(i, c)| map_leaves(c, depth + binds(t, i), leaf))
                .collect();
            if mapped.iter().all(Option::is_none) {
                return None;
            }
            let new = mapped
                .into_iter()
                .zip(kids)
                .map(|(m, c)| m.unwrap_or_else(|| c.clone()))
                .collect();
            Some(Arc::new(rebuild(t, new)))
        }
    }
}

fn apply_leaves(t: &Term, leaf: &dyn Fn(&Term, u32) -> Option<Term>) -> Term {
    let a = Arc::new(t.clone());
    match map_leaves(&a, 0, leaf) {
        Some(r) => (*r).clone(),
        None => t.clone(),
    }
}

/// Add `d` to every index `>= cutoff`.
pub fn shift(t: &Term, d: u32, cutoff: u32) -> Term {
    if d == 0 {
        return t.clone();
    }
    apply_leaves(t, &|v, depth| match v {
        Term::Bound(i) if *i >= cutoff + depth => Some(Term::Bound(i + d)),
        _ => None,
    })
}

/// Substitute `u` for index 0 of a binder body, lowering the other loose indices.
/// `u` lives in the context outside the binder.
pub fn instantiate(body: &Term, u: &Term) -> Term {
    apply_leaves(body, &|v, depth| match v {
        Term::Bound(i) if *i == depth => Some(shift(u, depth, 0)),
        Term::Bound(i) if *i > depth => Some(Term::Bound(i - 1)),
        _ => None,
    })
}

/// Turn the free name `x` into index 0 of a new binder.
pub fn close(t: &Term, x: &str) -> Term {
    apply_leaves(t, &|v, depth| match v {
        Term::Bound(i) if *i >= depth => Some(Term::Bound(i + 1)),
        Term::Free(y) if &**y == x => Some(Term::Bound(depth)),
        _ => None,
    })
}

/// Instantiate a binder body with the free name `x`.
pub fn open(body: &Term, x: &str) -> Term {
    instantiate(body, &Term::var(x))
}

/// Capture-avoiding meta-level substitution `t{x:=u}`.
pub fn msubst(t: &Term, x: &str, u: &Term) -> Term {
    apply_leaves(t, &|v, depth| match v {
        Term::Free(y) if &**y == x => Some(shift(u, depth, 0)),
        _ => None,
    })
}

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    fn go(t: &Term, out: &mut BTreeSet<Name>) {
        match t {
            Term::Free(x) => {
                out.insert(x.clone());
            }
            _ => t.children().iter().for_each(|c| go(c, out)),
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut out);
    out
}

pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u
}

/// First name among `base, base1, base2, ...` not rejected by `taken`.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    if !taken(stem) {
        return stem.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !taken(n))
        .expect("infinite supply")
}

/// Decompose `t = L<core>` with the maximal list context `L`.
/// Returns the closures from outermost to innermost and the core.
pub fn peel_list(t: &Term) -> (Vec<(&Name, &Arc<Term>)>, &Term) {
    let mut cl = Vec::new();
    let mut cur = t;
    while let Term::Sub(b, x, a) = cur {
        cl.push((x, a));
        cur = b;
    }
    (cl, cur)
}

/// Rewrap `core` (living under the closures) in the closures, outermost first.
pub fn wrap_list(closures: &[(&Name, &Arc<Term>)], core: Term) -> Term {
    closures
        .iter()
        .rev()
        .fold(core, |acc, (x, a)| Term::Sub(Arc::new(acc), (*x).clone(), (*a).clone()))
}

/// `Some((L, s))` when `t = L<!s>` for the maximal list context `L`.
/// Names in `s` bound by `L` appear free, so plugging `!s` into `L` gives back `t`.
pub fn match_list_bang(t: &Term) -> Option<(Ctx, Term)> {
    fn split(n: &NTerm) -> Option<(NTerm, NTerm)> {
        match n {
            NTerm::Bang { t } => Some((NTerm::Hole, (**t).clone())),
            NTerm::Sub { body, x, arg } => {
                let (c, s) = split(body)?;
                Some((NTerm::Sub { body: Box::new(c), x: x.clone(), arg: arg.clone() }, s))
            }
            _ => None,
        }
    }
    let (spine, s) = split(&NTerm::from_term(t))?;
    let ctx = Ctx::new(CtxKind::List, spine).expect("list context");
    Some((ctx, s.to_term().expect("no hole")))
}

pub fn print_term(t: &Term) -> String {
    NTerm::from_term(t).to_string()
}

/// The identity `\z.z`.
pub fn id_term() -> Term {
    Term::parse("\\z.z")
}

/// `\x.x !x`.
pub fn delta() -> Term {
    Term::parse("\\x.x !x")
}

/// `(\x.x !x) !(\x.x !x)`.
pub fn omega() -> Term {
    Term::app(delta(), Term::bang(delta()))
}

/// Serde helper writing a term as its printed text.
pub mod term_text {
    use super::{parse_term, print_term, Term};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&print_term(t))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Term, D::Error> {
        let s = String::deserialize(d)?;
        parse_term(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_equivalence_is_structural() {
        assert_eq!(Term::parse("\\x.x"), Term::parse("\\y.y"));
        assert_eq!(Term::parse("\\x.x y"), Term::parse("\\z.z y"));
        assert_ne!(Term::parse("\\x.x"), Term::parse("\\x.y"));
    }

    #[test]
    fn free_variables() {
        let fv = |s| free_vars(&Term::parse(s)).iter().map(|n| n.to_string()).collect::<Vec<_>>();
        assert!(fv("\\x.x !x").is_empty());
        assert_eq!(fv("x[x<-!y]"), vec!["y"]);
        assert_eq!(fv("x !x"), vec!["x"]);
    }

    #[test]
    fn meta_substitution() {
        let i = id_term();
        assert_eq!(msubst(&Term::parse("x !x"), "x", &i), Term::app(i.clone(), Term::bang(i)));
        let r = msubst(&Term::parse("\\y.x"), "x", &Term::var("y"));
        assert_eq!(r, Term::parse("\\w.y"));
        assert_eq!(print_term(&r), "\\y1.y");
        assert_eq!(
            msubst(&Term::parse("y[y<-x]"), "x", &Term::parse("!z")),
            Term::parse("y[y<-!z]")
        );
    }

    #[test]
    fn open_close_roundtrip() {
        let t = Term::parse("\\x.x (y !x)");
        if let Term::Abs(_, b) = &t {
            let o = open(b, "q");
            assert_eq!(Term::abs("q", o), t);
        }
    }

    #[test]
    fn list_bang_matching() {
        let (l, s) = match_list_bang(&Term::parse("(!s)[y<-w]")).unwrap();
        assert_eq!(l.to_string(), "[][y<-w]");
        assert_eq!(s, Term::var("s"));
        assert!(match_list_bang(&Term::parse("\\x.!x")).is_none());
        let (l, s) = match_list_bang(&Term::parse("!s")).unwrap();
        assert_eq!(l.to_string(), "[]");
        assert_eq!(s, Term::var("s"));
    }

    #[test]
    fn list_bang_matching_keeps_bindings() {
        let t = Term::parse("(!(y w))[y<-w]");
        let (l, s) = match_list_bang(&t).unwrap();
        assert_eq!(l.plug(&Term::bang(s)), t);
    }
}
