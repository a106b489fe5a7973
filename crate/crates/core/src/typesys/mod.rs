//! Quantitative type systems: B for the bang calculus, N and V for its
//! call-by-name and call-by-value fragments.

mod deriv;
mod engine;
mod types;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use deriv::{check_derivation, Derivation, Rule, RuleViolation};
pub use types::{
    args, env_sum, multisets_upto, parse_type, pool_name, universe, Bounds, Env, Multitype, System, Type, TypeParseError,
    Typing,
};

use crate::reduction::{classify, grammar_class, normalize, Closure, NfClass};
use crate::syntax::Term;
use engine::Engine;

/// Guesses of unknown cardinalities go this far past the card bound.
pub const GUESS_SLACK: usize = 1;

/// Guess cap used when no conclusion bounds apply.
pub const OPEN_GUESS_CAP: usize = 3;

fn engine(sys: System, t: &Term, bounds: &Bounds) -> Engine {
    Engine::new(sys, t, bounds.card, Some(bounds.depth), bounds.card + GUESS_SLACK)
}

/// Canonical typings within `bounds`, each with the symbolic solution and
/// assignment producing it.
fn typing_search(sys: System, t: &Term, bounds: &Bounds, want_derivations: bool) -> BTreeMap<Typing, Option<Derivation>> {
    let e = engine(sys, t, bounds);
    let uni = universe(bounds);
    let mut out: BTreeMap<Typing, Option<Derivation>> = BTreeMap::new();
    for sol in e.search(t, None, usize::MAX) {
        engine::groundings(&sol, bounds, &uni, |typing, assign| {
            let map = typing.canonical_renaming();
            let canon = typing.rename(&map);
            if out.contains_key(&canon) {
                return;
            }
            let d = want_derivations.then(|| engine::ground_solution(sys, &sol, assign).rename_tvars(&map));
            out.insert(canon, d);
        });
    }
    out
}

/// One derivation per typing (up to renaming of type variables) whose
/// conclusion respects `bounds`, sorted by typing.
pub fn typings_enumerate(sys: System, t: &Term, bounds: &Bounds) -> Vec<Derivation> {
    typing_search(sys, t, bounds, true).into_values().flatten().collect()
}

/// The canonical typings of `t` within `bounds`.
pub fn typing_set(sys: System, t: &Term, bounds: &Bounds) -> BTreeSet<Typing> {
    typing_search(sys, t, bounds, false).into_keys().collect()
}

/// Some derivation of `t`, with no bound on its conclusion.
pub fn some_derivation(sys: System, t: &Term) -> Option<Derivation> {
    let e = Engine::new(sys, t, usize::MAX, None, OPEN_GUESS_CAP);
    let sol = e.search(t, None, 1).pop()?;
    Some(engine::ground_solution(sys, &sol, &BTreeMap::new()))
}

/// Typability found by derivation search with no conclusion bounds.
pub fn typable_by_enumeration(sys: System, t: &Term) -> bool {
    some_derivation(sys, t).is_some()
}

/// A derivation of exactly `env |- t : ty`, if the search finds one.
pub fn derive(sys: System, t: &Term, typing: &Typing) -> Option<Derivation> {
    let e = Engine::new(sys, t, usize::MAX, None, OPEN_GUESS_CAP.max(typing_card(typing)));
    for sol in e.search(t, Some(&typing.ty), usize::MAX) {
        if let Some(s) = e.match_env(sol, &typing.env).into_iter().next() {
            let d = engine::ground_solution(sys, &s, &BTreeMap::new());
            if d.env == typing.env && d.ty == typing.ty {
                return Some(d);
            }
        }
    }
    None
}

fn typing_card(t: &Typing) -> usize {
    t.env.iter().map(|(_, m)| m.len()).chain([t.ty.max_card()]).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Typability {
    /// Reaches a clash-free surface normal form.
    Yes { normal_form: Term },
    /// Reaches a surface normal form containing a clash.
    No { normal_form: Term },
    Unknown,
}

/// B-typability decided through surface normalization.
pub fn typable(t: &Term, fuel: usize) -> Typability {
    let out = normalize(t, Closure::Surface, fuel);
    match out.normal_form() {
        Some(n) if classify(n) == NfClass::NoS => Typability::Yes { normal_form: n.clone() },
        Some(n) => Typability::No { normal_form: n.clone() },
        None => Typability::Unknown,
    }
}

/// Whether `t` and `u` have the same B-typings within `bounds`.
pub fn typing_transport_check(t: &Term, u: &Term, bounds: &Bounds) -> bool {
    typing_set(System::B, t, bounds) == typing_set(System::B, u, bounds)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NfShape {
    MustBang,
    MustAbs,
    /// The term is not a clash-free surface normal form of the required
    /// kind, so nothing is claimed.
    NotClosedNf,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("closed normal form {term} typed {ty} is not of shape {expected:?}")]
pub struct ShapeViolation {
    pub expected: NfShape,
    pub term: String,
    pub ty: String,
}

/// A clash-free surface normal form that is neither neutral nor a closure,
/// typed by an arrow, is an abstraction; typed by anything else, a bang.
pub fn nf_shape(ty: &Type, t: &Term) -> Result<NfShape, ShapeViolation> {
    let neutral = grammar_class(t) == Some(NfClass::NeS);
    if classify(t) != NfClass::NoS || neutral || matches!(t, Term::Sub(..)) {
        return Ok(NfShape::NotClosedNf);
    }
    let expected = if ty.is_arrow() { NfShape::MustAbs } else { NfShape::MustBang };
    let ok = match expected {
        NfShape::MustAbs => t.is_abs(),
        _ => t.is_bang(),
    };
    if ok {
        Ok(expected)
    } else {
        Err(ShapeViolation { expected, term: t.to_string(), ty: ty.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::omega;

    fn b() -> Bounds {
        Bounds::default()
    }

    fn typing(env: &str, ty: &str) -> Typing {
        Typing::new(Env::parse(env).unwrap(), Type::parse(ty))
    }

    /// Swap `a` and `b` everywhere.
    fn swap(t: &Type) -> Type {
        t.rename(&|x| crate::syntax::name(match &**x {
            "a" => "b",
            "b" => "a",
            o => o,
        }))
    }

    #[test]
    fn variable_typings_are_the_universe_up_to_renaming() {
        let all: Vec<Type> = universe(&b()).into_iter().flatten().collect();
        let fixed = all.iter().filter(|t| swap(t) == **t).count();
        let orbits = (all.len() + fixed) / 2;
        let set = typing_set(System::B, &Term::var("x"), &b());
        assert_eq!(set.len(), orbits);
        assert_eq!(orbits, 167);
    }

    #[test]
    fn self_application_has_the_conflicting_shape() {
        let ds = typings_enumerate(System::B, &Term::parse("x x"), &b());
        assert!(!ds.is_empty());
        assert!(ds.iter().any(|d| d.typing() == typing("x:[[a]->b, [a]]", "b")));
        for d in &ds {
            check_derivation(d).unwrap();
            let m = d.env.get("x");
            assert_eq!(m.len(), 2);
            let ok = m.items().iter().any(|s| match s {
                Type::Arrow(dom, cod) => **cod == d.ty && m.items().contains(&Type::Multi(dom.clone())),
                _ => false,
            });
            assert!(ok, "{}", d.typing());
        }
    }

    #[test]
    fn bang_without_premises() {
        let set = typing_set(System::B, &Term::parse("!u"), &b());
        assert!(set.contains(&typing("", "[]")));
        let set = typing_set(System::B, &Term::parse("!(der !x x)"), &b());
        assert!(set.contains(&typing("", "[]")));
        assert!(typings_enumerate(System::B, &omega(), &b()).is_empty());
        assert!(!typable_by_enumeration(System::B, &omega()));
    }

    #[test]
    fn bang_abstraction_typings() {
        let set = typing_set(System::B, &Term::parse("\\x.!x"), &b());
        assert!(set.contains(&typing("", "[a]->[a]")));
        assert!(set.contains(&typing("", "[]->[]")));
        assert!(!set.contains(&typing("", "[a]->[]")));
    }

    #[test]
    fn enumerated_derivations_check() {
        for src in ["\\x.x !x", "(\\z.z) !!u", "z[z<-!!u]", "der !x", "x !(y z)", "(x x)[x<-!y]", "\\x.der x (der x)"] {
            let t = Term::parse(src);
            for d in typings_enumerate(System::B, &t, &b()) {
                check_derivation(&d).unwrap_or_else(|e| panic!("{src}: {e}\n{}", d.pretty()));
                assert_eq!(d.term, t);
                assert!(d.typing().within(&b()));
            }
        }
    }

    #[test]
    fn typability_by_normal_forms() {
        assert!(matches!(typable(&Term::parse("x x"), 100), Typability::Yes { .. }));
        assert!(matches!(typable(&Term::parse("!s u"), 100), Typability::No { .. }));
        assert_eq!(typable(&omega(), 100), Typability::Unknown);
        assert!(typable_by_enumeration(System::B, &Term::parse("x x")));
        assert!(!typable_by_enumeration(System::B, &Term::parse("!s u")));
    }

    #[test]
    fn transport_examples() {
        let t = |s: &str| Term::parse(s);
        assert!(typing_transport_check(&t("der !x"), &t("x"), &b()));
        assert!(typing_transport_check(&t("(\\z.z) !!u"), &t("z[z<-!!u]"), &b()));
        assert!(typing_transport_check(&t("z[z<-!!u]"), &t("!u"), &b()));
        assert!(typing_transport_check(&t("x y"), &t("x y"), &b()));
    }

    #[test]
    fn fragment_systems() {
        let i = Term::parse("\\x.x");
        let ty = typing("", "[[a]->a]->[a]->a");
        let ids = typing_set(System::N, &i, &b());
        assert!(ids.contains(&typing("", "[a]->a")));
        assert!(!ids.contains(&typing("", "[a, a]->a")));
        let d = derive(System::N, &i, &ty).unwrap();
        check_derivation(&d).unwrap();
        let v = typing_set(System::V, &Term::parse("\\x.u"), &b());
        assert!(v.contains(&typing("", "[]")));
        let xy = typing_set(System::V, &Term::parse("x y"), &b());
        assert!(xy.contains(&typing("x:[[]->a]", "a")));
        assert!(typing_set(System::N, &Term::parse("!x"), &b()).is_empty());
        for sys in [System::N, System::V] {
            for d in typings_enumerate(sys, &Term::parse("(\\x.x x) y"), &b()) {
                check_derivation(&d).unwrap();
            }
        }
    }

    #[test]
    fn exact_derivations() {
        let d = derive(System::B, &Term::parse("x x"), &typing("x:[[a]->b, [a]]", "b")).unwrap();
        check_derivation(&d).unwrap();
        assert!(derive(System::B, &Term::parse("x x"), &typing("x:[[a]->b]", "b")).is_none());
        let d = derive(System::B, &Term::parse("\\x.x x"), &typing("", "[[a]->b, [a]]->b")).unwrap();
        check_derivation(&d).unwrap();
    }

    #[test]
    fn closed_normal_form_shapes() {
        let t = |s: &str| Term::parse(s);
        assert_eq!(nf_shape(&Type::parse("[]"), &t("!u")), Ok(NfShape::MustBang));
        assert_eq!(nf_shape(&Type::parse("[a]->[a]"), &t("\\x.!x")), Ok(NfShape::MustAbs));
        assert!(nf_shape(&Type::parse("[]"), &t("\\x.x")).is_err());
        assert_eq!(nf_shape(&Type::parse("[]"), &t("x")), Ok(NfShape::NotClosedNf));
    }
}
