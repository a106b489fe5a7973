//! Named syntax trees: printing, JSON encoding and context spines.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{fresh_name, free_vars, Name, Term};

/// A term with named binders and an optional hole.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "k", rename_all = "lowercase")]
pub enum NTerm {
    Var { x: String },
    Abs { x: String, body: Box<NTerm> },
    App { fun: Box<NTerm>, arg: Box<NTerm> },
    Sub { body: Box<NTerm>, x: String, arg: Box<NTerm> },
    Bang { t: Box<NTerm> },
    Der { t: Box<NTerm> },
    Hole,
}

impl NTerm {
    /// Name every binder, avoiding capture and shadowing.
    pub fn from_term(t: &Term) -> NTerm {
        let free: BTreeSet<String> = free_vars(t).iter().map(|n| n.to_string()).collect();
        let mut scope = Vec::new();
        go(t, &free, &mut scope)
    }

    /// Resolve names against enclosing binders. Fails on a hole.
    pub fn to_term(&self) -> Option<Term> {
        fn go(n: &NTerm, scope: &mut Vec<String>) -> Option<Term> {
            Some(match n {
                NTerm::Hole => return None,
                NTerm::Var { x } => match scope.iter().rev().position(|s| s == x) {
                    Some(k) => Term::Bound(k as u32),
                    None => Term::Free(Name::from(x.as_str())),
                },
                NTerm::Abs { x, body } => {
                    scope.push(x.clone());
                    let b = go(body, scope);
                    scope.pop();
                    Term::Abs(Name::from(x.as_str()), Arc::new(b?))
                }
                NTerm::App { fun, arg } => Term::App(Arc::new(go(fun, scope)?), Arc::new(go(arg, scope)?)),
                NTerm::Sub { body, x, arg } => {
                    let a = go(arg, scope)?;
                    scope.push(x.clone());
                    let b = go(body, scope);
                    scope.pop();
                    Term::Sub(Arc::new(b?), Name::from(x.as_str()), Arc::new(a))
                }
                NTerm::Bang { t } => Term::Bang(Arc::new(go(t, scope)?)),
                NTerm::Der { t } => Term::Der(Arc::new(go(t, scope)?)),
            })
        }
        go(self, &mut Vec::new())
    }

    pub fn count_holes(&self) -> usize {
        match self {
            NTerm::Hole => 1,
            NTerm::Var { .. } => 0,
            NTerm::Abs { body: t, .. } | NTerm::Bang { t } | NTerm::Der { t } => t.count_holes(),
            NTerm::App { fun: a, arg: b } | NTerm::Sub { body: a, arg: b, .. } => a.count_holes() + b.count_holes(),
        }
    }

    /// Replace the hole by `t`.
    pub fn fill(&self, t: &NTerm) -> NTerm {
        let f = |c: &NTerm| Box::new(c.fill(t));
        match self {
            NTerm::Hole => t.clone(),
            NTerm::Var { .. } => self.clone(),
            NTerm::Abs { x, body } => NTerm::Abs { x: x.clone(), body: f(body) },
            NTerm::App { fun, arg } => NTerm::App { fun: f(fun), arg: f(arg) },
            NTerm::Sub { body, x, arg } => NTerm::Sub { body: f(body), x: x.clone(), arg: f(arg) },
            NTerm::Bang { t: a } => NTerm::Bang { t: f(a) },
            NTerm::Der { t: a } => NTerm::Der { t: f(a) },
        }
    }

    pub fn var(x: &str) -> NTerm {
        NTerm::Var { x: x.to_string() }
    }
}

fn go(t: &Term, free: &BTreeSet<String>, scope: &mut Vec<String>) -> NTerm {
    let binder = |hint: &Name, scope: &Vec<String>| {
        fresh_name(hint, |n| free.contains(n) || scope.iter().any(|s| s == n))
    };
    match t {
        Term::Bound(i) => {
            let k = scope.len().checked_sub(1 + *i as usize).expect("loose index");
            NTerm::Var { x: scope[k].clone() }
        }
        Term::Free(x) => NTerm::Var { x: x.to_string() },
        Term::Abs(h, b) => {
            let x = binder(h, scope);
            scope.push(x.clone());
            let body = go(b, free, scope);
            scope.pop();
            NTerm::Abs { x, body: Box::new(body) }
        }
        Term::App(a, b) => NTerm::App { fun: Box::new(go(a, free, scope)), arg: Box::new(go(b, free, scope)) },
        Term::Sub(b, h, a) => {
            let arg = go(a, free, scope);
            let x = binder(h, scope);
            scope.push(x.clone());
            let body = go(b, free, scope);
            scope.pop();
            NTerm::Sub { body: Box::new(body), x, arg: Box::new(arg) }
        }
        Term::Bang(a) => NTerm::Bang { t: Box::new(go(a, free, scope)) },
        Term::Der(a) => NTerm::Der { t: Box::new(go(a, free, scope)) },
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Top,
    Fun,
    Prefix,
    Postfix,
}

fn write(n: &NTerm, lvl: Level, out: &mut String) {
    let needs = match n {
        NTerm::Abs { .. } => lvl > Level::Top,
        NTerm::App { .. } => lvl > Level::Fun,
        NTerm::Bang { .. } | NTerm::Der { .. } => lvl > Level::Prefix,
        _ => false,
    };
    if needs {
        out.push('(');
        write(n, Level::Top, out);
        out.push(')');
        return;
    }
    match n {
        NTerm::Hole => out.push_str("[]"),
        NTerm::Var { x } => out.push_str(x),
        NTerm::Abs { x, body } => {
            out.push('\\');
            out.push_str(x);
            out.push('.');
            write(body, Level::Top, out);
        }
        NTerm::App { fun, arg } => {
            write(fun, Level::Fun, out);
            out.push(' ');
            write(arg, Level::Prefix, out);
        }
        NTerm::Sub { body, x, arg } => {
            write(body, Level::Postfix, out);
            out.push('[');
            out.push_str(x);
            out.push_str("<-");
            write(arg, Level::Top, out);
            out.push(']');
        }
        NTerm::Bang { t } => {
            out.push('!');
            write(t, Level::Prefix, out);
        }
        NTerm::Der { t } => {
            out.push_str("der ");
            write(t, Level::Prefix, out);
        }
    }
}

impl fmt::Display for NTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write(self, Level::Top, &mut s);
        f.write_str(&s)
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NTerm::from_term(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        NTerm::deserialize(d)?
            .to_term()
            .ok_or_else(|| serde::de::Error::custom("hole in term"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{omega, print_term};

    #[test]
    fn printing() {
        assert_eq!(print_term(&Term::parse("!y")), "!y");
        assert_eq!(print_term(&Term::parse("der !x")), "der !x");
        assert_eq!(print_term(&omega()), "(\\x.x !x) !(\\x.x !x)");
        assert_eq!(print_term(&Term::parse("!(der !y)")), "!der !y");
        assert_eq!(print_term(&Term::parse("(x y)[y<-z] (\\w.w)")), "(x y)[y<-z] (\\w.w)");
        assert_eq!(print_term(&Term::parse("!x[y<-z]")), "!x[y<-z]");
        assert_eq!(print_term(&Term::parse("(!x)[y<-z]")), "(!x)[y<-z]");
    }

    #[test]
    fn shadowing_is_renamed() {
        let t = Term::parse("\\x.\\y.x");
        let inner = Term::parse("\\x.x");
        let u = Term::Abs(Name::from("x"), std::sync::Arc::new(Term::Abs(Name::from("x"), std::sync::Arc::new(Term::Bound(1)))));
        assert_eq!(u, t);
        assert_eq!(print_term(&u), "\\x.\\x1.x");
        assert_eq!(print_term(&inner), "\\x.x");
    }

    #[test]
    fn json_roundtrip() {
        let t = Term::parse("(\\x.x)[y<-w] !z");
        let j = serde_json::to_string(&t).unwrap();
        assert!(j.contains("\"k\":\"sub\""));
        let back: Term = serde_json::from_str(&j).unwrap();
        assert_eq!(back, t);
    }
}
