//! Derivation trees and their rule-by-rule checker.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::types::{env_sum, Env, Multitype, System, Type};
use crate::syntax::{free_vars, open, Name, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Var,
    Abs,
    App,
    Es,
    Bang,
    Der,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Var => "var",
            Rule::Abs => "abs",
            Rule::App => "app",
            Rule::Es => "es",
            Rule::Bang => "bang",
            Rule::Der => "der",
        };
        f.write_str(s)
    }
}

/// A derivation with conclusion `env |- term : ty`. Binding rules record the
/// name their premises use for the bound variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub system: System,
    pub rule: Rule,
    pub env: Env,
    #[serde(with = "crate::syntax::term_text")]
    pub term: Term,
    #[serde(rename = "type")]
    pub ty: Type,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binder: Option<Name>,
    #[serde(default)]
    pub premises: Vec<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule {rule} at node {path:?} ({term}): {msg}")]
pub struct RuleViolation {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: Rule,
    pub term: String,
    pub msg: String,
}

impl Derivation {
    pub fn typing(&self) -> super::Typing {
        super::Typing::new(self.env.clone(), self.ty.clone())
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Every node, root first, with its path.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &Derivation)> {
        fn go<'a>(d: &'a Derivation, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Derivation)>) {
            out.push((path.clone(), d));
            for (i, p) in d.premises.iter().enumerate() {
                path.push(i);
                go(p, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Apply a renaming of type variables to every judgment.
    pub fn rename_tvars(&self, map: &BTreeMap<Name, Name>) -> Derivation {
        let f = |a: &Name| map.get(a).cloned().unwrap_or_else(|| a.clone());
        Derivation {
            system: self.system,
            rule: self.rule,
            env: self.env.rename_tvars(&f),
            term: self.term.clone(),
            ty: self.ty.rename(&f),
            binder: self.binder.clone(),
            premises: self.premises.iter().map(|p| p.rename_tvars(map)).collect(),
        }
    }

    /// Indented tree, conclusion first.
    pub fn pretty(&self) -> String {
        fn go(d: &Derivation, depth: usize, out: &mut String) {
            out.push_str(&format!("{}{} |- {} : {}   ({})\n", "  ".repeat(depth), d.env, d.term, d.ty, d.rule));
            for p in &d.premises {
                go(p, depth + 1, out);
            }
        }
        let mut s = String::new();
        go(self, 0, &mut s);
        s
    }
}

fn premise_envs(ps: &[Derivation]) -> Env {
    env_sum(ps.iter().map(|p| &p.env))
}

fn types_of(ps: &[Derivation]) -> Multitype {
    Multitype::new(ps.iter().map(|p| p.ty.clone()).collect())
}

fn check_node(d: &Derivation) -> Result<(), String> {
    use Rule::*;
    let ps = &d.premises;
    for p in ps {
        if p.system != d.system {
            return Err("premise from another system".into());
        }
    }
    let arity = |n: usize| if ps.len() == n { Ok(()) } else { Err(format!("expected {n} premises, found {}", ps.len())) };
    let env_is = |e: Env| if d.env == e { Ok(()) } else { Err(format!("environment should be {e}")) };
    let binder_ok = |body: &Term, p: &Derivation| -> Result<Name, String> {
        let y = d.binder.clone().ok_or("missing binder name")?;
        if free_vars(&d.term).contains(&y) {
            return Err(format!("binder {y} is free in the subject"));
        }
        if p.term != open(body, &y) {
            return Err("premise subject is not the opened body".into());
        }
        Ok(y)
    };
    match (d.rule, &d.term, d.system) {
        (Var, Term::Free(x), System::V) => {
            arity(0)?;
            let m = d.ty.as_multi().ok_or("variables are typed by multitypes")?;
            env_is(Env::single(x, m.clone()))
        }
        (Var, Term::Free(x), _) => {
            arity(0)?;
            env_is(Env::single(x, Multitype::new(vec![d.ty.clone()])))
        }
        (Abs, Term::Abs(_, body), System::V) => {
            let mut arrows = Vec::new();
            let mut envs = Vec::new();
            for p in ps {
                let y = binder_ok(body, p)?;
                arrows.push(Type::arrow(p.env.get(&y), p.ty.clone()));
                envs.push(p.env.without(&y));
            }
            if d.ty != Type::multi(arrows) {
                return Err("type should gather the premise arrows".into());
            }
            env_is(env_sum(&envs))
        }
        (Abs, Term::Abs(_, body), _) => {
            arity(1)?;
            let y = binder_ok(body, &ps[0])?;
            if d.ty != Type::arrow(ps[0].env.get(&y), ps[0].ty.clone()) {
                return Err("type should be the bound multitype to the body type".into());
            }
            env_is(ps[0].env.without(&y))
        }
        (App, Term::App(f, a), sys) => {
            if ps.is_empty() || ps[0].term != **f {
                return Err("first premise must type the function".into());
            }
            if ps[1..].iter().any(|p| p.term != **a) {
                return Err("argument premises must type the argument".into());
            }
            let dom = match (sys, &ps[0].ty) {
                (System::V, Type::Multi(m)) if m.len() == 1 => match &m.items()[0] {
                    Type::Arrow(dom, cod) if **cod == d.ty => dom.clone(),
                    _ => return Err("function type should be [M->σ]".into()),
                },
                (System::V, _) => return Err("function type should be [M->σ]".into()),
                (_, Type::Arrow(dom, cod)) if **cod == d.ty => dom.clone(),
                _ => return Err("function type should end in the conclusion type".into()),
            };
            if sys == System::N {
                if types_of(&ps[1..]) != dom {
                    return Err("argument family should match the domain".into());
                }
            } else {
                arity(2)?;
                if ps[1].ty != Type::Multi(dom) {
                    return Err("argument type should be the domain".into());
                }
            }
            env_is(premise_envs(ps))
        }
        (Es, Term::Sub(body, _, a), sys) => {
            if ps.is_empty() {
                return Err("missing body premise".into());
            }
            let y = binder_ok(body, &ps[0])?;
            if ps[0].ty != d.ty {
                return Err("body type should be the conclusion type".into());
            }
            if ps[1..].iter().any(|p| p.term != **a) {
                return Err("argument premises must type the argument".into());
            }
            let m = ps[0].env.get(&y);
            if sys == System::N {
                if types_of(&ps[1..]) != m {
                    return Err("argument family should match the bound multitype".into());
                }
            } else {
                arity(2)?;
                if ps[1].ty != Type::Multi(m) {
                    return Err("argument type should be the bound multitype".into());
                }
            }
            env_is(ps[0].env.without(&y).add(&premise_envs(&ps[1..])))
        }
        (Bang, Term::Bang(u), System::B) => {
            if ps.iter().any(|p| p.term != **u) {
                return Err("premises must type the banged term".into());
            }
            if d.ty != Type::Multi(types_of(ps)) {
                return Err("type should gather the premise types".into());
            }
            env_is(premise_envs(ps))
        }
        (Der, Term::Der(u), System::B) => {
            arity(1)?;
            if ps[0].term != **u {
                return Err("premise must type the derelicted term".into());
            }
            if ps[0].ty != Type::multi(vec![d.ty.clone()]) {
                return Err("premise type should be a singleton [σ]".into());
            }
            env_is(ps[0].env.clone())
        }
        (r, _, sys) => Err(format!("rule {r} does not apply to this subject in system {sys}")),
    }
}

/// Check every node against the rule schema of its system.
pub fn check_derivation(d: &Derivation) -> Result<(), RuleViolation> {
    for (path, node) in d.nodes() {
        if let Err(msg) = check_node(node) {
            return Err(RuleViolation { path, rule: node.rule, term: node.term.to_string(), msg });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::name;

    fn leaf(sys: System, x: &str, ty: &str) -> Derivation {
        let ty = Type::parse(ty);
        let env = match (&ty, sys) {
            (Type::Multi(m), System::V) => Env::single(x, m.clone()),
            _ => Env::single(x, Multitype::new(vec![ty.clone()])),
        };
        Derivation { system: sys, rule: Rule::Var, env, term: Term::var(x), ty, binder: None, premises: vec![] }
    }

    pub(crate) fn fig2() -> Derivation {
        let f = leaf(System::B, "x", "[a]->b");
        let a = leaf(System::B, "x", "[a]");
        Derivation {
            system: System::B,
            rule: Rule::App,
            env: Env::parse("x:[[a]->b, [a]]").unwrap(),
            term: Term::parse("x x"),
            ty: Type::parse("b"),
            binder: None,
            premises: vec![f, a],
        }
    }

    pub(crate) fn fig3() -> Derivation {
        let v = leaf(System::B, "x", "a");
        let b = Derivation {
            system: System::B,
            rule: Rule::Bang,
            env: Env::parse("x:[a]").unwrap(),
            term: Term::parse("!x"),
            ty: Type::parse("[a]"),
            binder: None,
            premises: vec![v],
        };
        Derivation {
            system: System::B,
            rule: Rule::Abs,
            env: Env::empty(),
            term: Term::parse("\\x.!x"),
            ty: Type::parse("[a]->[a]"),
            binder: Some(name("x")),
            premises: vec![b],
        }
    }

    #[test]
    fn worked_trees_check() {
        check_derivation(&fig2()).unwrap();
        check_derivation(&fig3()).unwrap();
    }

    #[test]
    fn corrupted_trees_fail() {
        let mut d = fig3();
        d.premises[0].ty = Type::parse("[a, a]");
        let e = check_derivation(&d).unwrap_err();
        assert!(e.path.is_empty() || e.path == vec![0]);
        let mut d = fig2();
        d.env = Env::parse("x:[[a]->b]").unwrap();
        assert_eq!(check_derivation(&d).unwrap_err().path, Vec::<usize>::new());
        let mut d = fig3();
        d.premises[0].premises.push(leaf(System::B, "x", "a"));
        assert_eq!(check_derivation(&d).unwrap_err().path, vec![0]);
    }

    #[test]
    fn json_round_trip() {
        let d = fig3();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"type\":\"[a]->[a]\""));
        let back: Derivation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn other_systems() {
        let d = leaf(System::V, "x", "[]");
        assert_eq!(d.env, Env::empty());
        check_derivation(&d).unwrap();
        let abs = Derivation {
            system: System::V,
            rule: Rule::Abs,
            env: Env::empty(),
            term: Term::parse("\\x.u"),
            ty: Type::parse("[]"),
            binder: None,
            premises: vec![],
        };
        check_derivation(&abs).unwrap();
        let mut bang = fig3().premises[0].clone();
        bang.system = System::N;
        bang.premises[0].system = System::N;
        assert!(check_derivation(&bang).is_err());
    }
}
