//! Surface reduction of the call-by-name and call-by-value calculi.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Calc;
use crate::reduction::{Status, MAX_TERM_SIZE};
use crate::syntax::{instantiate, peel_list, shift, wrap_list, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CRule {
    #[serde(rename = "dB")]
    DB,
    #[serde(rename = "sn")]
    Sn,
    #[serde(rename = "sv")]
    Sv,
}

impl fmt::Display for CRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CRule::DB => "dB",
            CRule::Sn => "sn",
            CRule::Sv => "sv",
        })
    }
}

/// Contract `t` at its root under the rules of `calc`.
pub fn c_contract(calc: Calc, t: &Term) -> Option<(CRule, Term)> {
    match t {
        Term::App(f, u) => {
            let (cl, core) = peel_list(f);
            match core {
                Term::Abs(x, body) => {
                    let arg = shift(u, cl.len() as u32, 0);
                    Some((CRule::DB, wrap_list(&cl, Term::Sub(body.clone(), x.clone(), Arc::new(arg)))))
                }
                _ => None,
            }
        }
        Term::Sub(body, _, a) => match calc {
            Calc::Cbn => Some((CRule::Sn, instantiate(body, a))),
            Calc::Cbv => {
                let (cl, core) = peel_list(a);
                core.is_value().then(|| {
                    let b = shift(body, cl.len() as u32, 1);
                    (CRule::Sv, wrap_list(&cl, instantiate(&b, core)))
                })
            }
        },
        _ => None,
    }
}

/// Children of `t` inside a surface context of `calc`.
fn surface_children(calc: Calc, t: &Term) -> &'static [usize] {
    match (calc, t) {
        (Calc::Cbn, Term::Abs(..) | Term::App(..) | Term::Sub(..)) => &[0],
        (Calc::Cbv, Term::App(..) | Term::Sub(..)) => &[0, 1],
        _ => &[],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CRedex {
    pub position: Vec<usize>,
    pub rule: CRule,
    pub contractum: Term,
}

/// Surface redexes of `t` in leftmost-outermost order.
pub fn c_redexes(calc: Calc, t: &Term) -> Vec<CRedex> {
    fn go(calc: Calc, t: &Term, path: &mut Vec<usize>, out: &mut Vec<CRedex>) {
        if let Some((rule, contractum)) = c_contract(calc, t) {
            out.push(CRedex { position: path.clone(), rule, contractum });
        }
        let kids = t.children();
        for &i in surface_children(calc, t) {
            path.push(i);
            go(calc, kids[i], path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(calc, t, &mut Vec::new(), &mut out);
    out
}

/// Distinct one-step surface reducts.
pub fn c_reducts(calc: Calc, t: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for r in c_redexes(calc, t) {
        let u = t.replace_at(&r.position, r.contractum);
        if !out.contains(&u) {
            out.push(u);
        }
    }
    out
}

/// The leftmost-outermost surface step.
pub fn c_step(calc: Calc, t: &Term) -> Option<(CRule, Vec<usize>, Term)> {
    fn go(calc: Calc, t: &Term, path: &mut Vec<usize>) -> Option<(CRule, Term)> {
        if let Some(r) = c_contract(calc, t) {
            return Some(r);
        }
        let kids = t.children();
        for &i in surface_children(calc, t) {
            path.push(i);
            if let Some((rule, new)) = go(calc, kids[i], path) {
                return Some((rule, t.replace_at(&[i], new)));
            }
            path.pop();
        }
        None
    }
    let mut path = Vec::new();
    let (rule, u) = go(calc, t, &mut path)?;
    Some((rule, path, u))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CTraceStep {
    pub rule: CRule,
    pub position: Vec<usize>,
    pub term: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct COutcome {
    pub status: Status,
    pub trace: Vec<CTraceStep>,
}

impl COutcome {
    pub fn normal_form(&self) -> Option<&Term> {
        match &self.status {
            Status::Normalized { term, .. } => Some(term),
            Status::FuelExhausted { .. } => None,
        }
    }
}

pub fn c_normalize(calc: Calc, t: &Term, fuel: usize) -> COutcome {
    let mut cur = t.clone();
    let mut trace = Vec::new();
    for steps in 0..=fuel {
        match c_step(calc, &cur) {
            None => return COutcome { status: Status::Normalized { term: cur, steps }, trace },
            Some(_) if steps == fuel || cur.size() > MAX_TERM_SIZE => break,
            Some((rule, position, next)) => {
                trace.push(CTraceStep { rule, position, term: next.clone() });
                cur = next;
            }
        }
    }
    let steps = trace.len();
    COutcome { status: Status::FuelExhausted { last: cur, steps }, trace }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        Term::parse(s)
    }

    #[test]
    fn running_example() {
        let t0 = t("(\\x. y x x)((\\z.z) (\\z.z))");
        let n = c_normalize(Calc::Cbn, &t0, 10);
        assert_eq!(n.normal_form(), Some(&t("y ((\\z.z) (\\z.z)) ((\\z.z) (\\z.z))")));
        assert_eq!(n.trace.len(), 2);
        assert_eq!(n.trace[0].term, t("(y x x)[x<-(\\z.z) (\\z.z)]"));
        let v = c_normalize(Calc::Cbv, &t0, 10);
        assert_eq!(v.normal_form(), Some(&t("y (\\z.z) (\\z.z)")));
        let terms: Vec<&Term> = v.trace.iter().map(|s| &s.term).collect();
        assert_eq!(
            terms,
            [
                &t("(y x x)[x<-(\\z.z) (\\z.z)]"),
                &t("(y x x)[x<-z[z<-\\z.z]]"),
                &t("(y x x)[x<-\\z.z]"),
                &t("y (\\z.z) (\\z.z)"),
            ]
        );
    }

    #[test]
    fn values_are_normal() {
        for calc in [Calc::Cbn, Calc::Cbv] {
            assert!(c_step(calc, &t("\\x.(\\y.y) x")).is_some() == (calc == Calc::Cbn));
            assert!(c_step(calc, &t("x")).is_none());
        }
        let xo = t("x ((\\x.x x) (\\x.x x))");
        assert!(c_normalize(Calc::Cbv, &xo, 50).normal_form().is_none());
        assert_eq!(c_normalize(Calc::Cbn, &xo, 50).normal_form(), Some(&xo));
    }

    #[test]
    fn substitution_waits_for_values() {
        assert!(c_step(Calc::Cbv, &t("x[x<-y z]")).is_none());
        assert_eq!(c_step(Calc::Cbn, &t("x[x<-y z]")).unwrap().2, t("y z"));
        assert_eq!(c_step(Calc::Cbv, &t("(x x)[x<-y[y<-z w]]")).unwrap().2, t("(y y)[y<-z w]"));
    }
}
