use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::syntax::{peel_list, wrap_list, Ctx, CtxError, CtxKind, NTerm, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Calc {
    Cbn,
    Cbv,
}

/// Decorate a bang-free, der-free term with `!` and `der`.
pub fn embed(calc: Calc, t: &Term) -> Term {
    let e = |u: &Arc<Term>| embed(calc, u);
    match (calc, t) {
        (Calc::Cbn, Term::Bound(_) | Term::Free(_)) => t.clone(),
        (Calc::Cbn, Term::Abs(x, b)) => Term::Abs(x.clone(), Arc::new(e(b))),
        (Calc::Cbn, Term::App(f, a)) => Term::app(e(f), Term::bang(e(a))),
        (Calc::Cbn, Term::Sub(b, x, a)) => Term::Sub(Arc::new(e(b)), x.clone(), Arc::new(Term::bang(e(a)))),
        (Calc::Cbv, Term::Bound(_) | Term::Free(_)) => Term::bang(t.clone()),
        (Calc::Cbv, Term::Abs(x, b)) => Term::bang(Term::Abs(x.clone(), Arc::new(e(b)))),
        (Calc::Cbv, Term::App(f, a)) => {
            let ef = e(f);
            let (cl, core) = peel_list(&ef);
            let head = match core {
                Term::Bang(s) => wrap_list(&cl, (**s).clone()),
                _ => Term::der(ef.clone()),
            };
            Term::app(head, e(a))
        }
        (Calc::Cbv, Term::Sub(b, x, a)) => Term::Sub(Arc::new(e(b)), x.clone(), Arc::new(e(a))),
        (_, Term::Bang(_) | Term::Der(_)) => panic!("embedding expects a bang-free term"),
    }
}

/// Embed a context, mapping the hole to the hole. The hole is treated as a
/// term that is not of the form `L<!s>`.
pub fn embed_ctx(calc: Calc, c: &Ctx, kind: CtxKind) -> Result<Ctx, CtxError> {
    fn go(calc: Calc, n: &NTerm) -> NTerm {
        let b = |m: &NTerm| Box::new(go(calc, m));
        let bang = |m: NTerm| NTerm::Bang { t: Box::new(m) };
        match (calc, n) {
            (_, NTerm::Hole) => NTerm::Hole,
            (Calc::Cbn, NTerm::Var { .. }) => n.clone(),
            (Calc::Cbn, NTerm::Abs { x, body }) => NTerm::Abs { x: x.clone(), body: b(body) },
            (Calc::Cbn, NTerm::App { fun, arg }) => NTerm::App { fun: b(fun), arg: Box::new(bang(go(calc, arg))) },
            (Calc::Cbn, NTerm::Sub { body, x, arg }) => {
                NTerm::Sub { body: b(body), x: x.clone(), arg: Box::new(bang(go(calc, arg))) }
            }
            (Calc::Cbv, NTerm::Var { .. }) => bang(n.clone()),
            (Calc::Cbv, NTerm::Abs { x, body }) => bang(NTerm::Abs { x: x.clone(), body: b(body) }),
            (Calc::Cbv, NTerm::App { fun, arg }) => {
                let ef = go(calc, fun);
                let head = strip_list_bang(&ef).unwrap_or(NTerm::Der { t: Box::new(ef) });
                NTerm::App { fun: Box::new(head), arg: b(arg) }
            }
            (Calc::Cbv, NTerm::Sub { body, x, arg }) => NTerm::Sub { body: b(body), x: x.clone(), arg: b(arg) },
            (_, NTerm::Bang { .. } | NTerm::Der { .. }) => panic!("embedding expects a bang-free context"),
        }
    }
    Ctx::new(kind, go(calc, &c.spine))
}

fn strip_list_bang(n: &NTerm) -> Option<NTerm> {
    match n {
        NTerm::Bang { t } => Some((**t).clone()),
        NTerm::Sub { body, x, arg } => {
            Some(NTerm::Sub { body: Box::new(strip_list_bang(body)?), x: x.clone(), arg: arg.clone() })
        }
        _ => None,
    }
}

/// Whether `t` is the embedding of some bang-free term.
pub fn in_image(calc: Calc, t: &Term) -> bool {
    unembed(calc, t).is_some_and(|s| embed(calc, &s) == *t)
}

/// A candidate preimage, read off the decorations.
fn unembed(calc: Calc, t: &Term) -> Option<Term> {
    let u = |s: &Arc<Term>| unembed(calc, s).map(Arc::new);
    Some(match (calc, t) {
        (Calc::Cbn, Term::Bound(_) | Term::Free(_)) => t.clone(),
        (Calc::Cbn, Term::Abs(x, b)) => Term::Abs(x.clone(), u(b)?),
        (Calc::Cbn, Term::App(f, a)) => match &**a {
            Term::Bang(a) => Term::App(u(f)?, u(a)?),
            _ => return None,
        },
        (Calc::Cbn, Term::Sub(b, x, a)) => match &**a {
            Term::Bang(a) => Term::Sub(u(b)?, x.clone(), u(a)?),
            _ => return None,
        },
        (Calc::Cbv, Term::Bang(v)) => match &**v {
            Term::Bound(_) | Term::Free(_) => (**v).clone(),
            Term::Abs(x, b) => Term::Abs(x.clone(), u(b)?),
            _ => return None,
        },
        (Calc::Cbv, Term::App(f, a)) => {
            let fun = match &**f {
                Term::Der(g) => unembed(calc, g)?,
                _ => {
                    let (cl, core) = peel_list(f);
                    let rebanged = wrap_list(&cl, Term::bang(core.clone()));
                    unembed(calc, &rebanged)?
                }
            };
            Term::App(Arc::new(fun), u(a)?)
        }
        (Calc::Cbv, Term::Sub(b, x, a)) => Term::Sub(u(b)?, x.clone(), u(a)?),
        _ => return None,
    })
}
