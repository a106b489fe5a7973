//! Meaningfulness of the fragments, and the checks relating them to the bang
//! calculus through the embeddings.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::reduce::{c_normalize, c_reducts, c_step};
use super::{embed, Calc};
use crate::meaning::{Budgets, Checker, VerdictKind};
use crate::reduction::{reducts, Closure, Fragment, MAX_TERM_SIZE};
use crate::syntax::{free_vars, id_term, Ctx, CtxKind, NTerm, Term};
use crate::typesys::{typing_set, Bounds, System, Typing};

impl Calc {
    /// The type system of the fragment.
    pub fn system(self) -> System {
        match self {
            Calc::Cbn => System::N,
            Calc::Cbv => System::V,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CVerdict {
    Meaningful {
        #[serde(with = "crate::syntax::term_text")]
        normal_form: Term,
        /// A testing context reaching the observable, when one was found.
        #[serde(serialize_with = "opt_display")]
        context: Option<Ctx>,
    },
    /// Every surface reduct lies in a finite graph without normal forms.
    Meaningless { states: usize },
    Unknown { steps: usize },
}

impl CVerdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            CVerdict::Meaningful { .. } => VerdictKind::Meaningful,
            CVerdict::Meaningless { .. } => VerdictKind::Meaningless,
            CVerdict::Unknown { .. } => VerdictKind::Unknown,
        }
    }
}

fn opt_display<S: serde::Serializer>(c: &Option<Ctx>, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Some(c) => s.collect_str(c),
        None => s.serialize_none(),
    }
}

/// Whether `t` reaches an observable: the identity in CBN, a value in CBV.
pub fn c_observable(calc: Calc, t: &Term) -> bool {
    match calc {
        Calc::Cbn => *t == id_term(),
        Calc::Cbv => t.is_value(),
    }
}

/// Meaningfulness through surface normalization, with a divergence
/// certificate when `refute` is set.
pub fn c_meaningful(calc: Calc, t: &Term, fuel: usize, refute: bool) -> CVerdict {
    let out = c_normalize(calc, t, fuel);
    match out.normal_form() {
        Some(nf) => CVerdict::Meaningful { normal_form: nf.clone(), context: c_testing_context(calc, t, fuel) },
        None => {
            if refute {
                if let Some(states) = c_divergence_certificate(calc, t, 64) {
                    return CVerdict::Meaningless { states };
                }
            }
            CVerdict::Unknown { steps: out.trace.len() }
        }
    }
}

/// Like the bang-calculus certificate, for the surface reduction of `calc`.
pub fn c_divergence_certificate(calc: Calc, t: &Term, cap: usize) -> Option<usize> {
    let mut seen = HashSet::from([t.clone()]);
    let mut todo = vec![t.clone()];
    while let Some(u) = todo.pop() {
        let next = c_reducts(calc, &u);
        if next.is_empty() {
            return None;
        }
        for v in next {
            if seen.insert(v.clone()) {
                if seen.len() > cap {
                    return None;
                }
                todo.push(v);
            }
        }
    }
    Some(seen.len())
}

/// A testing context `(\x1. ... (\xk.[] a1 ... an) ...) v1 ... vk` sending
/// `t` to an observable, with the `vi` and `ai` drawn from small erasers.
pub fn c_testing_context(calc: Calc, t: &Term, fuel: usize) -> Option<Ctx> {
    let nf = c_normalize(calc, t, fuel).normal_form()?.clone();
    let vars: Vec<String> = free_vars(&nf).iter().map(|x| x.to_string()).collect();
    let mut lams = 0;
    let mut cur = &nf;
    while let Term::Abs(_, b) = cur {
        lams += 1;
        cur = b;
    }
    let erasers: Vec<Term> = (0..4).map(eraser).collect();
    let mut tried = 0;
    for vs in assignments(&erasers, vars.len()) {
        for args in assignments(&erasers, lams) {
            tried += 1;
            if tried > 512 {
                return None;
            }
            let mut spine = NTerm::Hole;
            for a in &args {
                spine = NTerm::App { fun: Box::new(spine), arg: Box::new(NTerm::from_term(a)) };
            }
            for (x, v) in vars.iter().zip(&vs).rev() {
                spine = NTerm::App {
                    fun: Box::new(NTerm::Abs { x: x.clone(), body: Box::new(spine) }),
                    arg: Box::new(NTerm::from_term(v)),
                };
            }
            let ctx = Ctx::new(CtxKind::Testing, spine).expect("testing context");
            if let Some(r) = c_normalize(calc, &ctx.plug(t), 4 * fuel + 100).normal_form() {
                if c_observable(calc, r) {
                    return Some(ctx);
                }
            }
        }
    }
    None
}

/// `\z1. ... \zk.\w.w`.
fn eraser(k: usize) -> Term {
    let mut t = id_term();
    for i in 0..k {
        t = Term::abs(&format!("z{i}"), t);
    }
    t
}

fn assignments(pool: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                pool.iter().map(move |p| {
                    let mut w = v.clone();
                    w.push(p.clone());
                    w
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Projection {
    /// The embedded target is reached in this many bang-calculus steps.
    Projected { steps: usize },
    /// The search window was exhausted without reaching it.
    Missed,
    /// The search hit its term budget.
    Undecided,
}

/// Search `target` among surface reducts of `from` within `window` steps.
pub fn project(from: &Term, target: &Term, window: usize, cap: usize) -> Projection {
    let mut seen = HashSet::from([from.clone()]);
    let mut queue = VecDeque::from([(from.clone(), 0)]);
    while let Some((u, d)) = queue.pop_front() {
        if u == *target {
            return Projection::Projected { steps: d };
        }
        if d == window {
            continue;
        }
        if u.size() > MAX_TERM_SIZE {
            return Projection::Undecided;
        }
        for v in reducts(&u, Closure::Surface, Fragment::All) {
            if seen.insert(v.clone()) {
                if seen.len() > cap {
                    return Projection::Undecided;
                }
                queue.push_back((v, d + 1));
            }
        }
    }
    Projection::Missed
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimStep {
    #[serde(with = "crate::syntax::term_text")]
    pub source: Term,
    #[serde(with = "crate::syntax::term_text")]
    pub reduct: Term,
    pub projection: Projection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimReport {
    pub calc: Calc,
    pub steps: Vec<SimStep>,
}

impl SimReport {
    pub fn failures(&self) -> usize {
        self.steps.iter().filter(|s| s.projection == Projection::Missed).count()
    }

    pub fn undecided(&self) -> usize {
        self.steps.iter().filter(|s| s.projection == Projection::Undecided).count()
    }
}

/// Steps of a bang-calculus path simulating one source step.
pub const SIM_WINDOW: usize = 6;

/// Every surface step out of the terms on the leftmost-outermost path of
/// `t`, up to `fuel` terms, checked to project into the bang calculus.
pub fn simulate_check(calc: Calc, t: &Term, fuel: usize) -> SimReport {
    let mut steps = Vec::new();
    let mut cur = t.clone();
    for _ in 0..fuel {
        if cur.size() > 200 {
            break;
        }
        let from = embed(calc, &cur);
        for u in c_reducts(calc, &cur) {
            let projection = project(&from, &embed(calc, &u), SIM_WINDOW, 4000);
            steps.push(SimStep { source: cur.clone(), reduct: u, projection });
        }
        match c_step(calc, &cur) {
            Some((_, _, next)) => cur = next,
            None => break,
        }
    }
    SimReport { calc, steps }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transfer {
    pub source: VerdictKind,
    pub embedded: VerdictKind,
}

impl Transfer {
    /// Both sides decided and different.
    pub fn disagrees(&self) -> bool {
        self.source.decided() && self.embedded.decided() && self.source != self.embedded
    }
}

/// Meaningfulness of `t` in its calculus against that of its embedding.
pub fn transfer_check(calc: Calc, t: &Term, budgets: &Budgets) -> Transfer {
    let source = c_meaningful(calc, t, budgets.fuel, budgets.refute).kind();
    let embedded = Checker::new(*budgets).meaningful(&embed(calc, t)).kind();
    Transfer { source, embedded }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypingTransfer {
    pub only_source: Vec<Typing>,
    pub only_embedded: Vec<Typing>,
}

impl TypingTransfer {
    pub fn agrees(&self) -> bool {
        self.only_source.is_empty() && self.only_embedded.is_empty()
    }
}

/// Typings of `t` in the fragment's system against B-typings of its
/// embedding, within `bounds`.
pub fn typing_transfer_check(calc: Calc, t: &Term, bounds: &Bounds) -> TypingTransfer {
    let src = typing_set(calc.system(), t, bounds);
    let emb = typing_set(System::B, &embed(calc, t), bounds);
    TypingTransfer {
        only_source: src.difference(&emb).cloned().collect(),
        only_embedded: emb.difference(&src).cloned().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{enum_cterms, gen_cterm};
    use crate::typesys::{derive, Env, Type};
    use proptest::prelude::*;

    fn t(s: &str) -> Term {
        Term::parse(s)
    }

    const OMEGA: &str = "(\\x.x x) (\\x.x x)";

    #[test]
    fn fragment_meaningfulness() {
        let v = c_meaningful(Calc::Cbn, &t("x (\\y.(\\x.x x) (\\x.x x))"), 100, false);
        assert_eq!(v.kind(), VerdictKind::Meaningful);
        let CVerdict::Meaningful { context: Some(c), .. } = v else { panic!() };
        assert_eq!(c.to_string(), "(\\x.[]) (\\z.\\z1.z1)");
        let lo = format!("\\x.{OMEGA}");
        assert_eq!(c_meaningful(Calc::Cbn, &t(&lo), 100, false).kind(), VerdictKind::Unknown);
        assert_eq!(c_meaningful(Calc::Cbn, &t(&lo), 100, true).kind(), VerdictKind::Meaningless);
        let v = c_meaningful(Calc::Cbv, &t("x (\\y.z)"), 100, false);
        assert!(matches!(v, CVerdict::Meaningful { context: Some(_), .. }));
        let xo = format!("x ({OMEGA})");
        assert_eq!(c_meaningful(Calc::Cbv, &t(&xo), 100, true).kind(), VerdictKind::Meaningless);
        assert_eq!(c_meaningful(Calc::Cbn, &t(&xo), 100, true).kind(), VerdictKind::Meaningful);
    }

    #[test]
    fn running_example_projects() {
        let t0 = t("(\\x. y x x)((\\z.z) (\\z.z))");
        for calc in [Calc::Cbn, Calc::Cbv] {
            let r = simulate_check(calc, &t0, 10);
            assert!(!r.steps.is_empty());
            assert_eq!(r.failures() + r.undecided(), 0);
        }
        let n = simulate_check(Calc::Cbn, &t0, 10);
        assert!(n.steps.iter().all(|s| s.projection == Projection::Projected { steps: 1 }));
        let chain = [
            "(\\x. (der (y !x)) !x) ((\\z.!z) !(\\z.!z))",
            "((der (y !x)) !x)[x<-(\\z.!z) !(\\z.!z)]",
            "((der (y !x)) !x)[x<-(!z)[z<-!(\\z.!z)]]",
            "((der (y !x)) !x)[x<-!(\\z.!z)]",
            "(der (y !(\\z.!z))) !(\\z.!z)",
        ];
        for w in chain.windows(2) {
            assert_eq!(project(&t(w[0]), &t(w[1]), 1, 100), Projection::Projected { steps: 1 });
        }
        assert!(simulate_check(Calc::Cbv, &t("\\x.x"), 10).steps.is_empty());
    }

    #[test]
    fn seeded_simulation() {
        for seed in 0..40 {
            for calc in [Calc::Cbn, Calc::Cbv] {
                let r = simulate_check(calc, &gen_cterm(seed, 8), 6);
                assert_eq!(r.failures(), 0, "{calc:?} seed {seed}: {:?}", r.steps);
            }
        }
    }

    #[test]
    fn transfer_of_meaningfulness() {
        let b = Budgets { refute: true, ..Budgets::default() };
        for calc in [Calc::Cbn, Calc::Cbv] {
            for src in ["\\z.z", OMEGA, "x ((\\x.x x) (\\x.x x))", "x (\\y.z)"] {
                let r = transfer_check(calc, &t(src), &b);
                assert!(!r.disagrees(), "{calc:?} {src}: {r:?}");
            }
        }
        let r = transfer_check(Calc::Cbn, &t("\\z.z"), &Budgets::default());
        assert_eq!((r.source, r.embedded), (VerdictKind::Meaningful, VerdictKind::Meaningful));
    }

    #[test]
    fn typing_transfer_on_small_terms() {
        let bounds = Bounds::default();
        for u in enum_cterms(4, &["x"]) {
            for calc in [Calc::Cbn, Calc::Cbv] {
                let r = typing_transfer_check(calc, &u, &bounds);
                assert!(r.agrees(), "{calc:?} {u}: {r:?}");
            }
        }
        let ty = Typing::new(Env::empty(), Type::parse("[[a]->a]->[a]->a"));
        assert!(derive(System::N, &t("\\x.x"), &ty).is_some());
        assert!(derive(System::B, &embed(Calc::Cbn, &t("\\x.x")), &ty).is_some());
        let empty = Typing::new(Env::empty(), Type::parse("[]"));
        assert!(derive(System::V, &t("\\x.u"), &empty).is_some());
    }

    proptest! {
        #[test]
        fn embeddings_preserve_normal_forms(seed in any::<u64>(), size in 1usize..12) {
            let u = gen_cterm(seed, size);
            for calc in [Calc::Cbn, Calc::Cbv] {
                if c_step(calc, &u).is_none() {
                    let e = embed(calc, &u);
                    prop_assert!(reducts(&e, Closure::Surface, Fragment::All).is_empty(), "{:?} {} {}", calc, u, e);
                }
            }
        }

        #[test]
        fn fragment_steps_project(seed in any::<u64>(), size in 2usize..10) {
            let t = gen_cterm(seed, size);
            for calc in [Calc::Cbn, Calc::Cbv] {
                prop_assert_eq!(simulate_check(calc, &t, 4).failures(), 0);
            }
        }
    }
}
