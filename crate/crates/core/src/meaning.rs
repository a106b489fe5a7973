//! Meaningfulness in the bang calculus: testable typings, testing contexts
//! built from inhabitation witnesses, and the genericity and consistency
//! harnesses.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::inhabitation::{InhBounds, Prover, Testability, Witnesses};
use crate::reduction::{classify, normalize, reducts, Closure, Fragment, NfClass, Status};
use crate::syntax::{fresh_name, free_vars, open, Ctx, CtxKind, NTerm, Name, Term};
use crate::typesys::{args, derive, typings_enumerate, Bounds, Derivation, Env, Multitype, System, Type, Typing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    pub fuel: usize,
    pub types: Bounds,
    pub inh: InhBounds,
    /// Also decide meaninglessness from shape conflicts and from closed
    /// reduct graphs without normal forms.
    pub refute: bool,
    /// Largest reduct graph explored for a divergence certificate.
    pub graph: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { fuel: 200, types: Bounds::default(), inh: InhBounds::default(), refute: false, graph: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    #[serde(serialize_with = "display")]
    pub context: Ctx,
    /// The testable typing, shared by the term and its normal form.
    pub typing: Typing,
    pub witnesses: Witnesses,
    /// The bang reached from the plugged term.
    #[serde(with = "crate::syntax::term_text")]
    pub observable: Term,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Meaningless {
    /// The surface normal form has a clash, so the term is untypable.
    ClashNf {
        #[serde(with = "crate::syntax::term_text")]
        normal_form: Term,
    },
    /// The variable is used both as a function and as an argument, so the
    /// multitype it needs is never inhabited.
    ShapeConflict { variable: Name },
    /// Every surface reduct lies in a finite graph without normal forms.
    Divergent { states: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Undecided {
    DivergenceSuspected { steps: usize },
    /// No testable typing among the typings within bounds.
    NoTestableTyping { typings: usize, open: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MeaningVerdict {
    Meaningful(Evidence),
    Meaningless(Meaningless),
    Unknown(Undecided),
}

impl MeaningVerdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            MeaningVerdict::Meaningful(_) => VerdictKind::Meaningful,
            MeaningVerdict::Meaningless(_) => VerdictKind::Meaningless,
            MeaningVerdict::Unknown(_) => VerdictKind::Unknown,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Meaningful,
    Meaningless,
    Unknown,
}

impl VerdictKind {
    pub fn decided(self) -> bool {
        self != VerdictKind::Unknown
    }
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("no witness for the environment variable {0}")]
    MissingEnv(Name),
    #[error("no witness for argument {index} of type {multitype}")]
    MissingArg { index: usize, multitype: Multitype },
}

/// `(\x1.(\x2. ... [] ...) w2) w1` applied to the argument witnesses, for a
/// B-typing whose environment and arguments have the given witnesses.
pub fn build_testing_context(typing: &Typing, w: &Witnesses) -> Result<Ctx, ContextError> {
    let mut spine = NTerm::Hole;
    for (x, _) in typing.env.iter().collect::<Vec<_>>().into_iter().rev() {
        let wx = w.env.get(x).ok_or_else(|| ContextError::MissingEnv(x.clone()))?;
        spine = NTerm::App {
            fun: Box::new(NTerm::Abs { x: x.to_string(), body: Box::new(spine) }),
            arg: Box::new(NTerm::from_term(&wx.0)),
        };
    }
    for (index, m) in args(System::B, &typing.ty).into_iter().enumerate() {
        let a = w.args.get(index).ok_or(ContextError::MissingArg { index, multitype: m })?;
        spine = NTerm::App { fun: Box::new(spine), arg: Box::new(NTerm::from_term(&a.0)) };
    }
    Ok(Ctx::new(CtxKind::Testing, spine).expect("testing context shape"))
}

/// The type reached once the arguments of `ty` are supplied.
pub fn result_type(sys: System, ty: &Type) -> Type {
    let mut cur = ty;
    for _ in args(sys, ty) {
        if let Type::Arrow(_, s) = cur {
            cur = s;
        }
    }
    cur.clone()
}

/// Surface-normalize `ctx<t>` and return the bang reached.
pub fn replay(ctx: &Ctx, t: &Term, fuel: usize) -> Option<(Term, usize)> {
    let out = normalize(&ctx.plug(t), Closure::Surface, fuel);
    match out.status {
        Status::Normalized { term, steps } if term.is_bang() => Some((term, steps)),
        _ => None,
    }
}

/// A variable of the normal form `t` used both in function position and
/// as an argument outside bangs, among the free variables and those bound
/// by the leading abstractions.
pub fn shape_conflict(t: &Term) -> Option<Name> {
    let mut taken: BTreeSet<String> = free_vars(t).iter().map(|x| x.to_string()).collect();
    let mut candidates: Vec<Name> = free_vars(t).into_iter().collect();
    let mut body = t.clone();
    while let Term::Abs(hint, b) = &body {
        let x = fresh_name(hint, |n| taken.contains(n));
        taken.insert(x.clone());
        candidates.push(Name::from(x.as_str()));
        body = open(b, &x);
    }
    let mut uses = Vec::new();
    occurrences(&body, &mut uses);
    candidates.into_iter().find(|x| {
        uses.iter().any(|(y, arrow)| y == x && *arrow) && uses.iter().any(|(y, arrow)| y == x && !*arrow)
    })
}

/// Variables at typed positions fixing their shape: `true` for function
/// position, `false` for a multitype position.
fn occurrences(t: &Term, out: &mut Vec<(Name, bool)>) {
    let var = |u: &Term| match u {
        Term::Free(x) => Some(x.clone()),
        _ => None,
    };
    match t {
        Term::Bang(_) | Term::Bound(_) | Term::Free(_) => {}
        Term::Abs(_, b) => occurrences(b, out),
        Term::Der(a) => {
            out.extend(var(a).map(|x| (x, false)));
            occurrences(a, out);
        }
        Term::App(f, a) => {
            out.extend(var(f).map(|x| (x, true)));
            out.extend(var(a).map(|x| (x, false)));
            occurrences(f, out);
            occurrences(a, out);
        }
        Term::Sub(b, _, a) => {
            out.extend(var(a).map(|x| (x, false)));
            occurrences(b, out);
            occurrences(a, out);
        }
    }
}

/// The number of surface reducts of `t` when they form a finite graph of
/// at most `cap` terms with no normal form.
pub fn divergence_certificate(t: &Term, cap: usize) -> Option<usize> {
    let mut seen = HashSet::from([t.clone()]);
    let mut todo = vec![t.clone()];
    while let Some(u) = todo.pop() {
        let next = reducts(&u, Closure::Surface, Fragment::All);
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

/// Meaningfulness checks sharing one inhabitation prover.
pub struct Checker {
    pub budgets: Budgets,
    prover: Prover,
}

impl Checker {
    pub fn new(budgets: Budgets) -> Self {
        Checker { budgets, prover: Prover::new(System::B, budgets.inh) }
    }

    pub fn testable(&mut self, typing: &Typing) -> Testability {
        self.prover.testable(typing)
    }

    pub fn meaningful(&mut self, t: &Term) -> MeaningVerdict {
        let b = self.budgets;
        let out = normalize(t, Closure::Surface, b.fuel);
        let nf = match out.status {
            Status::Normalized { term, .. } => term,
            Status::FuelExhausted { steps, .. } => {
                if b.refute {
                    if let Some(states) = divergence_certificate(t, b.graph) {
                        return MeaningVerdict::Meaningless(Meaningless::Divergent { states });
                    }
                }
                return MeaningVerdict::Unknown(Undecided::DivergenceSuspected { steps });
            }
        };
        if classify(&nf) != NfClass::NoS {
            return MeaningVerdict::Meaningless(Meaningless::ClashNf { normal_form: nf });
        }
        if b.refute {
            if let Some(variable) = shape_conflict(&nf) {
                return MeaningVerdict::Meaningless(Meaningless::ShapeConflict { variable });
            }
        }
        let observed = Typing::new(Env::empty(), Type::Multi(Multitype::empty()));
        if derive(System::B, &nf, &observed).is_some() {
            if let Some(v) = self.evidence(t, &observed) {
                return v;
            }
        }
        let typings: Vec<Typing> = typings_enumerate(System::B, &nf, &b.types).iter().map(Derivation::typing).collect();
        let mut open = 0;
        for typing in &typings {
            if let Some(v) = self.evidence(t, typing) {
                return v;
            }
            if matches!(self.prover.testable(typing), Testability::Unknown { .. }) {
                open += 1;
            }
        }
        MeaningVerdict::Unknown(Undecided::NoTestableTyping { typings: typings.len(), open })
    }

    fn evidence(&mut self, t: &Term, typing: &Typing) -> Option<MeaningVerdict> {
        let Testability::Yes { witnesses } = self.prover.testable(typing) else {
            return None;
        };
        let context = build_testing_context(typing, &witnesses).ok()?;
        let (observable, steps) = replay(&context, t, replay_fuel(self.budgets.fuel))?;
        Some(MeaningVerdict::Meaningful(Evidence { context, typing: typing.clone(), witnesses, observable, steps }))
    }

    /// Testability of every judgment of `d`.
    pub fn testable_everywhere(&mut self, d: &Derivation) -> Everywhere {
        let nodes = d
            .nodes()
            .into_iter()
            .map(|(path, n)| {
                let typing = n.typing();
                let verdict = match self.prover.testable(&typing) {
                    Testability::Yes { .. } => VerdictKind::Meaningful,
                    Testability::No { .. } => VerdictKind::Meaningless,
                    Testability::Unknown { .. } => VerdictKind::Unknown,
                };
                NodeVerdict { path, typing, testable: verdict }
            })
            .collect();
        Everywhere { nodes }
    }
}

fn replay_fuel(fuel: usize) -> usize {
    4 * fuel + 100
}

pub fn meaningful(t: &Term, budgets: &Budgets) -> MeaningVerdict {
    Checker::new(*budgets).meaningful(t)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeVerdict {
    pub path: Vec<usize>,
    pub typing: Typing,
    /// `meaningful` stands for testable, `meaningless` for refuted.
    pub testable: VerdictKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Everywhere {
    pub nodes: Vec<NodeVerdict>,
}

impl Everywhere {
    pub fn holds(&self) -> bool {
        self.nodes.iter().all(|n| n.testable == VerdictKind::Meaningful)
    }

    pub fn refuted(&self) -> bool {
        self.nodes.iter().any(|n| n.testable == VerdictKind::Meaningless)
    }

    pub fn root(&self) -> VerdictKind {
        self.nodes[0].testable
    }
}

pub fn check_testable_everywhere(d: &Derivation, inh: &InhBounds) -> Everywhere {
    Checker::new(Budgets { inh: *inh, ..Budgets::default() }).testable_everywhere(d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericityCase {
    #[serde(with = "crate::syntax::term_text")]
    pub replacement: Term,
    pub verdict: VerdictKind,
    /// Whether the typing of the original plugged term derives the new
    /// one, with every judgment testable.
    pub typed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Genericity {
    /// The hypothesis fails: the subterm is meaningful, or the plugged
    /// term is not decided meaningful.
    Vacuous { subterm: VerdictKind, plugged: VerdictKind },
    Checked { typing: Typing, cases: Vec<GenericityCase> },
}

impl Genericity {
    /// Replacements decided meaningless or failing the typed transport.
    pub fn failures(&self) -> usize {
        match self {
            Genericity::Vacuous { .. } => 0,
            Genericity::Checked { cases, .. } => cases
                .iter()
                .filter(|c| c.verdict == VerdictKind::Meaningless || c.typed == Some(false))
                .count(),
        }
    }

    pub fn unknown(&self) -> usize {
        match self {
            Genericity::Vacuous { .. } => 0,
            Genericity::Checked { cases, .. } => {
                cases.iter().filter(|c| c.verdict == VerdictKind::Unknown || c.typed.is_none()).count()
            }
        }
    }
}

impl Checker {
    /// With `t` not meaningful and `f<t>` meaningful, every `f<u>` should
    /// be meaningful with the same testable typing.
    pub fn genericity(&mut self, f: &Ctx, t: &Term, samples: &[Term]) -> Genericity {
        let subterm = self.meaningful(t).kind();
        let outer = self.meaningful(&f.plug(t));
        let typing = match (&outer, subterm) {
            (MeaningVerdict::Meaningful(e), VerdictKind::Meaningless | VerdictKind::Unknown) => e.typing.clone(),
            _ => return Genericity::Vacuous { subterm, plugged: outer.kind() },
        };
        let cases = samples
            .iter()
            .map(|u| {
                let fu = f.plug(u);
                let verdict = self.meaningful(&fu).kind();
                let typed = match derive(System::B, &fu, &typing) {
                    None => Some(false),
                    Some(d) => {
                        let e = self.testable_everywhere(&d);
                        if e.holds() {
                            Some(true)
                        } else if e.refuted() {
                            Some(false)
                        } else {
                            None
                        }
                    }
                };
                GenericityCase { replacement: u.clone(), verdict, typed }
            })
            .collect();
        Genericity::Checked { typing, cases }
    }
}

pub fn genericity_check(f: &Ctx, t: &Term, samples: &[Term], budgets: &Budgets) -> Genericity {
    Checker::new(*budgets).genericity(f, t, samples)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Discrimination {
    Separated {
        #[serde(serialize_with = "display")]
        context: Ctx,
        left: VerdictKind,
        right: VerdictKind,
    },
    IndistinguishableSoFar { tried: usize },
}

/// A full context among `[]` and `ctxs` where the two plugged terms get
/// opposite decided verdicts. Refutations are always enabled here.
pub fn discriminate(t: &Term, u: &Term, ctxs: &[Ctx], budgets: &Budgets) -> Discrimination {
    let mut c = Checker::new(Budgets { refute: true, ..*budgets });
    let all: Vec<Ctx> = std::iter::once(Ctx::hole()).chain(ctxs.iter().cloned()).collect();
    for f in &all {
        let left = c.meaningful(&f.plug(t)).kind();
        let right = c.meaningful(&f.plug(u)).kind();
        if left.decided() && right.decided() && left != right {
            return Discrimination::Separated { context: f.clone(), left, right };
        }
    }
    Discrimination::IndistinguishableSoFar { tried: all.len() }
}

/// Argument pool for the operational context search.
pub fn context_pool() -> Vec<Term> {
    ["!!y", "!(\\z.z)", "!(\\z.!(\\w.w))", "\\z.!z", "\\z.!(\\w.w)"].iter().map(|s| Term::parse(s)).collect()
}

/// Testing contexts with at most `depth` constructors, arguments from
/// `pool`, and abstractions over the free variables of `t`.
pub fn testing_contexts(t: &Term, depth: usize, pool: &[Term]) -> Vec<Ctx> {
    let vars: Vec<String> = free_vars(t).iter().map(|x| x.to_string()).collect();
    let mut layers: Vec<Vec<NTerm>> = vec![vec![NTerm::Hole]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for c in layers.last().expect("layer") {
            for s in pool {
                let s = NTerm::from_term(s);
                next.push(NTerm::App { fun: Box::new(c.clone()), arg: Box::new(s.clone()) });
                for x in &vars {
                    next.push(NTerm::App {
                        fun: Box::new(NTerm::Abs { x: x.clone(), body: Box::new(c.clone()) }),
                        arg: Box::new(s.clone()),
                    });
                }
            }
        }
        layers.push(next);
    }
    layers.into_iter().flatten().map(|s| Ctx::new(CtxKind::Testing, s).expect("testing context")).collect()
}

/// A testing context among `testing_contexts` sending `t` to a bang.
pub fn search_testing_context(t: &Term, depth: usize, pool: &[Term], fuel: usize) -> Option<Ctx> {
    testing_contexts(t, depth, pool).into_iter().find(|c| replay(c, t, fuel).is_some())
}

/// A curated term with its expected verdicts by default and with
/// refutations enabled.
pub struct CorpusEntry {
    pub name: &'static str,
    pub term: &'static str,
    pub default: VerdictKind,
    pub refuting: VerdictKind,
}

pub fn corpus() -> Vec<CorpusEntry> {
    use VerdictKind::*;
    let e = |name, term, default, refuting| CorpusEntry { name, term, default, refuting };
    vec![
        e("identity", "\\z.z", Meaningful, Meaningful),
        e("omega", "(\\x.x !x) !(\\x.x !x)", Unknown, Meaningless),
        e("variable applied to omega", "x ((\\x.x !x) !(\\x.x !x))", Unknown, Meaningless),
        e("self application", "x x", Unknown, Meaningless),
        e("abstracted self application", "\\x.x x", Unknown, Meaningless),
        e("abstracted omega", "\\x.(\\y.y !y) !(\\y.y !y)", Unknown, Meaningless),
        e("bang", "!x", Meaningful, Meaningful),
        e("dereliction of a bang", "der !x", Meaningful, Meaningful),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::omega;
    use crate::typesys::some_derivation;

    fn refuting() -> Budgets {
        Budgets { refute: true, ..Budgets::default() }
    }

    fn typing(env: &str, ty: &str) -> Typing {
        Typing::new(Env::parse(env).unwrap(), Type::parse(ty))
    }

    #[test]
    fn corpus_verdicts() {
        for e in corpus() {
            let t = Term::parse(e.term);
            assert_eq!(meaningful(&t, &Budgets::default()).kind(), e.default, "{}", e.name);
            assert_eq!(meaningful(&t, &refuting()).kind(), e.refuting, "{}", e.name);
        }
    }

    #[test]
    fn identity_is_tested_by_a_double_bang() {
        match meaningful(&Term::parse("\\z.z"), &Budgets::default()) {
            MeaningVerdict::Meaningful(e) => {
                assert_eq!(e.context.to_string(), "[] !!(\\z.z)");
                assert!(e.observable.is_bang());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn clashes_are_meaningless() {
        let v = meaningful(&Term::parse("!s u"), &Budgets::default());
        assert!(matches!(v, MeaningVerdict::Meaningless(Meaningless::ClashNf { .. })));
        assert_eq!(
            meaningful(&omega(), &Budgets::default()),
            MeaningVerdict::Unknown(Undecided::DivergenceSuspected { steps: 200 })
        );
    }

    #[test]
    fn contexts_from_witnesses() {
        let t = Term::parse("\\x.!x");
        let ty = typing("", "[]->[]");
        let w = match testable_b(&ty) {
            Testability::Yes { witnesses } => witnesses,
            r => panic!("{r:?}"),
        };
        let c = build_testing_context(&ty, &w).unwrap();
        assert_eq!(c.to_string(), "[] !(\\z.z)");
        assert!(replay(&c, &t, 50).is_some());
        let c = build_testing_context(&typing("", "[]"), &Witnesses::default()).unwrap();
        assert_eq!(c.to_string(), "[]");
        let missing = build_testing_context(&typing("", "[a]->[a]"), &Witnesses::default());
        assert!(matches!(missing, Err(ContextError::MissingArg { index: 0, .. })));
        let missing = build_testing_context(&typing("x:[[]]", "[]"), &Witnesses::default());
        assert!(matches!(missing, Err(ContextError::MissingEnv(_))));
    }

    fn testable_b(ty: &Typing) -> Testability {
        crate::inhabitation::testable(System::B, ty, &InhBounds::default())
    }

    #[test]
    fn constructed_contexts_type_the_plugged_term() {
        let b = Budgets::default();
        let mut c = Checker::new(b);
        for src in ["\\z.z", "der !x", "x !y", "\\x.x !x !x", "(x !y)[y<-z]", "\\x.\\y.y"] {
            let t = Term::parse(src);
            for d in typings_enumerate(System::B, &t, &b.types) {
                let ty = d.typing();
                let Testability::Yes { witnesses } = c.testable(&ty) else { continue };
                let ctx = build_testing_context(&ty, &witnesses).unwrap();
                let goal = Typing::new(Env::empty(), result_type(System::B, &ty.ty));
                assert!(derive(System::B, &ctx.plug(&t), &goal).is_some(), "{src} {ty}");
                assert!(replay(&ctx, &t, 400).is_some(), "{src} {ty}");
            }
        }
    }

    #[test]
    fn shape_conflicts() {
        assert!(shape_conflict(&Term::parse("x x")).is_some());
        assert!(shape_conflict(&Term::parse("\\x.x x")).is_some());
        assert!(shape_conflict(&Term::parse("x (der x)")).is_some());
        assert!(shape_conflict(&Term::parse("x !x")).is_none());
        assert!(shape_conflict(&Term::parse("y x")).is_none());
        assert!(shape_conflict(&Term::parse("\\y.x x")).is_some());
    }

    #[test]
    fn divergence_certificates() {
        assert_eq!(divergence_certificate(&omega(), 64), Some(2));
        assert!(divergence_certificate(&Term::parse("x !x"), 64).is_none());
        assert!(divergence_certificate(&Term::parse("(\\x.!y) !((\\x.x !x) !(\\x.x !x))"), 64).is_none());
    }

    #[test]
    fn testable_everywhere() {
        let d = some_derivation(System::B, &Term::parse("!(\\z.z)")).unwrap();
        assert!(check_testable_everywhere(&d, &InhBounds::default()).holds());
        let xx = derive(System::B, &Term::parse("x x"), &typing("x:[[a]->b, [a]]", "b")).unwrap();
        let e = check_testable_everywhere(&xx, &InhBounds::default());
        assert_eq!(e.root(), VerdictKind::Meaningless);
        let fig3 = derive(System::B, &Term::parse("\\x.!x"), &typing("", "[a]->[a]")).unwrap();
        let e = check_testable_everywhere(&fig3, &InhBounds::default());
        assert_eq!(e.nodes.len(), 3);
        assert!(e.refuted());
    }

    #[test]
    fn genericity_on_an_erasing_context() {
        let f = Ctx::parse(CtxKind::Full, "(\\x.!y) ![]").unwrap();
        let samples: Vec<Term> = ["x", "x x", "\\z.z", "!u"].iter().map(|s| Term::parse(s)).collect();
        let g = genericity_check(&f, &omega(), &samples, &Budgets::default());
        match &g {
            Genericity::Checked { typing, cases } => {
                assert_eq!(typing, &Typing::new(Env::empty(), Type::parse("[]")));
                assert_eq!(cases.len(), 4);
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(g.failures(), 0);
        assert_eq!(g.unknown(), 0);
        let vacuous = genericity_check(&Ctx::hole(), &omega(), &samples, &Budgets::default());
        assert!(matches!(vacuous, Genericity::Vacuous { .. }));
    }

    #[test]
    fn discrimination() {
        let b = Budgets::default();
        match discriminate(&Term::parse("!x"), &omega(), &[], &b) {
            Discrimination::Separated { context, .. } => assert_eq!(context.to_string(), "[]"),
            d => panic!("{d:?}"),
        }
        let t = Term::parse("\\z.z");
        assert!(matches!(discriminate(&t, &t, &[], &b), Discrimination::IndistinguishableSoFar { .. }));
        assert!(matches!(
            discriminate(&omega(), &Term::parse("x x"), &[], &b),
            Discrimination::IndistinguishableSoFar { .. }
        ));
    }

    #[test]
    fn operational_search_agrees() {
        let pool = context_pool();
        assert!(search_testing_context(&Term::parse("\\z.z"), 1, &pool, 50).is_some());
        assert!(search_testing_context(&Term::parse("der !x"), 1, &pool, 50).is_some());
        assert!(search_testing_context(&Term::parse("x x"), 3, &pool, 50).is_none());
        assert!(search_testing_context(&omega(), 2, &pool, 50).is_none());
    }
}
