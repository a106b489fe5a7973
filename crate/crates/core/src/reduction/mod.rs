//! The three rules at a distance, surface and full reduction, clashes and
//! normal forms.

mod props;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use props::{diamond_peaks, local_confluence_peaks, strong_commutation_peaks, PeakFailure};

use crate::syntax::{instantiate, peel_list, shift, wrap_list, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "dB")]
    DB,
    #[serde(rename = "s!")]
    SBang,
    #[serde(rename = "d!")]
    DBang,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::DB => "dB",
            Rule::SBang => "s!",
            Rule::DBang => "d!",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    /// Never under a bang.
    Surface,
    /// Anywhere.
    Full,
}

/// Subsets of the rules used by the property suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fragment {
    DbDBang,
    SBang,
    All,
}

impl Fragment {
    pub fn allows(self, r: Rule) -> bool {
        match self {
            Fragment::DbDBang => r != Rule::SBang,
            Fragment::SBang => r == Rule::SBang,
            Fragment::All => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Redex {
    pub position: Vec<usize>,
    pub rule: Rule,
    /// The term replacing the redex at `position`.
    pub contractum: Term,
}

/// Contract `t` at its root, if it is a redex.
pub fn contract(t: &Term) -> Option<(Rule, Term)> {
    match t {
        Term::App(f, u) => {
            let (cl, core) = peel_list(f);
            match core {
                Term::Abs(x, body) => {
                    let arg = shift(u, cl.len() as u32, 0);
                    Some((Rule::DB, wrap_list(&cl, Term::Sub(body.clone(), x.clone(), Arc::new(arg)))))
                }
                _ => None,
            }
        }
        Term::Sub(body, _, a) => {
            let (cl, core) = peel_list(a);
            match core {
                Term::Bang(u) => {
                    let b = shift(body, cl.len() as u32, 1);
                    Some((Rule::SBang, wrap_list(&cl, instantiate(&b, u))))
                }
                _ => None,
            }
        }
        Term::Der(a) => {
            let (cl, core) = peel_list(a);
            match core {
                Term::Bang(s) => Some((Rule::DBang, wrap_list(&cl, (**s).clone()))),
                _ => None,
            }
        }
        _ => None,
    }
}

fn enters(t: &Term, closure: Closure) -> bool {
    closure == Closure::Full || !t.is_bang()
}

/// All redexes in positions allowed by `closure`, in leftmost-outermost order.
pub fn redexes(t: &Term, closure: Closure) -> Vec<Redex> {
    fn go(t: &Term, closure: Closure, path: &mut Vec<usize>, out: &mut Vec<Redex>) {
        if let Some((rule, contractum)) = contract(t) {
            out.push(Redex { position: path.clone(), rule, contractum });
        }
        if enters(t, closure) {
            for (i, c) in t.children().into_iter().enumerate() {
                path.push(i);
                go(c, closure, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, closure, &mut Vec::new(), &mut out);
    out
}

/// Apply a redex to the whole term.
pub fn fire(t: &Term, r: &Redex) -> Term {
    t.replace_at(&r.position, r.contractum.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    LeftmostOutermost,
    ByIndex(usize),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("redex index {index} out of range ({available} redexes)")]
pub struct IndexError {
    pub index: usize,
    pub available: usize,
}

/// One step; `Ok(None)` iff `t` is normal for `closure`.
pub fn step(t: &Term, closure: Closure, policy: Policy) -> Result<Option<Term>, IndexError> {
    match policy {
        Policy::LeftmostOutermost => Ok(lo_step(t, closure).map(|(_, _, u)| u)),
        Policy::ByIndex(i) => {
            let rs = redexes(t, closure);
            if rs.is_empty() {
                return Ok(None);
            }
            match rs.get(i) {
                Some(r) => Ok(Some(fire(t, r))),
                None => Err(IndexError { index: i, available: rs.len() }),
            }
        }
    }
}

/// Leftmost-outermost step with its rule and position.
pub fn lo_step(t: &Term, closure: Closure) -> Option<(Rule, Vec<usize>, Term)> {
    fn go(t: &Term, closure: Closure, path: &mut Vec<usize>) -> Option<(Rule, Term)> {
        if let Some(r) = contract(t) {
            return Some(r);
        }
        if !enters(t, closure) {
            return None;
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            if let Some((rule, new)) = go(c, closure, path) {
                let mut kids: Vec<Arc<Term>> = t.children().into_iter().cloned().collect();
                kids[i] = Arc::new(new);
                return Some((rule, with_children(t, kids)));
            }
            path.pop();
        }
        None
    }
    let mut path = Vec::new();
    let (rule, u) = go(t, closure, &mut path)?;
    Some((rule, path, u))
}

fn with_children(t: &Term, kids: Vec<Arc<Term>>) -> Term {
    let mut k = kids.into_iter();
    match t {
        Term::Abs(x, _) => Term::Abs(x.clone(), k.next().unwrap()),
        Term::Bang(_) => Term::Bang(k.next().unwrap()),
        Term::Der(_) => Term::Der(k.next().unwrap()),
        Term::App(..) => Term::App(k.next().unwrap(), k.next().unwrap()),
        Term::Sub(_, x, _) => {
            let b = k.next().unwrap();
            Term::Sub(b, x.clone(), k.next().unwrap())
        }
        _ => t.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub position: Vec<usize>,
    pub term: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Status {
    Normalized { term: Term, steps: usize },
    FuelExhausted { last: Term, steps: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceOutcome {
    pub status: Status,
    pub trace: Vec<TraceStep>,
}

impl ReduceOutcome {
    pub fn normal_form(&self) -> Option<&Term> {
        match &self.status {
            Status::Normalized { term, .. } => Some(term),
            Status::FuelExhausted { .. } => None,
        }
    }

    pub fn last(&self) -> &Term {
        match &self.status {
            Status::Normalized { term, .. } => term,
            Status::FuelExhausted { last, .. } => last,
        }
    }
}

/// Terms growing past this many constructors count as running out of fuel.
pub const MAX_TERM_SIZE: usize = 5000;

/// Iterate leftmost-outermost steps, recording the trace.
pub fn normalize(t: &Term, closure: Closure, fuel: usize) -> ReduceOutcome {
    let mut cur = t.clone();
    let mut trace = Vec::new();
    for steps in 0..=fuel {
        match lo_step(&cur, closure) {
            None => return ReduceOutcome { status: Status::Normalized { term: cur, steps }, trace },
            Some(_) if steps == fuel || cur.size() > MAX_TERM_SIZE => break,
            Some((rule, position, next)) => {
                trace.push(TraceStep { rule, position, term: next.clone() });
                cur = next;
            }
        }
    }
    let steps = trace.len();
    ReduceOutcome { status: Status::FuelExhausted { last: cur, steps }, trace }
}

/// Normal form within `fuel` steps, without keeping a trace.
pub fn normal_form(t: &Term, closure: Closure, fuel: usize) -> Option<Term> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match lo_step(&cur, closure) {
            None => return Some(cur),
            Some((_, _, next)) => {
                if next.size() > MAX_TERM_SIZE {
                    return None;
                }
                cur = next;
            }
        }
    }
    lo_step(&cur, closure).is_none().then_some(cur)
}

fn is_list_abs(t: &Term) -> bool {
    peel_list(t).1.is_abs()
}

fn is_list_bang(t: &Term) -> bool {
    peel_list(t).1.is_bang()
}

/// Whether the root of `t` has one of the four clash shapes.
pub fn is_clash(t: &Term) -> bool {
    match t {
        Term::App(f, a) => is_list_bang(f) || (is_list_abs(a) && !is_list_abs(f)),
        Term::Sub(_, _, a) => is_list_abs(a),
        Term::Der(a) => is_list_abs(a),
        _ => false,
    }
}

/// Positions of clashes allowed by `closure`, in pre-order.
pub fn static_clashes(t: &Term, closure: Closure) -> Vec<Vec<usize>> {
    fn go(t: &Term, closure: Closure, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if is_clash(t) {
            out.push(path.clone());
        }
        if enters(t, closure) {
            for (i, c) in t.children().into_iter().enumerate() {
                path.push(i);
                go(c, closure, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, closure, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NfClass {
    NeS,
    NaS,
    NbS,
    NoS,
    NotNormal,
    ClashNF,
}

const NE: u8 = 1;
const NA: u8 = 2;
const NB: u8 = 4;

/// Membership bits in the neutral, bang-like and abstraction-like grammars.
fn grammar_bits(t: &Term) -> u8 {
    let close = |b: u8| if b & NE != 0 { b | NA | NB } else { b };
    close(match t {
        Term::Bound(_) | Term::Free(_) => NE,
        Term::App(f, a) => {
            if grammar_bits(f) & NE != 0 && grammar_bits(a) & NA != 0 {
                NE
            } else {
                0
            }
        }
        Term::Der(a) => grammar_bits(a) & NE,
        Term::Sub(b, _, a) => {
            if grammar_bits(a) & NE != 0 {
                grammar_bits(b)
            } else {
                0
            }
        }
        Term::Bang(_) => NA,
        Term::Abs(_, b) => {
            if grammar_bits(b) != 0 {
                NB
            } else {
                0
            }
        }
    })
}

/// The most specific surface normal form grammar containing `t`.
pub fn grammar_class(t: &Term) -> Option<NfClass> {
    let b = grammar_bits(t);
    if b & NE != 0 {
        Some(NfClass::NeS)
    } else if b & NA != 0 {
        Some(NfClass::NaS)
    } else if b & NB != 0 {
        Some(NfClass::NbS)
    } else {
        None
    }
}

/// `NoS` for grammar members; otherwise `NotNormal` or `ClashNF`.
pub fn classify(t: &Term) -> NfClass {
    if grammar_bits(t) != 0 {
        NfClass::NoS
    } else if lo_step(t, Closure::Surface).is_some() {
        NfClass::NotNormal
    } else {
        NfClass::ClashNF
    }
}

/// Full-closure analogue of `classify`, defined by the absence of full
/// redexes and full clashes.
pub fn classify_full(t: &Term) -> NfClass {
    if lo_step(t, Closure::Full).is_some() {
        NfClass::NotNormal
    } else if static_clashes(t, Closure::Full).is_empty() {
        NfClass::NoS
    } else {
        NfClass::ClashNF
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum ClashFree {
    Yes,
    No { trace: Vec<TraceStep>, clash: Vec<usize> },
    Unknown,
}

/// Follow the leftmost-outermost reduction, looking for a clash on the way.
pub fn clash_free(t: &Term, closure: Closure, fuel: usize) -> ClashFree {
    let mut cur = t.clone();
    let mut trace = Vec::new();
    loop {
        if let Some(p) = static_clashes(&cur, closure).into_iter().next() {
            return ClashFree::No { trace, clash: p };
        }
        if trace.len() == fuel || cur.size() > MAX_TERM_SIZE {
            return match lo_step(&cur, closure) {
                None => ClashFree::Yes,
                Some(_) => ClashFree::Unknown,
            };
        }
        match lo_step(&cur, closure) {
            None => return ClashFree::Yes,
            Some((rule, position, next)) => {
                trace.push(TraceStep { rule, position, term: next.clone() });
                cur = next;
            }
        }
    }
}

/// One-step full reducts using only the rules of `fragment`, one per redex.
pub fn restricted_step(t: &Term, fragment: Fragment) -> Vec<Term> {
    redexes(t, Closure::Full).into_iter().filter(|r| fragment.allows(r.rule)).map(|r| fire(t, &r)).collect()
}

/// Distinct one-step reducts.
pub fn reducts(t: &Term, closure: Closure, fragment: Fragment) -> Vec<Term> {
    let mut seen = HashSet::new();
    redexes(t, closure)
        .into_iter()
        .filter(|r| fragment.allows(r.rule))
        .map(|r| fire(t, &r))
        .filter(|u| seen.insert(u.clone()))
        .collect()
}

/// Terms reachable in at most `depth` steps, capped at `cap` terms.
pub fn reachable(t: &Term, closure: Closure, fragment: Fragment, depth: usize, cap: usize) -> HashSet<Term> {
    let mut seen = HashSet::from([t.clone()]);
    let mut queue = VecDeque::from([(t.clone(), 0)]);
    while let Some((u, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for v in reducts(&u, closure, fragment) {
            if u.size() > MAX_TERM_SIZE || seen.len() >= cap {
                return seen;
            }
            if seen.insert(v.clone()) {
                queue.push_back((v, d + 1));
            }
        }
    }
    seen
}

/// Whether `u1` and `u2` have a common reduct within `fuel` steps each.
pub fn joinable(u1: &Term, u2: &Term, closure: Closure, fuel: usize) -> bool {
    if u1 == u2 {
        return true;
    }
    let a = reachable(u1, closure, Fragment::All, fuel, 20_000);
    let b = reachable(u2, closure, Fragment::All, fuel, 20_000);
    a.iter().any(|x| b.contains(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{omega, Term};

    fn p(s: &str) -> Term {
        Term::parse(s)
    }

    #[test]
    fn distant_beta() {
        let rs = redexes(&p("(\\x.x)[y<-w] !z"), Closure::Surface);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].rule, Rule::DB);
        assert!(rs[0].position.is_empty());
        assert_eq!(rs[0].contractum, p("x[x<-!z][y<-w]"));
        assert!(redexes(&p("x"), Closure::Full).is_empty());
    }

    #[test]
    fn surface_does_not_enter_bangs() {
        let t = p("\\x.!(der !x)");
        assert!(redexes(&t, Closure::Surface).is_empty());
        let rs = redexes(&t, Closure::Full);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].rule, Rule::DBang);
        assert_eq!(rs[0].position, vec![0, 0]);
    }

    #[test]
    fn three_step_example() {
        let lo = Policy::LeftmostOutermost;
        let t = p("(\\x.!der !x) !y");
        let t1 = step(&t, Closure::Surface, lo).unwrap().unwrap();
        assert_eq!(t1, p("(!der !x)[x<-!y]"));
        let t2 = step(&t1, Closure::Surface, lo).unwrap().unwrap();
        assert_eq!(t2, p("!(der !y)"));
        assert_eq!(step(&t2, Closure::Surface, lo).unwrap(), None);
        assert_eq!(step(&t2, Closure::Full, lo).unwrap(), Some(p("!y")));
        assert!(step(&t, Closure::Surface, Policy::ByIndex(3)).is_err());
    }

    #[test]
    fn substitution_through_lists() {
        // The substituted term must not be captured by the list.
        let t = p("(x y)[x<-(!y)[y<-z]]");
        let u = step(&t, Closure::Surface, Policy::LeftmostOutermost).unwrap().unwrap();
        assert_eq!(u, p("(w y)[w<-z]"));
        let t = p("(\\x.x)[y<-w] (!y)");
        let u = step(&t, Closure::Surface, Policy::LeftmostOutermost).unwrap().unwrap();
        assert_eq!(u, p("x[x<-!y][a<-w]"));
        assert_eq!(restricted_step(&p("y[x<-!z]"), Fragment::SBang), vec![p("y")]);
        assert_eq!(restricted_step(&p("der !x"), Fragment::DbDBang), vec![p("x")]);
        assert!(restricted_step(&p("x"), Fragment::All).is_empty());
    }

    #[test]
    fn normalization() {
        let o = normalize(&omega(), Closure::Surface, 100);
        assert!(matches!(o.status, Status::FuelExhausted { steps: 100, .. }));
        let frozen = Term::abs("x", Term::bang(Term::der(Term::bang(omega()))));
        assert!(normalize(&frozen, Closure::Surface, 100).normal_form().is_some());
        assert!(normalize(&frozen, Closure::Full, 100).normal_form().is_none());
        let o = normalize(&p("(\\z.z) !!u"), Closure::Surface, 10);
        assert_eq!(o.normal_form(), Some(&p("!u")));
        assert_eq!(o.trace.len(), 2);
        assert_eq!(o.trace.last().unwrap().term, p("!u"));
    }

    #[test]
    fn clashes() {
        let t = p("x !(y (\\z.z))");
        assert!(static_clashes(&t, Closure::Surface).is_empty());
        assert_eq!(static_clashes(&t, Closure::Full), vec![vec![1, 0]]);
        assert_eq!(static_clashes(&p("!s u"), Closure::Surface), vec![Vec::<usize>::new()]);
        assert!(static_clashes(&p("x x"), Closure::Full).is_empty());
        assert_eq!(clash_free(&t, Closure::Surface, 10), ClashFree::Yes);
        assert!(matches!(clash_free(&t, Closure::Full, 10), ClashFree::No { .. }));
        assert_eq!(clash_free(&p("x x"), Closure::Full, 10), ClashFree::Yes);
        assert_eq!(clash_free(&omega(), Closure::Surface, 100), ClashFree::Unknown);
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&p("x x")), NfClass::NoS);
        assert_eq!(grammar_class(&p("x x")), Some(NfClass::NeS));
        assert_eq!(classify(&p("!s u")), NfClass::ClashNF);
        assert_eq!(classify(&p("(\\x.x) !y")), NfClass::NotNormal);
        assert_eq!(grammar_class(&p("(!x)[y<-z]")), Some(NfClass::NaS));
        assert_eq!(grammar_class(&p("\\x.!x")), Some(NfClass::NbS));
        assert_eq!(classify(&p("x (\\y.y)")), NfClass::ClashNF);
        assert_eq!(classify_full(&p("\\x.!(der !x)")), NfClass::NotNormal);
        assert_eq!(classify_full(&p("x !(y (\\z.z))")), NfClass::ClashNF);
    }

    #[test]
    fn joinability() {
        let t = p("(\\x.x !x) !((\\z.z) !y)");
        let us = reducts(&t, Closure::Full, Fragment::All);
        assert_eq!(us.len(), 2);
        assert!(joinable(&us[0], &us[1], Closure::Full, 6));
        assert!(joinable(&t, &t, Closure::Surface, 0));
        assert!(!joinable(&p("x"), &p("y"), Closure::Full, 5));
    }
}
