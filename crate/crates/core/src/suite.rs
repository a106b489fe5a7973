//! Seeded and exhaustive property suites with deterministic reports.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cbnv::{
    c_meaningful, c_normalize, c_reducts, embed, project, simulate_check, transfer_check, typing_transfer_check, Calc,
    Projection,
};
use crate::inhabitation::{inhabit, InhBounds};
use crate::meaning::{corpus, genericity_check, meaningful, Budgets, Genericity, VerdictKind};
use crate::measures::{ms_gt, multi_size, pot_mult};
use crate::reduction::{
    classify, diamond_peaks, joinable, local_confluence_peaks, lo_step, normal_form, normalize, redexes, reducts,
    restricted_step, static_clashes, strong_commutation_peaks, Closure, Fragment, NfClass,
};
use crate::syntax::{alpha_eq, enum_cterms, enum_terms, free_vars, gen_cterm, gen_term, Ctx, CtxKind, Profile, Term};
use crate::typesys::{
    check_derivation, derive, typable, typable_by_enumeration, typing_set, Bounds, Env, System, Type, Typability,
    Typing,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Confluence,
    Diamond,
    Commutation,
    Measure,
    Grammar,
    Typability,
    Transport,
    Simulation,
    Transfer,
    Genericity,
    Corpus,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Confluence,
        Suite::Diamond,
        Suite::Commutation,
        Suite::Measure,
        Suite::Grammar,
        Suite::Typability,
        Suite::Transport,
        Suite::Simulation,
        Suite::Transfer,
        Suite::Genericity,
        Suite::Corpus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Confluence => "confluence",
            Suite::Diamond => "diamond",
            Suite::Commutation => "commutation",
            Suite::Measure => "measure",
            Suite::Grammar => "grammar",
            Suite::Typability => "typability",
            Suite::Transport => "transport",
            Suite::Simulation => "simulation",
            Suite::Transfer => "transfer",
            Suite::Genericity => "genericity",
            Suite::Corpus => "corpus",
        }
    }

    /// The statement the suite tests.
    pub fn statement(self) -> &'static str {
        match self {
            Suite::Confluence => "full reduction is confluent: one-step peaks join",
            Suite::Diamond => "dB and d! steps are diamond: one-step peaks close in one step each side",
            Suite::Commutation => "s! is locally confluent and strongly commutes with dB and d!",
            Suite::Measure => "s! steps strictly decrease the multiset measure and never raise potential multiplicities",
            Suite::Grammar => "the clash-free normal form grammar is exactly: no surface redex and no surface clash",
            Suite::Typability => "a term is typable iff it surface-normalizes to a clash-free normal form",
            Suite::Transport => "full steps preserve and reflect typings",
            Suite::Simulation => "embeddings project every source step to surface steps of the bang calculus",
            Suite::Transfer => "typings and meaningfulness agree across the embeddings",
            Suite::Genericity => "meaningless subterms can be replaced without losing meaningfulness or the typing",
            Suite::Corpus => "the worked examples reproduce exactly",
        }
    }

    /// Whether cases come from exhaustive enumeration up to `size`.
    pub fn enumerated(self) -> bool {
        matches!(self, Suite::Diamond | Suite::Commutation | Suite::Grammar | Suite::Typability)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite {0:?}")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Seeded cases to generate; enumerated suites take every term instead.
    pub count: usize,
    /// Largest generated or enumerated term.
    pub size: usize,
    pub fuel: usize,
    pub bounds: Bounds,
}

impl SuiteConfig {
    /// Defaults sized for a quick run.
    pub fn new(suite: Suite) -> Self {
        let size = match suite {
            Suite::Diamond | Suite::Commutation => 8,
            Suite::Grammar => 7,
            Suite::Typability | Suite::Transfer => 6,
            _ => 10,
        };
        let count = match suite {
            Suite::Genericity => 50,
            Suite::Transport => 100,
            _ => 200,
        };
        SuiteConfig { suite, seed: 0, count, size, fuel: 200, bounds: Bounds::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case {
    pub index: usize,
    pub input: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub statement: &'static str,
    pub config: SuiteConfig,
    pub counts: Counts,
    pub cases: Vec<Case>,
}

impl Report {
    fn new(config: SuiteConfig, mut cases: Vec<Case>) -> Self {
        cases.sort_by_key(|c| c.index);
        let n = |o| cases.iter().filter(|c| c.outcome == o).count();
        let counts = Counts { pass: n(Outcome::Pass), fail: n(Outcome::Fail), unknown: n(Outcome::Unknown) };
        Report { suite: config.suite, statement: config.suite.statement(), config, counts, cases }
    }

    pub fn ok(&self) -> bool {
        self.counts.fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.outcome == Outcome::Fail)
    }
}

fn case(index: usize, input: impl fmt::Display, r: Result<bool, String>) -> Case {
    let (outcome, detail) = match r {
        Ok(true) => (Outcome::Pass, None),
        Ok(false) => (Outcome::Unknown, None),
        Err(e) => (Outcome::Fail, Some(e)),
    };
    Case { index, input: input.to_string(), outcome, detail }
}

/// Size of the `i`-th seeded case, cycling through `3..=size`.
fn size_of(i: usize, size: usize) -> usize {
    3 + i % size.saturating_sub(2).max(1)
}

fn seeded(cfg: &SuiteConfig, i: usize) -> Term {
    gen_term(cfg.seed.wrapping_add(i as u64), size_of(i, cfg.size), Profile::Bang)
}

fn free_pool() -> [&'static str; 2] {
    ["x", "y"]
}

/// Depth of the joining searches in the confluence suites.
pub const JOIN_DEPTH: usize = 6;

pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let cases = match cfg.suite {
        Suite::Confluence => par_seeded(
            cfg,
            |t| reducts(t, Closure::Full, Fragment::All).len() > 1,
            |t| confluence_case(t, cfg.fuel),
        ),
        Suite::Diamond => par_enum(cfg, |t| diamond_peaks(t).map(|_| true).map_err(|f| peak(&f))),
        Suite::Commutation => par_enum(cfg, |t| {
            local_confluence_peaks(t, JOIN_DEPTH).map_err(|f| format!("s! peak {}", peak(&f)))?;
            strong_commutation_peaks(t, JOIN_DEPTH).map_err(|f| format!("commutation {}", peak(&f)))?;
            Ok(true)
        }),
        Suite::Measure => {
            par_seeded(cfg, |t| !restricted_step(t, Fragment::SBang).is_empty(), measure_case)
        }
        Suite::Grammar => par_enum(cfg, grammar_case),
        Suite::Typability => par_enum(cfg, |t| typability_case(t, cfg.fuel)),
        Suite::Transport => transport_cases(cfg),
        Suite::Simulation => simulation_cases(cfg),
        Suite::Transfer => transfer_cases(cfg),
        Suite::Genericity => genericity_cases(cfg),
        Suite::Corpus => corpus_cases(),
    };
    Report::new(*cfg, cases)
}

fn peak(f: &crate::reduction::PeakFailure) -> String {
    format!("{} <- {} -> {}", f.left, f.source, f.right)
}

/// The first `count` seeded terms satisfying `relevant`, keyed by seed offset.
fn sample(cfg: &SuiteConfig, relevant: impl Fn(&Term) -> bool) -> Vec<(usize, Term)> {
    let mut out = Vec::new();
    let mut i = 0usize;
    while out.len() < cfg.count && i < 100 * cfg.count.max(1) {
        let t = seeded(cfg, i);
        if relevant(&t) {
            out.push((i, t));
        }
        i += 1;
    }
    out
}

fn par_seeded(
    cfg: &SuiteConfig,
    relevant: impl Fn(&Term) -> bool,
    f: impl Fn(&Term) -> Result<bool, String> + Sync,
) -> Vec<Case> {
    sample(cfg, relevant).par_iter().map(|(i, t)| case(*i, t, f(t))).collect()
}

fn par_enum(cfg: &SuiteConfig, f: impl Fn(&Term) -> Result<bool, String> + Sync) -> Vec<Case> {
    let terms = enum_terms(cfg.size, &free_pool());
    terms.par_iter().enumerate().map(|(i, t)| case(i, t, f(t))).collect()
}

fn confluence_case(t: &Term, fuel: usize) -> Result<bool, String> {
    let us = reducts(t, Closure::Full, Fragment::All);
    let mut decided = true;
    for (i, u1) in us.iter().enumerate() {
        for u2 in &us[i + 1..] {
            if joinable(u1, u2, Closure::Full, 4) {
                continue;
            }
            match (normal_form(u1, Closure::Full, fuel), normal_form(u2, Closure::Full, fuel)) {
                (Some(a), Some(b)) if a == b => {}
                (Some(a), Some(b)) => return Err(format!("{u1} and {u2} reach {a} and {b}")),
                _ => decided = false,
            }
        }
    }
    Ok(decided)
}

fn measure_case(t: &Term) -> Result<bool, String> {
    let m = multi_size(t);
    for u in restricted_step(t, Fragment::SBang) {
        if !ms_gt(&m, &multi_size(&u)) {
            return Err(format!("measure does not decrease towards {u}"));
        }
        for x in free_vars(t) {
            if pot_mult(&x, t) < pot_mult(&x, &u) {
                return Err(format!("potential multiplicity of {x} grows towards {u}"));
            }
        }
    }
    Ok(true)
}

fn grammar_case(t: &Term) -> Result<bool, String> {
    let nos = classify(t) == NfClass::NoS;
    let clean = redexes(t, Closure::Surface).is_empty() && static_clashes(t, Closure::Surface).is_empty();
    if nos == clean {
        Ok(true)
    } else {
        Err(format!("grammar says {nos}, redexes and clashes say {clean}"))
    }
}

fn typability_case(t: &Term, fuel: usize) -> Result<bool, String> {
    let by_nf = match typable(t, fuel) {
        Typability::Yes { .. } => true,
        Typability::No { .. } => false,
        Typability::Unknown => return Ok(false),
    };
    let by_search = typable_by_enumeration(System::B, t);
    if by_nf == by_search {
        Ok(true)
    } else {
        Err(format!("normal form says {by_nf}, derivation search says {by_search}"))
    }
}

fn transport_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let relevant = |t: &Term| {
        !reducts(t, Closure::Full, Fragment::All).is_empty() && matches!(typable(t, cfg.fuel), Typability::Yes { .. })
    };
    sample(cfg, relevant)
        .par_iter()
        .map(|(i, t)| {
            let here = typing_set(System::B, t, &cfg.bounds);
            let r = reducts(t, Closure::Full, Fragment::All)
                .into_iter()
                .find(|u| typing_set(System::B, u, &cfg.bounds) != here)
                .map_or(Ok(true), |u| Err(format!("typings differ after the step to {u}")));
            case(*i, t, r)
        })
        .collect()
}

fn simulation_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let mut jobs: Vec<(usize, Calc, Term)> = Vec::new();
    for calc in [Calc::Cbn, Calc::Cbv] {
        let mut i = 0usize;
        let start = jobs.len();
        while jobs.len() - start < cfg.count && i < 100 * cfg.count.max(1) {
            let t = gen_cterm(cfg.seed.wrapping_add(i as u64), size_of(i, cfg.size));
            if !c_reducts(calc, &t).is_empty() {
                jobs.push((2 * i + (calc == Calc::Cbv) as usize, calc, t));
            }
            i += 1;
        }
    }
    jobs.par_iter()
        .map(|(k, calc, t)| {
            let (k, calc) = (*k, *calc);
            let r = simulate_check(calc, t, 8);
            let res = match r.steps.iter().find(|s| s.projection == Projection::Missed) {
                Some(s) => Err(format!("{} -> {} does not project", s.source, s.reduct)),
                None => Ok(r.undecided() == 0),
            };
            case(k, format!("{calc:?} {t}"), res)
        })
        .collect()
}

/// The fragment terms whose meaningfulness is compared across embeddings.
pub fn transfer_corpus() -> Vec<&'static str> {
    vec![
        "\\z.z",
        "(\\x.x x) (\\x.x x)",
        "x ((\\x.x x) (\\x.x x))",
        "\\x.(\\y.y y) (\\y.y y)",
        "x (\\y.z)",
        "x (\\y.(\\x.x x) (\\x.x x))",
    ]
}

fn transfer_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let terms = enum_cterms(cfg.size, &free_pool());
    let budgets = Budgets { fuel: cfg.fuel, types: cfg.bounds, refute: true, ..Budgets::default() };
    let mut jobs: Vec<(Calc, Term, bool)> = Vec::new();
    for calc in [Calc::Cbn, Calc::Cbv] {
        jobs.extend(transfer_corpus().into_iter().map(|s| (calc, Term::parse(s), true)));
        jobs.extend(terms.iter().map(|t| (calc, t.clone(), false)));
    }
    jobs.par_iter()
        .enumerate()
        .map(|(k, (calc, t, meaning))| {
            let r = if *meaning {
                let r = transfer_check(*calc, t, &budgets);
                if r.disagrees() {
                    Err(format!("source {:?}, embedding {:?}", r.source, r.embedded))
                } else {
                    Ok(r.source.decided() && r.embedded.decided())
                }
            } else {
                let r = typing_transfer_check(*calc, t, &cfg.bounds);
                if r.agrees() {
                    Ok(true)
                } else {
                    Err(format!("only source {:?}, only embedding {:?}", r.only_source, r.only_embedded))
                }
            };
            let tag = if *meaning { "meaning" } else { "typing" };
            case(k, format!("{calc:?} {tag} {t}"), r)
        })
        .collect()
}

/// Curated full contexts whose plugging of a meaningless term is meaningful.
pub fn genericity_pairs() -> Vec<(&'static str, &'static str)> {
    let omega = "(\\x.x !x) !(\\x.x !x)";
    let xx = "x x";
    let lo = "\\x.(\\y.y !y) !(\\y.y !y)";
    let xo = "x ((\\x.x !x) !(\\x.x !x))";
    vec![
        ("![]", omega),
        ("![]", xx),
        ("(\\x.!y) ![]", omega),
        ("(\\x.!x) ![]", omega),
        ("(\\x.x) !![]", omega),
        ("der !!([])", omega),
        ("!([] y)", omega),
        ("(\\f.f !y) !(\\z.![])", omega),
        ("(\\x.\\z.z) ![]", omega),
        ("(\\x.\\z.z) ![]", lo),
        ("\\x.![]", xo),
        ("(![])[y<-!z]", xx),
        ("(\\x.\\y.y) ![] !(\\z.z)", omega),
        ("(\\x.!(\\z.z)) ![]", xx),
        ("(\\x.!(x x)) ![]", omega),
        ("!(\\y.[])", lo),
        ("der !(!([]))", xo),
        ("(\\y.!y) !(\\z.[])", omega),
        ("((\\z.z)[x<-![]]) !(\\w.w)", omega),
        ("z[z<-!![]]", lo),
    ]
}

fn genericity_cases(cfg: &SuiteConfig) -> Vec<Case> {
    let budgets = Budgets { fuel: cfg.fuel, types: cfg.bounds, refute: true, ..Budgets::default() };
    let samples: Vec<Term> = (0..cfg.count)
        .map(|j| gen_term(cfg.seed.wrapping_add(j as u64), size_of(j, cfg.size), Profile::Bang))
        .collect();
    genericity_pairs()
        .par_iter()
        .enumerate()
        .map(|(i, (f, t))| {
            let input = format!("{f} with {t}");
            let ctx = match Ctx::parse(CtxKind::Full, f) {
                Ok(c) => c,
                Err(e) => return case(i, input, Err(e.to_string())),
            };
            let g = genericity_check(&ctx, &Term::parse(t), &samples, &budgets);
            let r = match &g {
                Genericity::Vacuous { subterm, plugged } => {
                    Err(format!("hypothesis fails: subterm {subterm:?}, plugged {plugged:?}"))
                }
                Genericity::Checked { cases, .. } => match cases
                    .iter()
                    .find(|c| c.verdict == VerdictKind::Meaningless || c.typed == Some(false))
                {
                    Some(c) => Err(format!("replacement {} gives {:?}, typed {:?}", c.replacement, c.verdict, c.typed)),
                    None => Ok(g.unknown() == 0),
                },
            };
            case(i, input, r)
        })
        .collect()
}

/// A named golden check.
pub struct Golden {
    pub name: &'static str,
    pub check: fn() -> Result<(), String>,
}

fn expect_term(what: &str, got: Option<&Term>, want: &str) -> Result<(), String> {
    let want = Term::parse(want);
    match got {
        Some(g) if alpha_eq(g, &want) => Ok(()),
        Some(g) => Err(format!("{what}: got {g}, expected {want}")),
        None => Err(format!("{what}: nothing, expected {want}")),
    }
}

const T0: &str = "(\\x. y x x)((\\z.z) (\\z.z))";

pub fn golden() -> Vec<Golden> {
    vec![
        Golden {
            name: "three-step reduction of (\\x.!der !x) !y",
            check: || {
                let out = normalize(&Term::parse("(\\x.!der !x) !y"), Closure::Surface, 10);
                let terms: Vec<&Term> = out.trace.iter().map(|s| &s.term).collect();
                if terms.len() != 2 {
                    return Err(format!("{} surface steps", terms.len()));
                }
                expect_term("first step", Some(terms[0]), "(!der !x)[x<-!y]")?;
                expect_term("surface normal form", out.normal_form(), "!(der !y)")?;
                let full = lo_step(terms[1], Closure::Full).map(|s| s.2);
                expect_term("full step", full.as_ref(), "!y")
            },
        },
        Golden {
            name: "derivation of x x",
            check: || {
                let ty = Typing::new(Env::parse("x:[[a]->b, [a]]").map_err(|e| e.to_string())?, Type::parse("b"));
                let d = derive(System::B, &Term::parse("x x"), &ty).ok_or("no derivation")?;
                check_derivation(&d).map_err(|e| e.to_string())
            },
        },
        Golden {
            name: "inhabitation of [a]->[a]",
            check: || {
                let r = inhabit(System::B, &Type::parse("[a]->[a]"), &InhBounds::default());
                expect_term("witness", r.witness(), "\\x.!x")
            },
        },
        Golden {
            name: "call-by-name result",
            check: || {
                let out = c_normalize(Calc::Cbn, &Term::parse(T0), 10);
                expect_term("normal form", out.normal_form(), "y ((\\z.z) (\\z.z)) ((\\z.z) (\\z.z))")
            },
        },
        Golden {
            name: "call-by-value result",
            check: || {
                let out = c_normalize(Calc::Cbv, &Term::parse(T0), 10);
                if out.trace.len() != 4 {
                    return Err(format!("{} steps", out.trace.len()));
                }
                expect_term("normal form", out.normal_form(), "y (\\z.z) (\\z.z)")
            },
        },
        Golden {
            name: "embeddings",
            check: || {
                let t0 = Term::parse(T0);
                expect_term("call-by-name", Some(&embed(Calc::Cbn, &t0)), "(\\x. y !x !x) !((\\z.z) !(\\z.z))")?;
                expect_term(
                    "call-by-value",
                    Some(&embed(Calc::Cbv, &t0)),
                    "(\\x. (der (y !x)) !x) ((\\z.!z) !(\\z.!z))",
                )?;
                expect_term("variable", Some(&embed(Calc::Cbv, &Term::var("x"))), "!x")
            },
        },
        Golden {
            name: "simulated chains",
            check: || {
                let n = [
                    "(\\x. y !x !x) !((\\z.z) !(\\z.z))",
                    "(y !x !x)[x<-!((\\z.z) !(\\z.z))]",
                    "y !((\\z.z) !(\\z.z)) !((\\z.z) !(\\z.z))",
                ];
                let v = [
                    "(\\x. (der (y !x)) !x) ((\\z.!z) !(\\z.!z))",
                    "((der (y !x)) !x)[x<-(\\z.!z) !(\\z.!z)]",
                    "((der (y !x)) !x)[x<-(!z)[z<-!(\\z.!z)]]",
                    "((der (y !x)) !x)[x<-!(\\z.!z)]",
                    "(der (y !(\\z.!z))) !(\\z.!z)",
                ];
                for chain in [&n[..], &v[..]] {
                    for w in chain.windows(2) {
                        let p = project(&Term::parse(w[0]), &Term::parse(w[1]), 1, 100);
                        if p != (Projection::Projected { steps: 1 }) {
                            return Err(format!("{} to {}: {p:?}", w[0], w[1]));
                        }
                    }
                }
                for calc in [Calc::Cbn, Calc::Cbv] {
                    let r = simulate_check(calc, &Term::parse(T0), 10);
                    if r.failures() + r.undecided() > 0 {
                        return Err(format!("{calc:?} simulation incomplete"));
                    }
                }
                Ok(())
            },
        },
        Golden {
            name: "meaningfulness verdicts",
            check: || {
                for e in corpus() {
                    let got = meaningful(&Term::parse(e.term), &Budgets::default()).kind();
                    if got != e.default {
                        return Err(format!("{}: {got:?}, expected {:?}", e.name, e.default));
                    }
                    let got = meaningful(&Term::parse(e.term), &Budgets { refute: true, ..Budgets::default() }).kind();
                    if got != e.refuting {
                        return Err(format!("{} refuting: {got:?}, expected {:?}", e.name, e.refuting));
                    }
                }
                Ok(())
            },
        },
        Golden {
            name: "fragment meaningfulness",
            check: || {
                let cases = [
                    (Calc::Cbn, "x (\\y.(\\x.x x) (\\x.x x))", VerdictKind::Meaningful),
                    (Calc::Cbn, "\\x.(\\y.y y) (\\y.y y)", VerdictKind::Unknown),
                    (Calc::Cbv, "x (\\y.z)", VerdictKind::Meaningful),
                ];
                for (calc, src, want) in cases {
                    let got = c_meaningful(calc, &Term::parse(src), 200, false).kind();
                    if got != want {
                        return Err(format!("{calc:?} {src}: {got:?}"));
                    }
                }
                Ok(())
            },
        },
    ]
}

fn corpus_cases() -> Vec<Case> {
    golden().iter().enumerate().map(|(i, g)| case(i, g.name, (g.check)().map(|_| true))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite) -> SuiteConfig {
        let mut c = SuiteConfig::new(suite);
        c.count = 20;
        if suite.enumerated() || suite == Suite::Transfer {
            c.size = c.size.min(5);
        }
        c.seed = 7;
        c
    }

    #[test]
    fn suites_pass_at_small_scale() {
        for s in Suite::ALL {
            let r = run_suite(&small(s));
            assert!(r.ok(), "{s}: {:?}", r.failures().collect::<Vec<_>>());
            assert!(r.counts.pass > 0, "{s}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        for s in [Suite::Measure, Suite::Simulation, Suite::Grammar] {
            assert_eq!(run_suite(&small(s)), run_suite(&small(s)));
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
