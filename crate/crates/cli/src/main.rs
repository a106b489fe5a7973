use std::fs;
use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use banglab::cbnv::{self, Calc};
use banglab::inhabitation::{InhBounds, InhResult, Prover, Testability};
use banglab::meaning::{Budgets, Checker, MeaningVerdict};
use banglab::measures::measure_report;
use banglab::reduction::{classify, grammar_class, normalize, redexes, static_clashes, step, Closure, Policy};
use banglab::suite::{golden, run_suite, Outcome, Suite, SuiteConfig};
use banglab::syntax::{free_vars, parse_term, Term};
use banglab::typesys::{check_derivation, parse_type, typings_enumerate, Bounds, Derivation, Env, System, Typing};

#[derive(Parser)]
#[command(name = "banglab", version, about = "Reduction, typing and meaningfulness for the distant bang calculus")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Reduction steps allowed.
    #[arg(long, global = true, default_value_t = 200)]
    fuel: usize,
    /// Largest multiset cardinality in enumerated typings.
    #[arg(long, global = true, default_value_t = 2)]
    card: usize,
    /// Largest type depth in enumerated typings.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    /// Number of type variables in enumerated typings.
    #[arg(long, global = true, default_value_t = 2)]
    pool: usize,
}

impl Global {
    fn bounds(&self) -> Bounds {
        Bounds { card: self.card, pool: self.pool, depth: self.depth }
    }

    fn budgets(&self, refute: bool) -> Budgets {
        Budgets { fuel: self.fuel, types: self.bounds(), refute, ..Budgets::default() }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Surface,
    Full,
}

impl From<Strategy> for Closure {
    fn from(s: Strategy) -> Closure {
        match s {
            Strategy::Surface => Closure::Surface,
            Strategy::Full => Closure::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Sys {
    B,
    N,
    V,
}

impl From<Sys> for System {
    fn from(s: Sys) -> System {
        match s {
            Sys::B => System::B,
            Sys::N => System::N,
            Sys::V => System::V,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Cbn,
    Cbv,
}

impl From<Source> for Calc {
    fn from(f: Source) -> Calc {
        match f {
            Source::Cbn => Calc::Cbn,
            Source::Cbv => Calc::Cbv,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a term and print it back.
    Parse { term: String },
    /// Reduce step by step, printing the trace.
    Reduce {
        term: String,
        #[arg(long, value_enum, default_value = "surface")]
        strategy: Strategy,
        /// Fire only the redex with this index, once.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Reduce to normal form.
    Normalize {
        term: String,
        #[arg(long, value_enum, default_value = "surface")]
        strategy: Strategy,
    },
    /// Classify a term against the normal form grammar.
    Classify { term: String },
    /// Potential multiplicities and the multiset measure.
    Measure { term: String },
    /// Typings within the bounds, one derivation each.
    Typings {
        term: String,
        #[arg(long, value_enum, default_value = "b")]
        system: Sys,
    },
    /// Check a JSON derivation read from a file, or stdin with `-`.
    CheckDerivation { file: String },
    /// Search for a closed inhabitant of a type.
    Inhabit {
        #[arg(name = "type")]
        ty: String,
        #[arg(long, value_enum, default_value = "b")]
        system: Sys,
        /// Largest witness size.
        #[arg(long, default_value_t = InhBounds::default().size)]
        size: usize,
    },
    /// Decide whether a typing is testable.
    Testable {
        #[arg(name = "type")]
        ty: String,
        /// Environment such as `x:[a], y:[]`.
        #[arg(long, default_value = "")]
        env: String,
        #[arg(long, value_enum, default_value = "b")]
        system: Sys,
    },
    /// Decide meaningfulness, with a testing context as evidence.
    Meaningful {
        term: String,
        /// Also decide meaninglessness.
        #[arg(long)]
        refute: bool,
        /// Read the term in a fragment instead of the bang calculus.
        #[arg(long, value_enum)]
        from: Option<Source>,
    },
    /// Embed a fragment term into the bang calculus.
    Embed {
        term: String,
        #[arg(long, value_enum)]
        from: Source,
    },
    /// Check that fragment steps project into the bang calculus.
    Simulate {
        term: String,
        #[arg(long, value_enum)]
        from: Source,
    },
    /// Compare meaningfulness and typings across an embedding.
    Transfer {
        term: String,
        #[arg(long, value_enum)]
        from: Source,
        #[arg(long)]
        refute: bool,
    },
    /// Run a seeded or exhaustive property suite.
    PropTest {
        #[arg(long)]
        suite: Suite,
        #[arg(long, env = "BANGLAB_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        size: Option<usize>,
        /// Print every case, not only failures.
        #[arg(long)]
        all: bool,
    },
    /// Run the golden examples.
    Corpus,
}

/// Bad input, reported with exit code 2.
#[derive(Debug)]
struct Usage(anyhow::Error);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(Usage(e.into()))
}

fn term(src: &str) -> anyhow::Result<Term> {
    parse_term(src).map_err(|e| usage(anyhow!("{src:?}: {e}")))
}

fn fragment_term(src: &str) -> anyhow::Result<Term> {
    let t = term(src)?;
    if !t.is_cterm() {
        return Err(usage(anyhow!("{src:?} uses ! or der")));
    }
    Ok(t)
}

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, value: Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        } else {
            println!("{}", text());
        }
    }
}

fn verdict_text(v: &MeaningVerdict) -> String {
    match v {
        MeaningVerdict::Meaningful(e) => format!(
            "meaningful\n  context:    {}\n  typing:     {}\n  observable: {} ({} steps)",
            e.context, e.typing, e.observable, e.steps
        ),
        other => format!("{:?}", other.kind()).to_lowercase() + &format!("\n  {}", to_json(other)),
    }
}

fn to_json(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("json")
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let g = cli.global;
    let out = Out { json: g.json };
    match cli.cmd {
        Cmd::Parse { term: src } => {
            let t = term(&src)?;
            let fv: Vec<String> = free_vars(&t).iter().map(|x| x.to_string()).collect();
            out.emit(json!({"term": t.to_string(), "size": t.size(), "free": fv}), || t.to_string());
        }
        Cmd::Reduce { term: src, strategy, index } => {
            let t = term(&src)?;
            let closure = strategy.into();
            if let Some(i) = index {
                let u = step(&t, closure, Policy::ByIndex(i)).map_err(usage)?;
                let u = u.expect("an index in range names a redex");
                out.emit(json!({"term": u.to_string()}), || u.to_string());
                return Ok(true);
            }
            let r = normalize(&t, closure, g.fuel);
            let steps: Vec<Value> = r
                .trace
                .iter()
                .map(|s| json!({"rule": s.rule.to_string(), "position": s.position, "term": s.term.to_string()}))
                .collect();
            let nf = r.normal_form().map(|n| n.to_string());
            out.emit(json!({"term": t.to_string(), "trace": steps, "normal_form": nf}), || {
                let mut s = t.to_string();
                for st in &r.trace {
                    s += &format!("\n  ->{} {}", st.rule, st.term);
                }
                if nf.is_none() {
                    s += "\n  (fuel exhausted)";
                }
                s
            });
        }
        Cmd::Normalize { term: src, strategy } => {
            let t = term(&src)?;
            let r = normalize(&t, strategy.into(), g.fuel);
            let steps = r.trace.len();
            match r.normal_form() {
                Some(n) => out.emit(json!({"status": "normalized", "term": n.to_string(), "steps": steps}), || {
                    n.to_string()
                }),
                None => out.emit(
                    json!({"status": "fuel_exhausted", "last": r.last().to_string(), "steps": steps}),
                    || format!("fuel exhausted after {steps} steps"),
                ),
            }
        }
        Cmd::Classify { term: src } => {
            let t = term(&src)?;
            let class = classify(&t);
            let grammar = grammar_class(&t);
            let redexes: Vec<Value> = redexes(&t, Closure::Surface)
                .iter()
                .map(|r| json!({"rule": r.rule.to_string(), "position": r.position}))
                .collect();
            let clashes = static_clashes(&t, Closure::Surface);
            out.emit(
                json!({"class": to_json(&class), "grammar": to_json(&grammar), "redexes": redexes, "clashes": clashes}),
                || format!("{class:?}"),
            );
        }
        Cmd::Measure { term: src } => {
            let t = term(&src)?;
            let r = measure_report(&t);
            out.emit(r.clone(), || serde_json::to_string(&r).expect("json"));
        }
        Cmd::Typings { term: src, system } => {
            let t = term(&src)?;
            let ds = typings_enumerate(system.into(), &t, &g.bounds());
            out.emit(to_json(&ds), || ds.iter().map(|d| d.typing().to_string()).collect::<Vec<_>>().join("\n"));
        }
        Cmd::CheckDerivation { file } => {
            let mut text = String::new();
            if file == "-" {
                std::io::stdin().read_to_string(&mut text)?;
            } else {
                text = fs::read_to_string(&file).with_context(|| format!("reading {file}")).map_err(usage)?;
            }
            let d: Derivation = serde_json::from_str(&text).map_err(usage)?;
            return Ok(match check_derivation(&d) {
                Ok(()) => {
                    out.emit(json!({"ok": true, "typing": d.typing().to_string()}), || format!("ok: {}", d.typing()));
                    true
                }
                Err(e) => {
                    out.emit(json!({"ok": false, "violation": e.to_string(), "path": e.path}), || e.to_string());
                    false
                }
            });
        }
        Cmd::Inhabit { ty, system, size } => {
            let ty = parse_type(&ty).map_err(usage)?;
            let mut p = Prover::new(system.into(), InhBounds { size, ..InhBounds::default() });
            let r = p.inhabit(&ty);
            out.emit(to_json(&r), || match &r {
                InhResult::Inhabited { witness, .. } => format!("inhabited by {witness}"),
                InhResult::NotInhabited { certificate } => format!("not inhabited: {certificate}"),
                InhResult::Unknown => "unknown".into(),
            });
        }
        Cmd::Testable { ty, env, system } => {
            let ty = parse_type(&ty).map_err(usage)?;
            let env = Env::parse(&env).map_err(usage)?;
            let typing = Typing::new(env, ty);
            let mut p = Prover::new(system.into(), InhBounds::default());
            let r = p.testable(&typing);
            out.emit(to_json(&r), || match &r {
                Testability::Yes { .. } => format!("testable\n  {}", to_json(&r)),
                Testability::No { goal, certificate } => format!("not testable: {goal}: {certificate}"),
                Testability::Unknown { .. } => "unknown".into(),
            });
        }
        Cmd::Meaningful { term: src, refute, from } => match from {
            None => {
                let t = term(&src)?;
                let v = Checker::new(g.budgets(refute)).meaningful(&t);
                out.emit(to_json(&v), || verdict_text(&v));
            }
            Some(f) => {
                let t = fragment_term(&src)?;
                let v = cbnv::c_meaningful(f.into(), &t, g.fuel, refute);
                out.emit(to_json(&v), || format!("{:?}", v.kind()).to_lowercase());
            }
        },
        Cmd::Embed { term: src, from } => {
            let t = fragment_term(&src)?;
            let e = cbnv::embed(from.into(), &t);
            out.emit(json!({"term": e.to_string()}), || e.to_string());
        }
        Cmd::Simulate { term: src, from } => {
            let t = fragment_term(&src)?;
            let r = cbnv::simulate_check(from.into(), &t, g.fuel);
            let ok = r.failures() == 0;
            out.emit(to_json(&r), || {
                format!("{} steps, {} missed, {} undecided", r.steps.len(), r.failures(), r.undecided())
            });
            return Ok(ok);
        }
        Cmd::Transfer { term: src, from, refute } => {
            let t = fragment_term(&src)?;
            let calc = from.into();
            let m = cbnv::transfer_check(calc, &t, &g.budgets(refute));
            let ty = cbnv::typing_transfer_check(calc, &t, &g.bounds());
            let ok = !m.disagrees() && ty.agrees();
            out.emit(json!({"meaning": to_json(&m), "typings": to_json(&ty)}), || {
                format!(
                    "source {:?}, embedding {:?}; typings {}",
                    m.source,
                    m.embedded,
                    if ty.agrees() { "agree" } else { "differ" }
                )
            });
            return Ok(ok);
        }
        Cmd::PropTest { suite, seed, count, size, all } => {
            let mut cfg = SuiteConfig::new(suite);
            cfg.seed = seed;
            cfg.fuel = g.fuel;
            cfg.bounds = g.bounds();
            cfg.count = count.unwrap_or(cfg.count);
            cfg.size = size.unwrap_or(cfg.size);
            let mut r = run_suite(&cfg);
            if !all {
                r.cases.retain(|c| c.outcome == Outcome::Fail);
            }
            let ok = r.ok();
            out.emit(to_json(&r), || {
                let mut s = format!(
                    "{}: {}\npass {}  fail {}  unknown {}",
                    r.suite, r.statement, r.counts.pass, r.counts.fail, r.counts.unknown
                );
                for c in &r.cases {
                    s += &format!("\n  [{:?}] #{} {} {}", c.outcome, c.index, c.input, c.detail.as_deref().unwrap_or(""));
                }
                s
            });
            return Ok(ok);
        }
        Cmd::Corpus => {
            let results: Vec<(&str, Result<(), String>)> = golden().iter().map(|g| (g.name, (g.check)())).collect();
            let ok = results.iter().all(|(_, r)| r.is_ok());
            let v: Vec<Value> =
                results.iter().map(|(n, r)| json!({"name": n, "ok": r.is_ok(), "error": r.as_ref().err()})).collect();
            out.emit(Value::Array(v), || {
                results
                    .iter()
                    .map(|(n, r)| match r {
                        Ok(()) => format!("ok    {n}"),
                        Err(e) => format!("FAIL  {n}: {e}"),
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
