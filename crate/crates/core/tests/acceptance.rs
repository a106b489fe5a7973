//! The acceptance gate: every criterion at its stated scale, tolerance and
//! time limit, one line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use banglab::meaning::{
    context_pool, corpus, discriminate, meaningful, replay, search_testing_context, Budgets, Discrimination,
    MeaningVerdict, VerdictKind,
};
use banglab::suite::{golden, run_suite, Report, Suite, SuiteConfig};
use banglab::syntax::{gen_term, Ctx, Profile, Term};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn suite(s: Suite, seed: u64, count: usize, size: usize) -> Report {
    let mut cfg = SuiteConfig::new(s);
    cfg.seed = seed;
    cfg.count = count;
    cfg.size = size;
    run_suite(&cfg)
}

/// No failures and, when `strict`, no undecided cases.
fn clean(r: &Report, strict: bool) -> Outcome {
    let c = &r.counts;
    let summary = format!("{}: {} pass, {} fail, {} unknown", r.suite, c.pass, c.fail, c.unknown);
    if let Some(f) = r.failures().next() {
        return Err(format!("{summary}; first failure {} {}", f.input, f.detail.as_deref().unwrap_or("")));
    }
    if c.pass == 0 || (strict && c.unknown > 0) {
        return Err(summary);
    }
    Ok(summary)
}

fn golden_corpus() -> Outcome {
    let gs = golden();
    for g in &gs {
        (g.check)().map_err(|e| format!("{}: {e}", g.name))?;
    }
    Ok(format!("{} examples", gs.len()))
}

fn diamond() -> Outcome {
    clean(&suite(Suite::Diamond, 0, 0, 8), true)
}

fn commutation() -> Outcome {
    clean(&suite(Suite::Commutation, 0, 0, 8), true)
}

fn measure() -> Outcome {
    let r = suite(Suite::Measure, 1, 1000, 14);
    if r.cases.len() < 1000 {
        return Err(format!("only {} terms with an s! step", r.cases.len()));
    }
    clean(&r, true)
}

fn grammar() -> Outcome {
    clean(&suite(Suite::Grammar, 0, 0, 7), true)
}

fn typability() -> Outcome {
    let t = suite(Suite::Transport, 3, 500, 10);
    if t.cases.len() < 500 {
        return Err(format!("only {} typed terms sampled", t.cases.len()));
    }
    let a = clean(&t, true)?;
    let b = clean(&suite(Suite::Typability, 0, 0, 6), false)?;
    Ok(format!("{a}; {b}"))
}

fn soundness_loop() -> Outcome {
    let budgets = Budgets { refute: true, ..Budgets::default() };
    let pool = context_pool();
    let mut terms: Vec<Term> = corpus().iter().map(|e| Term::parse(e.term)).collect();
    terms.extend((0..500u64).map(|i| gen_term(7000 + i, 3 + (i as usize) % 8, Profile::Bang)));
    let (mut yes, mut no, mut unknown) = (0, 0, 0);
    for t in &terms {
        match meaningful(t, &budgets) {
            MeaningVerdict::Meaningful(e) => {
                yes += 1;
                match replay(&e.context, t, 1000) {
                    Some((obs, _)) if obs.is_bang() => {}
                    _ => return Err(format!("context {} does not send {t} to a bang", e.context)),
                }
            }
            MeaningVerdict::Meaningless(why) => {
                no += 1;
                if let Some(c) = search_testing_context(t, 3, &pool, 100) {
                    return Err(format!("{t} judged {why:?} but {c} sends it to a bang"));
                }
            }
            MeaningVerdict::Unknown(_) => unknown += 1,
        }
    }
    Ok(format!("{yes} meaningful replayed, {no} meaningless unrefuted, {unknown} unknown"))
}

fn separation() -> Outcome {
    let omega = Term::parse("(\\x.x !x) !(\\x.x !x)");
    match discriminate(&Term::parse("!x"), &omega, &[], &Budgets::default()) {
        Discrimination::Separated { context, left, right }
            if context == Ctx::hole() && left == VerdictKind::Meaningful && right == VerdictKind::Meaningless =>
        {
            Ok(format!("separated by {context}"))
        }
        d => Err(format!("{d:?}")),
    }
}

fn genericity() -> Outcome {
    let r = suite(Suite::Genericity, 11, 50, 10);
    if r.cases.len() != 20 {
        return Err(format!("{} pairs", r.cases.len()));
    }
    clean(&r, true).map(|s| s + " (20 pairs x 50 replacements)")
}

fn transfer() -> Outcome {
    let s = suite(Suite::Simulation, 5, 500, 12);
    if s.cases.len() < 1000 {
        return Err(format!("only {} fragment terms with a step", s.cases.len()));
    }
    let a = clean(&s, true)?;
    let b = clean(&suite(Suite::Transfer, 0, 0, 6), false)?;
    Ok(format!("{a}; {b}"))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "golden corpus", limit: secs(5), run: golden_corpus },
        Criterion { id: 2, name: "diamond of dB and d!", limit: secs(60), run: diamond },
        Criterion { id: 3, name: "s! local confluence and strong commutation", limit: secs(60), run: commutation },
        Criterion { id: 4, name: "measure decrease", limit: secs(30), run: measure },
        Criterion { id: 5, name: "normal form grammar", limit: secs(60), run: grammar },
        Criterion { id: 6, name: "typing transport and typability", limit: secs(300), run: typability },
        Criterion { id: 7, name: "meaningfulness soundness loop", limit: secs(300), run: soundness_loop },
        Criterion { id: 8, name: "separation of !x and omega", limit: secs(1), run: separation },
        Criterion { id: 9, name: "genericity", limit: secs(300), run: genericity },
        Criterion { id: 10, name: "call-by-name and call-by-value transfer", limit: secs(600), run: transfer },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let res = (c.run)();
        let took = start.elapsed();
        let res = match res {
            Ok(s) if took > c.limit => Err(format!("{s}; took {took:.1?}, limit {:?}", c.limit)),
            r => r,
        };
        match res {
            Ok(s) => println!("PASS  {:>2} {} [{took:.1?}] {s}", c.id, c.name),
            Err(e) => {
                failed += 1;
                println!("FAIL  {:>2} {} [{took:.1?}] {e}", c.id, c.name);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
