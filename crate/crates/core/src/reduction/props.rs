//! Executable forms of the confluence properties, checked one term at a time.

use std::collections::HashSet;

use serde::Serialize;

use super::{reachable, reducts, Closure, Fragment};
use crate::syntax::Term;

#[derive(Clone, Debug, Serialize)]
pub struct PeakFailure {
    pub source: Term,
    pub left: Term,
    pub right: Term,
}

fn one_step(t: &Term, fragment: Fragment) -> HashSet<Term> {
    reducts(t, Closure::Full, fragment).into_iter().collect()
}

/// Every dB/d! peak `u1 <- t -> u2` with `u1 != u2` closes in one step on each side.
pub fn diamond_peaks(t: &Term) -> Result<(), PeakFailure> {
    let us = reducts(t, Closure::Full, Fragment::DbDBang);
    for (i, u1) in us.iter().enumerate() {
        let n1 = one_step(u1, Fragment::DbDBang);
        for u2 in &us[i + 1..] {
            if !one_step(u2, Fragment::DbDBang).iter().any(|s| n1.contains(s)) {
                return Err(PeakFailure { source: t.clone(), left: u1.clone(), right: u2.clone() });
            }
        }
    }
    Ok(())
}

/// Every s! peak joins by s! reduction within `depth` steps on each side.
pub fn local_confluence_peaks(t: &Term, depth: usize) -> Result<(), PeakFailure> {
    let us = reducts(t, Closure::Full, Fragment::SBang);
    for (i, u1) in us.iter().enumerate() {
        let r1 = reachable(u1, Closure::Full, Fragment::SBang, depth, 5000);
        for u2 in &us[i + 1..] {
            let r2 = reachable(u2, Closure::Full, Fragment::SBang, depth, 5000);
            if !r1.iter().any(|s| r2.contains(s)) {
                return Err(PeakFailure { source: t.clone(), left: u1.clone(), right: u2.clone() });
            }
        }
    }
    Ok(())
}

/// For `t ->(dB,d!) u1` and `t ->s! u2` there is `s` with `u1 ->s! s` in one
/// step and `u2 ->*(dB,d!) s` within `depth` steps.
pub fn strong_commutation_peaks(t: &Term, depth: usize) -> Result<(), PeakFailure> {
    let left = reducts(t, Closure::Full, Fragment::DbDBang);
    let right = reducts(t, Closure::Full, Fragment::SBang);
    for u1 in &left {
        let n1 = one_step(u1, Fragment::SBang);
        for u2 in &right {
            let r2 = reachable(u2, Closure::Full, Fragment::DbDBang, depth, 5000);
            if !n1.iter().any(|s| r2.contains(s)) {
                return Err(PeakFailure { source: t.clone(), left: u1.clone(), right: u2.clone() });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{classify, redexes, static_clashes, NfClass};
    use crate::syntax::{enum_terms, gen_term, Profile};
    use proptest::prelude::*;

    #[test]
    fn small_exhaustive_properties() {
        for t in enum_terms(6, &["x", "y"]) {
            diamond_peaks(&t).unwrap();
            local_confluence_peaks(&t, 6).unwrap();
            strong_commutation_peaks(&t, 6).unwrap();
            let nos = classify(&t) == NfClass::NoS;
            let clean = redexes(&t, Closure::Surface).is_empty() && static_clashes(&t, Closure::Surface).is_empty();
            assert_eq!(nos, clean, "{t}");
        }
    }

    #[test]
    fn duplicating_peak() {
        let t = Term::parse("(x x)[x<-!((\\z.z) !y)]");
        strong_commutation_peaks(&t, 4).unwrap();
        let t = Term::parse("(x x)[x<-!(y[y<-!w])][w<-!z]");
        local_confluence_peaks(&t, 6).unwrap();
    }

    proptest! {
        #[test]
        fn surface_reduction_is_diamond(seed in any::<u64>(), size in 3usize..14) {
            let t = gen_term(seed, size, Profile::Bang);
            let us = reducts(&t, Closure::Surface, Fragment::All);
            for (i, u1) in us.iter().enumerate() {
                let n1: HashSet<Term> = reducts(u1, Closure::Surface, Fragment::All).into_iter().collect();
                for u2 in &us[i + 1..] {
                    let n2 = reducts(u2, Closure::Surface, Fragment::All);
                    prop_assert!(n2.iter().any(|s| n1.contains(s)), "{} / {} / {}", t, u1, u2);
                }
            }
        }

        #[test]
        fn surface_clashes_are_stable(seed in any::<u64>(), size in 3usize..14) {
            let t = gen_term(seed, size, Profile::Bang);
            if !static_clashes(&t, Closure::Surface).is_empty() {
                for u in reducts(&t, Closure::Surface, Fragment::All) {
                    prop_assert!(!static_clashes(&u, Closure::Surface).is_empty(), "{} -> {}", t, u);
                }
            }
        }
    }
}
