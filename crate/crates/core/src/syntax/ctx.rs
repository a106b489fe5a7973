//! One-hole contexts with a kind tag.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::parse::parse_nterm;
use super::{NTerm, ParseError, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CtxKind {
    /// The hole under a stack of closures: `[] | L[x<-t]`.
    List,
    /// The hole never under a bang.
    Surface,
    /// The hole anywhere.
    Full,
    /// `[] | T s | (\x.T) s`.
    Testing,
}

#[derive(Debug, Error)]
pub enum CtxError {
    #[error("expected exactly one hole, found {0}")]
    Holes(usize),
    #[error("hole position not allowed in a {0:?} context")]
    Kind(CtxKind),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A context: a named spine with exactly one hole. Plugging may capture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ctx {
    pub kind: CtxKind,
    pub spine: NTerm,
}

impl Ctx {
    pub fn new(kind: CtxKind, spine: NTerm) -> Result<Ctx, CtxError> {
        let n = spine.count_holes();
        if n != 1 {
            return Err(CtxError::Holes(n));
        }
        if !fits(kind, &spine) {
            return Err(CtxError::Kind(kind));
        }
        Ok(Ctx { kind, spine })
    }

    pub fn parse(kind: CtxKind, src: &str) -> Result<Ctx, CtxError> {
        Ctx::new(kind, parse_nterm(src)?)
    }

    pub fn hole() -> Ctx {
        Ctx { kind: CtxKind::Testing, spine: NTerm::Hole }
    }

    /// Replace the hole by `t`; free names of `t` may be captured by the spine.
    pub fn plug(&self, t: &Term) -> Term {
        self.spine.fill(&NTerm::from_term(t)).to_term().expect("filled")
    }

    /// Plug another context into the hole.
    pub fn compose(&self, inner: &Ctx, kind: CtxKind) -> Result<Ctx, CtxError> {
        Ctx::new(kind, self.spine.fill(&inner.spine))
    }

    /// Kinds this context also belongs to.
    pub fn is(&self, kind: CtxKind) -> bool {
        fits(kind, &self.spine)
    }

    /// Root-to-hole path over child indices.
    pub fn hole_path(&self) -> Vec<usize> {
        fn go(n: &NTerm, p: &mut Vec<usize>) -> bool {
            match n {
                NTerm::Hole => true,
                NTerm::Var { .. } => false,
                NTerm::Abs { body: t, .. } | NTerm::Bang { t } | NTerm::Der { t } => {
                    p.push(0);
                    go(t, p) || {
                        p.pop();
                        false
                    }
                }
                NTerm::App { fun: a, arg: b } | NTerm::Sub { body: a, arg: b, .. } => {
                    for (i, c) in [a, b].into_iter().enumerate() {
                        p.push(i);
                        if go(c, p) {
                            return true;
                        }
                        p.pop();
                    }
                    false
                }
            }
        }
        let mut p = Vec::new();
        go(&self.spine, &mut p);
        p
    }
}

fn has_hole(n: &NTerm) -> bool {
    n.count_holes() > 0
}

fn fits(kind: CtxKind, n: &NTerm) -> bool {
    match kind {
        CtxKind::Full => true,
        CtxKind::List => match n {
            NTerm::Hole => true,
            NTerm::Sub { body, arg, .. } => !has_hole(arg) && fits(kind, body),
            _ => false,
        },
        CtxKind::Surface => match n {
            NTerm::Hole => true,
            NTerm::Var { .. } => true,
            NTerm::Bang { t } => !has_hole(t),
            NTerm::Abs { body: t, .. } | NTerm::Der { t } => fits(kind, t),
            NTerm::App { fun: a, arg: b } | NTerm::Sub { body: a, arg: b, .. } => fits(kind, a) && fits(kind, b),
        },
        CtxKind::Testing => match n {
            NTerm::Hole => true,
            NTerm::App { fun, arg } if !has_hole(arg) => match &**fun {
                NTerm::Abs { body, .. } => fits(kind, body),
                f => fits(kind, f),
            },
            _ => false,
        },
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spine.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plugging() {
        let c = Ctx::parse(CtxKind::Testing, "[] !y").unwrap();
        assert_eq!(c.plug(&Term::parse("\\z.z")), Term::parse("(\\z.z) !y"));
        let c = Ctx::parse(CtxKind::Testing, "(\\x.[]) s").unwrap();
        assert_eq!(c.plug(&Term::var("x")), Term::parse("(\\x.x) s"));
        let c = Ctx::parse(CtxKind::Surface, "der []").unwrap();
        assert_eq!(c.plug(&Term::parse("!t")), Term::parse("der !t"));
    }

    #[test]
    fn kinds() {
        assert!(Ctx::parse(CtxKind::List, "[][x<-y][z<-w]").is_ok());
        assert!(Ctx::parse(CtxKind::List, "x[x<-[]]").is_err());
        assert!(Ctx::parse(CtxKind::Surface, "!(x [])").is_err());
        assert!(Ctx::parse(CtxKind::Full, "!(x [])").is_ok());
        assert!(Ctx::parse(CtxKind::Testing, "(\\x.[] u) w").is_ok());
        assert!(Ctx::parse(CtxKind::Testing, "x []").is_err());
        assert!(Ctx::parse(CtxKind::Testing, "\\x.[]").is_err());
        assert!(Ctx::parse(CtxKind::Full, "x").is_err());
        let l = Ctx::parse(CtxKind::List, "[][x<-y]").unwrap();
        assert!(l.is(CtxKind::Surface) && l.is(CtxKind::Full));
    }

    #[test]
    fn plugging_under_binders_of_the_plugged_term() {
        let c = Ctx::parse(CtxKind::Full, "\\x.[]").unwrap();
        let t = Term::parse("\\x.x y");
        assert_eq!(c.plug(&t), Term::parse("\\a.\\b.b y"));
        let t = Term::parse("\\y.x y");
        assert_eq!(c.plug(&t), Term::parse("\\a.\\b.a b"));
    }
}
