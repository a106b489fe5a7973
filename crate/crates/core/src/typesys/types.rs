//! Types, multitypes and environments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{name, Name};

/// `α | M | M -> σ`. The derived order puts type variables (by name) before
/// multitypes (lexicographically) before arrows (by domain, then codomain).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(Name),
    Multi(Multitype),
    Arrow(Multitype, Box<Type>),
}

/// A finite multiset of types, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multitype(Vec<Type>);

impl Multitype {
    pub fn new(mut ts: Vec<Type>) -> Self {
        ts.sort();
        Multitype(ts)
    }

    pub fn empty() -> Self {
        Multitype(Vec::new())
    }

    pub fn items(&self) -> &[Type] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Multitype) -> Multitype {
        Multitype::new(self.0.iter().chain(&other.0).cloned().collect())
    }
}

impl Type {
    pub fn var(x: &str) -> Type {
        Type::Var(name(x))
    }

    pub fn multi(ts: Vec<Type>) -> Type {
        Type::Multi(Multitype::new(ts))
    }

    pub fn arrow(dom: Multitype, cod: Type) -> Type {
        Type::Arrow(dom, Box::new(cod))
    }

    pub fn parse(src: &str) -> Type {
        match parse_type(src) {
            Ok(t) => t,
            Err(e) => panic!("bad type {src:?}: {e}"),
        }
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self, Type::Arrow(..))
    }

    pub fn as_multi(&self) -> Option<&Multitype> {
        match self {
            Type::Multi(m) => Some(m),
            _ => None,
        }
    }

    /// `α` and `[]` have depth 1; `[σs]` and `M -> σ` add one to the deepest part.
    pub fn depth(&self) -> usize {
        match self {
            Type::Var(_) => 1,
            Type::Multi(m) => multi_depth(m),
            Type::Arrow(m, s) => 1 + multi_depth(m).max(s.depth()),
        }
    }

    /// Largest multiset cardinality anywhere in the type.
    pub fn max_card(&self) -> usize {
        match self {
            Type::Var(_) => 0,
            Type::Multi(m) => multi_card(m),
            Type::Arrow(m, s) => multi_card(m).max(s.max_card()),
        }
    }

    pub fn tvars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Type::Var(a) => {
                out.insert(a.clone());
            }
            Type::Multi(m) => m.0.iter().for_each(|t| t.tvars(out)),
            Type::Arrow(m, s) => {
                m.0.iter().for_each(|t| t.tvars(out));
                s.tvars(out)
            }
        }
    }

    /// Rename type variables; multisets are re-sorted.
    pub fn rename(&self, f: &impl Fn(&Name) -> Name) -> Type {
        match self {
            Type::Var(a) => Type::Var(f(a)),
            Type::Multi(m) => Type::Multi(m.rename(f)),
            Type::Arrow(m, s) => Type::Arrow(m.rename(f), Box::new(s.rename(f))),
        }
    }

    /// Type variables in order of first occurrence.
    pub fn tvar_order(&self, out: &mut Vec<Name>) {
        match self {
            Type::Var(a) => {
                if !out.contains(a) {
                    out.push(a.clone())
                }
            }
            Type::Multi(m) => m.0.iter().for_each(|t| t.tvar_order(out)),
            Type::Arrow(m, s) => {
                m.0.iter().for_each(|t| t.tvar_order(out));
                s.tvar_order(out)
            }
        }
    }
}

impl Multitype {
    pub fn rename(&self, f: &impl Fn(&Name) -> Name) -> Multitype {
        Multitype::new(self.0.iter().map(|t| t.rename(f)).collect())
    }
}

fn multi_depth(m: &Multitype) -> usize {
    1 + m.0.iter().map(Type::depth).max().unwrap_or(0)
}

fn multi_card(m: &Multitype) -> usize {
    m.0.iter().map(Type::max_card).fold(m.len(), usize::max)
}

impl fmt::Display for Multitype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(a) => f.write_str(a),
            Type::Multi(m) => write!(f, "{m}"),
            Type::Arrow(m, s) => write!(f, "{m}->{s}"),
        }
    }
}

impl Serialize for Type {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Type {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_type(&s).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Multitype {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Multitype {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match parse_type(&s).map_err(serde::de::Error::custom)? {
            Type::Multi(m) => Ok(m),
            t => Err(serde::de::Error::custom(format!("{t} is not a multitype"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type syntax error at offset {pos}: {msg}")]
pub struct TypeParseError {
    pub pos: usize,
    pub msg: String,
}

struct TypeParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TypeParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, TypeParseError> {
        Err(TypeParseError { pos: self.pos, msg: msg.into() })
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn ty(&mut self) -> Result<Type, TypeParseError> {
        self.ws();
        if self.eat("[") {
            let m = self.multi_rest()?;
            if self.eat("->") {
                return Ok(Type::Arrow(m, Box::new(self.ty()?)));
            }
            return Ok(Type::Multi(m));
        }
        if self.eat("(") {
            let t = self.ty()?;
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            if self.eat("->") {
                return match t {
                    Type::Multi(m) => Ok(Type::Arrow(m, Box::new(self.ty()?))),
                    _ => self.err("arrow domain must be a multitype"),
                };
            }
            return Ok(t);
        }
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a type");
        }
        let id = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if self.eat("->") {
            return self.err("arrow domain must be a multitype");
        }
        Ok(Type::var(id))
    }

    fn multi_rest(&mut self) -> Result<Multitype, TypeParseError> {
        let mut ts = Vec::new();
        if self.eat("]") {
            return Ok(Multitype::empty());
        }
        loop {
            ts.push(self.ty()?);
            if self.eat("]") {
                return Ok(Multitype::new(ts));
            }
            if !self.eat(",") {
                return self.err("expected ',' or ']'");
            }
        }
    }
}

/// `T := ident | M | M -> T ; M := '[' (T (',' T)*)? ']'`.
pub fn parse_type(src: &str) -> Result<Type, TypeParseError> {
    let mut p = TypeParser { src: src.as_bytes(), pos: 0 };
    let t = p.ty()?;
    p.ws();
    if p.pos != src.len() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

/// A finite map from variables to non-empty multitypes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Env(BTreeMap<Name, Multitype>);

impl Env {
    pub fn empty() -> Self {
        Env::default()
    }

    pub fn single(x: &str, m: Multitype) -> Self {
        let mut e = Env::empty();
        e.set(x, m);
        e
    }

    /// `Γ(x)`, the empty multitype outside the domain.
    pub fn get(&self, x: &str) -> Multitype {
        self.0.get(x).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, x: &str, m: Multitype) {
        if m.is_empty() {
            self.0.remove(x);
        } else {
            self.0.insert(name(x), m);
        }
    }

    pub fn remove(&mut self, x: &str) -> Multitype {
        self.0.remove(x).unwrap_or_default()
    }

    pub fn without(&self, x: &str) -> Env {
        let mut e = self.clone();
        e.remove(x);
        e
    }

    pub fn dom(&self) -> impl Iterator<Item = &Name> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Multitype)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Env) -> Env {
        let mut e = self.clone();
        for (x, m) in &other.0 {
            let cur = e.get(x);
            e.set(x, cur.union(m));
        }
        e
    }

    pub fn rename_tvars(&self, f: &impl Fn(&Name) -> Name) -> Env {
        Env(self.0.iter().map(|(x, m)| (x.clone(), m.rename(f))).collect())
    }

    pub fn parse(src: &str) -> Result<Env, TypeParseError> {
        let mut e = Env::empty();
        let src = src.trim();
        if src.is_empty() || src == "{}" {
            return Ok(e);
        }
        for part in split_top(src.trim_start_matches('{').trim_end_matches('}')) {
            let (x, m) = part
                .split_once(':')
                .ok_or(TypeParseError { pos: 0, msg: format!("expected 'x : M' in {part:?}") })?;
            match parse_type(m.trim())? {
                Type::Multi(m) => {
                    let cur = e.get(x.trim());
                    e.set(x.trim(), cur.union(&m));
                }
                t => return Err(TypeParseError { pos: 0, msg: format!("{t} is not a multitype") }),
            }
        }
        Ok(e)
    }
}

/// Split on commas outside brackets.
fn split_top(s: &str) -> Vec<&str> {
    let (mut depth, mut start, mut out) = (0i32, 0, Vec::new());
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().filter(|p| !p.trim().is_empty()).collect()
}

/// Pointwise multiset union; the empty sum is the empty environment.
pub fn env_sum<'a>(gs: impl IntoIterator<Item = &'a Env>) -> Env {
    gs.into_iter().fold(Env::empty(), |acc, g| acc.add(g))
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.0.iter().map(|(x, m)| format!("{x}:{m}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// The three quantitative systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum System {
    B,
    N,
    V,
}

impl System {
    /// Types of observable terms.
    pub fn obs(self, t: &Type) -> bool {
        match (self, t) {
            (System::B | System::V, Type::Multi(_)) => true,
            (System::N, Type::Arrow(m, s)) => m.len() == 1 && m.items()[0] == **s,
            _ => false,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Multitypes left of arrows, up to the first observable type.
pub fn args(sys: System, t: &Type) -> Vec<Multitype> {
    if sys.obs(t) {
        return Vec::new();
    }
    match t {
        Type::Arrow(m, s) => {
            let mut out = vec![m.clone()];
            out.extend(args(sys, s));
            out
        }
        _ => Vec::new(),
    }
}

/// A typing `(Γ; σ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Typing {
    pub env: Env,
    #[serde(rename = "type")]
    pub ty: Type,
}

impl Typing {
    pub fn new(env: Env, ty: Type) -> Self {
        Typing { env, ty }
    }

    /// The renaming of type variables onto `a, b, ...` giving the least typing.
    pub fn canonical_renaming(&self) -> BTreeMap<Name, Name> {
        let mut tv = BTreeSet::new();
        self.ty.tvars(&mut tv);
        for (_, m) in self.env.iter() {
            m.items().iter().for_each(|t| t.tvars(&mut tv));
        }
        let vars: Vec<Name> = tv.into_iter().collect();
        let targets: Vec<Name> = (0..vars.len()).map(pool_name).collect();
        let mut best: Option<(Typing, BTreeMap<Name, Name>)> = None;
        let mut perm: Vec<usize> = (0..vars.len()).collect();
        loop {
            let map: BTreeMap<Name, Name> = vars.iter().cloned().zip(perm.iter().map(|&i| targets[i].clone())).collect();
            let cand = self.rename(&map);
            if best.as_ref().is_none_or(|(b, _)| cand < *b) {
                best = Some((cand, map));
            }
            if vars.len() > 5 || !next_permutation(&mut perm) {
                break;
            }
        }
        best.map(|(_, m)| m).unwrap_or_default()
    }

    /// Least representative up to renaming of type variables.
    pub fn canonical(&self) -> Typing {
        self.rename(&self.canonical_renaming())
    }

    pub fn rename(&self, map: &BTreeMap<Name, Name>) -> Typing {
        let f = |a: &Name| map.get(a).cloned().unwrap_or_else(|| a.clone());
        Typing { env: self.env.rename_tvars(&f), ty: self.ty.rename(&f) }
    }

    pub fn within(&self, b: &Bounds) -> bool {
        let mut tv = BTreeSet::new();
        self.ty.tvars(&mut tv);
        let env_ok = self.env.iter().all(|(_, m)| {
            m.items().iter().for_each(|t| t.tvars(&mut tv));
            multi_card(m) <= b.card && m.items().iter().all(|t| t.depth() <= b.depth)
        });
        env_ok && self.ty.max_card() <= b.card && self.ty.depth() <= b.depth && tv.len() <= b.pool
    }
}

impl fmt::Display for Typing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.env, self.ty)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `a, b, ..., z, a1, ...`.
pub fn pool_name(i: usize) -> Name {
    let c = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        name(&c.to_string())
    } else {
        name(&format!("{c}{}", i / 26))
    }
}

/// Bounds on the conclusions of enumerated typings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest multiset cardinality.
    pub card: usize,
    /// Number of distinct type variables.
    pub pool: usize,
    /// Largest type depth.
    pub depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { card: 2, pool: 2, depth: 3 }
    }
}

/// All types within `depth`, with multisets of at most `card` elements over
/// the first `pool` type variables, grouped by exact depth.
pub fn universe(b: &Bounds) -> Vec<Vec<Type>> {
    let mut by_depth: Vec<Vec<Type>> = vec![Vec::new(); b.depth + 1];
    if b.depth == 0 {
        return by_depth;
    }
    let mut upto: Vec<Type> = Vec::new();
    for d in 1..=b.depth {
        let mut level: Vec<Type> = Vec::new();
        let multis = multisets_upto(&upto, b.card);
        for m in &multis {
            if multi_depth(m) == d {
                level.push(Type::Multi(m.clone()));
            }
        }
        if d == 1 {
            level.extend((0..b.pool).map(|i| Type::Var(pool_name(i))));
        }
        for m in &multis {
            for s in &upto {
                let t = Type::Arrow(m.clone(), Box::new(s.clone()));
                if t.depth() == d {
                    level.push(t);
                }
            }
        }
        level.sort();
        upto.extend(level.iter().cloned());
        upto.sort();
        by_depth[d] = level;
    }
    by_depth
}

/// Multisets of at most `card` elements drawn from `ts`.
pub fn multisets_upto(ts: &[Type], card: usize) -> Vec<Multitype> {
    let mut out = vec![Multitype::empty()];
    fn go(ts: &[Type], from: usize, left: usize, cur: &mut Vec<Type>, out: &mut Vec<Multitype>) {
        if left == 0 {
            return;
        }
        for i in from..ts.len() {
            cur.push(ts[i].clone());
            out.push(Multitype::new(cur.clone()));
            go(ts, i, left - 1, cur, out);
            cur.pop();
        }
    }
    go(ts, 0, card, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let t = Type::parse("[a]->[a]");
        assert_eq!(t, Type::arrow(Multitype::new(vec![Type::var("a")]), Type::multi(vec![Type::var("a")])));
        assert_eq!(t.to_string(), "[a]->[a]");
        let t = Type::parse("[ [a]->b , [a] ]");
        assert_eq!(t.to_string(), "[[a], [a]->b]");
        assert_eq!(Type::parse("[]->[]->a").to_string(), "[]->[]->a");
        assert!(parse_type("a->b").is_err());
        assert!(parse_type("[a").is_err());
    }

    #[test]
    fn order_is_canonical() {
        assert!(Type::var("a") < Type::var("b"));
        assert!(Type::var("z") < Type::parse("[]"));
        assert!(Type::parse("[a, a]") < Type::parse("[]->a"));
        assert_eq!(Type::parse("[b, a]"), Type::parse("[a, b]"));
    }

    #[test]
    fn sums() {
        let a = Env::parse("x:[a]").unwrap();
        assert_eq!(env_sum([&a, &a]), Env::parse("x:[a, a]").unwrap());
        assert_eq!(env_sum([&Env::empty(), &a]), a);
        let b = Env::parse("y:[b]").unwrap();
        assert_eq!(env_sum([&a, &b]), Env::parse("x:[a], y:[b]").unwrap());
        assert_eq!(env_sum(std::iter::empty::<&Env>()), Env::empty());
        assert_eq!(Env::parse("x:[[a]->b, [a]]").unwrap().to_string(), "x:[[a], [a]->b]");
    }

    #[test]
    fn arguments() {
        let t = Type::parse("[t]->[a]->[a]");
        assert_eq!(args(System::B, &t), vec![Multitype::new(vec![Type::var("t")]), Multitype::new(vec![Type::var("a")])]);
        assert!(args(System::B, &Type::parse("[a]")).is_empty());
        assert!(args(System::N, &Type::parse("[[a]->a]->[a]->a")).is_empty());
        assert_eq!(args(System::N, &Type::parse("[a]->b")).len(), 1);
        assert!(args(System::V, &Type::parse("a")).is_empty());
    }

    #[test]
    fn universe_size() {
        let u = universe(&Bounds::default());
        assert_eq!(u[1].len(), 3);
        assert_eq!(u[2].len(), 12);
        assert_eq!(u.iter().map(Vec::len).sum::<usize>(), 288);
        for (d, level) in u.iter().enumerate() {
            assert!(level.iter().all(|t| t.depth() == d && t.max_card() <= 2));
        }
    }

    #[test]
    fn canonical_renaming() {
        let t = Typing::new(Env::parse("x:[b]").unwrap(), Type::parse("[b]->a"));
        assert_eq!(t.canonical().to_string(), "x:[a] |- [a]->b");
        let u = Typing::new(Env::parse("x:[a]").unwrap(), Type::parse("[a]->b"));
        assert_eq!(u.canonical(), t.canonical());
    }
}
