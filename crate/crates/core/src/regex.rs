//! Regular expressions over an arbitrary symbol type.
//!
//! Besides the usual operations this module reads path expressions off a
//! digraph by loop decomposition: the paths leaving a vertex `u` that lies on
//! a cycle are written `(u ...)* u ...`, which after normalization gives the
//! `(x)+` forms used throughout the constructions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex<S> {
    Empty,
    Epsilon,
    Sym(S),
    Concat(Vec<Regex<S>>),
    Union(Vec<Regex<S>>),
    Star(Box<Regex<S>>),
    Plus(Box<Regex<S>>),
}

use Regex::*;

impl<S: Clone + Eq> Regex<S> {
    pub fn concat(parts: Vec<Regex<S>>) -> Self {
        Concat(parts).normalize_node()
    }

    pub fn union(parts: Vec<Regex<S>>) -> Self {
        Union(parts).normalize_node()
    }

    pub fn star(r: Regex<S>) -> Self {
        Star(Box::new(r)).normalize_node()
    }

    pub fn plus(r: Regex<S>) -> Self {
        Plus(Box::new(r)).normalize_node()
    }

    /// Normalizes bottom-up until nothing changes.
    pub fn normalize(&self) -> Self {
        let mut cur = self.clone();
        loop {
            let next = cur.normalize_once();
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn normalize_once(&self) -> Self {
        match self {
            Concat(cs) => Concat(cs.iter().map(|c| c.normalize_once()).collect()).normalize_node(),
            Union(cs) => Union(cs.iter().map(|c| c.normalize_once()).collect()).normalize_node(),
            Star(c) => Star(Box::new(c.normalize_once())).normalize_node(),
            Plus(c) => Plus(Box::new(c.normalize_once())).normalize_node(),
            other => other.clone(),
        }
    }

    /// One normalization step at the root, assuming normalized children.
    fn normalize_node(self) -> Self {
        match self {
            Concat(cs) => {
                let mut flat: Vec<Regex<S>> = Vec::with_capacity(cs.len());
                for c in cs {
                    match c {
                        Empty => return Empty,
                        Epsilon => {}
                        Concat(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                let flat = merge_closures(flat);
                match flat.len() {
                    0 => Epsilon,
                    1 => flat.into_iter().next().unwrap(),
                    _ => Concat(flat),
                }
            }
            Union(cs) => {
                let mut flat: Vec<Regex<S>> = Vec::with_capacity(cs.len());
                for c in cs {
                    let parts = match c {
                        Empty => vec![],
                        Union(inner) => inner,
                        other => vec![other],
                    };
                    for p in parts {
                        if !flat.contains(&p) {
                            flat.push(p);
                        }
                    }
                }
                match flat.len() {
                    0 => Empty,
                    1 => flat.into_iter().next().unwrap(),
                    _ => Union(flat),
                }
            }
            Star(c) => match *c {
                Empty | Epsilon => Epsilon,
                Star(x) | Plus(x) => Star(x),
                x => Star(Box::new(x)),
            },
            Plus(c) => match *c {
                Empty => Empty,
                Epsilon => Epsilon,
                Star(x) => Star(x),
                Plus(x) => Plus(x),
                x => Plus(Box::new(x)),
            },
            other => other,
        }
    }
}

fn seq_of<S: Clone>(r: &Regex<S>) -> Vec<Regex<S>> {
    match r {
        Concat(cs) => cs.clone(),
        other => vec![other.clone()],
    }
}

/// Rewrites `x* x`, `x x*`, `x* x+`, `x+ x*` and `x* x*` inside a flat
/// concatenation.
fn merge_closures<S: Clone + Eq>(mut v: Vec<Regex<S>>) -> Vec<Regex<S>> {
    let mut i = 0;
    while i < v.len() {
        let (body, is_star) = match &v[i] {
            Star(b) => ((**b).clone(), true),
            Plus(b) => ((**b).clone(), false),
            _ => {
                i += 1;
                continue;
            }
        };
        let seq = seq_of(&body);
        let m = seq.len();
        // closure followed by its body (or another closure of the same body)
        if is_star && i + m < v.len() + 1 && v.len() >= i + 1 + m && v[i + 1..i + 1 + m] == seq[..] {
            v.splice(i..i + 1 + m, [Plus(Box::new(body))]);
            continue;
        }
        if i + 1 < v.len() {
            let merged = match (&v[i], &v[i + 1]) {
                (Star(a), Star(b)) if a == b => Some(Star(a.clone())),
                (Star(a), Plus(b)) | (Plus(a), Star(b)) if a == b => Some(Plus(a.clone())),
                _ => None,
            };
            if let Some(r) = merged {
                v.splice(i..i + 2, [r]);
                continue;
            }
        }
        // body followed by its star
        if is_star && i >= m && v[i - m..i] == seq[..] {
            v.splice(i - m..i + 1, [Plus(Box::new(body))]);
            i -= m;
            continue;
        }
        i += 1;
    }
    v
}

impl<S: Clone + Eq> Regex<S> {
    pub fn star_height(&self) -> usize {
        self.height(true)
    }

    pub fn plus_height(&self) -> usize {
        self.height(false)
    }

    fn height(&self, star: bool) -> usize {
        match self {
            Empty | Epsilon | Sym(_) => 0,
            Concat(cs) | Union(cs) => cs.iter().map(|c| c.height(star)).max().unwrap_or(0),
            Star(c) => c.height(star) + star as usize,
            Plus(c) => c.height(star) + !star as usize,
        }
    }

    pub fn contains_star(&self) -> bool {
        match self {
            Star(_) => true,
            Plus(c) => c.contains_star(),
            Concat(cs) | Union(cs) => cs.iter().any(|c| c.contains_star()),
            _ => false,
        }
    }

    /// Applies a homomorphism given per symbol, then normalizes.
    pub fn map<T: Clone + Eq>(&self, f: &mut dyn FnMut(&S) -> Regex<T>) -> Regex<T> {
        let r = match self {
            Empty => Empty,
            Epsilon => Epsilon,
            Sym(s) => f(s),
            Concat(cs) => Concat(cs.iter().map(|c| c.map(f)).collect()),
            Union(cs) => Union(cs.iter().map(|c| c.map(f)).collect()),
            Star(c) => Star(Box::new(c.map(f))),
            Plus(c) => Plus(Box::new(c.map(f))),
        };
        r.normalize_node()
    }

    /// The reversal.
    pub fn reverse(&self) -> Self {
        match self {
            Concat(cs) => Concat(cs.iter().rev().map(|c| c.reverse()).collect()),
            Union(cs) => Union(cs.iter().map(|c| c.reverse()).collect()),
            Star(c) => Star(Box::new(c.reverse())),
            Plus(c) => Plus(Box::new(c.reverse())),
            other => other.clone(),
        }
    }

    /// Splits unions that are not under a closure into separate expressions.
    pub fn distribute_top(&self) -> Vec<Regex<S>> {
        match self {
            Empty => vec![],
            Union(cs) => {
                let mut out = Vec::new();
                for c in cs {
                    for r in c.distribute_top() {
                        if !out.contains(&r) {
                            out.push(r);
                        }
                    }
                }
                out
            }
            Concat(cs) => {
                let mut acc: Vec<Vec<Regex<S>>> = vec![vec![]];
                for c in cs {
                    let alts = c.distribute_top();
                    let mut next = Vec::with_capacity(acc.len() * alts.len());
                    for prefix in &acc {
                        for a in &alts {
                            let mut p = prefix.clone();
                            p.push(a.clone());
                            next.push(p);
                        }
                    }
                    acc = next;
                }
                let mut out = Vec::new();
                for parts in acc {
                    let r = Regex::concat(parts);
                    if !out.contains(&r) {
                        out.push(r);
                    }
                }
                out
            }
            other => vec![other.clone()],
        }
    }

    /// Forks every star into `+` or λ. Top-level alternatives become separate
    /// expressions; stars under a `+` become a union inside it.
    pub fn plus_expand(&self) -> Vec<Regex<S>> {
        fn exp<S: Clone + Eq>(r: &Regex<S>) -> Vec<Regex<S>> {
            match r {
                Empty => vec![],
                Epsilon => vec![Epsilon],
                Sym(_) => vec![r.clone()],
                Union(cs) => {
                    let mut out = Vec::new();
                    for c in cs {
                        for x in exp(c) {
                            if !out.contains(&x) {
                                out.push(x);
                            }
                        }
                    }
                    out
                }
                Concat(cs) => {
                    let mut acc: Vec<Regex<S>> = vec![Epsilon];
                    for c in cs {
                        let alts = exp(c);
                        let mut next = Vec::new();
                        for p in &acc {
                            for a in &alts {
                                let x = Regex::concat(vec![p.clone(), a.clone()]);
                                if !next.contains(&x) {
                                    next.push(x);
                                }
                            }
                        }
                        acc = next;
                    }
                    acc
                }
                Plus(c) => vec![Regex::plus(Regex::union(exp(c)))],
                Star(c) => {
                    let p = Regex::plus(Regex::union(exp(c)));
                    if p == Epsilon {
                        vec![Epsilon]
                    } else {
                        vec![p, Epsilon]
                    }
                }
            }
        }
        exp(&self.normalize())
    }

    /// Symbol occurrences in left-to-right order.
    /// Upper bound on `plus_expand().len()`, saturating; cheap to compute.
    pub fn plus_expand_bound(&self) -> usize {
        match self {
            Empty => 0,
            Epsilon | Sym(_) | Plus(_) => 1,
            Star(_) => 2,
            Union(cs) => cs.iter().fold(0, |a, c| a.saturating_add(c.plus_expand_bound())),
            Concat(cs) => cs.iter().fold(1, |a, c| a.saturating_mul(c.plus_expand_bound())),
        }
    }

    /// Number of nodes in the expression tree.
    pub fn size(&self) -> usize {
        match self {
            Empty | Epsilon | Sym(_) => 1,
            Plus(c) | Star(c) => 1 + c.size(),
            Union(cs) | Concat(cs) => 1 + cs.iter().map(Regex::size).sum::<usize>(),
        }
    }

    pub fn symbols(&self) -> Vec<S> {
        let mut out = Vec::new();
        fn go<S: Clone>(r: &Regex<S>, out: &mut Vec<S>) {
            match r {
                Sym(s) => out.push(s.clone()),
                Concat(cs) | Union(cs) => cs.iter().for_each(|c| go(c, out)),
                Star(c) | Plus(c) => go(c, out),
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }

    /// Glushkov positions: each symbol occurrence, with first/last/follow.
    pub fn positions(&self) -> Positions<S> {
        let syms = self.symbols();
        let mut follow: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); syms.len()];
        let mut next = 0usize;
        fn go<S>(
            r: &Regex<S>,
            next: &mut usize,
            follow: &mut [BTreeSet<usize>],
        ) -> (bool, BTreeSet<usize>, BTreeSet<usize>) {
            match r {
                Empty => (false, BTreeSet::new(), BTreeSet::new()),
                Epsilon => (true, BTreeSet::new(), BTreeSet::new()),
                Sym(_) => {
                    let p = *next;
                    *next += 1;
                    (false, BTreeSet::from([p]), BTreeSet::from([p]))
                }
                Union(cs) => {
                    let mut acc: (bool, BTreeSet<usize>, BTreeSet<usize>) = (false, BTreeSet::new(), BTreeSet::new());
                    for c in cs {
                        let (n, f, l) = go(c, next, follow);
                        acc.0 |= n;
                        acc.1.extend(f);
                        acc.2.extend(l);
                    }
                    acc
                }
                Concat(cs) => {
                    let mut acc: (bool, BTreeSet<usize>, BTreeSet<usize>) = (true, BTreeSet::new(), BTreeSet::new());
                    for c in cs {
                        let (n, f, l) = go(c, next, follow);
                        for &p in &acc.2 {
                            follow[p].extend(f.iter().copied());
                        }
                        if acc.0 {
                            acc.1.extend(f.iter().copied());
                        }
                        if n {
                            acc.2.extend(l);
                        } else {
                            acc.2 = l;
                        }
                        acc.0 &= n;
                    }
                    acc
                }
                Star(c) | Plus(c) => {
                    let (n, f, l) = go(c, next, follow);
                    for &p in &l {
                        follow[p].extend(f.iter().copied());
                    }
                    (n || matches!(r, Star(_)), f, l)
                }
            }
        }
        let (nullable, first, last) = go(self, &mut next, &mut follow);
        Positions { syms, nullable, first, last, follow }
    }
}

/// The position automaton data of an expression.
#[derive(Clone, Debug)]
pub struct Positions<S> {
    pub syms: Vec<S>,
    pub nullable: bool,
    pub first: BTreeSet<usize>,
    pub last: BTreeSet<usize>,
    pub follow: Vec<BTreeSet<usize>>,
}

impl<S: fmt::Display> fmt::Display for Regex<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atomic<S>(r: &Regex<S>) -> bool {
            matches!(r, Empty | Epsilon | Sym(_) | Star(_) | Plus(_))
        }
        match self {
            Empty => write!(f, "∅"),
            Epsilon => write!(f, "ε"),
            Sym(s) => write!(f, "{s}"),
            Concat(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    if matches!(c, Union(_)) {
                        write!(f, "({c})")?;
                    } else {
                        write!(f, "{c}")?;
                    }
                }
                Ok(())
            }
            Union(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            Star(c) | Plus(c) => {
                let op = if matches!(self, Star(_)) { "*" } else { "+" };
                if atomic(c) && !matches!(**c, Star(_) | Plus(_)) {
                    write!(f, "{c}{op}")
                } else {
                    write!(f, "({c}){op}")
                }
            }
        }
    }
}

/// Parses an expression. `lex` reads one symbol at the start of its argument
/// and returns it with the number of bytes consumed. Operators: juxtaposition,
/// `|`, postfix `+` / `*` (optionally written `^+` / `^*`), parentheses,
/// `ε` and `∅`.
pub fn parse_regex<S: Clone + Eq>(text: &str, lex: &dyn Fn(&str) -> Option<(S, usize)>) -> Result<Regex<S>> {
    struct P<'a, S> {
        s: &'a str,
        i: usize,
        lex: &'a dyn Fn(&str) -> Option<(S, usize)>,
    }
    impl<S: Clone + Eq> P<'_, S> {
        fn err(&self, msg: &str) -> Error {
            Error::Syntax { line: 1, col: self.i + 1, msg: msg.to_string() }
        }
        fn ws(&mut self) {
            while let Some(c) = self.s[self.i..].chars().next() {
                if c.is_whitespace() {
                    self.i += c.len_utf8();
                } else {
                    break;
                }
            }
        }
        fn peek(&mut self) -> Option<char> {
            self.ws();
            self.s[self.i..].chars().next()
        }
        fn union(&mut self) -> Result<Regex<S>> {
            let mut alts = vec![self.concat()?];
            while self.peek() == Some('|') {
                self.i += 1;
                alts.push(self.concat()?);
            }
            Ok(Regex::union(alts))
        }
        fn concat(&mut self) -> Result<Regex<S>> {
            let mut parts = Vec::new();
            while let Some(c) = self.peek() {
                if c == '|' || c == ')' {
                    break;
                }
                parts.push(self.postfix()?);
            }
            Ok(Regex::concat(parts))
        }
        fn postfix(&mut self) -> Result<Regex<S>> {
            let mut r = self.atom()?;
            loop {
                let rest = &self.s[self.i..];
                let (op, len) = if rest.starts_with("^+") {
                    ('+', 2)
                } else if rest.starts_with("^*") {
                    ('*', 2)
                } else if rest.starts_with('+') {
                    ('+', 1)
                } else if rest.starts_with('*') {
                    ('*', 1)
                } else {
                    break;
                };
                self.i += len;
                r = if op == '+' { Regex::plus(r) } else { Regex::star(r) };
            }
            Ok(r)
        }
        fn atom(&mut self) -> Result<Regex<S>> {
            match self.peek() {
                Some('(') => {
                    self.i += 1;
                    let r = self.union()?;
                    if self.peek() != Some(')') {
                        return Err(self.err("expected `)`"));
                    }
                    self.i += 1;
                    Ok(r)
                }
                Some('ε') => {
                    self.i += 'ε'.len_utf8();
                    Ok(Epsilon)
                }
                Some('∅') => {
                    self.i += '∅'.len_utf8();
                    Ok(Empty)
                }
                Some(_) => {
                    let (s, n) = (self.lex)(&self.s[self.i..]).ok_or_else(|| self.err("unknown symbol"))?;
                    self.i += n;
                    Ok(Sym(s))
                }
                None => Err(self.err("unexpected end")),
            }
        }
    }
    let mut p = P { s: text, i: 0, lex };
    let r = p.union()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(r.normalize())
}

// ---------------------------------------------------------------------------
// Path expressions of a digraph

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn unset(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

struct PathCtx<'a> {
    succ: &'a [Vec<usize>],
    pred: Vec<Vec<usize>>,
    memo: HashMap<(usize, Bits, Bits), Regex<usize>>,
    budget: usize,
}

impl PathCtx<'_> {
    fn reach(&self, u: usize, allowed: &Bits) -> Bits {
        let mut seen = Bits::new(self.succ.len());
        seen.set(u);
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for &y in &self.succ[x] {
                if allowed.has(y) && !seen.has(y) {
                    seen.set(y);
                    stack.push(y);
                }
            }
        }
        seen
    }

    fn paths(&mut self, u: usize, targets: &Bits, allowed: &Bits) -> Regex<usize> {
        let reach = self.reach(u, allowed);
        let tg = targets.and(&reach);
        if tg.is_empty() || self.budget == 0 {
            return Empty;
        }
        let key = (u, tg.clone(), reach.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let mut inner = reach.clone();
        inner.unset(u);
        let succ: Vec<usize> = self.succ[u].iter().copied().filter(|&v| v != u && inner.has(v)).collect();
        let self_loop = self.succ[u].contains(&u);
        let cyclic = self_loop || succ.iter().any(|&v| self.reach(v, &reach).has(u));

        let mut rest = Vec::new();
        if tg.has(u) {
            rest.push(Epsilon);
        }
        for &v in &succ {
            rest.push(self.paths(v, &tg, &inner));
        }
        let rest = Regex::concat(vec![Sym(u), Regex::union(rest)]);
        let result = if cyclic {
            let mut back = Bits::new(self.succ.len());
            for &p in &self.pred[u] {
                if p != u && inner.has(p) {
                    back.set(p);
                }
            }
            let mut body = Vec::new();
            if self_loop {
                body.push(Epsilon);
            }
            for &v in &succ {
                body.push(self.paths(v, &back, &inner));
            }
            let body = Regex::concat(vec![Sym(u), Regex::union(body)]);
            Regex::concat(vec![Regex::star(body), rest])
        } else {
            rest
        };
        // Charge by size: shared subexpressions are copied, not referenced.
        self.budget = self.budget.saturating_sub(result.size());
        self.memo.insert(key, result.clone());
        result
    }
}

/// Expression for all paths from `root` to any vertex of `targets`, as the
/// sequence of visited vertices (root included). Successor lists fix the
/// order of alternatives.
pub fn path_regex(succ: &[Vec<usize>], root: usize, targets: &[usize]) -> Regex<usize> {
    path_regex_bounded(succ, root, targets, usize::MAX).expect("unbounded")
}

/// [`path_regex`] giving up (with `None`) once the expressions built add up to
/// `budget` nodes; dense graphs have exponentially many path classes.
pub fn path_regex_bounded(succ: &[Vec<usize>], root: usize, targets: &[usize], budget: usize) -> Option<Regex<usize>> {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (u, vs) in succ.iter().enumerate() {
        for &v in vs {
            if !pred[v].contains(&u) {
                pred[v].push(u);
            }
        }
    }
    let mut all = Bits::new(n);
    (0..n).for_each(|i| all.set(i));
    let mut tg = Bits::new(n);
    targets.iter().for_each(|&t| tg.set(t));
    let mut ctx = PathCtx { succ, pred, memo: HashMap::new(), budget };
    let r = ctx.paths(root, &tg, &all);
    (ctx.budget > 0).then(|| r.normalize())
}

/// Bracket-token lexer for [`parse_regex`]: `S`, `[3`, `]3`.
pub fn lex_bracket_token(s: &str) -> Option<(String, usize)> {
    let first = s.chars().next()?;
    if first == '[' || first == ']' {
        let digits = s[1..].chars().take_while(|c| c.is_ascii_digit()).count();
        (digits > 0).then(|| (s[..1 + digits].to_string(), 1 + digits))
    } else if first.is_ascii_uppercase() {
        let n = s.chars().take_while(|c| c.is_ascii_alphanumeric() || *c == '_').count();
        Some((s[..n].to_string(), n))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Regex<char> {
        parse_regex(s, &|t: &str| {
            let c = t.chars().next()?;
            c.is_ascii_lowercase().then_some((c, 1))
        })
        .unwrap()
    }

    #[test]
    fn star_then_body_becomes_plus() {
        assert_eq!(chars("(ab)*ab"), chars("(ab)+"));
        assert_eq!(chars("a a*"), chars("a+"));
        assert_eq!(chars("(ab)* (ab)+ c"), chars("(ab)+ c"));
    }

    #[test]
    fn absorbs_units() {
        assert_eq!(chars("a ε b"), chars("ab"));
        assert_eq!(chars("a ∅ b"), Empty);
        assert_eq!(chars("ε+"), Epsilon);
        assert_eq!(chars("a | ∅ | a"), chars("a"));
    }

    #[test]
    fn heights() {
        let r = chars("(a (b)+)+ c*");
        assert_eq!(r.plus_height(), 2);
        assert_eq!(r.star_height(), 1);
    }

    #[test]
    fn plus_expansion_forks() {
        assert_eq!(chars("a*b*").plus_expand().len(), 4);
        assert_eq!(chars("(ab)+").plus_expand(), vec![chars("(ab)+")]);
        let e = chars("x(ab)*y").plus_expand();
        assert_eq!(e, vec![chars("x(ab)+y"), chars("xy")]);
    }

    #[test]
    fn glushkov_follow() {
        let p = chars("(ab)+c").positions();
        assert_eq!(p.first, BTreeSet::from([0]));
        assert_eq!(p.last, BTreeSet::from([2]));
        assert_eq!(p.follow[1], BTreeSet::from([0, 2]));
    }

    #[test]
    fn path_regex_of_a_loop() {
        // 0 -> 1 -> 2 -> 1, 2 -> 3
        let succ = vec![vec![1], vec![2], vec![1, 3], vec![]];
        let r = path_regex(&succ, 0, &[3]);
        let shown = r.map(&mut |&v| Sym(char::from(b'a' + v as u8)));
        assert_eq!(shown, chars("a(bc)+d"));
    }

    #[test]
    fn path_regex_splits_branches() {
        let succ = vec![vec![1, 2], vec![3], vec![3], vec![]];
        let r = path_regex(&succ, 0, &[3]);
        assert_eq!(r.distribute_top().len(), 2);
    }

    #[test]
    fn expansion_bound_covers_expansion() {
        for s in ["a*b*", "(a|b)*c", "a+(b|c*)", "(ab*)+"] {
            let r = chars(s);
            assert!(r.plus_expand().len() <= r.normalize().plus_expand_bound(), "{s}");
        }
        assert_eq!(chars("a*b*").size(), 5);
    }

    #[test]
    fn bounded_paths_give_up_on_dense_graphs() {
        let n = 9;
        let succ: Vec<Vec<usize>> = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        assert!(path_regex_bounded(&succ, 0, &[n - 1], 50).is_none());
        let line = vec![vec![1], vec![2], vec![]];
        assert_eq!(path_regex_bounded(&line, 0, &[2], 50), Some(path_regex(&line, 0, &[2])));
    }
}
