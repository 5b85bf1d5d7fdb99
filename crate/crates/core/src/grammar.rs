//! Grammar representations and conversions.
//!
//! A [`Cfg`] is read from the text format, brought into Chomsky normal form by
//! [`to_cnf`] and into Dyck normal form by [`to_dyck_nf`]. In Dyck normal form
//! every nonterminal other than the axiom is one side of an indexed bracket
//! pair, and every binary rule rewrites to exactly `[i ]i`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A terminal word, each letter an index into the grammar's alphabet.
pub type Word = Vec<u16>;

/// A right-hand side symbol of a general grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    N(usize),
    T(u16),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
}

/// A context-free grammar. Terminals are kept sorted so that grammars derived
/// from one another share letter indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub start: usize,
    pub productions: Vec<Production>,
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_uppercase()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn bracket_token(s: &str) -> Option<BracketId> {
    let side = match s.chars().next()? {
        '[' => Side::Left,
        ']' => Side::Right,
        _ => return None,
    };
    let digits = &s[1..];
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let pair: u32 = digits.parse().ok()?;
    (pair > 0).then_some(BracketId { pair, side })
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

enum Tok {
    Nt(String),
    T(String),
    Bar,
}

fn tokenize(body: &str, line: usize, offset: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = body.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '|' {
            out.push((Tok::Bar, col));
            i += 1;
        } else if c == '\'' {
            let end = chars[i + 1..]
                .iter()
                .position(|&d| d == '\'')
                .ok_or_else(|| syntax(line, col, "unterminated terminal"))?;
            out.push((Tok::T(chars[i + 1..i + 1 + end].iter().collect()), col));
            i += end + 2;
        } else if c == '[' || c == ']' || c.is_ascii_uppercase() {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let name: String = chars[i..j].iter().collect();
            if !(is_identifier(&name) || bracket_token(&name).is_some()) {
                return Err(syntax(line, col, format!("bad nonterminal `{name}`")));
            }
            out.push((Tok::Nt(name), col));
            i = j;
        } else {
            return Err(syntax(line, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Parses the grammar file format.
pub fn parse_grammar(text: &str) -> Result<Cfg> {
    let mut start: Option<String> = None;
    let mut raw: Vec<(String, Vec<Tok>)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if start.is_none() {
            let rest =
                trimmed.strip_prefix("start:").ok_or_else(|| syntax(ln, 1, "expected `start: <Nonterminal>`"))?.trim();
            if !(is_identifier(rest) || bracket_token(rest).is_some()) {
                return Err(syntax(ln, 1, format!("bad start symbol `{rest}`")));
            }
            start = Some(rest.to_string());
            continue;
        }
        let arrow = line.find("->").ok_or_else(|| syntax(ln, 1, "expected `->`"))?;
        let lhs = line[..arrow].trim();
        if !(is_identifier(lhs) || bracket_token(lhs).is_some()) {
            return Err(syntax(ln, 1, format!("bad left-hand side `{lhs}`")));
        }
        let toks = tokenize(&line[arrow + 2..], ln, arrow + 2)?;
        let mut alts: Vec<Vec<Tok>> = vec![Vec::new()];
        let mut last_col = arrow + 3;
        for (t, col) in toks {
            last_col = col;
            match t {
                Tok::Bar => {
                    if alts.last().is_none_or(|a| a.is_empty()) {
                        return Err(syntax(ln, col, "empty alternative"));
                    }
                    alts.push(Vec::new());
                }
                other => alts.last_mut().unwrap().push(other),
            }
        }
        if alts.last().is_none_or(|a| a.is_empty()) {
            return Err(syntax(ln, last_col, "empty production body (use '' for the empty word)"));
        }
        for alt in alts {
            raw.push((lhs.to_string(), alt));
        }
    }
    let start = start.ok_or_else(|| syntax(1, 1, "missing `start:` line"))?;
    if !raw.iter().any(|(l, _)| *l == start) {
        return Err(Error::UndeclaredStart(start));
    }

    let mut terminals: BTreeSet<String> = BTreeSet::new();
    for (_, alt) in &raw {
        for t in alt {
            if let Tok::T(s) = t {
                if !s.is_empty() {
                    terminals.insert(s.clone());
                }
            }
        }
    }
    let terminals: Vec<String> = terminals.into_iter().collect();
    let mut nonterminals = vec![start.clone()];
    let mut ids: HashMap<String, usize> = HashMap::from([(start, 0)]);
    let mut intern = |name: &str, nts: &mut Vec<String>| -> usize {
        *ids.entry(name.to_string()).or_insert_with(|| {
            nts.push(name.to_string());
            nts.len() - 1
        })
    };
    // left-hand sides are numbered first so printing preserves the numbering
    for (lhs, _) in &raw {
        intern(lhs, &mut nonterminals);
    }
    let mut productions = Vec::new();
    for (lhs, alt) in raw {
        let lhs = intern(&lhs, &mut nonterminals);
        let mut rhs = Vec::new();
        for t in alt {
            match t {
                Tok::Nt(n) => rhs.push(Symbol::N(intern(&n, &mut nonterminals))),
                Tok::T(s) if s.is_empty() => {}
                Tok::T(s) => {
                    let i = terminals.binary_search(&s).unwrap();
                    rhs.push(Symbol::T(i as u16));
                }
                Tok::Bar => unreachable!(),
            }
        }
        productions.push(Production { lhs, rhs });
    }
    Ok(Cfg { nonterminals, terminals, start: 0, productions })
}

fn quote(t: &str) -> String {
    format!("'{t}'")
}

impl Cfg {
    /// Productions grouped by left-hand side, the start symbol first.
    fn grouped(&self) -> Vec<(usize, Vec<&Production>)> {
        let mut order = vec![self.start];
        for p in &self.productions {
            if !order.contains(&p.lhs) {
                order.push(p.lhs);
            }
        }
        order
            .into_iter()
            .map(|a| (a, self.productions.iter().filter(|p| p.lhs == a).collect()))
            .filter(|(_, ps): &(usize, Vec<&Production>)| !ps.is_empty())
            .collect()
    }

    pub fn symbol_name(&self, s: Symbol) -> String {
        match s {
            Symbol::N(n) => self.nonterminals[n].clone(),
            Symbol::T(t) => quote(&self.terminals[t as usize]),
        }
    }

    pub fn is_cnf(&self) -> bool {
        let on_rhs = self.productions.iter().any(|p| p.rhs.contains(&Symbol::N(self.start)));
        self.productions.iter().all(|p| match p.rhs.as_slice() {
            [] => p.lhs == self.start && !on_rhs,
            [Symbol::T(_)] => true,
            [Symbol::N(_), Symbol::N(_)] => true,
            _ => false,
        })
    }
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.nonterminals[self.start])?;
        if self.productions.iter().all(|p| p.lhs != self.start) {
            // keep the output parseable for an empty language
            writeln!(f, "{} -> {}", self.nonterminals[self.start], self.nonterminals[self.start])?;
        }
        for (a, ps) in self.grouped() {
            let alts: Vec<String> = ps
                .iter()
                .map(|p| {
                    if p.rhs.is_empty() {
                        "''".to_string()
                    } else {
                        p.rhs.iter().map(|&s| self.symbol_name(s)).collect::<Vec<_>>().join(" ")
                    }
                })
                .collect();
            writeln!(f, "{} -> {}", self.nonterminals[a], alts.join(" | "))?;
        }
        Ok(())
    }
}

/// Renders a word over `alphabet`; letters are separated by spaces only when
/// some letter is longer than one character.
pub fn format_word(alphabet: &[String], w: &[u16]) -> String {
    if w.is_empty() {
        return "''".to_string();
    }
    let sep = if alphabet.iter().any(|t| t.chars().count() > 1) { " " } else { "" };
    w.iter().map(|&t| alphabet[t as usize].as_str()).collect::<Vec<_>>().join(sep)
}

/// Reads a word over `alphabet`: whitespace-separated letters, or greedy
/// longest match when no whitespace is present.
pub fn parse_word(alphabet: &[String], s: &str) -> Result<Word> {
    let lookup = |t: &str| {
        alphabet.iter().position(|a| a == t).map(|i| i as u16).ok_or_else(|| Error::ForeignSymbol(t.to_string()))
    };
    let s = s.trim();
    if s.is_empty() || s == "''" {
        return Ok(Vec::new());
    }
    if s.contains(char::is_whitespace) {
        return s.split_whitespace().map(lookup).collect();
    }
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let best = alphabet
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_empty() && rest.starts_with(a.as_str()))
            .max_by_key(|(_, a)| a.len())
            .ok_or_else(|| Error::ForeignSymbol(rest.chars().next().unwrap().to_string()))?;
        out.push(best.0 as u16);
        rest = &rest[best.1.len()..];
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Chomsky normal form

/// A grammar whose rules are `S -> λ`, `X -> a` or `X -> A B`, with the
/// start symbol absent from every right-hand side when `S -> λ` is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfGrammar(Cfg);

impl CnfGrammar {
    pub fn new(cfg: Cfg) -> Result<Self> {
        if cfg.is_cnf() {
            Ok(CnfGrammar(cfg))
        } else {
            Err(Error::NotNormalForm { form: "Chomsky normal form", reason: "rule shape".into() })
        }
    }

    pub fn cfg(&self) -> &Cfg {
        &self.0
    }
}

impl fmt::Display for CnfGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// What [`to_cnf`] had to do.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfReport {
    pub new_start: bool,
    pub fresh_nonterminals: usize,
    pub removed_useless: usize,
}

struct Names {
    taken: HashSet<String>,
}

impl Names {
    fn new(names: &[String]) -> Self {
        Names { taken: names.iter().cloned().collect() }
    }

    fn fresh(&mut self, base: &str) -> String {
        let stem: String = match base.chars().next() {
            Some('[') => format!("L{}", &base[1..]),
            Some(']') => format!("R{}", &base[1..]),
            _ => base.to_string(),
        };
        let mut n = 1;
        loop {
            let cand = format!("{stem}_{n}");
            if self.taken.insert(cand.clone()) {
                return cand;
            }
            n += 1;
        }
    }
}

fn dedup_productions(ps: &mut Vec<Production>) {
    let mut seen = HashSet::new();
    ps.retain(|p| seen.insert(p.clone()));
}

/// Drops unproductive and unreachable nonterminals; returns how many went.
fn reduce(g: &mut Cfg) -> usize {
    let n = g.nonterminals.len();
    let mut productive = vec![false; n];
    loop {
        let mut changed = false;
        for p in &g.productions {
            if !productive[p.lhs]
                && p.rhs.iter().all(|s| match s {
                    Symbol::N(b) => productive[*b],
                    Symbol::T(_) => true,
                })
            {
                productive[p.lhs] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    g.productions.retain(|p| {
        productive[p.lhs]
            && p.rhs.iter().all(|s| match s {
                Symbol::N(b) => productive[*b],
                Symbol::T(_) => true,
            })
    });
    let mut reach = vec![false; n];
    reach[g.start] = true;
    let mut stack = vec![g.start];
    while let Some(a) = stack.pop() {
        for p in g.productions.iter().filter(|p| p.lhs == a) {
            for s in &p.rhs {
                if let Symbol::N(b) = *s {
                    if !reach[b] {
                        reach[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
    }
    g.productions.retain(|p| reach[p.lhs]);
    let keep: Vec<usize> = (0..n).filter(|&a| reach[a]).collect();
    let mut remap = vec![usize::MAX; n];
    for (i, &a) in keep.iter().enumerate() {
        remap[a] = i;
    }
    g.nonterminals = keep.iter().map(|&a| g.nonterminals[a].clone()).collect();
    g.start = remap[g.start];
    for p in &mut g.productions {
        p.lhs = remap[p.lhs];
        for s in &mut p.rhs {
            if let Symbol::N(b) = s {
                *b = remap[*b];
            }
        }
    }
    n - keep.len()
}

/// Standard conversion to Chomsky normal form (start, term, bin, del, unit,
/// then removal of useless symbols).
pub fn to_cnf(g: &Cfg) -> (CnfGrammar, CnfReport) {
    let mut g = g.clone();
    let mut report = CnfReport::default();
    let mut names = Names::new(&g.nonterminals);
    dedup_productions(&mut g.productions);
    let mut add_nt = |g: &mut Cfg, base: &str, report: &mut CnfReport| {
        g.nonterminals.push(names.fresh(base));
        report.fresh_nonterminals += 1;
        g.nonterminals.len() - 1
    };

    if g.productions.iter().any(|p| p.rhs.contains(&Symbol::N(g.start))) {
        let base = g.nonterminals[g.start].clone();
        let s0 = add_nt(&mut g, &base, &mut report);
        g.productions.push(Production { lhs: s0, rhs: vec![Symbol::N(g.start)] });
        g.start = s0;
        report.new_start = true;
    }

    // terminals inside long rules
    let mut term_nt: HashMap<u16, usize> = HashMap::new();
    for i in 0..g.productions.len() {
        if g.productions[i].rhs.len() < 2 {
            continue;
        }
        for j in 0..g.productions[i].rhs.len() {
            if let Symbol::T(t) = g.productions[i].rhs[j] {
                let nt = match term_nt.get(&t) {
                    Some(&nt) => nt,
                    None => {
                        let nt = add_nt(&mut g, "T", &mut report);
                        g.productions.push(Production { lhs: nt, rhs: vec![Symbol::T(t)] });
                        term_nt.insert(t, nt);
                        nt
                    }
                };
                g.productions[i].rhs[j] = Symbol::N(nt);
            }
        }
    }

    // binarize
    let mut i = 0;
    while i < g.productions.len() {
        if g.productions[i].rhs.len() > 2 {
            let lhs = g.productions[i].lhs;
            let base = g.nonterminals[lhs].clone();
            let tail: Vec<Symbol> = g.productions[i].rhs.split_off(1);
            let nt = add_nt(&mut g, &base, &mut report);
            g.productions[i].rhs.push(Symbol::N(nt));
            g.productions.push(Production { lhs: nt, rhs: tail });
        }
        i += 1;
    }

    // remove λ-rules
    let n = g.nonterminals.len();
    let mut nullable = vec![false; n];
    loop {
        let mut changed = false;
        for p in &g.productions {
            if !nullable[p.lhs] && p.rhs.iter().all(|s| matches!(s, Symbol::N(b) if nullable[*b])) {
                nullable[p.lhs] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut del = Vec::new();
    for p in &g.productions {
        let opts: Vec<Vec<Symbol>> = match p.rhs.as_slice() {
            [a, b] => {
                let mut v = vec![vec![*a, *b]];
                if matches!(a, Symbol::N(x) if nullable[*x]) {
                    v.push(vec![*b]);
                }
                if matches!(b, Symbol::N(x) if nullable[*x]) {
                    v.push(vec![*a]);
                }
                v
            }
            _ => vec![p.rhs.clone()],
        };
        for rhs in opts {
            if !rhs.is_empty() {
                del.push(Production { lhs: p.lhs, rhs });
            }
        }
    }
    if nullable[g.start] {
        del.push(Production { lhs: g.start, rhs: vec![] });
    }
    g.productions = del;
    dedup_productions(&mut g.productions);

    // remove unit rules
    let mut out = Vec::new();
    for a in 0..n {
        let mut closure = vec![a];
        let mut k = 0;
        while k < closure.len() {
            let b = closure[k];
            for p in g.productions.iter().filter(|p| p.lhs == b) {
                if let [Symbol::N(c)] = p.rhs.as_slice() {
                    if !closure.contains(c) {
                        closure.push(*c);
                    }
                }
            }
            k += 1;
        }
        for &b in &closure {
            for p in g.productions.iter().filter(|p| p.lhs == b) {
                if matches!(p.rhs.as_slice(), [Symbol::N(_)]) {
                    continue;
                }
                if p.rhs.is_empty() && a != g.start {
                    continue;
                }
                out.push(Production { lhs: a, rhs: p.rhs.clone() });
            }
        }
    }
    // keep source order of lhs groups stable: sort by first appearance of lhs
    g.productions = out;
    dedup_productions(&mut g.productions);
    report.removed_useless = reduce(&mut g);
    (CnfGrammar(g), report)
}

// ---------------------------------------------------------------------------
// Dyck normal form

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// One side of an indexed bracket pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BracketId {
    pub pair: u32,
    pub side: Side,
}

impl BracketId {
    pub fn left(pair: u32) -> Self {
        BracketId { pair, side: Side::Left }
    }

    pub fn right(pair: u32) -> Self {
        BracketId { pair, side: Side::Right }
    }

    pub fn is_left(self) -> bool {
        self.side == Side::Left
    }
}

impl fmt::Display for BracketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Left => write!(f, "[{}", self.pair),
            Side::Right => write!(f, "]{}", self.pair),
        }
    }
}

/// Parses `[3` or `]3`.
pub fn parse_bracket(s: &str) -> Result<BracketId> {
    bracket_token(s).ok_or_else(|| Error::ForeignSymbol(s.to_string()))
}

/// Parses a whitespace-separated bracket sequence.
pub fn parse_brackets(s: &str) -> Result<Vec<BracketId>> {
    s.split_whitespace().map(parse_bracket).collect()
}

pub fn format_brackets(w: &[BracketId]) -> String {
    w.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
}

/// A nonterminal of a Dyck-normal grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nt {
    S,
    B(BracketId),
}

/// Prints the axiom as `S` whatever its source name.
impl fmt::Display for Nt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nt::S => write!(f, "S"),
            Nt::B(b) => b.fmt(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DyckRhs {
    Lambda,
    T(u16),
    Pair(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckProduction {
    pub lhs: Nt,
    pub rhs: DyckRhs,
}

/// A grammar in Dyck normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyckGrammar {
    pub k: u32,
    pub alphabet: Vec<String>,
    pub axiom: String,
    /// Sorted by `(lhs, rhs)`.
    pub productions: Vec<DyckProduction>,
    /// Source name of each bracket (for diagnostics only).
    pub names: BTreeMap<BracketId, String>,
    index: HashMap<Nt, Vec<usize>>,
}

impl DyckGrammar {
    pub fn new(
        k: u32,
        alphabet: Vec<String>,
        axiom: String,
        mut productions: Vec<DyckProduction>,
        names: BTreeMap<BracketId, String>,
    ) -> Self {
        productions.sort();
        productions.dedup();
        let mut index: HashMap<Nt, Vec<usize>> = HashMap::new();
        for (i, p) in productions.iter().enumerate() {
            index.entry(p.lhs).or_default().push(i);
        }
        DyckGrammar { k, alphabet, axiom, productions, names, index }
    }

    /// Indices of the productions rewriting `nt`.
    pub fn rules_of(&self, nt: Nt) -> &[usize] {
        self.index.get(&nt).map_or(&[], |v| v.as_slice())
    }

    pub fn rhs_of(&self, nt: Nt) -> impl Iterator<Item = DyckRhs> + '_ {
        self.rules_of(nt).iter().map(move |&i| self.productions[i].rhs)
    }

    /// The terminal a bracket rewrites to, if it is terminal-rewriting.
    pub fn terminal_of(&self, b: BracketId) -> Option<u16> {
        self.rhs_of(Nt::B(b)).find_map(|r| match r {
            DyckRhs::T(t) => Some(t),
            _ => None,
        })
    }

    /// Image of a bracket under φ: `Ok(Some(t))` for a terminal-rewriting
    /// bracket, `Ok(None)` for one that rewrites to a pair or to λ.
    pub fn phi(&self, b: BracketId) -> Result<Option<u16>> {
        if b.pair == 0 || b.pair > self.k || self.rules_of(Nt::B(b)).is_empty() {
            return Err(Error::UnknownBracket(b.pair));
        }
        Ok(self.terminal_of(b))
    }

    /// Checks the four Dyck normal form conditions.
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::NotNormalForm { form: "Dyck normal form", reason });
        for p in &self.productions {
            match (p.lhs, p.rhs) {
                (Nt::S, _) => {}
                (Nt::B(b), _) if b.pair == 0 || b.pair > self.k => {
                    return bad(format!("bracket {b} outside 1..{}", self.k))
                }
                (_, DyckRhs::Pair(i)) if i == 0 || i > self.k => return bad(format!("pair {i} outside 1..{}", self.k)),
                (Nt::B(b), DyckRhs::Lambda) => return bad(format!("{b} rewrites to λ")),
                (Nt::B(b), DyckRhs::T(_)) if self.rules_of(p.lhs).len() > 1 => {
                    return bad(format!("{b} has a terminal rule and other rules"))
                }
                _ => {}
            }
        }
        // every pair is used on some right-hand side and both sides have rules
        for i in 1..=self.k {
            for b in [BracketId::left(i), BracketId::right(i)] {
                if self.rules_of(Nt::B(b)).is_empty() {
                    return bad(format!("{b} has no rules"));
                }
            }
        }
        Ok(())
    }

    /// The grammar as a general grammar over bracket-named nonterminals.
    pub fn to_cfg(&self) -> Cfg {
        let mut nonterminals = vec![self.axiom.clone()];
        for i in 1..=self.k {
            nonterminals.push(BracketId::left(i).to_string());
            nonterminals.push(BracketId::right(i).to_string());
        }
        let id = |nt: Nt| match nt {
            Nt::S => 0,
            Nt::B(b) => (2 * (b.pair - 1) + 1 + (b.side == Side::Right) as u32) as usize,
        };
        let productions = self
            .productions
            .iter()
            .map(|p| Production {
                lhs: id(p.lhs),
                rhs: match p.rhs {
                    DyckRhs::Lambda => vec![],
                    DyckRhs::T(t) => vec![Symbol::T(t)],
                    DyckRhs::Pair(i) => {
                        vec![Symbol::N(id(Nt::B(BracketId::left(i)))), Symbol::N(id(Nt::B(BracketId::right(i))))]
                    }
                },
            })
            .collect();
        Cfg { nonterminals, terminals: self.alphabet.clone(), start: 0, productions }
    }

    pub fn nt_name(&self, nt: Nt) -> String {
        match nt {
            Nt::S => self.axiom.clone(),
            Nt::B(b) => b.to_string(),
        }
    }
}

impl fmt::Display for DyckGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_cfg().fmt(f)
    }
}

/// Maps each Dyck-normal nonterminal to the CNF nonterminal it stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenamingMap {
    pub map: BTreeMap<Nt, String>,
}

impl RenamingMap {
    pub fn image(&self, nt: Nt) -> Option<&str> {
        self.map.get(&nt).map(|s| s.as_str())
    }

    pub fn is_identity_on(&self, g: &DyckGrammar) -> bool {
        self.map.iter().all(|(nt, name)| *name == g.nt_name(*nt))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum WRhs {
    Lambda,
    T(u16),
    P(usize, usize),
}

struct Work {
    names: Vec<String>,
    origin: Vec<usize>,
    rules: Vec<(usize, WRhs)>,
    start: usize,
    taken: Names,
    fresh: usize,
    cap: usize,
}

impl Work {
    fn fresh(&mut self, base: usize) -> Result<usize> {
        self.fresh += 1;
        if self.fresh > self.cap {
            return Err(Error::FreshCap(self.cap));
        }
        let name = self.taken.fresh(&self.names[base]);
        self.names.push(name);
        self.origin.push(self.origin[base]);
        Ok(self.names.len() - 1)
    }

    fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.rules.retain(|r| seen.insert(*r));
    }

    fn rules_of(&self, a: usize) -> Vec<WRhs> {
        self.rules.iter().filter(|r| r.0 == a).map(|r| r.1).collect()
    }

    fn copy_rules(&mut self, from: usize, to: usize) {
        for r in self.rules_of(from) {
            self.rules.push((to, r));
        }
        self.dedup();
    }

    /// Step 1: a nonterminal other than the axiom that rewrites to a terminal
    /// keeps only that rule; other alternatives move to fresh nonterminals.
    fn step_terminals(&mut self) -> Result<()> {
        let mut a = 0;
        while a < self.names.len() {
            if a != self.start {
                let rules = self.rules_of(a);
                let ts: Vec<u16> = rules
                    .iter()
                    .filter_map(|r| match r {
                        WRhs::T(t) => Some(*t),
                        _ => None,
                    })
                    .collect();
                let has_pair = rules.iter().any(|r| matches!(r, WRhs::P(..)));
                let moved: Vec<u16> = if has_pair { ts } else { ts.into_iter().skip(1).collect() };
                for t in moved {
                    let at = self.fresh(a)?;
                    self.rules.retain(|r| *r != (a, WRhs::T(t)));
                    self.rules.push((at, WRhs::T(t)));
                    let snapshot = self.rules.len();
                    for i in 0..snapshot {
                        if let (lhs, WRhs::P(x, y)) = self.rules[i] {
                            if x == a {
                                self.rules.push((lhs, WRhs::P(at, y)));
                            }
                            if y == a {
                                self.rules.push((lhs, WRhs::P(x, at)));
                            }
                            if x == a && y == a {
                                self.rules.push((lhs, WRhs::P(at, at)));
                            }
                        }
                    }
                    self.dedup();
                }
            }
            a += 1;
        }
        Ok(())
    }

    /// Step 2: a nonterminal used on both sides keeps its left occurrences;
    /// each right occurrence after `Z` becomes a fresh copy `_Z A`.
    fn step_sides(&mut self) -> Result<()> {
        let count = self.names.len();
        for a in 0..count {
            let left = self.rules.iter().any(|r| matches!(r.1, WRhs::P(x, _) if x == a));
            let right = self.rules.iter().any(|r| matches!(r.1, WRhs::P(_, y) if y == a));
            if !(left && right) {
                continue;
            }
            let mut zs = Vec::new();
            for r in &self.rules {
                if let WRhs::P(z, y) = r.1 {
                    if y == a && !zs.contains(&z) {
                        zs.push(z);
                    }
                }
            }
            for z in zs {
                let za = self.fresh(a)?;
                for r in self.rules.iter_mut() {
                    if r.1 == WRhs::P(z, a) {
                        r.1 = WRhs::P(z, za);
                    }
                }
                self.copy_rules(a, za);
            }
        }
        Ok(())
    }

    /// Step 3: makes the left/right partner relation a bijection, keeping the
    /// oldest partner and giving the others fresh copies.
    fn step_partners(&mut self) -> Result<()> {
        loop {
            let pairs: BTreeSet<(usize, usize)> = self
                .rules
                .iter()
                .filter_map(|r| match r.1 {
                    WRhs::P(x, y) => Some((x, y)),
                    _ => None,
                })
                .collect();
            let mut by_right: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            let mut by_left: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &(x, y) in &pairs {
                by_right.entry(y).or_default().push(x);
                by_left.entry(x).or_default().push(y);
            }
            if let Some((&y, xs)) = by_right.iter().find(|(_, xs)| xs.len() > 1) {
                for &x in &xs[1..] {
                    let ny = self.fresh(y)?;
                    for r in self.rules.iter_mut() {
                        if r.1 == WRhs::P(x, y) {
                            r.1 = WRhs::P(x, ny);
                        }
                    }
                    self.copy_rules(y, ny);
                }
                continue;
            }
            if let Some((&x, ys)) = by_left.iter().find(|(_, ys)| ys.len() > 1) {
                for &y in &ys[1..] {
                    let nx = self.fresh(x)?;
                    for r in self.rules.iter_mut() {
                        if r.1 == WRhs::P(x, y) {
                            r.1 = WRhs::P(nx, y);
                        }
                    }
                    self.copy_rules(x, nx);
                }
                continue;
            }
            return Ok(());
        }
    }

    fn reduce(&mut self) {
        let n = self.names.len();
        let mut productive = vec![false; n];
        loop {
            let mut changed = false;
            for &(a, r) in &self.rules {
                let ok = match r {
                    WRhs::P(x, y) => productive[x] && productive[y],
                    _ => true,
                };
                if ok && !productive[a] {
                    productive[a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut reach = vec![false; n];
        reach[self.start] = true;
        let mut stack = vec![self.start];
        while let Some(a) = stack.pop() {
            for &(l, r) in &self.rules {
                if l == a {
                    if let WRhs::P(x, y) = r {
                        if productive[x] && productive[y] {
                            for b in [x, y] {
                                if !reach[b] {
                                    reach[b] = true;
                                    stack.push(b);
                                }
                            }
                        }
                    }
                }
            }
        }
        self.rules.retain(|&(a, r)| {
            reach[a]
                && productive[a]
                && match r {
                    WRhs::P(x, y) => productive[x] && productive[y],
                    _ => true,
                }
        });
    }
}

/// Converts a CNF grammar to Dyck normal form.
///
/// The three substitution steps run in order to a fixpoint. Pair indices are
/// taken from the names when the input already uses bracket names; otherwise
/// they follow first use over the productions sorted by `(lhs, rhs)` names.
pub fn to_dyck_nf(g: &CnfGrammar) -> Result<(DyckGrammar, RenamingMap)> {
    let cfg = g.cfg();
    to_dyck_nf_capped(g, 8 * (cfg.productions.len() + cfg.nonterminals.len()))
}

/// [`to_dyck_nf`] failing with [`Error::FreshCap`] once more than `cap`
/// fresh nonterminals have been introduced.
pub fn to_dyck_nf_capped(g: &CnfGrammar, cap: usize) -> Result<(DyckGrammar, RenamingMap)> {
    let cfg = g.cfg();
    let mut w = Work {
        names: cfg.nonterminals.clone(),
        origin: (0..cfg.nonterminals.len()).collect(),
        rules: cfg
            .productions
            .iter()
            .map(|p| {
                let rhs = match p.rhs.as_slice() {
                    [] => WRhs::Lambda,
                    [Symbol::T(t)] => WRhs::T(*t),
                    [Symbol::N(a), Symbol::N(b)] => WRhs::P(*a, *b),
                    _ => unreachable!("CnfGrammar invariant"),
                };
                (p.lhs, rhs)
            })
            .collect(),
        start: cfg.start,
        taken: Names::new(&cfg.nonterminals),
        fresh: 0,
        cap,
    };
    w.dedup();
    w.step_terminals()?;
    w.step_sides()?;
    w.step_partners()?;
    w.reduce();

    let pairs: BTreeSet<(usize, usize)> = w
        .rules
        .iter()
        .filter_map(|r| match r.1 {
            WRhs::P(x, y) => Some((x, y)),
            _ => None,
        })
        .collect();

    let mut index: HashMap<(usize, usize), u32> = HashMap::new();
    let from_names: Option<HashMap<(usize, usize), u32>> = (|| {
        let mut m = HashMap::new();
        let mut used = BTreeSet::new();
        for &(x, y) in &pairs {
            let l = bracket_token(&w.names[x])?;
            let r = bracket_token(&w.names[y])?;
            if l.side != Side::Left || r.side != Side::Right || l.pair != r.pair || !used.insert(l.pair) {
                return None;
            }
            m.insert((x, y), l.pair);
        }
        (used.iter().copied().eq(1..=used.len() as u32)).then_some(m)
    })();
    if let Some(m) = from_names {
        index = m;
    } else {
        let rhs_names = |r: &WRhs| -> Vec<String> {
            match *r {
                WRhs::Lambda => vec![],
                WRhs::T(t) => vec![quote(&cfg.terminals[t as usize])],
                WRhs::P(x, y) => vec![w.names[x].clone(), w.names[y].clone()],
            }
        };
        let mut sorted: Vec<&(usize, WRhs)> = w.rules.iter().collect();
        sorted.sort_by(|a, b| (&w.names[a.0], rhs_names(&a.1)).cmp(&(&w.names[b.0], rhs_names(&b.1))));
        for r in sorted {
            if let WRhs::P(x, y) = r.1 {
                let next = index.len() as u32 + 1;
                index.entry((x, y)).or_insert(next);
            }
        }
    }

    let mut nt_of: HashMap<usize, Nt> = HashMap::from([(w.start, Nt::S)]);
    for (&(x, y), &i) in &index {
        nt_of.insert(x, Nt::B(BracketId::left(i)));
        nt_of.insert(y, Nt::B(BracketId::right(i)));
    }
    let productions: Vec<DyckProduction> = w
        .rules
        .iter()
        .map(|&(a, r)| DyckProduction {
            lhs: nt_of[&a],
            rhs: match r {
                WRhs::Lambda => DyckRhs::Lambda,
                WRhs::T(t) => DyckRhs::T(t),
                WRhs::P(x, y) => DyckRhs::Pair(index[&(x, y)]),
            },
        })
        .collect();
    let mut names = BTreeMap::new();
    let mut map = BTreeMap::new();
    for (&a, &nt) in &nt_of {
        if let Nt::B(b) = nt {
            names.insert(b, w.names[a].clone());
        }
        map.insert(nt, cfg.nonterminals[w.origin[a]].clone());
    }
    let dg = DyckGrammar::new(
        index.len() as u32,
        cfg.terminals.clone(),
        cfg.nonterminals[cfg.start].clone(),
        productions,
        names,
    );
    Ok((dg, RenamingMap { map }))
}

// ---------------------------------------------------------------------------
// Pair classification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    /// Both sides rewrite to terminals.
    N1,
    /// Only the left side rewrites to a terminal.
    N2l,
    /// Only the right side rewrites to a terminal.
    N2r,
    /// Neither side rewrites to a terminal.
    N3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    classes: Vec<Class>,
}

impl PairClass {
    pub fn of(&self, pair: u32) -> Class {
        self.classes[pair as usize - 1]
    }

    pub fn k(&self) -> u32 {
        self.classes.len() as u32
    }

    pub fn pairs_in(&self, c: Class) -> Vec<u32> {
        (1..=self.k()).filter(|&i| self.of(i) == c).collect()
    }

    /// Whether a bracket rewrites to a terminal.
    pub fn is_terminal(&self, b: BracketId) -> bool {
        matches!((self.of(b.pair), b.side), (Class::N1, _) | (Class::N2l, Side::Left) | (Class::N2r, Side::Right))
    }
}

pub fn classify_pairs(g: &DyckGrammar) -> PairClass {
    let classes = (1..=g.k)
        .map(|i| {
            let l = g.terminal_of(BracketId::left(i)).is_some();
            let r = g.terminal_of(BracketId::right(i)).is_some();
            match (l, r) {
                (true, true) => Class::N1,
                (true, false) => Class::N2l,
                (false, true) => Class::N2r,
                (false, false) => Class::N3,
            }
        })
        .collect();
    PairClass { classes }
}

// ---------------------------------------------------------------------------
// Extended grammar

/// A Dyck-normal grammar with one extra pair per rule `S -> t`, so that
/// words of length at most one also get a bracket trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedDyckGrammar {
    pub base: DyckGrammar,
    /// `(pair index, terminal or None for λ)`, indices `k+1..=K`.
    pub extra_pairs: Vec<(u32, Option<u16>)>,
    pub big_k: u32,
    /// The base grammar plus `S -> [t ]t`, `[t -> t`, `]t -> λ`.
    pub full: DyckGrammar,
}

impl ExtendedDyckGrammar {
    pub fn is_extended(&self) -> bool {
        !self.extra_pairs.is_empty()
    }

    /// The words of `L_p`.
    pub fn lp_words(&self) -> Vec<Vec<BracketId>> {
        self.extra_pairs.iter().map(|&(i, _)| vec![BracketId::left(i), BracketId::right(i)]).collect()
    }
}

pub fn extend_grammar(g: &DyckGrammar) -> ExtendedDyckGrammar {
    let mut extra = Vec::new();
    let mut productions = g.productions.clone();
    let mut names = g.names.clone();
    for p in g.productions.iter().filter(|p| p.lhs == Nt::S) {
        let t = match p.rhs {
            DyckRhs::T(t) => Some(t),
            DyckRhs::Lambda => None,
            DyckRhs::Pair(_) => continue,
        };
        if extra.iter().any(|&(_, u)| u == t) {
            continue;
        }
        let i = g.k + extra.len() as u32 + 1;
        extra.push((i, t));
        productions.push(DyckProduction { lhs: Nt::S, rhs: DyckRhs::Pair(i) });
        productions.push(DyckProduction { lhs: Nt::B(BracketId::left(i)), rhs: t.map_or(DyckRhs::Lambda, DyckRhs::T) });
        productions.push(DyckProduction { lhs: Nt::B(BracketId::right(i)), rhs: DyckRhs::Lambda });
        let label = t.map_or("λ".to_string(), |t| g.alphabet[t as usize].clone());
        names.insert(BracketId::left(i), format!("t_{label}"));
        names.insert(BracketId::right(i), format!("t_{label}"));
    }
    let big_k = g.k + extra.len() as u32;
    let full = DyckGrammar::new(big_k, g.alphabet.clone(), g.axiom.clone(), productions, names);
    ExtendedDyckGrammar { base: g.clone(), extra_pairs: extra, big_k, full }
}

/// φ: erase pair-rewriting brackets, replace terminal-rewriting ones by their terminal.
pub fn apply_phi(g: &ExtendedDyckGrammar, w: &[BracketId]) -> Result<Word> {
    let mut out = Vec::with_capacity(w.len() / 2 + 1);
    for &b in w {
        if let Some(t) = g.full.phi(b)? {
            out.push(t);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Derivations

/// One leftmost rewriting step: production index and position of the
/// rewritten nonterminal in the sentential form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub rule: usize,
    pub pos: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

fn bad_derivation(msg: impl Into<String>) -> Error {
    Error::InvalidDerivation(msg.into())
}

/// Replays a leftmost derivation in a general grammar; returns the derived word.
pub fn replay_cfg(g: &Cfg, d: &Derivation) -> Result<Word> {
    let mut form = vec![Symbol::N(g.start)];
    for (n, s) in d.steps.iter().enumerate() {
        let p = g.productions.get(s.rule).ok_or_else(|| bad_derivation(format!("step {n}: no rule {}", s.rule)))?;
        let leftmost = form.iter().position(|x| matches!(x, Symbol::N(_)));
        if leftmost != Some(s.pos) || form[s.pos] != Symbol::N(p.lhs) {
            return Err(bad_derivation(format!("step {n} is not a leftmost rewrite")));
        }
        form.splice(s.pos..s.pos + 1, p.rhs.iter().copied());
    }
    form.iter()
        .map(|x| match x {
            Symbol::T(t) => Ok(*t),
            Symbol::N(_) => Err(bad_derivation("derivation is incomplete")),
        })
        .collect()
}

/// Replays a leftmost derivation in a Dyck-normal grammar and returns the
/// rewritten nonterminals in order together with the derived word.
pub fn replay_dyck(g: &DyckGrammar, d: &Derivation) -> Result<(Vec<Nt>, Word)> {
    #[derive(Clone, Copy, PartialEq)]
    enum F {
        N(Nt),
        T(u16),
    }
    let mut form = vec![F::N(Nt::S)];
    let mut rewritten = Vec::with_capacity(d.steps.len());
    for (n, s) in d.steps.iter().enumerate() {
        let p = g.productions.get(s.rule).ok_or_else(|| bad_derivation(format!("step {n}: no rule {}", s.rule)))?;
        let leftmost = form.iter().position(|x| matches!(x, F::N(_)));
        if leftmost != Some(s.pos) || form[s.pos] != F::N(p.lhs) {
            return Err(bad_derivation(format!("step {n} is not a leftmost rewrite")));
        }
        rewritten.push(p.lhs);
        let rhs: Vec<F> = match p.rhs {
            DyckRhs::Lambda => vec![],
            DyckRhs::T(t) => vec![F::T(t)],
            DyckRhs::Pair(i) => vec![F::N(Nt::B(BracketId::left(i))), F::N(Nt::B(BracketId::right(i)))],
        };
        form.splice(s.pos..s.pos + 1, rhs);
    }
    let word = form
        .iter()
        .map(|x| match x {
            F::T(t) => Ok(*t),
            F::N(_) => Err(bad_derivation("derivation is incomplete")),
        })
        .collect::<Result<Word>>()?;
    Ok((rewritten, word))
}

/// The homomorphism h_d: maps a Dyck-normal derivation rule by rule onto
/// the CNF grammar it was converted from.
pub fn map_derivation_h_d(m: &RenamingMap, dg: &DyckGrammar, cnf: &CnfGrammar, d: &Derivation) -> Result<Derivation> {
    let cfg = cnf.cfg();
    let lookup = |nt: Nt| -> Result<usize> {
        let name = m.image(nt).ok_or_else(|| Error::ForeignSymbol(dg.nt_name(nt)))?;
        cfg.nonterminals.iter().position(|n| n == name).ok_or_else(|| Error::ForeignSymbol(name.to_string()))
    };
    let mut steps = Vec::with_capacity(d.steps.len());
    for s in &d.steps {
        let p = dg.productions.get(s.rule).ok_or_else(|| bad_derivation(format!("no rule {}", s.rule)))?;
        let lhs = lookup(p.lhs)?;
        let rhs: Vec<Symbol> = match p.rhs {
            DyckRhs::Lambda => vec![],
            DyckRhs::T(t) => vec![Symbol::T(t)],
            DyckRhs::Pair(i) => {
                vec![Symbol::N(lookup(Nt::B(BracketId::left(i)))?), Symbol::N(lookup(Nt::B(BracketId::right(i)))?)]
            }
        };
        let rule = cfg
            .productions
            .iter()
            .position(|q| q.lhs == lhs && q.rhs == rhs)
            .ok_or_else(|| bad_derivation("image rule missing from the CNF grammar"))?;
        steps.push(Step { rule, pos: s.pos });
    }
    Ok(Derivation { steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(text: &str) -> CnfGrammar {
        to_cnf(&parse_grammar(text).unwrap()).0
    }

    #[test]
    fn parses_single_rule() {
        let g = parse_grammar("start: S\nS -> 'a'").unwrap();
        assert_eq!(g.productions.len(), 1);
        assert_eq!(g.terminals, vec!["a"]);
    }

    #[test]
    fn rejects_missing_body() {
        assert!(matches!(parse_grammar("S ->"), Err(Error::Syntax { line: 1, .. })));
        assert!(matches!(parse_grammar("start: S\nS ->"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_grammar("start: X\nS -> 'a'"), Err(Error::UndeclaredStart(_))));
    }

    #[test]
    fn display_round_trips() {
        let g = parse_grammar("# c\nstart: S\nS -> 'a' S 'b' | ''\n").unwrap();
        assert_eq!(parse_grammar(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn cnf_is_idempotent() {
        let g = cnf("start: S\nS -> A B | 'a'\nA -> 'a'\nB -> A B | 'b'");
        let again = to_cnf(g.cfg()).0;
        assert_eq!(g, again);
    }

    #[test]
    fn words_parse_greedily() {
        let abc = vec!["a".to_string(), "ab".to_string(), "c".to_string()];
        assert_eq!(parse_word(&abc, "abac").unwrap(), vec![1, 0, 2]);
        assert_eq!(parse_word(&abc, "a ab").unwrap(), vec![0, 1]);
        assert!(parse_word(&abc, "x").is_err());
    }

    #[test]
    fn dyck_conversion_satisfies_conditions() {
        let g = cnf("start: S\nS -> A A | 'c'\nA -> A A | 'a' | 'b'");
        let (d, m) = to_dyck_nf(&g).unwrap();
        d.validate().unwrap();
        for p in &d.productions {
            assert!(m.image(p.lhs).is_some());
        }
    }

    #[test]
    fn bracket_named_input_keeps_indices() {
        let g = cnf("start: S\nS -> [2 ]2\n[2 -> 'a'\n]2 -> [1 ]1\n[1 -> 'b'\n]1 -> 'c'");
        let (d, m) = to_dyck_nf(&g).unwrap();
        assert_eq!(d.k, 2);
        assert_eq!(d.terminal_of(BracketId::left(2)), Some(0));
        assert!(m.is_identity_on(&d));
    }

    #[test]
    fn classify_single_core_pair() {
        let g = cnf("start: S\nS -> [1 ]1\n[1 -> 'a'\n]1 -> 'b'");
        let (d, _) = to_dyck_nf(&g).unwrap();
        assert_eq!(classify_pairs(&d).of(1), Class::N1);
    }

    #[test]
    fn extension_adds_one_pair_per_terminal_rule() {
        let g = cnf("start: S\nS -> [1 ]1 | 'a' | ''\n[1 -> 'a'\n]1 -> 'b'");
        let (d, _) = to_dyck_nf(&g).unwrap();
        let e = extend_grammar(&d);
        assert_eq!(e.big_k, 3);
        let w = apply_phi(&e, &e.lp_words()[0]).unwrap();
        assert!(w.len() <= 1);
    }

    #[test]
    fn left_sides_are_numbered_first() {
        let g = parse_grammar("start: S\nS -> B A\nA -> 'a'\nB -> 'b'").unwrap();
        assert_eq!(g.nonterminals, vec!["S", "A", "B"]);
        let again = parse_grammar(&g.to_string()).unwrap();
        assert_eq!(again, g);
    }
}
