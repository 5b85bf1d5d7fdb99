//! Independent checks: CYK membership, bounded language enumeration, random
//! grammars, and bounded verification of the constructions.

use std::borrow::Cow;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approx::RegularGrammar;
use crate::automaton::Nfa;
use crate::dyck::enumerate_trace_language;
use crate::error::{Error, Result};
use crate::grammar::{
    apply_phi, format_brackets, format_word, BracketId, Cfg, CnfGrammar, DyckGrammar, ExtendedDyckGrammar, Production,
    Symbol, Word,
};
use crate::regex::Regex;

/// Grammars whose language can be enumerated.
pub trait AsCfg {
    fn as_cfg(&self) -> Cow<'_, Cfg>;
}

impl AsCfg for Cfg {
    fn as_cfg(&self) -> Cow<'_, Cfg> {
        Cow::Borrowed(self)
    }
}

impl AsCfg for CnfGrammar {
    fn as_cfg(&self) -> Cow<'_, Cfg> {
        Cow::Borrowed(self.cfg())
    }
}

impl AsCfg for DyckGrammar {
    fn as_cfg(&self) -> Cow<'_, Cfg> {
        Cow::Owned(self.to_cfg())
    }
}

impl AsCfg for ExtendedDyckGrammar {
    fn as_cfg(&self) -> Cow<'_, Cfg> {
        Cow::Owned(self.base.to_cfg())
    }
}

/// CYK over the triangular table; `λ` is accepted iff the start symbol has a
/// λ-rule.
pub fn cyk_membership(g: &CnfGrammar, w: &[u16]) -> Result<bool> {
    let cfg = g.cfg();
    if let Some(&t) = w.iter().find(|&&t| t as usize >= cfg.terminals.len()) {
        return Err(Error::ForeignSymbol(format!("#{t}")));
    }
    if w.is_empty() {
        return Ok(cfg.productions.iter().any(|p| p.lhs == cfg.start && p.rhs.is_empty()));
    }
    let n = w.len();
    let m = cfg.nonterminals.len();
    // table[len - 1][i][a]: nonterminal a derives w[i..i + len]
    let mut table = vec![vec![vec![false; m]; n]; n];
    for (i, &t) in w.iter().enumerate() {
        for p in &cfg.productions {
            if p.rhs == [Symbol::T(t)] {
                table[0][i][p.lhs] = true;
            }
        }
    }
    let binary: Vec<(usize, usize, usize)> = cfg
        .productions
        .iter()
        .filter_map(|p| match p.rhs.as_slice() {
            [Symbol::N(b), Symbol::N(c)] => Some((p.lhs, *b, *c)),
            _ => None,
        })
        .collect();
    for len in 2..=n {
        for i in 0..=n - len {
            for split in 1..len {
                for &(a, b, c) in &binary {
                    if !table[len - 1][i][a] && table[split - 1][i][b] && table[len - split - 1][i + split][c] {
                        table[len - 1][i][a] = true;
                    }
                }
            }
        }
    }
    Ok(table[n - 1][0][cfg.start])
}

/// All words of length at most `max_len`, built length by length over the
/// nonterminals reachable from the start symbol. Words of one length come from
/// strictly shorter ones, except through unit and λ chains, which are iterated
/// to a fixpoint within the length. Returns `None` once some nonterminal has
/// more than `budget` words.
pub fn enumerate_language_capped(g: &dyn AsCfg, max_len: usize, budget: usize) -> Option<BTreeSet<Word>> {
    let cfg = g.as_cfg();
    let n = cfg.nonterminals.len();
    let mut reach = vec![false; n];
    reach[cfg.start] = true;
    let mut stack = vec![cfg.start];
    while let Some(a) = stack.pop() {
        for p in cfg.productions.iter().filter(|p| p.lhs == a) {
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
    let prods: Vec<&Production> = cfg.productions.iter().filter(|p| reach[p.lhs]).collect();
    // sets[a][l]: words of length l derived from a
    let mut sets: Vec<Vec<HashSet<Word>>> = vec![vec![HashSet::new(); max_len + 1]; n];
    let mut sizes = vec![0usize; n];
    for len in 0..=max_len {
        let mut first = true;
        loop {
            let mut changed = false;
            for p in &prods {
                let mut found = Vec::new();
                let mut lens = Vec::with_capacity(p.rhs.len());
                compositions(&p.rhs, &sets, len, !first, &mut lens, &mut |ls| {
                    product(&p.rhs, &sets, ls, &mut found);
                });
                for w in found {
                    if sets[p.lhs][len].insert(w) {
                        sizes[p.lhs] += 1;
                        changed = true;
                    }
                }
                if sizes[p.lhs] > budget {
                    return None;
                }
            }
            first = false;
            if !changed {
                break;
            }
        }
    }
    let start = std::mem::take(&mut sets[cfg.start]);
    Some(start.into_iter().flatten().collect())
}

/// Calls `emit` with every split of `len` over `rhs` whose parts are all
/// available; with `full_only`, only splits giving one nonterminal all of
/// `len` (the only ones that can change within a length).
fn compositions(
    rhs: &[Symbol],
    sets: &[Vec<HashSet<Word>>],
    len: usize,
    full_only: bool,
    lens: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let i = lens.len();
    let used: usize = lens.iter().sum();
    if i == rhs.len() {
        if used == len && (!full_only || lens.contains(&len)) {
            emit(lens);
        }
        return;
    }
    let left = len - used;
    let choices = match rhs[i] {
        Symbol::T(_) => 1..=1,
        Symbol::N(_) if i + 1 == rhs.len() => left..=left,
        Symbol::N(_) => 0..=left,
    };
    for j in choices {
        let available = match rhs[i] {
            Symbol::T(_) => j <= left,
            Symbol::N(b) => !sets[b][j].is_empty(),
        };
        if !available {
            continue;
        }
        lens.push(j);
        compositions(rhs, sets, len, full_only, lens, emit);
        lens.pop();
    }
}

fn product(rhs: &[Symbol], sets: &[Vec<HashSet<Word>>], lens: &[usize], out: &mut Vec<Word>) {
    let mut acc: Vec<Word> = vec![Vec::new()];
    for (s, &l) in rhs.iter().zip(lens) {
        acc = match *s {
            Symbol::T(t) => acc
                .into_iter()
                .map(|mut w| {
                    w.push(t);
                    w
                })
                .collect(),
            Symbol::N(b) => {
                let mut next = Vec::with_capacity(acc.len() * sets[b][l].len());
                for u in &acc {
                    for v in &sets[b][l] {
                        let mut w = u.clone();
                        w.extend_from_slice(v);
                        next.push(w);
                    }
                }
                next
            }
        };
    }
    out.extend(acc);
}

/// `L(g)` restricted to words of length at most `max_len`.
pub fn enumerate_language(g: &dyn AsCfg, max_len: usize) -> BTreeSet<Word> {
    enumerate_language_capped(g, max_len, usize::MAX).unwrap_or_default()
}

/// The same set by breadth-first search over leftmost sentential forms,
/// abandoning a form once its terminals plus pending nonterminals exceed the
/// bound (in Chomsky normal form every nonterminal other than a λ-start
/// yields at least one letter).
pub fn enumerate_language_bfs(g: &CnfGrammar, max_len: usize) -> BTreeSet<Word> {
    let cfg = g.cfg();
    let mut out = BTreeSet::new();
    let mut seen: HashSet<Vec<Symbol>> = HashSet::new();
    let mut layer = vec![vec![Symbol::N(cfg.start)]];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for form in layer {
            let Some(i) = form.iter().position(|s| matches!(s, Symbol::N(_))) else {
                out.insert(form.iter().map(|s| if let Symbol::T(t) = s { *t } else { 0 }).collect());
                continue;
            };
            let Symbol::N(a) = form[i] else { unreachable!() };
            for p in cfg.productions.iter().filter(|p| p.lhs == a) {
                let mut f = form[..i].to_vec();
                f.extend_from_slice(&p.rhs);
                f.extend_from_slice(&form[i + 1..]);
                if f.len() <= max_len && seen.insert(f.clone()) {
                    next.push(f);
                }
            }
        }
        layer = next;
    }
    out
}

/// A random grammar with `nts` nonterminals over `terms` letters; rules have
/// at most three symbols and may be empty.
pub fn random_cfg(rng: &mut impl Rng, nts: usize, terms: usize) -> Cfg {
    let nonterminals: Vec<String> = (0..nts).map(|i| format!("N{i}")).collect();
    let terminals: Vec<String> = (0..terms).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut productions = Vec::new();
    for a in 0..nts {
        let alts = rng.gen_range(1..=3);
        for k in 0..alts {
            let len = if k == 0 { rng.gen_range(1..=2) } else { rng.gen_range(0..=3) };
            let rhs = (0..len)
                .map(|_| {
                    if k == 0 || rng.gen_bool(0.45) {
                        Symbol::T(rng.gen_range(0..terms) as u16)
                    } else {
                        Symbol::N(rng.gen_range(0..nts))
                    }
                })
                .collect();
            productions.push(Production { lhs: a, rhs });
        }
        if rng.gen_bool(0.5) {
            let rhs = vec![Symbol::N(rng.gen_range(0..nts)), Symbol::N(rng.gen_range(0..nts))];
            productions.push(Production { lhs: a, rhs });
        }
    }
    Cfg { nonterminals, terminals, start: 0, productions }
}

/// A random grammar in Chomsky normal form with at most `max_nts`
/// nonterminals over `terms` letters.
pub fn random_cnf(rng: &mut impl Rng, max_nts: usize, terms: usize) -> CnfGrammar {
    let nts = rng.gen_range(1..=max_nts);
    let lambda = rng.gen_bool(0.2);
    // with a λ-rule the start symbol stays off every right-hand side
    let lo = usize::from(lambda && nts > 1);
    let nonterminals: Vec<String> = (0..nts).map(|i| format!("N{i}")).collect();
    let terminals: Vec<String> = (0..terms).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut productions = Vec::new();
    for a in 0..nts {
        for _ in 0..rng.gen_range(0..=2) {
            productions.push(Production { lhs: a, rhs: vec![Symbol::T(rng.gen_range(0..terms) as u16)] });
        }
        if lambda && nts == 1 {
            continue;
        }
        for _ in 0..rng.gen_range(0..=3) {
            let b = rng.gen_range(lo..nts);
            let c = rng.gen_range(lo..nts);
            productions.push(Production { lhs: a, rhs: vec![Symbol::N(b), Symbol::N(c)] });
        }
    }
    if lambda {
        productions.push(Production { lhs: 0, rhs: vec![] });
    }
    let cfg = Cfg { nonterminals, terminals, start: 0, productions };
    CnfGrammar::new(cfg).expect("generated rules are in normal form")
}

/// The outcome of a bounded check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub claim: String,
    pub bound: usize,
    pub holds: bool,
    /// At most ten witnesses.
    pub counterexamples: Vec<String>,
    /// Size of the set difference measured by the claim.
    pub diff: usize,
    pub elapsed: Duration,
}

pub const MAX_COUNTEREXAMPLES: usize = 10;

impl VerificationReport {
    fn new(claim: &str, bound: usize, start: Instant) -> Self {
        VerificationReport {
            claim: claim.to_string(),
            bound,
            holds: true,
            counterexamples: Vec::new(),
            diff: 0,
            elapsed: start.elapsed(),
        }
    }

    fn fail(&mut self, witness: String) {
        self.holds = false;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(witness);
        }
    }

    /// The machine-readable summary line.
    pub fn line(&self) -> String {
        format!(
            "claim={} bound={} status={} |diff|={}",
            self.claim,
            self.bound,
            if self.holds { "holds" } else { "fails" },
            self.diff
        )
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.line())?;
        for c in &self.counterexamples {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Words of `a` up to `max_len` that are well-bracketed, found by cutting
/// every prefix that cannot be completed to a Dyck word in time.
pub fn dyck_words(a: &Nfa<BracketId>, max_len: usize) -> BTreeSet<Vec<BracketId>> {
    let mut out = BTreeSet::new();
    a.enumerate_with(
        max_len,
        &mut |w| {
            let mut stack = Vec::new();
            for b in w {
                if b.is_left() {
                    stack.push(b.pair);
                } else if stack.pop() != Some(b.pair) {
                    return false;
                }
            }
            stack.len() <= max_len - w.len()
        },
        &mut |w| {
            let depth = w.iter().fold(0i64, |d, b| if b.is_left() { d + 1 } else { d - 1 });
            if depth == 0 {
                out.insert(w.to_vec());
            }
        },
    );
    out
}

/// Theorem check for an R-like expression: see [`verify_cs_nfa`].
pub fn verify_cs(g: &ExtendedDyckGrammar, r: &Regex<BracketId>, max_source_len: usize) -> VerificationReport {
    verify_cs_nfa(g, &Nfa::from_regex(r), max_source_len, "cs")
}

/// With `D` the well-bracketed words of `a` of length at most
/// `2·max_source_len`: φ(D) must equal `L(g)` up to `max_source_len`, and `D`
/// must equal the trace language (plus the extended-pair words) cut at the
/// same bracket length.
pub fn verify_cs_nfa(
    g: &ExtendedDyckGrammar,
    a: &Nfa<BracketId>,
    max_source_len: usize,
    claim: &str,
) -> VerificationReport {
    let start = Instant::now();
    let n = max_source_len;
    let mut rep = VerificationReport::new(claim, n, start);
    let d = dyck_words(a, 2 * n);
    let images: BTreeSet<Word> = d.iter().filter_map(|w| apply_phi(g, w).ok()).filter(|w| w.len() <= n).collect();
    let lang = enumerate_language(g, n);
    let alpha = &g.base.alphabet;
    for w in images.symmetric_difference(&lang) {
        rep.diff += 1;
        let side = if lang.contains(w) { "missing from image" } else { "image outside L" };
        rep.fail(format!("{side}: {}", format_word(alpha, w)));
    }
    let traces: BTreeSet<Vec<BracketId>> =
        enumerate_trace_language(g, n + 1).bracket_words().into_iter().filter(|t| t.len() <= 2 * n).collect();
    for t in d.symmetric_difference(&traces) {
        rep.diff += 1;
        let side = if traces.contains(t) { "trace missing" } else { "non-trace Dyck word" };
        rep.fail(format!("{side}: {}", format_brackets(t)));
    }
    rep.elapsed = start.elapsed();
    rep
}

/// `L(g) ⊆ L(gr)` up to `max_len`; `diff` counts words of `gr` outside
/// `L(g)`.
pub fn verify_superset(g: &dyn AsCfg, gr: &RegularGrammar, max_len: usize) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new("superset", max_len, start);
    let lang = enumerate_language(g, max_len);
    let a = gr.to_nfa();
    let mut inside = 0u128;
    for w in &lang {
        if a.accepts(w) {
            inside += 1;
        } else {
            rep.fail(format!("not in approximation: {}", format_word(&gr.alphabet, w)));
        }
    }
    let total: u128 = a.count_by_length(max_len).iter().sum();
    rep.diff = usize::try_from(total - inside).unwrap_or(usize::MAX);
    rep.elapsed = start.elapsed();
    rep
}

/// The Dyck normal form `d` generates the same words as `g` up to `max_len`,
/// and both agree under CYK on `samples` random words of that length bound
/// drawn from a generator seeded with `seed`.
/// Words are compared by letter names since the alphabets may be reordered.
pub fn verify_dycknf(g: &Cfg, d: &DyckGrammar, max_len: usize, samples: usize, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let mut rep = VerificationReport::new("dycknf", max_len, start);
    let names = |alpha: &[String], w: &Word| -> Vec<String> { w.iter().map(|&t| alpha[t as usize].clone()).collect() };
    let src: BTreeSet<Vec<String>> = enumerate_language(g, max_len).iter().map(|w| names(&g.terminals, w)).collect();
    let dnf: BTreeSet<Vec<String>> = enumerate_language(d, max_len).iter().map(|w| names(&d.alphabet, w)).collect();
    for w in src.symmetric_difference(&dnf) {
        rep.diff += 1;
        let side = if src.contains(w) { "lost by conversion" } else { "gained by conversion" };
        rep.fail(format!("{side}: {}", w.join(" ")));
    }
    let (cnf, _) = crate::grammar::to_cnf(g);
    let dcnf = match CnfGrammar::new(d.to_cfg()) {
        Ok(c) => c,
        Err(e) => {
            rep.fail(format!("not in normal form: {e}"));
            return rep;
        }
    };
    if !g.terminals.is_empty() {
        for _ in 0..samples {
            let len = rng.gen_range(0..=max_len);
            let w: Word = (0..len).map(|_| rng.gen_range(0..g.terminals.len()) as u16).collect();
            let mapped: Option<Word> = w
                .iter()
                .map(|&t| d.alphabet.iter().position(|a| *a == g.terminals[t as usize]).map(|i| i as u16))
                .collect();
            let a = cyk_membership(&cnf, &w).unwrap_or(false);
            let b = mapped.is_some_and(|m| cyk_membership(&dcnf, &m).unwrap_or(false));
            if a != b {
                rep.diff += 1;
                rep.fail(format!("membership differs: {}", format_word(&g.terminals, &w)));
            }
        }
    }
    rep.elapsed = start.elapsed();
    rep
}
