//! The transition diagram A_e and the regular grammar G_r.
//!
//! A_e reads the refined graph under φ∘h_k. Brackets with an empty image are
//! skipped; every other vertex gets a state reached by its letter, and a core
//! bracket gets two chained states, one per letter. The language of A_e is
//! φ(R_m).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use serde_json::json;

use crate::automaton::Nfa;
use crate::error::{Error, Result};
use crate::grammar::{
    classify_pairs, format_word, BracketId, Cfg, Class, ExtendedDyckGrammar, Nt, Production, Symbol, Word,
};
use crate::refine::{RSym, RefinedGraph};

/// A_e with the names of its letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionDiagram {
    pub nfa: Nfa<u16>,
    pub alphabet: Vec<String>,
}

impl TransitionDiagram {
    pub fn accepts(&self, w: &[u16]) -> bool {
        self.nfa.accepts(w)
    }

    /// States with a λ-move into an accepting state.
    pub fn pre_final(&self) -> BTreeSet<usize> {
        self.nfa
            .edges
            .iter()
            .filter(|(_, l, t)| l.is_none() && self.nfa.accepting.contains(t))
            .map(|&(f, _, _)| f)
            .collect()
    }

    fn letter(&self, l: &Option<u16>) -> String {
        l.map_or("λ".to_string(), |t| self.alphabet[t as usize].clone())
    }

    pub fn to_dot(&self) -> String {
        let pre = self.pre_final();
        let mut s = String::from("digraph ae {\n  rankdir=LR;\n");
        for (i, name) in self.nfa.names.iter().enumerate() {
            let mut attrs = String::new();
            if i == self.nfa.start {
                attrs.push_str(", color=red, fontcolor=red");
            } else if pre.contains(&i) {
                attrs.push_str(", color=green, fontcolor=green");
            }
            if self.nfa.accepting.contains(&i) {
                attrs.push_str(", shape=doublecircle");
            }
            let _ = writeln!(s, "  n{i} [label=\"{name}\"{attrs}];");
        }
        for (f, l, t) in &self.nfa.edges {
            let _ = writeln!(s, "  n{f} -> n{t} [label=\"{}\"];", self.letter(l));
        }
        s.push_str("}\n");
        s
    }

    /// States, alphabet, transition triples, start and accepting states, in
    /// a stable order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut triples: Vec<(usize, Option<u16>, usize)> = self.nfa.edges.clone();
        triples.sort();
        let name = |i: usize| self.nfa.names[i].clone();
        json!({
            "states": self.nfa.names,
            "alphabet": self.alphabet,
            "triples": triples
                .iter()
                .map(|(f, l, t)| json!([name(*f), l.map(|x| self.alphabet[x as usize].clone()), name(*t)]))
                .collect::<Vec<_>>(),
            "start": name(self.nfa.start),
            "accepting": self.nfa.accepting.iter().map(|&i| name(i)).collect::<Vec<_>>(),
        })
    }
}

fn state_name(side: char, s: RSym) -> String {
    let Nt::B(b) = s.label else { return "S".into() };
    let mut n = format!("{side}{}q{}", b.pair, s.q);
    if s.mark > 0 {
        let _ = write!(n, "m{}", s.mark);
    }
    n
}

/// The letters a vertex spells under φ∘h_k.
fn emission(g: &ExtendedDyckGrammar, cls: &crate::grammar::PairClass, x: Nt) -> Vec<u16> {
    let Nt::B(b) = x else { return vec![] };
    let term = |b: BracketId| g.base.terminal_of(b);
    match (cls.of(b.pair), b.is_left()) {
        (Class::N1, true) => [term(b), term(BracketId::right(b.pair))].into_iter().flatten().collect(),
        (Class::N2l, false) => term(BracketId::left(b.pair)).into_iter().collect(),
        (Class::N2r, false) => term(b).into_iter().collect(),
        _ => vec![],
    }
}

#[allow(non_snake_case)]
pub fn build_automaton_Ae(g: &ExtendedDyckGrammar, rg: &RefinedGraph) -> Result<TransitionDiagram> {
    let cls = classify_pairs(&g.base);
    let dangling = rg.dangling(&cls);
    if let Some(&v) = dangling.first() {
        return Err(Error::Incomplete(format!("{} has no successor", rg.vertex_name(v))));
    }
    let mut a: Nfa<u16> = Nfa::new();
    let s = a.add_state("S");
    let f = a.add_state("F");
    a.accepting.insert(f);

    let n = rg.vertices.len();
    let letters: Vec<Vec<u16>> = (0..n).map(|v| emission(g, &cls, rg.vertices[v].sym.label)).collect();
    // entry and exit state of each kept vertex
    let mut entry = vec![usize::MAX; n];
    let mut exit = vec![usize::MAX; n];
    for v in 1..n {
        let sym = rg.vertices[v].sym;
        match letters[v].len() {
            0 => {}
            1 => {
                exit[v] = a.add_state(state_name('R', sym));
                entry[v] = exit[v];
            }
            _ => {
                entry[v] = a.add_state(state_name('L', sym));
                exit[v] = a.add_state(state_name('R', sym));
                a.add_edge(entry[v], Some(letters[v][1]), exit[v]);
            }
        }
    }

    let sources = std::iter::once(0).chain((1..n).filter(|&v| !letters[v].is_empty()));
    for v in sources {
        let from = if v == 0 { s } else { exit[v] };
        if rg.finals.contains(&v) {
            a.add_edge(from, None, f);
        }
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<usize> = rg.succ[v].iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            if !seen.insert(u) {
                continue;
            }
            if letters[u].is_empty() {
                if rg.finals.contains(&u) {
                    a.add_edge(from, None, f);
                }
                queue.extend(rg.succ[u].iter().copied());
            } else {
                a.add_edge(from, Some(letters[u][0]), entry[u]);
            }
        }
    }

    for &(i, t) in &g.extra_pairs {
        match t {
            Some(t) => {
                let x = a.add_state(format!("T{i}"));
                a.add_edge(s, Some(t), x);
                a.add_edge(x, None, f);
            }
            None => a.add_edge(s, None, f),
        }
    }
    Ok(TransitionDiagram { nfa: a, alphabet: g.base.alphabet.clone() })
}

/// A right-linear grammar: every rule is `X -> a Y` or `X -> λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularGrammar {
    pub nonterminals: Vec<String>,
    pub alphabet: Vec<String>,
    pub start: usize,
    /// `(lhs, Some((letter, rhs nonterminal)))` or `(lhs, None)` for λ.
    pub productions: Vec<(usize, Option<(u16, usize)>)>,
}

impl RegularGrammar {
    pub fn to_nfa(&self) -> Nfa<u16> {
        let mut a = Nfa { names: self.nonterminals.clone(), start: self.start, ..Nfa::new() };
        for &(x, r) in &self.productions {
            match r {
                Some((t, y)) => a.add_edge(x, Some(t), y),
                None => {
                    a.accepting.insert(x);
                }
            }
        }
        a
    }

    pub fn accepts(&self, w: &[u16]) -> bool {
        self.to_nfa().accepts(w)
    }

    pub fn to_cfg(&self) -> Cfg {
        Cfg {
            nonterminals: self.nonterminals.clone(),
            terminals: self.alphabet.clone(),
            start: self.start,
            productions: self
                .productions
                .iter()
                .map(|&(x, r)| Production { lhs: x, rhs: r.map_or(vec![], |(t, y)| vec![Symbol::T(t), Symbol::N(y)]) })
                .collect(),
        }
    }
}

impl fmt::Display for RegularGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_cfg().fmt(f)
    }
}

/// Removes λ-moves: `X -> a Y` whenever some state λ-reachable from `X`
/// reads `a` into `Y`, and `X -> λ` whenever an accepting state is
/// λ-reachable. Only states reachable from the start are kept.
pub fn to_regular_grammar(a: &TransitionDiagram) -> RegularGrammar {
    let nfa = &a.nfa;
    let mut lambda: Vec<Vec<usize>> = vec![Vec::new(); nfa.len()];
    let mut moves: Vec<Vec<(u16, usize)>> = vec![Vec::new(); nfa.len()];
    for &(x, l, y) in &nfa.edges {
        match l {
            None => lambda[x].push(y),
            Some(t) => moves[x].push((t, y)),
        }
    }
    let closure = |x: usize| {
        let mut seen = BTreeSet::from([x]);
        let mut stack = vec![x];
        while let Some(u) = stack.pop() {
            for &v in &lambda[u] {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen
    };
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut order = vec![nfa.start];
    index.insert(nfa.start, 0);
    let mut productions = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        let c = closure(x);
        let mut rules: BTreeSet<Option<(u16, usize)>> = BTreeSet::new();
        if c.iter().any(|u| nfa.accepting.contains(u)) {
            rules.insert(None);
        }
        for &u in &c {
            for &(t, y) in &moves[u] {
                let next = index.len();
                let yi = *index.entry(y).or_insert_with(|| {
                    order.push(y);
                    next
                });
                rules.insert(Some((t, yi)));
            }
        }
        productions.extend(rules.into_iter().map(|r| (i, r)));
        i += 1;
    }
    RegularGrammar {
        nonterminals: order.iter().map(|&x| nfa.names[x].clone()).collect(),
        alphabet: a.alphabet.clone(),
        start: 0,
        productions,
    }
}

/// The accepted words of length at most `max_len`.
pub fn enumerate_regular(a: &Nfa<u16>, max_len: usize) -> BTreeSet<Word> {
    a.enumerate(max_len)
}

/// Words of a set rendered over an alphabet, one per line.
pub fn format_words(alphabet: &[String], words: &BTreeSet<Word>) -> String {
    words.iter().map(|w| format_word(alphabet, w) + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{extend_grammar, parse_grammar, to_cnf, to_dyck_nf};
    use crate::refine::{refine, RefineOptions};

    fn pipeline(text: &str) -> (ExtendedDyckGrammar, TransitionDiagram) {
        let (d, _) = to_dyck_nf(&to_cnf(&parse_grammar(text).unwrap()).0).unwrap();
        let e = extend_grammar(&d);
        let rg = refine(&d, RefineOptions::default()).unwrap();
        let a = build_automaton_Ae(&e, &rg).unwrap();
        (e, a)
    }

    #[test]
    fn single_core_pair() {
        let (_, a) = pipeline("start: S\nS -> [1 ]1\n[1 -> 'a'\n]1 -> 'b'");
        assert_eq!(a.nfa.len(), 4);
        assert_eq!(enumerate_regular(&a.nfa, 5), BTreeSet::from([vec![0, 1]]));
        assert_eq!(a.pre_final().len(), 1);
        let g = to_regular_grammar(&a);
        assert_eq!(enumerate_regular(&g.to_nfa(), 5), BTreeSet::from([vec![0, 1]]));
        assert_eq!(g.to_string(), "start: S\nS -> 'a' L1q1\nL1q1 -> 'b' R1q1\nR1q1 -> ''\n");
    }

    #[test]
    fn extended_pairs_reach_final() {
        let (e, a) = pipeline("start: S\nS -> 'a' | ''");
        assert!(e.is_extended());
        assert_eq!(enumerate_regular(&a.nfa, 3), BTreeSet::from([vec![], vec![0]]));
    }

    #[test]
    fn json_is_stable() {
        let (_, a) = pipeline("start: S\nS -> [1 ]1\n[1 -> 'a'\n]1 -> 'b'");
        let j = a.to_json();
        assert_eq!(j["start"], "S");
        assert_eq!(j["accepting"], json!(["F"]));
        assert_eq!(j["triples"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn empty_automaton_gives_empty_grammar_language() {
        let a = TransitionDiagram { nfa: Nfa::new(), alphabet: vec![] };
        let mut a = a;
        a.nfa.add_state("S");
        let g = to_regular_grammar(&a);
        assert!(enumerate_regular(&g.to_nfa(), 4).is_empty());
    }
}
