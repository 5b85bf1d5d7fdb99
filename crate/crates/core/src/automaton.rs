//! Nondeterministic automata with λ-moves, and bounded enumeration.
//!
//! Enumeration runs a lazily built subset automaton depth first and prunes
//! any branch that cannot reach acceptance within the remaining length.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use crate::regex::Regex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa<S> {
    pub names: Vec<String>,
    pub start: usize,
    pub accepting: BTreeSet<usize>,
    /// `(from, label, to)`, `None` being λ.
    pub edges: Vec<(usize, Option<S>, usize)>,
}

impl<S: Clone + Ord + Hash> Default for Nfa<S> {
    fn default() -> Self {
        Nfa { names: Vec::new(), start: 0, accepting: BTreeSet::new(), edges: Vec::new() }
    }
}

impl<S: Clone + Ord + Hash> Nfa<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, label: Option<S>, to: usize) {
        let e = (from, label, to);
        if !self.edges.contains(&e) {
            self.edges.push(e);
        }
    }

    /// Adds a path spelling `word` from `from` to `to` through fresh states.
    pub fn add_word_path(&mut self, from: usize, word: &[S], to: usize) {
        if word.is_empty() {
            self.add_edge(from, None, to);
            return;
        }
        let mut cur = from;
        for (i, s) in word.iter().enumerate() {
            let next = if i + 1 == word.len() {
                to
            } else {
                let name = format!("{}~{}", self.names[cur], i + 1);
                self.add_state(name)
            };
            self.add_edge(cur, Some(s.clone()), next);
            cur = next;
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Position automaton of an expression; state 0 is initial, state `p+1`
    /// is position `p`.
    pub fn from_regex(r: &Regex<S>) -> Self {
        let pos = r.positions();
        let mut a = Nfa::new();
        a.add_state("init");
        for p in 0..pos.syms.len() {
            a.add_state(format!("p{p}"));
        }
        for &f in &pos.first {
            a.add_edge(0, Some(pos.syms[f].clone()), f + 1);
        }
        for (p, fs) in pos.follow.iter().enumerate() {
            for &q in fs {
                a.add_edge(p + 1, Some(pos.syms[q].clone()), q + 1);
            }
        }
        if pos.nullable {
            a.accepting.insert(0);
        }
        a.accepting.extend(pos.last.iter().map(|&p| p + 1));
        a
    }

    /// Alphabet in use, sorted.
    pub fn alphabet(&self) -> Vec<S> {
        let set: BTreeSet<S> = self.edges.iter().filter_map(|(_, s, _)| s.clone()).collect();
        set.into_iter().collect()
    }

    fn adjacency(&self) -> Vec<Vec<(Option<S>, usize)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (f, s, t) in &self.edges {
            adj[*f].push((s.clone(), *t));
        }
        adj
    }

    pub fn accepts(&self, w: &[S]) -> bool {
        if self.is_empty() {
            return false;
        }
        let mut d = Dfa::new(self);
        let mut cur = d.initial();
        for s in w {
            match d.step(cur, s) {
                Some(n) => cur = n,
                None => return false,
            }
        }
        d.states[cur].accepting
    }

    /// All accepted words of length at most `max_len`.
    pub fn enumerate(&self, max_len: usize) -> BTreeSet<Vec<S>> {
        let mut out = BTreeSet::new();
        self.enumerate_with(max_len, &mut |_| true, &mut |w| {
            out.insert(w.to_vec());
        });
        out
    }

    /// Depth-first enumeration; `keep` may cut a prefix off (it sees each
    /// prefix once), `emit` receives accepted words.
    pub fn enumerate_with(&self, max_len: usize, keep: &mut dyn FnMut(&[S]) -> bool, emit: &mut dyn FnMut(&[S])) {
        if self.is_empty() {
            return;
        }
        let mut d = Dfa::new(self);
        let init = d.initial();
        let mut word = Vec::new();
        fn go<S: Clone + Ord + Hash>(
            d: &mut Dfa<'_, S>,
            st: usize,
            word: &mut Vec<S>,
            max: usize,
            keep: &mut dyn FnMut(&[S]) -> bool,
            emit: &mut dyn FnMut(&[S]),
        ) {
            if d.states[st].dist > max - word.len() {
                return;
            }
            if d.states[st].accepting {
                emit(word);
            }
            if word.len() == max {
                return;
            }
            for (s, next) in d.moves(st) {
                word.push(s);
                if keep(word) {
                    go(d, next, word, max, keep, emit);
                }
                word.pop();
            }
        }
        go(&mut d, init, &mut word, max_len, keep, emit);
    }

    /// Shortest word accepted here but not by `other`, or `None` when the
    /// language is included in `other`'s. Unbounded: the search runs over
    /// pairs of subset states, so it always terminates.
    pub fn shortest_outside(&self, other: &Nfa<S>) -> Option<Vec<S>> {
        if self.is_empty() {
            return None;
        }
        let mut a = Dfa::new(self);
        let mut b = (!other.is_empty()).then(|| Dfa::new(other));
        let start = (a.initial(), b.as_mut().map(|d| d.initial()));
        // `None` on the right means `other` can no longer accept
        type Pair = (usize, Option<usize>);
        let mut parent: HashMap<Pair, Option<(Pair, S)>> = HashMap::from([(start, None)]);
        let mut queue = VecDeque::from([start]);
        while let Some(cur @ (x, y)) = queue.pop_front() {
            let inside = y.is_some_and(|y| b.as_ref().unwrap().states[y].accepting);
            if a.states[x].accepting && !inside {
                let mut word = Vec::new();
                let mut at = cur;
                while let Some((prev, s)) = parent[&at].clone() {
                    word.push(s);
                    at = prev;
                }
                word.reverse();
                return Some(word);
            }
            for (s, nx) in a.moves(x) {
                let ny = match (y, b.as_mut()) {
                    (Some(y), Some(d)) => d.step(y, &s),
                    _ => None,
                };
                let next = (nx, ny);
                if let Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some((cur, s)));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// Number of accepted words of each length `0..=max_len`.
    pub fn count_by_length(&self, max_len: usize) -> Vec<u128> {
        let mut counts = vec![0u128; max_len + 1];
        if self.is_empty() {
            return counts;
        }
        let mut d = Dfa::new(self);
        let mut layer: HashMap<usize, u128> = HashMap::from([(d.initial(), 1)]);
        for (n, count) in counts.iter_mut().enumerate() {
            let mut next: HashMap<usize, u128> = HashMap::new();
            for (&st, &c) in &layer {
                if d.states[st].accepting {
                    *count += c;
                }
                if n < max_len && d.states[st].dist != usize::MAX {
                    for (_, t) in d.moves(st) {
                        *next.entry(t).or_default() += c;
                    }
                }
            }
            layer = next;
        }
        counts
    }
}

struct DState<S> {
    set: Vec<usize>,
    accepting: bool,
    /// Fewest letters needed to reach acceptance.
    dist: usize,
    moves: Option<Vec<(S, usize)>>,
}

/// Subset automaton built on demand.
struct Dfa<'a, S> {
    nfa: &'a Nfa<S>,
    adj: Vec<Vec<(Option<S>, usize)>>,
    dist: Vec<usize>,
    states: Vec<DState<S>>,
    index: HashMap<Vec<usize>, usize>,
}

impl<'a, S: Clone + Ord + Hash> Dfa<'a, S> {
    fn new(nfa: &'a Nfa<S>) -> Self {
        let adj = nfa.adjacency();
        // reverse 0-1 BFS for distance to acceptance
        let mut radj = vec![Vec::new(); nfa.len()];
        for (f, s, t) in &nfa.edges {
            radj[*t].push((*f, s.is_some() as usize));
        }
        let mut dist = vec![usize::MAX; nfa.len()];
        let mut dq = VecDeque::new();
        for &a in &nfa.accepting {
            dist[a] = 0;
            dq.push_back(a);
        }
        while let Some(v) = dq.pop_front() {
            for &(u, w) in &radj[v] {
                let nd = dist[v] + w;
                if nd < dist[u] {
                    dist[u] = nd;
                    if w == 0 {
                        dq.push_front(u);
                    } else {
                        dq.push_back(u);
                    }
                }
            }
        }
        Dfa { nfa, adj, dist, states: Vec::new(), index: HashMap::new() }
    }

    fn closure(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = seeds.into_iter().collect();
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                for (s, t) in &self.adj[v] {
                    if s.is_none() && !seen.contains(t) {
                        stack.push(*t);
                    }
                }
            }
        }
        // states that cannot reach acceptance are dropped
        seen.into_iter().filter(|&v| self.dist[v] != usize::MAX).collect()
    }

    fn intern(&mut self, set: Vec<usize>) -> usize {
        if let Some(&i) = self.index.get(&set) {
            return i;
        }
        let accepting = set.iter().any(|v| self.nfa.accepting.contains(v));
        let dist = set.iter().map(|&v| self.dist[v]).min().unwrap_or(usize::MAX);
        self.states.push(DState { set: set.clone(), accepting, dist, moves: None });
        self.index.insert(set, self.states.len() - 1);
        self.states.len() - 1
    }

    fn initial(&mut self) -> usize {
        let set = self.closure([self.nfa.start]);
        self.intern(set)
    }

    fn moves(&mut self, st: usize) -> Vec<(S, usize)> {
        if let Some(m) = &self.states[st].moves {
            return m.clone();
        }
        let mut by_sym: BTreeMap<S, BTreeSet<usize>> = BTreeMap::new();
        for &v in &self.states[st].set {
            for (s, t) in &self.adj[v] {
                if let Some(s) = s {
                    by_sym.entry(s.clone()).or_default().insert(*t);
                }
            }
        }
        let mut out = Vec::with_capacity(by_sym.len());
        for (s, targets) in by_sym {
            let set = self.closure(targets);
            if !set.is_empty() {
                let id = self.intern(set);
                out.push((s, id));
            }
        }
        self.states[st].moves = Some(out.clone());
        out
    }

    fn step(&mut self, st: usize, s: &S) -> Option<usize> {
        self.moves(st).into_iter().find(|(x, _)| x == s).map(|(_, t)| t)
    }
}

/// The automaton of the paths of a digraph: entering vertex `v` spells
/// `emit(v)`. The start vertex spells nothing.
pub fn graph_nfa<S: Clone + Ord + Hash>(
    names: Vec<String>,
    succ: &[Vec<usize>],
    start: usize,
    finals: &[usize],
    emit: &dyn Fn(usize) -> Vec<S>,
) -> Nfa<S> {
    let mut a = Nfa { names, start, accepting: finals.iter().copied().collect(), edges: Vec::new() };
    let spelled: Vec<Vec<S>> = (0..succ.len()).map(emit).collect();
    for (u, vs) in succ.iter().enumerate() {
        for &v in vs {
            a.add_word_path(u, &spelled[v], v);
        }
    }
    a
}

/// Words of a regular expression up to a length bound, through its position
/// automaton.
pub fn enumerate_regex<S: Clone + Ord + Hash>(r: &Regex<S>, max_len: usize) -> BTreeSet<Vec<S>> {
    Nfa::from_regex(r).enumerate(max_len)
}
