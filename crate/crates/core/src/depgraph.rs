//! Dependency graphs, their path expressions, the extended dependency graph
//! and the regular language R.
//!
//! A dependency graph rooted at `S` or at a right bracket `]j` (pair `j`
//! rewritten only by pairs) follows a derivation from its root down to the
//! first core segment, i.e. the first left bracket of a pair whose both sides
//! rewrite to terminals. Its path expressions, mirrored, describe one whole
//! symmetric stretch of a trace-word; the extended graph stitches them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use crate::automaton::{graph_nfa, Nfa};
use crate::error::{Error, Result};
use crate::grammar::{BracketId, Class, DyckGrammar, DyckRhs, ExtendedDyckGrammar, Nt, PairClass};
use crate::regex::{path_regex, path_regex_bounded, Regex};

/// The graph vertex standing for pair `i` on the left side of a derivation.
fn node_of(cls: &PairClass, i: u32) -> Nt {
    if cls.of(i) == Class::N2l {
        Nt::B(BracketId::right(i))
    } else {
        Nt::B(BracketId::left(i))
    }
}

fn is_class(cls: &PairClass, x: Nt, left: bool, classes: &[Class]) -> bool {
    matches!(x, Nt::B(b) if b.is_left() == left && classes.contains(&cls.of(b.pair)))
}

pub(crate) fn is_n3_right(cls: &PairClass, x: Nt) -> bool {
    is_class(cls, x, false, &[Class::N3])
}

pub(crate) fn is_core(cls: &PairClass, x: Nt) -> bool {
    is_class(cls, x, true, &[Class::N1])
}

/// The image of a graph vertex under h_k: `S` vanishes, a core bracket and a
/// right bracket of a left-terminal pair expand to the whole pair.
pub fn h_k(cls: &PairClass, x: Nt) -> Vec<BracketId> {
    match x {
        Nt::S => vec![],
        Nt::B(b) => match (cls.of(b.pair), b.is_left()) {
            (Class::N1, true) | (Class::N2l, false) => vec![BracketId::left(b.pair), BracketId::right(b.pair)],
            _ => vec![b],
        },
    }
}

fn check_root(g: &DyckGrammar, cls: &PairClass, root: Nt) -> Result<()> {
    match root {
        Nt::S => Ok(()),
        Nt::B(b) if !b.is_left() && b.pair >= 1 && b.pair <= g.k && cls.of(b.pair) == Class::N3 => Ok(()),
        _ => Err(Error::InvalidRoot(root.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    pub root: Nt,
    /// `vertices[0]` is the root, the rest sorted.
    pub vertices: Vec<Nt>,
    /// Successor lists, sorted.
    pub succ: Vec<Vec<usize>>,
    /// Core vertices, sorted.
    pub finals: Vec<usize>,
}

impl DependencyGraph {
    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dependency {\n  rankdir=LR;\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let color = if i == 0 {
                ", color=red, fontcolor=red"
            } else if self.finals.contains(&i) {
                ", color=blue, fontcolor=blue"
            } else {
                ""
            };
            let _ = writeln!(s, "  n{i} [label=\"{v}\"{color}];");
        }
        for (u, vs) in self.succ.iter().enumerate() {
            for v in vs {
                let _ = writeln!(s, "  n{u} -> n{v};");
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn build_dependency_graph(g: &DyckGrammar, cls: &PairClass, root: Nt) -> Result<DependencyGraph> {
    check_root(g, cls, root)?;
    let out = |x: Nt| -> Vec<Nt> {
        g.rhs_of(x)
            .filter_map(|r| match r {
                DyckRhs::Pair(i) => Some(node_of(cls, i)),
                _ => None,
            })
            .collect()
    };
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::new();
    while let Some(x) = queue.pop_front() {
        if !seen.insert(x) {
            continue;
        }
        for y in out(x) {
            edges.push((x, y));
            queue.push_back(y);
        }
    }
    seen.remove(&root);
    let mut vertices = vec![root];
    vertices.extend(seen);
    let index: BTreeMap<Nt, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut succ = vec![Vec::new(); vertices.len()];
    for (x, y) in edges {
        let (a, b) = (index[&x], index[&y]);
        if !succ[a].contains(&b) {
            succ[a].push(b);
        }
    }
    succ.iter_mut().for_each(|s| s.sort());
    let finals = (0..vertices.len()).filter(|&i| is_core(cls, vertices[i])).collect();
    Ok(DependencyGraph { root, vertices, succ, finals })
}

/// Decomposition steps allowed per path expression before a dependency
/// graph counts as too dense.
pub const PATH_BUDGET: usize = 20_000;

/// One expression per core vertex and path class, read off by loop
/// decomposition; every expression starts with the root.
pub fn extract_left_regexes(dg: &DependencyGraph) -> Vec<Regex<Nt>> {
    try_extract_left_regexes(dg, usize::MAX).expect("unbounded")
}

/// [`extract_left_regexes`] failing once a path expression needs more than
/// `budget` decomposition steps.
pub fn try_extract_left_regexes(dg: &DependencyGraph, budget: usize) -> Result<Vec<Regex<Nt>>> {
    let mut out = Vec::new();
    for &f in &dg.finals {
        let r = path_regex_bounded(&dg.succ, 0, &[f], budget)
            .ok_or_else(|| Error::Budget { what: format!("path expression of {}", dg.root), limit: budget })?
            .map(&mut |&v| Regex::Sym(dg.vertices[v]));
        for c in r.distribute_top() {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// `r` followed by its mirror image: reversed, left brackets of pairs whose
/// right side is not a plain left-terminal closer turned into their right
/// partners, everything else erased.
pub fn mirror_extend(r: &Regex<Nt>, cls: &PairClass) -> Regex<Nt> {
    let m = r.reverse().map(&mut |&x| match x {
        Nt::B(b) if is_class(cls, x, true, &[Class::N2r, Class::N3]) => Regex::Sym(Nt::B(BracketId::right(b.pair))),
        _ => Regex::Epsilon,
    });
    Regex::concat(vec![r.clone(), m])
}

/// The roots: `S`, then `]j` for each pair rewritten only by pairs.
pub fn roots(cls: &PairClass) -> Vec<Nt> {
    let mut v = vec![Nt::S];
    v.extend(cls.pairs_in(Class::N3).into_iter().map(|j| Nt::B(BracketId::right(j))));
    v
}

/// Mirrored expression sets for every root.
pub fn regex_sets(g: &DyckGrammar, cls: &PairClass) -> Result<BTreeMap<Nt, Vec<Regex<Nt>>>> {
    let mut out = BTreeMap::new();
    for root in roots(cls) {
        let dg = build_dependency_graph(g, cls, root)?;
        let set = try_extract_left_regexes(&dg, PATH_BUDGET)?.iter().map(|r| mirror_extend(r, cls)).collect();
        out.insert(root, set);
    }
    Ok(out)
}

/// The justification of an extended-graph edge or final vertex: item number
/// and sub-case (0 when the item has none).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Item {
    pub number: u8,
    pub sub: u8,
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sub {
            0 => write!(f, "{}", self.number),
            s => write!(f, "{}.{}", self.number, ["i", "ii", "iii"][s as usize - 1]),
        }
    }
}

fn item(number: u8, sub: u8) -> Item {
    Item { number, sub }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedGraph {
    /// `vertices[0]` is `S`.
    pub vertices: Vec<Nt>,
    pub succ: Vec<Vec<usize>>,
    pub edges: BTreeMap<(usize, usize), BTreeSet<Item>>,
    pub finals: BTreeMap<usize, BTreeSet<Item>>,
}

impl ExtendedGraph {
    pub fn index_of(&self, x: Nt) -> Option<usize> {
        self.vertices.iter().position(|&v| v == x)
    }

    pub fn has_edge(&self, x: Nt, y: Nt) -> bool {
        match (self.index_of(x), self.index_of(y)) {
            (Some(a), Some(b)) => self.edges.contains_key(&(a, b)),
            _ => false,
        }
    }

    pub fn items_of(&self, x: Nt, y: Nt) -> BTreeSet<Item> {
        match (self.index_of(x), self.index_of(y)) {
            (Some(a), Some(b)) => self.edges.get(&(a, b)).cloned().unwrap_or_default(),
            _ => BTreeSet::new(),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph extended {\n  rankdir=LR;\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let color = if i == 0 {
                ", color=red, fontcolor=red"
            } else if self.finals.contains_key(&i) {
                ", color=blue, fontcolor=blue"
            } else {
                ""
            };
            let _ = writeln!(s, "  n{i} [label=\"{v}\"{color}];");
        }
        for ((u, v), items) in &self.edges {
            let mirror = items.iter().any(|it| it.number == 8 || it.number == 9);
            let label: Vec<String> = items.iter().map(|i| i.to_string()).collect();
            let color = if mirror { ", color=orange" } else { "" };
            let _ = writeln!(s, "  n{u} -> n{v} [label=\"{}\"{color}];", label.join(","));
        }
        s.push_str("}\n");
        s
    }
}

/// Symbols an expression can end with.
fn last_symbols(r: &Regex<Nt>) -> BTreeSet<Nt> {
    let p = r.positions();
    p.last.iter().map(|&i| p.syms[i]).collect()
}

pub fn build_extended_graph(
    g: &DyckGrammar,
    cls: &PairClass,
    res: &BTreeMap<Nt, Vec<Regex<Nt>>>,
) -> Result<ExtendedGraph> {
    let _ = g;
    let set_of = |x: Nt| -> Result<&Vec<Regex<Nt>>> {
        res.get(&x).ok_or(match x {
            Nt::B(b) => Error::MissingRegexSet(b.pair),
            Nt::S => Error::MissingRegexSet(0),
        })
    };
    // what a subtree rooted at an N3 right bracket can end with, through
    // chains of further N3 subtrees; the depth tells direct from chained
    let mut ends_memo: BTreeMap<u32, BTreeMap<Nt, usize>> = BTreeMap::new();
    let mut ends_star = |j: u32| -> Result<BTreeMap<Nt, usize>> {
        if let Some(m) = ends_memo.get(&j) {
            return Ok(m.clone());
        }
        let mut out: BTreeMap<Nt, usize> = BTreeMap::new();
        let mut seen = BTreeSet::from([j]);
        let mut queue = VecDeque::from([(j, 0usize)]);
        while let Some((k, depth)) = queue.pop_front() {
            for r in set_of(Nt::B(BracketId::right(k)))? {
                for e in last_symbols(r) {
                    match e {
                        Nt::B(b) if is_n3_right(cls, e) => {
                            if seen.insert(b.pair) {
                                queue.push_back((b.pair, depth + 1));
                            }
                        }
                        _ => {
                            let d = out.entry(e).or_insert(depth);
                            *d = (*d).min(depth);
                        }
                    }
                }
            }
        }
        ends_memo.insert(j, out.clone());
        Ok(out)
    };
    let n2r_n3 = [Class::N2r, Class::N3];
    let direct_item = |x: Nt, y: Nt| -> Item {
        let y_core = is_core(cls, y);
        if is_class(cls, x, false, &[Class::N2l]) {
            if is_class(cls, y, false, &[Class::N2l]) {
                item(2, 0)
            } else if y_core {
                item(5, 0)
            } else {
                item(3, 0)
            }
        } else if is_class(cls, x, true, &n2r_n3) {
            if is_class(cls, y, false, &[Class::N2l]) {
                item(3, 0)
            } else if y_core {
                item(5, 0)
            } else {
                item(4, 0)
            }
        } else if is_core(cls, x) {
            item(9, 1)
        } else {
            item(8, 1)
        }
    };

    let mut raw: Vec<(Nt, Nt, Item)> = Vec::new();
    let mut raw_finals: Vec<(Nt, Item)> = Vec::new();
    for (&root, regs) in res {
        for r in regs {
            let pos = r.positions();
            for (p, fs) in pos.follow.iter().enumerate() {
                let x = pos.syms[p];
                for &q in fs {
                    let y = pos.syms[q];
                    if p == 0 && x == root {
                        let it = match root {
                            Nt::S => item(1, 0),
                            _ if is_core(cls, y) => item(6, 0),
                            _ => item(7, 0),
                        };
                        raw.push((x, y, it));
                    } else if let (true, Nt::B(b)) = (is_n3_right(cls, x), x) {
                        for (e, depth) in ends_star(b.pair)? {
                            let number = if is_core(cls, e) { 9 } else { 8 };
                            raw.push((e, y, item(number, if depth == 0 { 2 } else { 3 })));
                        }
                    } else {
                        raw.push((x, y, direct_item(x, y)));
                    }
                }
            }
            if root == Nt::S {
                for &l in &pos.last {
                    let x = pos.syms[l];
                    if let (true, Nt::B(b)) = (is_n3_right(cls, x), x) {
                        for (e, depth) in ends_star(b.pair)? {
                            let number = if is_core(cls, e) { 10 } else { 11 };
                            raw_finals.push((e, item(number, if depth == 0 { 2 } else { 3 })));
                        }
                    } else {
                        raw_finals.push((x, item(if is_core(cls, x) { 10 } else { 11 }, 1)));
                    }
                }
            }
        }
    }
    let mut labels: BTreeSet<Nt> = BTreeSet::new();
    for &(x, y, _) in &raw {
        labels.insert(x);
        labels.insert(y);
    }
    labels.extend(raw_finals.iter().map(|f| f.0));
    labels.remove(&Nt::S);
    let mut vertices = vec![Nt::S];
    vertices.extend(labels);
    let index: BTreeMap<Nt, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges: BTreeMap<(usize, usize), BTreeSet<Item>> = BTreeMap::new();
    for (x, y, it) in raw {
        edges.entry((index[&x], index[&y])).or_default().insert(it);
    }
    let mut finals: BTreeMap<usize, BTreeSet<Item>> = BTreeMap::new();
    for (x, it) in raw_finals {
        finals.entry(index[&x]).or_default().insert(it);
    }
    let mut succ = vec![Vec::new(); vertices.len()];
    for &(u, v) in edges.keys() {
        succ[u].push(v);
    }
    Ok(ExtendedGraph { vertices, succ, edges, finals })
}

/// The extended-pair words `[t ]t` as an expression.
pub(crate) fn lp_regex(g: &ExtendedDyckGrammar) -> Regex<BracketId> {
    Regex::union(g.lp_words().into_iter().map(|w| Regex::concat(w.into_iter().map(Regex::Sym).collect())).collect())
}

/// R: the h_k image of all terminal paths of the extended graph, plus the
/// extended-pair words.
#[allow(non_snake_case)]
pub fn regular_language_R(g: &ExtendedDyckGrammar, eg: &ExtendedGraph) -> Regex<BracketId> {
    let cls = crate::grammar::classify_pairs(&g.base);
    let finals: Vec<usize> = eg.finals.keys().copied().collect();
    let paths = path_regex(&eg.succ, 0, &finals);
    let r = paths.map(&mut |&v| Regex::concat(h_k(&cls, eg.vertices[v]).into_iter().map(Regex::Sym).collect()));
    Regex::union(vec![r, lp_regex(g)])
}

/// An automaton for R read directly off the extended graph.
pub fn r_automaton(g: &ExtendedDyckGrammar, eg: &ExtendedGraph) -> Nfa<BracketId> {
    let cls = crate::grammar::classify_pairs(&g.base);
    let names = eg.vertices.iter().map(|v| v.to_string()).collect();
    let finals: Vec<usize> = eg.finals.keys().copied().collect();
    let mut a = graph_nfa(names, &eg.succ, 0, &finals, &|v| h_k(&cls, eg.vertices[v]));
    add_lp_paths(&mut a, g);
    a
}

pub(crate) fn add_lp_paths(a: &mut Nfa<BracketId>, g: &ExtendedDyckGrammar) {
    if g.is_extended() {
        let f = a.add_state("lp");
        a.accepting.insert(f);
        for w in g.lp_words() {
            a.add_word_path(a.start, &w, f);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{classify_pairs, parse_grammar, to_cnf, to_dyck_nf};
    use crate::regex::{lex_bracket_token, parse_regex};

    fn dyck(text: &str) -> (DyckGrammar, PairClass) {
        let (d, _) = to_dyck_nf(&to_cnf(&parse_grammar(text).unwrap()).0).unwrap();
        let c = classify_pairs(&d);
        (d, c)
    }

    fn re(s: &str) -> Regex<Nt> {
        parse_regex(s, &|t: &str| {
            let (tok, n) = lex_bracket_token(t)?;
            let nt = if tok == "S" { Nt::S } else { Nt::B(crate::grammar::parse_bracket(&tok).ok()?) };
            Some((nt, n))
        })
        .unwrap()
    }

    #[test]
    fn single_core_pair() {
        let (g, c) = dyck("start: S\nS -> [1 ]1\n[1 -> 'a'\n]1 -> 'b'");
        let dg = build_dependency_graph(&g, &c, Nt::S).unwrap();
        assert_eq!(dg.edge_count(), 1);
        assert_eq!(dg.finals, vec![1]);
        assert_eq!(extract_left_regexes(&dg), vec![re("S [1")]);
    }

    #[test]
    fn rejects_bad_root() {
        let (g, c) = dyck("start: S\nS -> [1 ]1\n[1 -> 'a'\n]1 -> 'b'");
        assert!(matches!(build_dependency_graph(&g, &c, Nt::B(BracketId::right(1))), Err(Error::InvalidRoot(_))));
    }

    #[test]
    fn mirror_of_plain_regex_is_empty() {
        let (_, c) = dyck("start: S\nS -> [1 ]1\n[1 -> 'a'\n]1 -> 'b'");
        let r = re("S [1");
        assert_eq!(mirror_extend(&r, &c), r);
    }

    #[test]
    fn item_display() {
        assert_eq!(item(8, 3).to_string(), "8.iii");
        assert_eq!(item(1, 0).to_string(), "1");
    }

    #[test]
    fn extraction_budget_is_reported() {
        let (g, c) = dyck("start: S\nS -> [1 ]1\n[1 -> 'a'\n]1 -> [2 ]2 | 'b'\n[2 -> 'a'\n]2 -> [1 ]1 | 'c'");
        let dg = build_dependency_graph(&g, &c, Nt::S).unwrap();
        assert!(try_extract_left_regexes(&dg, usize::MAX).is_ok());
        assert!(matches!(try_extract_left_regexes(&dg, 1), Err(Error::Budget { limit: 1, .. })));
    }
}
