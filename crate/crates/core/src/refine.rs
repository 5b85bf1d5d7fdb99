//! Plus-height expressions, labeled digraphs and the refined extended graph
//! whose terminal paths give R_m.
//!
//! Every dependency-graph expression is forked into `+`-only forms, labeled
//! with a number `q` and turned into a small digraph. The refined graph glues
//! copies of those digraphs together: a right bracket `]j` of a pair rewritten
//! only by pairs is a dummy vertex whose subtree is spelled by some digraph
//! rooted at `]j`, after which the walk resumes where the dummy pointed.
//! Copies are keyed by that resume point, which keeps the left and right
//! halves of each expression matched.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use crate::automaton::{graph_nfa, Nfa};
use crate::depgraph::{
    add_lp_paths, build_dependency_graph, h_k, is_core, is_n3_right, lp_regex, mirror_extend, roots,
    try_extract_left_regexes, PATH_BUDGET,
};
use crate::error::{Error, Result};
use crate::grammar::{classify_pairs, BracketId, Class, DyckGrammar, ExtendedDyckGrammar, Nt, PairClass};
use crate::regex::{path_regex, Regex};

/// Environment variable overriding the copy cap.
pub const MAX_ITER_ENV: &str = "DYCKNF_MAX_ITER";

/// A bracket of a labeled expression: `q` is the expression label (0 for the
/// unlabeled root) and `mark` tells repeated occurrences apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RSym {
    pub label: Nt,
    pub q: u32,
    pub mark: u32,
}

impl fmt::Display for RSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if self.q > 0 {
            write!(f, "^{}", self.q)?;
        }
        for _ in 0..self.mark {
            f.write_str("'")?;
        }
        Ok(())
    }
}

pub type PlusRegex = Regex<RSym>;

/// Forks every star of `r` into a `+` and a λ branch.
pub fn plus_expand(r: &Regex<Nt>) -> Vec<Regex<Nt>> {
    r.plus_expand()
}

/// Upper bound on the number of plus-height expressions per root.
pub const EXPRESSION_LIMIT: usize = 256;

/// The mirrored plus-height expressions of every root, `S` first and then
/// `]j` by increasing `j`.
pub fn plus_regex_sets(g: &DyckGrammar, cls: &PairClass) -> Result<BTreeMap<Nt, Vec<Regex<Nt>>>> {
    let mut out = BTreeMap::new();
    for root in roots(cls) {
        let dg = build_dependency_graph(g, cls, root)?;
        let mut set: Vec<Regex<Nt>> = Vec::new();
        for left in try_extract_left_regexes(&dg, PATH_BUDGET)? {
            if left.normalize().plus_expand_bound() > EXPRESSION_LIMIT {
                let what = format!("number of plus-height expressions of {root}");
                return Err(Error::Budget { what, limit: EXPRESSION_LIMIT });
            }
            for p in plus_expand(&left) {
                let r = mirror_extend(&p, cls);
                if !set.contains(&r) {
                    set.push(r);
                }
                if set.len() > EXPRESSION_LIMIT {
                    let what = format!("number of plus-height expressions of {root}");
                    return Err(Error::Budget { what, limit: EXPRESSION_LIMIT });
                }
            }
        }
        out.insert(root, set);
    }
    Ok(out)
}

/// The digraph of one labeled expression. Position 0 is the root; the other
/// positions are the symbol occurrences of the expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDigraph {
    pub q: u32,
    pub root: Nt,
    pub regex: PlusRegex,
    pub syms: Vec<RSym>,
    pub follow: Vec<Vec<usize>>,
    pub siblings: Vec<usize>,
    pub finals: Vec<usize>,
    /// Positions of core brackets.
    pub core: Vec<usize>,
}

impl LabeledDigraph {
    /// Whether every final vertex closes the walk, i.e. is a core bracket or
    /// the right bracket of a right-terminal pair.
    pub fn is_terminal(&self, cls: &PairClass) -> bool {
        self.finals.iter().all(|&f| !is_n3_right(cls, self.syms[f].label))
    }

    pub fn to_dot(&self, cls: &PairClass) -> String {
        let mut s = format!("digraph g{} {{\n  rankdir=LR;\n", self.q);
        for (i, x) in self.syms.iter().enumerate() {
            let color = if i == 0 {
                ", color=red, fontcolor=red"
            } else if self.finals.contains(&i) {
                ", color=blue, fontcolor=blue"
            } else if is_core(cls, x.label) {
                ", color=purple, fontcolor=purple"
            } else {
                ""
            };
            let _ = writeln!(s, "  n{i} [label=\"{x}\"{color}];");
        }
        for (u, vs) in self.follow.iter().enumerate() {
            for v in vs {
                let _ = writeln!(s, "  n{u} -> n{v};");
            }
        }
        s.push_str("}\n");
        s
    }
}

fn digraph_of(q: u32, root: Nt, r: &Regex<Nt>, cls: &PairClass) -> LabeledDigraph {
    let mut seen: HashMap<Nt, u32> = HashMap::new();
    let mut first = true;
    let regex = r.map(&mut |&x| {
        if first {
            first = false;
            return Regex::Sym(RSym { label: x, q: 0, mark: 0 });
        }
        let n = seen.entry(x).or_insert(0);
        let s = RSym { label: x, q, mark: *n };
        *n += 1;
        Regex::Sym(s)
    });
    let pos = regex.positions();
    let follow: Vec<Vec<usize>> = pos.follow.iter().map(|f| f.iter().copied().collect()).collect();
    let siblings = follow[0].clone();
    let finals = pos.last.iter().copied().collect();
    let core = (0..pos.syms.len()).filter(|&i| is_core(cls, pos.syms[i].label)).collect();
    LabeledDigraph { q, root, regex, syms: pos.syms, follow, siblings, finals, core }
}

/// Labels the expressions consecutively, root by root, and builds one digraph
/// per expression.
pub fn label_and_digraph(pe: &BTreeMap<Nt, Vec<Regex<Nt>>>, cls: &PairClass) -> Vec<LabeledDigraph> {
    let mut out = Vec::new();
    for (&root, set) in pe {
        for r in set {
            let q = out.len() as u32 + 1;
            out.push(digraph_of(q, root, r, cls));
        }
    }
    out
}

/// Why a copy of a digraph carries a fresh label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relabel {
    /// A further copy hung under a dummy vertex with its own resume point.
    I1,
    /// A copy hung under a pop vertex, whose exit ends the walk.
    I2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyInfo {
    /// Index into [`RefinedGraph::digraphs`].
    pub digraph: usize,
    pub label: u32,
    pub parent: Option<usize>,
    pub relabel: Option<Relabel>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Stable,
    Glue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RVertex {
    /// `None` for `S`.
    pub copy: Option<usize>,
    pub pos: usize,
    pub sym: RSym,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedGraph {
    pub digraphs: Vec<LabeledDigraph>,
    pub copies: Vec<CopyInfo>,
    /// `vertices[0]` is `S`.
    pub vertices: Vec<RVertex>,
    pub succ: Vec<Vec<usize>>,
    pub edges: BTreeMap<(usize, usize), EdgeKind>,
    pub finals: BTreeSet<usize>,
}

impl RefinedGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Dummy vertices: right brackets of pairs rewritten only by pairs.
    pub fn dummies(&self, cls: &PairClass) -> Vec<usize> {
        (1..self.vertices.len()).filter(|&v| is_n3_right(cls, self.vertices[v].sym.label)).collect()
    }

    /// Dummy vertices left without any successor.
    pub fn dangling(&self, cls: &PairClass) -> Vec<usize> {
        self.dummies(cls).into_iter().filter(|&v| self.succ[v].is_empty()).collect()
    }

    pub fn is_complete(&self, cls: &PairClass) -> bool {
        self.dangling(cls).is_empty()
    }

    /// Whether `u -> v` lies in the mirror half of one copy.
    fn is_mirror(&self, u: usize, v: usize) -> bool {
        let (a, b) = (self.vertices[u], self.vertices[v]);
        match (a.copy, b.copy) {
            (Some(c), Some(d)) if c == d => {
                let core = self.digraphs[self.copies[c].digraph].core.first().copied().unwrap_or(usize::MAX);
                a.pos >= core && b.pos > core
            }
            _ => false,
        }
    }

    pub fn vertex_name(&self, v: usize) -> String {
        self.vertices[v].sym.to_string()
    }

    pub fn to_dot(&self, cls: &PairClass) -> String {
        let mut s = String::from("digraph refined {\n  rankdir=LR;\n");
        for v in 0..self.vertices.len() {
            let x = self.vertices[v].sym.label;
            let color = if v == 0 {
                ", color=red, fontcolor=red"
            } else if self.finals.contains(&v) {
                ", color=green, fontcolor=green"
            } else if is_n3_right(cls, x) {
                ", color=blue, fontcolor=blue"
            } else if is_core(cls, x) {
                ", color=purple, fontcolor=purple"
            } else {
                ""
            };
            let _ = writeln!(s, "  n{v} [label=\"{}\"{color}];", self.vertex_name(v));
        }
        for (&(u, v), &k) in &self.edges {
            let color = match k {
                EdgeKind::Glue => " [color=green]",
                EdgeKind::Stable if self.is_mirror(u, v) => " [color=orange]",
                EdgeKind::Stable => "",
            };
            let _ = writeln!(s, "  n{u} -> n{v}{color};");
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefineOptions {
    /// Give copies hung under pop vertices their own label.
    pub i2: bool,
    /// Cap on the number of copies; `None` means the default bound.
    pub max_iter: Option<usize>,
    /// How many copies of digraphs with the same root may nest along one
    /// chain. Deeper requests reuse the copies hung beside the nearest such
    /// ancestor, which keeps the graph a superset and bounds its size.
    pub nesting: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions { i2: true, max_iter: None, nesting: 2 }
    }
}

impl RefineOptions {
    /// Defaults, with the cap taken from `DYCKNF_MAX_ITER` when set.
    pub fn from_env() -> Self {
        let max_iter = std::env::var(MAX_ITER_ENV).ok().and_then(|v| v.trim().parse().ok());
        RefineOptions { max_iter, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Cont {
    Final,
    At(usize),
}

struct Builder<'a> {
    cls: &'a PairClass,
    digraphs: &'a [LabeledDigraph],
    copies: Vec<CopyInfo>,
    vertices: Vec<RVertex>,
    edges: BTreeMap<(usize, usize), EdgeKind>,
    finals: BTreeSet<usize>,
    /// First vertex of each copy; the copy's position `p` is `base + p - 1`.
    base: Vec<usize>,
    keyed: HashMap<(usize, Cont), usize>,
    /// Resume point each copy was created for.
    conts: Vec<Cont>,
    used: Vec<bool>,
    next_label: u32,
    queue: VecDeque<(usize, Cont)>,
    done: BTreeSet<(usize, Cont)>,
}

impl Builder<'_> {
    fn v(&self, copy: usize, pos: usize) -> usize {
        self.base[copy] + pos - 1
    }

    fn chain(&self, copy: Option<usize>) -> Vec<usize> {
        let mut out = Vec::new();
        let mut c = copy;
        while let Some(x) = c {
            out.push(x);
            c = self.copies[x].parent;
        }
        out
    }

    fn chain_text(&self, copy: Option<usize>) -> String {
        let labels: Vec<String> = self
            .chain(copy)
            .iter()
            .rev()
            .map(|&c| {
                let d = &self.digraphs[self.copies[c].digraph];
                format!("{}^{}", d.root, self.copies[c].label)
            })
            .collect();
        if labels.is_empty() {
            "S".into()
        } else {
            format!("S -> {}", labels.join(" -> "))
        }
    }

    fn instantiate(&mut self, d: usize, parent: Option<usize>, relabel: Option<Relabel>, cap: usize) -> Result<usize> {
        if self.copies.len() >= cap {
            return Err(Error::IterationCap { cap, chain: self.chain_text(parent) });
        }
        let dg = &self.digraphs[d];
        let label = if self.used[d] {
            self.next_label += 1;
            self.next_label
        } else {
            self.used[d] = true;
            dg.q
        };
        let relabel = if label == dg.q { None } else { relabel };
        let c = self.copies.len();
        self.copies.push(CopyInfo { digraph: d, label, parent, relabel });
        self.conts.push(Cont::Final);
        self.base.push(self.vertices.len());
        for p in 1..dg.syms.len() {
            let sym = RSym { q: label, ..dg.syms[p] };
            self.vertices.push(RVertex { copy: Some(c), pos: p, sym });
        }
        for p in 1..dg.syms.len() {
            for &s in &dg.follow[p] {
                let (a, b) = (self.v(c, p), self.v(c, s));
                if is_n3_right(self.cls, dg.syms[p].label) {
                    self.queue.push_back((a, Cont::At(b)));
                } else {
                    self.edges.insert((a, b), EdgeKind::Stable);
                }
            }
        }
        Ok(c)
    }

    fn wire_exit(&mut self, f: usize, cont: Cont) {
        if is_n3_right(self.cls, self.vertices[f].sym.label) {
            self.queue.push_back((f, cont));
            return;
        }
        match cont {
            Cont::Final => {
                self.finals.insert(f);
            }
            Cont::At(z) => {
                self.edges.entry((f, z)).or_insert(EdgeKind::Glue);
            }
        }
    }

    /// The copy a connection reuses besides ancestors: with I2 off a pop
    /// connection takes the first copy of the digraph, if any.
    fn shared(&self, q: usize, cont: Cont, i2: bool) -> Option<usize> {
        if cont == Cont::Final && !i2 {
            if let Some(c) = self.copies.iter().position(|c| c.digraph == q) {
                return Some(c);
            }
        }
        self.keyed.get(&(q, cont)).copied()
    }
}

pub fn build_refined_graph(g: &DyckGrammar, cls: &PairClass, digraphs: &[LabeledDigraph]) -> Result<RefinedGraph> {
    build_refined_graph_with(g, cls, digraphs, RefineOptions::from_env())
}

pub fn build_refined_graph_with(
    _g: &DyckGrammar,
    cls: &PairClass,
    digraphs: &[LabeledDigraph],
    opts: RefineOptions,
) -> Result<RefinedGraph> {
    let n3 = cls.pairs_in(Class::N3).len().max(1);
    let cap = opts.max_iter.unwrap_or((digraphs.len() * n3 * 4).max(digraphs.len()));
    let mut by_root: BTreeMap<Nt, Vec<usize>> = BTreeMap::new();
    for (i, d) in digraphs.iter().enumerate() {
        by_root.entry(d.root).or_default().push(i);
    }
    let s = RVertex { copy: None, pos: 0, sym: RSym { label: Nt::S, q: 0, mark: 0 } };
    let mut b = Builder {
        cls,
        digraphs,
        copies: Vec::new(),
        vertices: vec![s],
        edges: BTreeMap::new(),
        finals: BTreeSet::new(),
        base: Vec::new(),
        keyed: HashMap::new(),
        conts: Vec::new(),
        used: vec![false; digraphs.len()],
        next_label: digraphs.iter().map(|d| d.q).max().unwrap_or(0),
        queue: VecDeque::new(),
        done: BTreeSet::new(),
    };

    for &d in by_root.get(&Nt::S).map_or(&[][..], Vec::as_slice) {
        let c = b.instantiate(d, None, None, cap)?;
        for &y in &digraphs[d].siblings {
            let v = b.v(c, y);
            b.edges.insert((0, v), EdgeKind::Stable);
        }
        for &f in &digraphs[d].finals {
            let v = b.v(c, f);
            b.wire_exit(v, Cont::Final);
        }
    }

    while let Some((d, cont)) = b.queue.pop_front() {
        if !b.done.insert((d, cont)) {
            continue;
        }
        let Nt::B(br) = b.vertices[d].sym.label else { unreachable!() };
        let root = Nt::B(BracketId::right(br.pair));
        let targets = by_root.get(&root).cloned().unwrap_or_default();
        if targets.is_empty() {
            return Err(Error::Incomplete(format!("no digraph rooted at {root}")));
        }
        let own = b.vertices[d].copy;
        let chain = b.chain(own);
        let same_root: Vec<usize> =
            chain.iter().copied().filter(|&c| digraphs[b.copies[c].digraph].root == root).collect();
        // Past the nesting limit, connect as the nearest same-root ancestor did.
        let (parent, key) = match same_root.first() {
            Some(&a) if same_root.len() >= opts.nesting.max(1) => (b.copies[a].parent, b.conts[a]),
            _ => (own, cont),
        };
        for q in targets {
            let c = match chain.iter().find(|&&c| b.copies[c].digraph == q) {
                Some(&c) => c,
                None => match b.shared(q, key, opts.i2) {
                    Some(c) => c,
                    None => {
                        let why = if key == Cont::Final { Relabel::I2 } else { Relabel::I1 };
                        let c = b.instantiate(q, parent, Some(why), cap)?;
                        b.keyed.insert((q, key), c);
                        b.conts[c] = key;
                        c
                    }
                },
            };
            for &y in &digraphs[q].siblings {
                let v = b.v(c, y);
                b.edges.insert((d, v), EdgeKind::Stable);
            }
            for &f in &digraphs[q].finals {
                let v = b.v(c, f);
                b.wire_exit(v, cont);
            }
        }
    }

    let mut succ = vec![Vec::new(); b.vertices.len()];
    for &(u, v) in b.edges.keys() {
        succ[u].push(v);
    }
    Ok(RefinedGraph {
        digraphs: digraphs.to_vec(),
        copies: b.copies,
        vertices: b.vertices,
        succ,
        edges: b.edges,
        finals: b.finals,
    })
}

/// Plus-height sets, labeled digraphs and the refined graph in one go.
pub fn refine(g: &DyckGrammar, opts: RefineOptions) -> Result<RefinedGraph> {
    let cls = classify_pairs(g);
    let pe = plus_regex_sets(g, &cls)?;
    let ds = label_and_digraph(&pe, &cls);
    build_refined_graph_with(g, &cls, &ds, opts)
}

/// R_m: the h_k image of all terminal paths of the refined graph, plus the
/// extended-pair words.
#[allow(non_snake_case)]
pub fn regular_language_Rm(g: &ExtendedDyckGrammar, rg: &RefinedGraph) -> Regex<BracketId> {
    let cls = classify_pairs(&g.base);
    let finals: Vec<usize> = rg.finals.iter().copied().collect();
    let paths = path_regex(&rg.succ, 0, &finals);
    let r =
        paths.map(&mut |&v| Regex::concat(h_k(&cls, rg.vertices[v].sym.label).into_iter().map(Regex::Sym).collect()));
    Regex::union(vec![r, lp_regex(g)])
}

/// An automaton for R_m read directly off the refined graph.
pub fn rm_automaton(g: &ExtendedDyckGrammar, rg: &RefinedGraph) -> Nfa<BracketId> {
    let cls = classify_pairs(&g.base);
    let names = (0..rg.vertices.len()).map(|v| rg.vertex_name(v)).collect();
    let finals: Vec<usize> = rg.finals.iter().copied().collect();
    let mut a = graph_nfa(names, &rg.succ, 0, &finals, &|v| h_k(&cls, rg.vertices[v].sym.label));
    add_lp_paths(&mut a, g);
    a
}
