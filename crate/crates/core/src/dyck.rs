//! Trace-words and the Dyck language.
//!
//! A trace-word lists the nonterminals rewritten by a leftmost derivation in
//! a Dyck-normal grammar, axiom excluded. Trace-words are balanced bracket
//! strings; this module checks that with the matched-pair characterization and
//! with a plain stack.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::grammar::{
    replay_dyck, BracketId, Derivation, DyckGrammar, DyckRhs, ExtendedDyckGrammar, Nt, Side, Step, Word,
};

/// Projection onto one pair (`Some(i)`, the map h_i) or onto all pairs
/// collapsed to one (`None`, the map h).
pub fn project(w: &[BracketId], target: Option<u32>) -> Vec<Side> {
    w.iter().filter(|b| target.is_none_or(|i| b.pair == i)).map(|b| b.side).collect()
}

fn sides_balanced(s: &[Side]) -> bool {
    let mut depth = 0i64;
    for side in s {
        depth += if *side == Side::Left { 1 } else { -1 };
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

/// Balancedness of a word over the single pair 1.
pub fn is_balanced(w: &[BracketId]) -> Result<bool> {
    if let Some(b) = w.iter().find(|b| b.pair != 1) {
        return Err(Error::ForeignSymbol(b.to_string()));
    }
    Ok(sides_balanced(&project(w, None)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PairKind {
    pub matched: bool,
    pub nested: bool,
    pub reducible: bool,
}

fn matched(w: &[BracketId], i: usize, j: usize) -> bool {
    i <= j && sides_balanced(&project(&w[i - 1..j], None))
}

/// Classifies the 1-based inclusive position pair `(i, j)`.
pub fn pair_classify(w: &[BracketId], i: usize, j: usize) -> Result<PairKind> {
    if i == 0 || i > j || j > w.len() {
        return Err(Error::OutOfRange { i, j, len: w.len() });
    }
    let m = matched(w, i, j);
    if !m {
        return Ok(PairKind::default());
    }
    let nested = j == i + 1 || (i + 1 < j && matched(w, i + 1, j - 1));
    let reducible = (i + 1..j).any(|jp| matched(w, i, jp) && matched(w, jp + 1, j));
    Ok(PairKind { matched: true, nested, reducible })
}

/// Membership in D_k by the matched-pair characterization: the whole word is
/// matched, and every matched factor is balanced under each projection h_i.
pub fn dyck_membership(w: &[BracketId], k: u32) -> bool {
    if w.iter().any(|b| b.pair == 0 || b.pair > k) {
        return false;
    }
    let n = w.len();
    if n == 0 {
        return true;
    }
    let mut counts = vec![0i64; k as usize + 1];
    let mut negative = vec![false; k as usize + 1];
    let mut whole = false;
    for i in 0..n {
        counts.iter_mut().for_each(|c| *c = 0);
        negative.iter_mut().for_each(|x| *x = false);
        let mut depth = 0i64;
        for (j, &b) in w.iter().enumerate().skip(i) {
            let d = if b.is_left() { 1 } else { -1 };
            depth += d;
            if depth < 0 {
                break;
            }
            let p = b.pair as usize;
            counts[p] += d;
            if counts[p] < 0 {
                negative[p] = true;
            }
            if depth == 0 {
                let ok = (1..=k as usize).all(|q| counts[q] == 0 && !negative[q]);
                if !ok {
                    return false;
                }
                if i == 0 && j == n - 1 {
                    whole = true;
                }
            }
        }
    }
    whole
}

/// Reference checker: a stack of open brackets.
pub fn stack_membership(w: &[BracketId], k: u32) -> bool {
    let mut stack = Vec::new();
    for b in w {
        if b.pair == 0 || b.pair > k {
            return false;
        }
        if b.is_left() {
            stack.push(b.pair);
        } else if stack.pop() != Some(b.pair) {
            return false;
        }
    }
    stack.is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceWord {
    pub brackets: Vec<BracketId>,
    pub source_word: Word,
}

/// Reads the trace-word off a complete leftmost derivation.
pub fn trace_word(g: &DyckGrammar, d: &Derivation) -> Result<TraceWord> {
    let (rewritten, source_word) = replay_dyck(g, d)?;
    let mut brackets = Vec::with_capacity(rewritten.len());
    for (n, nt) in rewritten.into_iter().enumerate() {
        match nt {
            Nt::S if n == 0 => {}
            Nt::S => return Err(Error::InvalidDerivation("axiom rewritten twice".into())),
            Nt::B(b) => brackets.push(b),
        }
    }
    Ok(TraceWord { brackets, source_word })
}

/// Trace-words of all derivations of words up to a length bound.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceLanguage {
    pub words: BTreeSet<TraceWord>,
    /// Number of distinct derivations of each source word.
    pub derivations: BTreeMap<Word, usize>,
}

impl TraceLanguage {
    pub fn bracket_words(&self) -> BTreeSet<Vec<BracketId>> {
        self.words.iter().map(|t| t.brackets.clone()).collect()
    }
}

type Visit<'v> = dyn FnMut(&[Step], &[BracketId], &[u16]) + 'v;

/// Depth-first walk over leftmost derivations of the base grammar (axiom
/// rules to terminals excluded), calling `visit` on each complete one.
/// When `target` is given, only derivations of that word are walked.
fn walk_derivations(g: &DyckGrammar, max_len: usize, target: Option<&[u16]>, visit: &mut Visit) {
    struct St<'a> {
        g: &'a DyckGrammar,
        max: usize,
        target: Option<&'a [u16]>,
        stack: Vec<Nt>,
        steps: Vec<Step>,
        trace: Vec<BracketId>,
        word: Vec<u16>,
    }
    fn go(st: &mut St, visit: &mut Visit) {
        let Some(nt) = st.stack.pop() else {
            if st.target.is_none_or(|t| t.len() == st.word.len()) {
                visit(&st.steps, &st.trace, &st.word);
            }
            return;
        };
        if let Nt::B(b) = nt {
            st.trace.push(b);
        }
        let pos = st.word.len();
        for &r in st.g.rules_of(nt) {
            let rhs = st.g.productions[r].rhs;
            st.steps.push(Step { rule: r, pos });
            match rhs {
                DyckRhs::T(t) if nt != Nt::S => {
                    let fits = st.word.len() < st.max && st.target.is_none_or(|w| w.get(pos) == Some(&t));
                    if fits {
                        st.word.push(t);
                        go(st, visit);
                        st.word.pop();
                    }
                }
                DyckRhs::Pair(i) if st.word.len() + st.stack.len() + 2 <= st.max => {
                    st.stack.push(Nt::B(BracketId::right(i)));
                    st.stack.push(Nt::B(BracketId::left(i)));
                    go(st, visit);
                    st.stack.pop();
                    st.stack.pop();
                }
                _ => {}
            }
            st.steps.pop();
        }
        if let Nt::B(_) = nt {
            st.trace.pop();
        }
        st.stack.push(nt);
    }
    let max = target.map_or(max_len, |t| t.len().min(max_len));
    let mut st = St { g, max, target, stack: vec![Nt::S], steps: vec![], trace: vec![], word: vec![] };
    go(&mut st, visit);
}

/// Streams the trace-word and source word of every derivation of a word of
/// length at most `max_source_len` in the base grammar, without storing them.
/// Returns the number of derivations visited.
pub fn for_each_trace(g: &DyckGrammar, max_source_len: usize, f: &mut dyn FnMut(&[BracketId], &[u16])) -> usize {
    let mut n = 0;
    walk_derivations(g, max_source_len, None, &mut |_, trace, word| {
        n += 1;
        f(trace, word);
    });
    n
}

/// All trace-words of derivations of words of length at most
/// `max_source_len`, plus the `L_p` words of an extended grammar.
pub fn enumerate_trace_language(g: &ExtendedDyckGrammar, max_source_len: usize) -> TraceLanguage {
    let mut out = TraceLanguage::default();
    walk_derivations(&g.base, max_source_len, None, &mut |_, trace, word| {
        out.words.insert(TraceWord { brackets: trace.to_vec(), source_word: word.to_vec() });
        *out.derivations.entry(word.to_vec()).or_default() += 1;
    });
    for &(i, t) in &g.extra_pairs {
        let word: Word = t.into_iter().collect();
        if word.len() <= max_source_len {
            out.words.insert(TraceWord {
                brackets: vec![BracketId::left(i), BracketId::right(i)],
                source_word: word.clone(),
            });
            *out.derivations.entry(word).or_default() += 1;
        }
    }
    out
}

/// Leftmost derivations of `w` in the base grammar (at most `cap` of them).
pub fn derivations_of(g: &DyckGrammar, w: &[u16], cap: usize) -> Vec<Derivation> {
    let mut out = Vec::new();
    if w.len() <= 1 {
        for (r, p) in g.productions.iter().enumerate() {
            let hit = match p.rhs {
                DyckRhs::T(t) => w == [t],
                DyckRhs::Lambda => w.is_empty(),
                DyckRhs::Pair(_) => false,
            };
            if p.lhs == Nt::S && hit {
                out.push(Derivation { steps: vec![Step { rule: r, pos: 0 }] });
            }
        }
        return out;
    }
    walk_derivations(g, w.len(), Some(w), &mut |steps, _, _| {
        if out.len() < cap {
            out.push(Derivation { steps: steps.to_vec() });
        }
    });
    out
}

/// Trace-words of `w`: in an extended grammar a word of length at most one
/// is traced by its extra pair.
pub fn traces_of(g: &ExtendedDyckGrammar, w: &[u16], cap: usize) -> Result<Vec<TraceWord>> {
    if w.len() <= 1 {
        let t = w.first().copied();
        return Ok(g
            .extra_pairs
            .iter()
            .filter(|&&(_, u)| u == t)
            .map(|&(i, _)| TraceWord {
                brackets: vec![BracketId::left(i), BracketId::right(i)],
                source_word: w.to_vec(),
            })
            .collect());
    }
    derivations_of(&g.base, w, cap).iter().map(|d| trace_word(&g.base, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_brackets;

    fn w(s: &str) -> Vec<BracketId> {
        parse_brackets(s).unwrap()
    }

    #[test]
    fn balanced_single_pair() {
        assert!(is_balanced(&w("[1 ]1")).unwrap());
        assert!(!is_balanced(&w("]1 [1")).unwrap());
        assert!(is_balanced(&w("[1 [1 ]1 ]1")).unwrap());
        assert!(is_balanced(&w("[2 ]2")).is_err());
    }

    #[test]
    fn pair_kinds() {
        let a = w("[1 [2 ]2 ]1");
        let k = pair_classify(&a, 1, 4).unwrap();
        assert!(k.matched && k.nested && !k.reducible);
        assert!(!pair_classify(&a, 2, 4).unwrap().matched);
        let b = w("[1 ]1 [2 ]2");
        let k = pair_classify(&b, 1, 4).unwrap();
        assert!(k.matched && k.reducible && !k.nested);
        assert!(pair_classify(&b, 0, 2).is_err());
        assert!(pair_classify(&b, 2, 5).is_err());
    }

    #[test]
    fn membership_examples() {
        assert!(dyck_membership(&w("[2 [1 [4 ]4 [7 ]7 ]1 [7 ]7 ]2 [6 ]6"), 7));
        assert!(!dyck_membership(&w("[1 ]2"), 2));
        assert!(!dyck_membership(&w("[1 [2 ]1 ]2"), 2));
        assert!(dyck_membership(&[], 1));
    }

    #[test]
    fn streamed_traces_match_collected_ones() {
        let text = "start: S\nS -> [1 ]1\n[1 -> [1 ]1 | 'a'\n]1 -> 'b'";
        let c = crate::grammar::to_cnf(&crate::grammar::parse_grammar(text).unwrap()).0;
        let (d, _) = crate::grammar::to_dyck_nf(&c).unwrap();
        let ext = crate::grammar::extend_grammar(&d);
        let mut seen = BTreeSet::new();
        let n = for_each_trace(&d, 6, &mut |t, _| {
            seen.insert(t.to_vec());
        });
        assert_eq!(n, seen.len());
        let lang = enumerate_trace_language(&ext, 6).bracket_words();
        assert!(seen.is_subset(&lang));
        assert!(seen.iter().all(|t| dyck_membership(t, d.k) && stack_membership(t, d.k)));
    }

    #[test]
    fn stack_checker_rejects_mismatch() {
        assert!(!stack_membership(&w("[1 [2 ]1 ]2"), 2));
        assert!(!stack_membership(&w("[3 ]3"), 2));
        assert!(stack_membership(&w("[1 [2 ]2 ]1 [2 ]2"), 2));
    }
}
