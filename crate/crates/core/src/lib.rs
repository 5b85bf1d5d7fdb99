//! Dyck normal form for context-free grammars, the regular languages that
//! cut Dyck words down to a grammar's derivation traces, and a regular
//! grammar generating a superset of the original language.
//!
//! The pipeline runs grammar → CNF → Dyck normal form → dependency graphs →
//! regular language `R` → refined graph → refined language `R_m` →
//! transition diagram → regular grammar. Each stage lives in its own module;
//! the common types are re-exported here.

pub mod approx;
pub mod automaton;
pub mod depgraph;
pub mod dyck;
pub mod error;
pub mod grammar;
pub mod oracle;
pub mod refine;
pub mod regex;

pub use approx::{build_automaton_Ae, to_regular_grammar, RegularGrammar, TransitionDiagram};
pub use automaton::Nfa;
pub use depgraph::{
    build_dependency_graph, build_extended_graph, r_automaton, regex_sets, regular_language_R, DependencyGraph,
    ExtendedGraph,
};
pub use dyck::{dyck_membership, enumerate_trace_language, trace_word, TraceLanguage, TraceWord};
pub use error::{Error, Result};
pub use grammar::{
    classify_pairs, extend_grammar, parse_grammar, to_cnf, to_dyck_nf, BracketId, Cfg, CnfGrammar, DyckGrammar,
    ExtendedDyckGrammar, Nt, PairClass, Word,
};
pub use oracle::{cyk_membership, enumerate_language, verify_cs, verify_superset, VerificationReport};
pub use refine::{build_refined_graph, refine, regular_language_Rm, rm_automaton, RefineOptions, RefinedGraph};
pub use regex::Regex;
