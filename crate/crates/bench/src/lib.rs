//! Fixture grammars and whole-pipeline helpers for the benchmarks.

use dycknf::{
    build_automaton_Ae, extend_grammar, parse_grammar, refine, to_cnf, to_dyck_nf, to_regular_grammar, Cfg,
    DyckGrammar, RefineOptions, RegularGrammar,
};

pub const FIXTURES: [(&str, &str); 3] = [
    ("expr", include_str!("../../../grammars/expr.cfg")),
    ("lin", include_str!("../../../grammars/lin.cfg")),
    ("cf", include_str!("../../../grammars/cf.cfg")),
];

pub fn load(text: &str) -> Cfg {
    parse_grammar(text).expect("fixture parses")
}

pub fn dyck(g: &Cfg) -> DyckGrammar {
    to_dyck_nf(&to_cnf(g).0).expect("fixture converts").0
}

/// Refinement, transition diagram and regular grammar in one go.
pub fn approximate(d: &DyckGrammar) -> RegularGrammar {
    let ext = extend_grammar(d);
    let rg = refine(d, RefineOptions::default()).expect("fixture refines");
    to_regular_grammar(&build_automaton_Ae(&ext, &rg).expect("refined graph is complete"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_run_through() {
        for (name, text) in FIXTURES {
            let g = approximate(&dyck(&load(text)));
            assert!(!g.productions.is_empty(), "{name}");
        }
    }
}
