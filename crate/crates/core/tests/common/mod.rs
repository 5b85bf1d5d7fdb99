#![allow(dead_code)]

use std::path::PathBuf;

use dycknf::grammar::parse_bracket;
use dycknf::regex::{lex_bracket_token, parse_regex};
use dycknf::{parse_grammar, to_cnf, to_dyck_nf, Cfg, DyckGrammar, Nt, Regex};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../grammars").join(format!("{name}.cfg"))
}

/// The parsed fixture and its Dyck normal form.
pub fn fixture(name: &str) -> (Cfg, DyckGrammar) {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    let g = parse_grammar(&text).unwrap();
    let d = dyck_of(&g);
    (g, d)
}

pub fn dyck_of(g: &Cfg) -> DyckGrammar {
    to_dyck_nf(&to_cnf(g).0).unwrap().0
}

/// Regular expression over `S` and bracket tokens, e.g. `S ([1 ]1)+`.
pub fn nt_regex(s: &str) -> Regex<Nt> {
    parse_regex(s, &|t: &str| {
        let (tok, n) = lex_bracket_token(t)?;
        let nt = if tok == "S" { Nt::S } else { Nt::B(parse_bracket(&tok).ok()?) };
        Some((nt, n))
    })
    .unwrap()
}

/// Regular expression over bracket tokens only, e.g. `([1 ]1)+`.
pub fn bracket_regex(s: &str) -> Regex<dycknf::BracketId> {
    parse_regex(s, &|t: &str| {
        let (tok, n) = lex_bracket_token(t)?;
        Some((parse_bracket(&tok).ok()?, n))
    })
    .unwrap()
}
