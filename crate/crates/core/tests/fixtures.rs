//! The three fixture grammars through every stage of the pipeline.

mod common;

use common::{bracket_regex, fixture, nt_regex};
use dycknf::grammar::BracketId;
use dycknf::oracle::verify_cs_nfa;
use dycknf::refine::EdgeKind;
use dycknf::{
    build_automaton_Ae, build_dependency_graph, build_extended_graph, classify_pairs, enumerate_language,
    extend_grammar, r_automaton, refine, regex_sets, regular_language_R, rm_automaton, to_regular_grammar,
    verify_superset, Nt, RefineOptions,
};

fn right(i: u32) -> Nt {
    Nt::B(BracketId::right(i))
}

#[test]
fn linear_dependency_graph_shape() {
    let (_, d) = fixture("lin");
    let cls = classify_pairs(&d);
    let dg = build_dependency_graph(&d, &cls, Nt::S).unwrap();
    assert_eq!(dg.vertices.len(), 8);
    let dot = dg.to_dot();
    assert!(dot.contains(r#"[label="S", color=red"#));
    assert!(dot.contains(r#"[label="[7", color=blue"#));
}

#[test]
fn linear_regular_language() {
    let (_, d) = fixture("lin");
    let cls = classify_pairs(&d);
    let res = regex_sets(&d, &cls).unwrap();
    assert_eq!(res[&Nt::S], vec![nt_regex("S (]1 ([2 [3)+ ]4 [5 ]6)+ [7 (]5 (]3 ]2)+)+")]);
    let ext = extend_grammar(&d);
    let eg = build_extended_graph(&d, &cls, &res).unwrap();
    let want = bracket_regex("([1 ]1 ([2 [3)+ [4 ]4 [5 [6 ]6)+ [7 ]7 (]5 (]3 ]2)+)+");
    assert_eq!(regular_language_R(&ext, &eg), want);
}

#[test]
fn nonlinear_extended_graph_mirror_edges() {
    let (_, d) = fixture("cf");
    let cls = classify_pairs(&d);
    let eg = build_extended_graph(&d, &cls, &regex_sets(&d, &cls).unwrap()).unwrap();
    let items = |x, y| eg.items_of(x, y).iter().map(ToString::to_string).collect::<Vec<_>>();
    assert_eq!(items(right(2), right(1)), vec!["8.iii"]);
    assert_eq!(items(right(2), right(2)), vec!["8.ii"]);
    assert!(eg.to_dot().contains("color=orange"));
}

#[test]
fn nonlinear_shortest_word() {
    let (g, _) = fixture("cf");
    assert!(enumerate_language(&g, 10).is_empty());
    let w = enumerate_language(&g, 11);
    assert!(!w.is_empty() && w.iter().all(|w| w.len() == 11));
}

#[test]
fn refined_graph_copies() {
    let (_, d) = fixture("cf");
    let cls = classify_pairs(&d);
    let without_i2 = refine(&d, RefineOptions { i2: false, ..Default::default() }).unwrap();
    assert_eq!(without_i2.copies.len(), 7);
    let full = refine(&d, RefineOptions::default()).unwrap();
    assert_eq!(full.copies.len(), 13);
    assert!(full.is_complete(&cls));
    assert!(full.edges.values().any(|&k| k == EdgeKind::Glue));
    // relabeling under pop vertices changes the graph, not the language
    let ext = extend_grammar(&d);
    let (a, b) = (rm_automaton(&ext, &without_i2), rm_automaton(&ext, &full));
    assert_eq!(a.shortest_outside(&b), None);
    assert_eq!(b.shortest_outside(&a), None);
    let dot = full.to_dot(&cls);
    for color in ["red", "green", "purple", "orange"] {
        assert!(dot.contains(color), "{color}");
    }
}

#[test]
fn tighter_nesting_stays_inside_r() {
    let (_, d) = fixture("expr");
    let cls = classify_pairs(&d);
    let ext = extend_grammar(&d);
    let r = r_automaton(&ext, &build_extended_graph(&d, &cls, &regex_sets(&d, &cls).unwrap()).unwrap());
    let loose = refine(&d, RefineOptions { nesting: 1, ..Default::default() }).unwrap();
    let tight = refine(&d, RefineOptions::default()).unwrap();
    assert!(loose.copies.len() <= tight.copies.len());
    let rm = rm_automaton(&ext, &loose).enumerate(12);
    assert!(rm.is_subset(&r.enumerate(12)));
    let rep = verify_cs_nfa(&ext, &rm_automaton(&ext, &loose), 6, "cs-refined");
    assert!(rep.holds, "{rep}");
}

#[test]
fn refinement_cap_names_the_chain() {
    let (_, d) = fixture("cf");
    let err = refine(&d, RefineOptions { max_iter: Some(3), ..Default::default() }).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("cap 3") && msg.contains("S -> "), "{msg}");
}

#[test]
fn approximations_contain_their_languages() {
    for name in ["expr", "lin", "cf"] {
        let (g, d) = fixture(name);
        let ext = extend_grammar(&d);
        let ae = build_automaton_Ae(&ext, &refine(&d, RefineOptions::default()).unwrap()).unwrap();
        let gr = to_regular_grammar(&ae);
        let rep = verify_superset(&g, &gr, 14);
        assert!(rep.holds, "{name}: {rep}");
        let words = gr.to_nfa().enumerate(14);
        assert!(words.iter().all(|w| ae.accepts(w)), "{name}");
    }
}

#[test]
fn transition_diagram_json() {
    let (_, d) = fixture("lin");
    let ext = extend_grammar(&d);
    let ae = build_automaton_Ae(&ext, &refine(&d, RefineOptions::default()).unwrap()).unwrap();
    let j = ae.to_json();
    assert_eq!(j["start"], "S");
    assert_eq!(j["accepting"], serde_json::json!(["F"]));
    assert_eq!(j["alphabet"], serde_json::json!(["a", "b", "c", "d"]));
    assert_eq!(ae.to_json(), j);
    let dot = ae.to_dot();
    assert!(dot.contains("red") && dot.contains("green"));
}
