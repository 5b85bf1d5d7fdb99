//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{dyck_of, fixture, nt_regex};
use dycknf::depgraph::{extract_left_regexes, mirror_extend};
use dycknf::dyck::{for_each_trace, stack_membership};
use dycknf::grammar::{format_brackets, parse_word, BracketId, DyckRhs};
use dycknf::oracle::{
    dyck_words, enumerate_language_bfs, enumerate_language_capped, random_cfg, random_cnf, verify_cs_nfa,
};
use dycknf::{
    build_automaton_Ae, build_dependency_graph, build_extended_graph, classify_pairs, cyk_membership, dyck_membership,
    enumerate_language, enumerate_trace_language, extend_grammar, r_automaton, refine, regex_sets, rm_automaton,
    to_cnf, to_regular_grammar, verify_superset, CnfGrammar, DyckGrammar, Nfa, Nt, RefineOptions, Regex, Word,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("expression grammar conversion", 5, conversion),
        ("linear grammar regular language R", 30, linear_r),
        ("trace-words are Dyck words", 60, traces_are_dyck),
        ("D n R and D n R_m generate L", 60, cs_theorem),
        ("refined language inside R", 30, refinement_subset),
        ("linear grammar approximation", 30, linear_approximation),
        ("superset property", 120, superset),
        ("enumeration agrees with CYK", 60, cross_oracle),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let took = t.elapsed();
        let out = match out {
            Ok(d) if took > Duration::from_secs(*limit) => Err(format!("{d}; over the {limit} s limit")),
            o => o,
        };
        match out {
            Ok(d) => println!("criterion {} PASS {name} ({took:.2?}): {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({took:.2?}): {d}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

/// Productions with pair `i` renamed to `perm[i - 1]`, as text.
fn renamed(d: &DyckGrammar, perm: &[u32]) -> BTreeSet<String> {
    let nt = |x: Nt| match x {
        Nt::S => "S".to_string(),
        Nt::B(b) => BracketId { pair: perm[b.pair as usize - 1], side: b.side }.to_string(),
    };
    d.productions
        .iter()
        .map(|p| {
            let rhs = match p.rhs {
                DyckRhs::Lambda => "''".to_string(),
                DyckRhs::T(t) => d.alphabet[t as usize].clone(),
                DyckRhs::Pair(j) => {
                    format!("{} {}", nt(Nt::B(BracketId::left(j))), nt(Nt::B(BracketId::right(j))))
                }
            };
            format!("{} -> {rhs}", nt(p.lhs))
        })
        .collect()
}

fn permutations(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n);
            out.push(q);
        }
    }
    out
}

fn all_words(letters: u16, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..letters {
                let mut v: Word = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn conversion() -> Outcome {
    let (g, d) = fixture("expr");
    check(d.k == 7, format!("k = {}, expected 7", d.k))?;
    let expected: BTreeSet<String> = [
        "S -> a",
        "S -> [1 ]1",
        "S -> [2 ]2",
        "S -> [3 ]3",
        "S -> [4 ]4",
        "[1 -> [1 ]1",
        "[1 -> [4 ]4",
        "[2 -> [1 ]1",
        "[2 -> [2 ]2",
        "[2 -> [3 ]3",
        "[2 -> [4 ]4",
        "]1 -> [7 ]7",
        "]2 -> [5 ]5",
        "]2 -> [6 ]6",
        "]3 -> [5 ]5",
        "]3 -> [6 ]6",
        "]4 -> [7 ]7",
        "]5 -> [1 ]1",
        "]5 -> [4 ]4",
        "[3 -> a",
        "[4 -> a",
        "[5 -> +",
        "[6 -> +",
        "]6 -> a",
        "[7 -> *",
        "]7 -> a",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let perm = permutations(7).into_iter().find(|p| renamed(&d, p) == expected);
    let perm = perm.ok_or("no renaming of the pairs gives the expected productions")?;

    let cnf = to_cnf(&g).0;
    let dcnf = CnfGrammar::new(d.to_cfg()).map_err(|e| e.to_string())?;
    check(d.alphabet == cnf.cfg().terminals, "alphabets differ")?;
    let words = all_words(d.alphabet.len() as u16, 8);
    for w in &words {
        let a = cyk_membership(&cnf, w).map_err(|e| e.to_string())?;
        let b = cyk_membership(&dcnf, w).map_err(|e| e.to_string())?;
        check(a == b, format!("CYK disagrees on {w:?}"))?;
    }
    Ok(format!("k=7, productions match under renaming {perm:?}, CYK agrees on {} words", words.len()))
}

fn linear_r() -> Outcome {
    let (g, d) = fixture("lin");
    let cls = classify_pairs(&d);
    let dg = build_dependency_graph(&d, &cls, Nt::S).map_err(|e| e.to_string())?;
    let got: Vec<Regex<Nt>> = extract_left_regexes(&dg).iter().map(|r| mirror_extend(r, &cls)).collect();
    let want = nt_regex("S (]1 ([2 [3)+ ]4 [5 ]6)+ [7 (]5 (]3 ]2)+)+");
    check(got == vec![want.clone()], format!("got {got:?}, want {want}"))?;

    let ext = extend_grammar(&d);
    let eg =
        build_extended_graph(&d, &cls, &regex_sets(&d, &cls).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let dr = dyck_words(&r_automaton(&ext, &eg), 28);
    let traces: BTreeSet<Vec<BracketId>> =
        enumerate_trace_language(&ext, 15).bracket_words().into_iter().filter(|t| t.len() <= 28).collect();
    check(dr == traces, format!("{} Dyck words of R, {} traces", dr.len(), traces.len()))?;

    // every word is (abb)^m aa followed by m blocks d(cb)^n
    let images: BTreeSet<Word> = dr.iter().map(|w| dycknf::grammar::apply_phi(&ext, w).unwrap()).collect();
    let lang = enumerate_language(&g, 15);
    check(images == lang, "phi-image differs from L(G) up to length 15")?;
    let shape = |w: &Word| {
        let s: String = w.iter().map(|&t| d.alphabet[t as usize].as_str()).collect();
        let Some((head, tail)) = s.split_once("aa") else { return false };
        let m = head.len() / 3;
        head == "abb".repeat(m)
            && m >= 1
            && tail.starts_with('d')
            && tail.split('d').skip(1).all(|b| b.len() >= 2 && b == "cb".repeat(b.len() / 2))
            && tail.matches('d').count() == m
    };
    check(lang.iter().all(shape), "a word of L(G) is off the expected shape")?;
    Ok(format!("regex matches; {} Dyck words of R equal the traces up to length 28", dr.len()))
}

fn traces_are_dyck() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut grammars: Vec<DyckGrammar> = ["expr", "lin", "cf"].iter().map(|f| fixture(f).1).collect();
    for i in 0..50 {
        grammars.push(dyck_of(&random_cfg(&mut rng, 2 + i % 3, 2)));
    }
    let mut checked = 0;
    for d in &grammars {
        let mut bad = None;
        checked += for_each_trace(d, 8, &mut |t, _| {
            if bad.is_none() && !dyck_membership(t, d.k) {
                bad = Some(t.to_vec());
            }
        });
        check(bad.is_none(), format!("trace {bad:?} is not a Dyck word"))?;
    }
    let mut balanced = 0;
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=3);
        let w = random_brackets(&mut rng, k);
        let a = dyck_membership(&w, k);
        check(a == stack_membership(&w, k), format!("checkers disagree on {w:?}"))?;
        balanced += usize::from(a);
    }
    Ok(format!(
        "{checked} traces over {} grammars; checkers agree on 10000 strings ({balanced} balanced)",
        grammars.len()
    ))
}

/// Half uniform strings, half balanced ones with an occasional flipped bracket.
fn random_brackets(rng: &mut ChaCha8Rng, k: u32) -> Vec<BracketId> {
    let len = rng.gen_range(0..=20);
    if rng.gen_bool(0.5) {
        return (0..len)
            .map(|_| {
                let pair = rng.gen_range(1..=k);
                if rng.gen_bool(0.5) {
                    BracketId::left(pair)
                } else {
                    BracketId::right(pair)
                }
            })
            .collect();
    }
    let mut w = Vec::new();
    let mut open = Vec::new();
    while w.len() + open.len() < len / 2 * 2 {
        if open.is_empty() || (w.len() + 2 * open.len() + 2 <= len && rng.gen_bool(0.5)) {
            let pair = rng.gen_range(1..=k);
            open.push(pair);
            w.push(BracketId::left(pair));
        } else {
            w.push(BracketId::right(open.pop().unwrap()));
        }
    }
    while let Some(p) = open.pop() {
        w.push(BracketId::right(p));
    }
    if !w.is_empty() && rng.gen_bool(0.3) {
        let i = rng.gen_range(0..w.len());
        w[i] = BracketId { pair: rng.gen_range(1..=k), side: w[i].side };
    }
    w
}

fn cs_theorem() -> Outcome {
    let mut notes = Vec::new();
    for (name, bounds) in [("lin", &[8][..]), ("cf", &[8, 13][..])] {
        let (_, d) = fixture(name);
        let ext = extend_grammar(&d);
        let cls = classify_pairs(&d);
        let eg = build_extended_graph(&d, &cls, &regex_sets(&d, &cls).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let rg = refine(&d, RefineOptions::default()).map_err(|e| e.to_string())?;
        let (r, rm) = (r_automaton(&ext, &eg), rm_automaton(&ext, &rg));
        for &n in bounds {
            for rep in [verify_cs_nfa(&ext, &r, n, "cs"), verify_cs_nfa(&ext, &rm, n, "cs-refined")] {
                check(rep.holds, format!("{name}: {rep}"))?;
                notes.push(format!("{name} {}", rep.line()));
            }
        }
        let words = enumerate_language(&d, 8).len();
        notes.push(format!("{name} has {words} words up to length 8"));
    }
    Ok(notes.join("; "))
}

fn refinement_subset() -> Outcome {
    let (_, d) = fixture("cf");
    let ext = extend_grammar(&d);
    let cls = classify_pairs(&d);
    let eg =
        build_extended_graph(&d, &cls, &regex_sets(&d, &cls).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let rg = refine(&d, RefineOptions::default()).map_err(|e| e.to_string())?;
    let (ra, rma) = (r_automaton(&ext, &eg), rm_automaton(&ext, &rg));
    let (r, rm) = (ra.enumerate(16), rma.enumerate(16));
    check(rm.is_subset(&r), "R_m has words outside R")?;
    let at = |s: &BTreeSet<Vec<BracketId>>| s.iter().filter(|w| w.len() == 14).count();
    let (a, b) = (at(&rm), at(&r));
    check(a < b, format!("at length 14 R_m has {a} words and R has {b}"))?;
    // the bounded check sees no word of R_m, so also decide inclusion outright
    if let Some(w) = rma.shortest_outside(&ra) {
        return Err(format!("R_m accepts {} outside R", format_brackets(&w)));
    }
    let shortest = rma.shortest_outside(&Nfa::new()).ok_or("R_m is empty")?.len();
    Ok(format!(
        "{} words of R_m inside {} of R; at length 14: {a} < {b}; R_m within R at every length (shortest word of R_m has {shortest} brackets)",
        rm.len(),
        r.len()
    ))
}

fn linear_approximation() -> Outcome {
    let (g, d) = fixture("lin");
    let ext = extend_grammar(&d);
    let rg = refine(&d, RefineOptions::default()).map_err(|e| e.to_string())?;
    let gr = to_regular_grammar(&build_automaton_Ae(&ext, &rg).map_err(|e| e.to_string())?);
    let got = gr.to_nfa().enumerate(24);

    let letter = |c: &str| Regex::Sym(d.alphabet.iter().position(|a| a == c).unwrap() as u16);
    let seq = |s: &str| Regex::concat(s.split(' ').map(letter).collect());
    // (abb)+ aa (d (cb)+)+
    let want = Regex::concat(vec![
        Regex::plus(seq("a b b")),
        seq("a a"),
        Regex::plus(Regex::concat(vec![letter("d"), Regex::plus(seq("c b"))])),
    ]);
    let want = dycknf::automaton::enumerate_regex(&want, 24);
    check(got == want, format!("{} words in L(G_r), {} in the expected language", got.len(), want.len()))?;

    let lang = enumerate_language(&g, 24);
    check(lang.is_subset(&got), "L(G) is not inside L(G_r)")?;
    let witness = parse_word(&d.alphabet, "abbaadcbdcb").map_err(|e| e.to_string())?;
    check(gr.accepts(&witness), "witness rejected by G_r")?;
    check(!lang.contains(&witness), "witness is in L(G)")?;
    Ok(format!("{} words up to length 24; L(G) has {}; witness abbaadcbdcb separates them", got.len(), lang.len()))
}

fn superset() -> Outcome {
    const WANTED: usize = 25;
    let mut notes = Vec::new();
    for name in ["expr", "lin", "cf"] {
        let (g, d) = fixture(name);
        let rep = superset_of(&g, &d).map_err(|e| format!("{name}: {e}"))?;
        check(rep.holds, format!("{name}: {rep}"))?;
        notes.push(format!("{name} |diff|={}", rep.diff));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut tried, mut survived) = (0, 0);
    while survived < WANTED {
        let g = random_cfg(&mut rng, 2 + tried % 3, 2);
        tried += 1;
        let d = dyck_of(&g);
        if enumerate_language_capped(&d, 20, SURVIVAL_BUDGET).is_none() {
            continue;
        }
        let Ok(rep) = superset_of(&g, &d) else { continue };
        check(rep.holds, format!("random grammar {tried}: {rep}\n{g}"))?;
        survived += 1;
    }
    notes.push(format!("{survived} of {tried} random grammars survived"));
    Ok(notes.join("; "))
}

/// Words up to length 20 a random grammar may have before it is skipped.
const SURVIVAL_BUDGET: usize = 20_000;

fn superset_of(g: &dycknf::Cfg, d: &DyckGrammar) -> Result<dycknf::VerificationReport, String> {
    let ext = extend_grammar(d);
    let rg = refine(d, RefineOptions::default()).map_err(|e| e.to_string())?;
    let gr = to_regular_grammar(&build_automaton_Ae(&ext, &rg).map_err(|e| e.to_string())?);
    Ok(verify_superset(g, &gr, 20))
}

fn cross_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let words = all_words(2, 7);
    let mut members = 0;
    for i in 0..50 {
        let g = random_cnf(&mut rng, 5, 2);
        let lang = enumerate_language(&g, 7);
        check(lang == enumerate_language_bfs(&g, 7), format!("grammar {i}: the two enumerations differ"))?;
        for w in &words {
            let a = cyk_membership(&g, w).map_err(|e| e.to_string())?;
            check(a == lang.contains(w), format!("grammar {i}: disagreement on {w:?}\n{g}"))?;
            members += usize::from(a);
        }
    }
    Ok(format!("50 grammars x {} words, {members} memberships", words.len()))
}
