use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dycknf::dyck::traces_of;
use dycknf::grammar::{format_brackets, parse_bracket, parse_word};
use dycknf::oracle::{verify_cs_nfa, verify_dycknf};
use dycknf::refine::{label_and_digraph, plus_regex_sets};
use dycknf::{
    build_automaton_Ae, build_dependency_graph, build_extended_graph, classify_pairs, extend_grammar, parse_grammar,
    r_automaton, refine, regex_sets, rm_automaton, to_cnf, to_dyck_nf, to_regular_grammar, verify_superset, Cfg,
    DyckGrammar, Error, Nt, RefineOptions, VerificationReport,
};

/// Dyck normal form, trace languages and regular superset approximations
/// of context-free grammars.
#[derive(Parser, Debug)]
#[command(name = "dycknf", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the grammar in Chomsky or Dyck normal form.
    Convert {
        #[arg(long, value_enum)]
        to: Form,
        file: PathBuf,
    },
    /// Print the trace-words of every derivation of a word, one per line.
    Trace {
        #[arg(long)]
        word: String,
        file: PathBuf,
    },
    /// Export a dependency, extended or refined graph as DOT.
    Graph {
        #[arg(long, value_enum)]
        kind: GraphKind,
        /// Root of a dependency graph: `S` or a right bracket such as `]4`.
        #[arg(long, default_value = "S")]
        root: String,
        /// Output path; standard output when absent.
        #[arg(long)]
        dot: Option<PathBuf>,
        file: PathBuf,
    },
    /// Build the regular superset grammar.
    Approx {
        file: PathBuf,
        /// Write the regular grammar here instead of standard output.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Write the transition diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the transition diagram as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a bounded verification and print its report.
    Verify {
        #[arg(value_enum)]
        claim: Claim,
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Form {
    Cnf,
    Dnf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphKind {
    Dep,
    Ext,
    Refined,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Claim {
    Cs,
    Superset,
    Dycknf,
}

/// Random words checked by `verify dycknf` besides the enumeration.
const SAMPLES: usize = 1000;

enum Failure {
    /// Bad input: unreadable file, malformed grammar, bad option value.
    Usage(String),
    /// A pipeline stage could not finish on this grammar.
    Pipeline(Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::UndeclaredStart(_)
            | Error::UnknownBracket(_)
            | Error::ForeignSymbol(_)
            | Error::InvalidRoot(_) => Failure::Usage(e.to_string()),
            e => Failure::Pipeline(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Pipeline(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(1),
    }
}

fn load(path: &Path) -> Result<Cfg, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_grammar(&text)?)
}

fn dyck_of(g: &Cfg) -> Result<DyckGrammar, Failure> {
    let (cnf, _) = to_cnf(g);
    Ok(to_dyck_nf(&cnf)?.0)
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_root(s: &str) -> Result<Nt, Failure> {
    if s == "S" {
        return Ok(Nt::S);
    }
    let b = parse_bracket(s)?;
    if b.is_left() {
        return Err(Failure::Usage(format!("root must be S or a right bracket, got {s}")));
    }
    Ok(Nt::B(b))
}

fn report(r: &VerificationReport, what: &str) -> bool {
    println!("{what}: {} in {:.2?}", if r.holds { "holds" } else { "fails" }, r.elapsed);
    println!("{r}");
    r.holds
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Convert { to, file } => {
            let g = load(&file)?;
            match to {
                Form::Cnf => print!("{}", to_cnf(&g).0),
                Form::Dnf => print!("{}", dyck_of(&g)?),
            }
        }
        Cmd::Trace { word, file } => {
            let g = load(&file)?;
            let d = dyck_of(&g)?;
            let w = parse_word(&d.alphabet, &word)?;
            let ext = extend_grammar(&d);
            let mut traces: Vec<String> =
                traces_of(&ext, &w, 10_000)?.iter().map(|t| format_brackets(&t.brackets)).collect();
            traces.sort();
            for t in traces {
                println!("{t}");
            }
        }
        Cmd::Graph { kind, root, dot, file } => {
            let d = dyck_of(&load(&file)?)?;
            let cls = classify_pairs(&d);
            let text = match kind {
                GraphKind::Dep => build_dependency_graph(&d, &cls, parse_root(&root)?)?.to_dot(),
                GraphKind::Ext => build_extended_graph(&d, &cls, &regex_sets(&d, &cls)?)?.to_dot(),
                GraphKind::Refined => {
                    let ds = label_and_digraph(&plus_regex_sets(&d, &cls)?, &cls);
                    dycknf::refine::build_refined_graph(&d, &cls, &ds)?.to_dot(&cls)
                }
            };
            write_or_print(dot.as_deref(), &text)?;
        }
        Cmd::Approx { file, output, dot, json } => {
            let d = dyck_of(&load(&file)?)?;
            let ext = extend_grammar(&d);
            let rg = refine(&d, RefineOptions::from_env())?;
            let ae = build_automaton_Ae(&ext, &rg)?;
            let gr = to_regular_grammar(&ae);
            write_or_print(output.as_deref(), &gr.to_string())?;
            if let Some(p) = dot {
                write_or_print(Some(&p), &ae.to_dot())?;
            }
            if let Some(p) = json {
                write_or_print(Some(&p), &format!("{:#}\n", ae.to_json()))?;
            }
        }
        Cmd::Verify { claim, max_len, seed, file } => {
            let g = load(&file)?;
            let d = dyck_of(&g)?;
            let ok = match claim {
                Claim::Cs => {
                    let ext = extend_grammar(&d);
                    let cls = classify_pairs(&d);
                    let eg = build_extended_graph(&d, &cls, &regex_sets(&d, &cls)?)?;
                    let r = verify_cs_nfa(&ext, &r_automaton(&ext, &eg), max_len, "cs");
                    let rg = refine(&d, RefineOptions::from_env())?;
                    let rm = verify_cs_nfa(&ext, &rm_automaton(&ext, &rg), max_len, "cs-refined");
                    report(&r, "phi(D n R) = L") & report(&rm, "phi(D n R_m) = L")
                }
                Claim::Superset => {
                    let ext = extend_grammar(&d);
                    let rg = refine(&d, RefineOptions::from_env())?;
                    let gr = to_regular_grammar(&build_automaton_Ae(&ext, &rg)?);
                    report(&verify_superset(&g, &gr, max_len), "L(G) within L(G_r)")
                }
                Claim::Dycknf => report(&verify_dycknf(&g, &d, max_len, SAMPLES, seed), "L(G) = L(G_k)"),
            };
            if !ok {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn roots() {
        assert_eq!(parse_root("S").ok(), Some(Nt::S));
        assert!(matches!(parse_root("]3"), Ok(Nt::B(b)) if b.pair == 3 && !b.is_left()));
        assert!(matches!(parse_root("[3"), Err(Failure::Usage(_))));
        assert!(matches!(parse_root("x"), Err(Failure::Usage(_))));
    }

    #[test]
    fn pipeline_errors_are_not_usage_errors() {
        let cap = Error::IterationCap { cap: 1, chain: "S".into() };
        assert!(matches!(Failure::from(cap), Failure::Pipeline(_)));
        assert!(matches!(Failure::from(Error::ForeignSymbol("x".into())), Failure::Usage(_)));
    }

    #[test]
    fn verify_arguments() {
        let cli = Cli::try_parse_from(["dycknf", "verify", "cs", "--max-len", "8", "g.cfg"]).unwrap();
        assert!(matches!(cli.cmd, Cmd::Verify { max_len: 8, seed: 0, .. }));
        assert!(Cli::try_parse_from(["dycknf", "verify", "cs", "g.cfg"]).is_err());
    }
}
