use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tricolor::dot::export_dot;
use tricolor::grammar_text::parse_grammar;
use tricolor::ops_text::{replay_ops, serialize_trace};
use tricolor::strategy_text::parse_strategies;
use tricolor::tdag_text::{parse_tdag, serialize_tdag, NamedTdag};
use tricolor_core::generator::{
    check_termination, generate, verify_sandwich, DerivTree, GenOutcome,
};
use tricolor_core::grammar::{analyze, Grammar};
use tricolor_core::partition::{classify, score, PartitionReport};
use tricolor_core::transfer::{plan_transfer, StrategyTable, TransferTrace};
use tricolor_core::{subsumes, Tdag, UnifyOutcome};

/// Exit code 1: the inputs were understood but the operation failed in the
/// domain (ill-formed graph, failed unification, no derivation, ...).
const DOMAIN_FAILURE: u8 = 1;
/// Exit code 2: bad usage or unparseable input.
const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "tricolor", version, about = "Tricolor-DAG toolbox: \
well-formedness, unification, subsumption, semantic transfer, constraint \
partitioning, analysis, generation, and end-to-end translation")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the well-formedness conditions of a TDAG file.
    Check { file: PathBuf },
    /// Unify two TDAGs at their roots.
    Unify { a: PathBuf, b: PathBuf },
    /// Test whether the first TDAG subsumes (is more general than) the second.
    Subsume { a: PathBuf, b: PathBuf },
    /// Replay a transfer-operation file, or plan a relaxation that makes
    /// generation with a grammar succeed.
    Transfer {
        file: PathBuf,
        /// Operation file to replay.
        #[arg(long, conflicts_with_all = ["grammar", "strategies", "budget", "depth"])]
        replay: Option<PathBuf>,
        /// Target grammar the planned relaxation must satisfy.
        #[arg(long, required_unless_present = "replay")]
        grammar: Option<PathBuf>,
        /// Strategy table for the planner (default: built-in table).
        #[arg(long)]
        strategies: Option<PathBuf>,
        /// Maximum number of operations (default: element count of the TDAG).
        #[arg(long)]
        budget: Option<usize>,
        /// Generation depth budget (default: $TRICOLOR_DEPTH or 12).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Partition the constraints of a source TDAG against a target TDAG.
    Classify {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Parse a sentence into its (all-red) TDAG.
    Analyze {
        #[arg(long)]
        sentence: String,
        #[arg(long)]
        grammar: PathBuf,
    },
    /// Generate a sentence from a TDAG.
    Generate {
        #[arg(long)]
        tdag: PathBuf,
        #[arg(long)]
        grammar: PathBuf,
        /// Generation depth budget (default: $TRICOLOR_DEPTH or 12).
        #[arg(long)]
        depth: Option<usize>,
        /// Print the derivation tree as a call-structured log.
        #[arg(long)]
        trace: bool,
    },
    /// Analyze, relax until the target grammar generates, and classify.
    Translate {
        #[arg(long)]
        sentence: String,
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        tgt: PathBuf,
        #[arg(long)]
        strategies: Option<PathBuf>,
        /// Maximum number of transfer operations (default: element count).
        #[arg(long)]
        budget: Option<usize>,
        /// Generation depth budget (default: $TRICOLOR_DEPTH or 12).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Export a TDAG as a Graphviz DOT digraph.
    ExportDot { file: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: USAGE_ERROR, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Failure {
        Failure { code: DOMAIN_FAILURE, message: message.into() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_tdag(path: &Path) -> Result<NamedTdag, Failure> {
    parse_tdag(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_grammar(path: &Path) -> Result<Grammar, Failure> {
    parse_grammar(&read(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_strategies(path: Option<&PathBuf>) -> Result<StrategyTable, Failure> {
    match path {
        None => Ok(StrategyTable::shipped()),
        Some(p) => parse_strategies(&read(p)?)
            .map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
    }
}

fn depth_budget(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("TRICOLOR_DEPTH").ok()?.parse().ok())
        .unwrap_or(12)
}

fn print_tdag(t: &Tdag, format: Format) {
    let named = NamedTdag::generated(t.clone());
    match format {
        Format::Text => print!("{}", serialize_tdag(&named)),
        Format::Json => {
            let nodes: Vec<_> = t
                .nodes()
                .iter()
                .map(|n| {
                    json!({
                        "id": named.name_of(n.id),
                        "color": n.color.name(),
                        "label": n.label,
                    })
                })
                .collect();
            let arcs: Vec<_> = t
                .arcs()
                .iter()
                .map(|a| {
                    json!({
                        "from": named.name_of(a.from),
                        "feature": a.feature,
                        "to": named.name_of(a.to),
                        "color": a.color.name(),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({ "root": named.name_of(t.root()), "nodes": nodes, "arcs": arcs })
            );
        }
    }
}

fn report_json(report: &PartitionReport) -> serde_json::Value {
    let strings = |cs: &[tricolor_core::partition::Constraint]| {
        cs.iter().map(|c| c.to_string()).collect::<Vec<_>>()
    };
    let (violated, missing, new) = score(report);
    json!({
        "verdict": report.verdict.name(),
        "shared": strings(&report.c0),
        "missing": strings(&report.c_plus),
        "violated": strings(&report.c_minus),
        "new": strings(&report.c_new),
        "score": { "violated": violated, "missing": missing, "new": new },
    })
}

fn print_report(report: &PartitionReport, format: Format) {
    match format {
        Format::Json => println!("{}", report_json(report)),
        Format::Text => {
            println!("verdict: {}", report.verdict);
            let section = |name: &str, cs: &[tricolor_core::partition::Constraint]| {
                println!("{name} ({}):", cs.len());
                for c in cs {
                    println!("  {c}");
                }
            };
            section("shared", &report.c0);
            section("missing in target", &report.c_plus);
            section("violated by target", &report.c_minus);
            section("new in target", &report.c_new);
        }
    }
}

fn print_trace(trace: &TransferTrace, names: &[String], format: Format) {
    let ops_text = serialize_trace(trace, names);
    match format {
        Format::Json => {
            println!(
                "{}",
                json!({
                    "ops": ops_text.lines().collect::<Vec<_>>(),
                    "steps": trace.steps.len(),
                })
            );
        }
        Format::Text => {
            println!("operations ({}):", trace.steps.len());
            for line in ops_text.lines() {
                println!("  {line}");
            }
        }
    }
}

fn derivation_log(tree: &DerivTree, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    match &tree.word {
        Some(w) => out.push_str(&format!("{indent}{}> \"{w}\"\n", tree.rule)),
        None => out.push_str(&format!("{indent}{}>\n", tree.rule)),
    }
    for c in &tree.children {
        derivation_log(c, depth + 1, out);
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Check { file } => {
            let named = load_tdag(&file)?;
            let violations = named.tdag.check_well_formed();
            if format == Format::Json {
                let v: Vec<_> = violations
                    .iter()
                    .map(|v| json!({ "condition": v.condition(), "detail": v.to_string() }))
                    .collect();
                println!(
                    "{}",
                    json!({ "well_formed": violations.is_empty(), "violations": v })
                );
            } else if violations.is_empty() {
                println!("well-formed");
            } else {
                for v in &violations {
                    println!("{v}");
                }
            }
            if violations.is_empty() {
                Ok(())
            } else {
                Err(Failure::domain(format!("{} violation(s)", violations.len())))
            }
        }
        Command::Unify { a, b } => {
            let (a, b) = (load_tdag(&a)?, load_tdag(&b)?);
            match tricolor_core::unify(&a.tdag, &b.tdag) {
                UnifyOutcome::Unified(t) => {
                    print_tdag(&t, format);
                    Ok(())
                }
                UnifyOutcome::Indefinite(c) => {
                    if format == Format::Json {
                        println!(
                            "{}",
                            json!({
                                "outcome": "indefinite",
                                "path": c.path,
                                "atoms": [c.atoms.0, c.atoms.1],
                            })
                        );
                    } else {
                        println!(
                            "indefinite: green atoms {} and {} conflict at <{}>",
                            c.atoms.0,
                            c.atoms.1,
                            c.path.join(" ")
                        );
                    }
                    Err(Failure::domain("unification is indefinite"))
                }
                UnifyOutcome::Failure(f) => {
                    if format == Format::Json {
                        println!("{}", json!({ "outcome": "failure", "detail": f.to_string() }));
                    } else {
                        println!("{f}");
                    }
                    Err(Failure::domain("unification failed"))
                }
            }
        }
        Command::Subsume { a, b } => {
            let (a, b) = (load_tdag(&a)?, load_tdag(&b)?);
            let holds = subsumes(&a.tdag, &b.tdag);
            if format == Format::Json {
                println!("{}", json!({ "subsumes": holds }));
            } else {
                println!("{}", if holds { "subsumes" } else { "does not subsume" });
            }
            if holds {
                Ok(())
            } else {
                Err(Failure::domain("subsumption does not hold"))
            }
        }
        Command::Transfer { file, replay, grammar, strategies, budget, depth } => {
            let named = load_tdag(&file)?;
            let trace = match replay {
                Some(ops_path) => {
                    let text = read(&ops_path)?;
                    let (trace, end) = replay_ops(&text, &named).map_err(|e| {
                        let msg = format!("{}: {e}", ops_path.display());
                        if e.message.contains("operation rejected") {
                            Failure::domain(msg)
                        } else {
                            Failure::usage(msg)
                        }
                    })?;
                    print_trace(&trace, &end.names, format);
                    if format == Format::Text {
                        print!("{}", serialize_tdag(&end));
                    } else {
                        print_tdag(&end.tdag, format);
                    }
                    return Ok(());
                }
                None => {
                    let grammar = load_grammar(grammar.as_ref().expect("enforced by clap"))?;
                    let table = load_strategies(strategies.as_ref())?;
                    let budget = budget.unwrap_or_else(|| named.tdag.element_count());
                    let depth = depth_budget(depth);
                    plan_transfer(
                        &named.tdag,
                        |t| generate(t, &grammar, depth).success().is_some(),
                        &table,
                        budget,
                    )
                    .map_err(|e| Failure::domain(e.to_string()))?
                }
            };
            // The planner only paints, so the input names still apply.
            print_trace(&trace, &named.names, format);
            print_tdag(trace.result(), format);
            Ok(())
        }
        Command::Classify { source, target } => {
            let (s, t) = (load_tdag(&source)?, load_tdag(&target)?);
            let report = classify(&s.tdag, &t.tdag);
            print_report(&report, format);
            Ok(())
        }
        Command::Analyze { sentence, grammar } => {
            let grammar = load_grammar(&grammar)?;
            let tokens: Vec<&str> = sentence.split_whitespace().collect();
            let analysis =
                analyze(&tokens, &grammar).map_err(|e| Failure::domain(e.to_string()))?;
            if format == Format::Json {
                println!("{}", json!({ "parses": analysis.parse_count }));
            } else {
                println!("# parses: {}", analysis.parse_count);
            }
            print_tdag(&analysis.tdag, format);
            Ok(())
        }
        Command::Generate { tdag, grammar, depth, trace } => {
            let named = load_tdag(&tdag)?;
            let grammar = load_grammar(&grammar)?;
            let report = generate(&named.tdag, &grammar, depth_budget(depth));
            match report.outcome {
                GenOutcome::Success(d) => {
                    let term = check_termination(&named.tdag, &d);
                    let sandwich = verify_sandwich(&named.tdag, &d);
                    if format == Format::Json {
                        let mut log = String::new();
                        derivation_log(&d.tree, 0, &mut log);
                        println!(
                            "{}",
                            json!({
                                "surface": d.surface_string(),
                                "termination": {
                                    "t1": term.t1(), "t2": term.t2, "t3": term.t3,
                                },
                                "sandwich": sandwich,
                                "trace": if trace {
                                    Some(log.lines().collect::<Vec<_>>())
                                } else {
                                    None
                                },
                            })
                        );
                    } else {
                        if trace {
                            let mut log = String::new();
                            derivation_log(&d.tree, 0, &mut log);
                            print!("{log}");
                        }
                        println!("{}", d.surface_string());
                    }
                    Ok(())
                }
                GenOutcome::Failure(f) => {
                    if format == Format::Json {
                        println!("{}", json!({ "failure": f.to_string() }));
                    } else {
                        println!("generation failed: {f}");
                    }
                    Err(Failure::domain("generation failed"))
                }
            }
        }
        Command::Translate { sentence, src, tgt, strategies, budget, depth } => {
            let src = load_grammar(&src)?;
            let tgt = load_grammar(&tgt)?;
            let table = load_strategies(strategies.as_ref())?;
            let tokens: Vec<&str> = sentence.split_whitespace().collect();
            let analysis = analyze(&tokens, &src)
                .map_err(|e| Failure::domain(format!("analysis failed: {e}")))?;
            let source = analysis.tdag;
            let depth = depth_budget(depth);
            let budget = budget.unwrap_or_else(|| source.element_count());
            let trace = plan_transfer(
                &source,
                |t| generate(t, &tgt, depth).success().is_some(),
                &table,
                budget,
            )
            .map_err(|e| Failure::domain(format!("transfer failed: {e}")))?;
            let report = generate(trace.result(), &tgt, depth);
            let derivation = report
                .success()
                .ok_or_else(|| Failure::domain("generation failed after transfer"))?;
            let partition = classify(&source, &derivation.derived);
            if format == Format::Json {
                println!(
                    "{}",
                    json!({
                        "surface": derivation.surface_string(),
                        "transfer_ops": trace.steps.len(),
                        "classification": report_json(&partition),
                    })
                );
            } else {
                println!("{}", derivation.surface_string());
                let names: Vec<String> =
                    (0..trace.result().nodes().len()).map(|i| format!("n{i}")).collect();
                print_trace(&trace, &names, format);
                print_report(&partition, format);
            }
            Ok(())
        }
        Command::ExportDot { file } => {
            let named = load_tdag(&file)?;
            print!("{}", export_dot(&named));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
