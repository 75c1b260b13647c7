//! `plk`: decide, prove, transform and render PLK proofs, and run the verification suites.
//!
//! Exit codes: 0 success or provable, 1 a semantic negative (unprovable, a failed check or
//! suite item), 2 bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use plk_core::abss::{
    check_abss_theorem_conditions, converse_construct, run_converse_trials, run_theorem_trials,
    AbssError, FiniteAbss, RelationSpace, WitnessFunction,
};
use plk_core::nonelim::{run_plk0_suite, run_witness_suite, DEFAULT_NODE_BUDGET};
use plk_core::nss::run_demo;
use plk_core::proof_json::{proof_from_json, proof_to_json};
use plk_core::render::{render_ascii, render_latex};
use plk_core::transform::{
    eliminate_contraction, eliminate_cut_and_contraction, invert_component, mcut_to_acut,
    reduce_cut_degree, InvertItem,
};
use plk_core::{
    certify_unprovable, decide, identity_proof, parse_formula, parse_sequent,
    prove_contraction_cut_free, prove_cutfree, ParseError, Proof, ProverError, Sequent,
    TransformError,
};

#[derive(Parser)]
#[command(
    name = "plk",
    version,
    about = "Proof tools for the propositional sequent calculus PLK"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a sequent is provable.
    Decide {
        sequent: String,
        /// Print a proof, or a certificate of unprovability.
        #[arg(long)]
        certificate: bool,
    },
    /// Write a checked proof of a sequent.
    Prove {
        sequent: String,
        /// A proof with no cut (the default).
        #[arg(long, conflicts_with = "contraction_cut_free")]
        cut_free: bool,
        /// A proof with neither cut nor contraction.
        #[arg(long)]
        contraction_cut_free: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Transform a proof file.
    Transform {
        file: PathBuf,
        #[command(subcommand)]
        op: TransformOp,
        #[command(flatten)]
        out: Output,
    },
    /// Render a proof file.
    Render {
        file: PathBuf,
        #[arg(long, conflicts_with = "latex")]
        ascii: bool,
        #[arg(long)]
        latex: bool,
    },
    /// The contraction+cut-free proof of `A => A`.
    Identity {
        formula: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Print a JSON summary instead of report lines.
        #[arg(long)]
        json: bool,
        /// Trials for the randomized suites (defaults: 1000, or 10000 instances for nss-witness).
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Node budget per search in the nonelim suite.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Work with finite abstract sequent structures.
    Abss {
        #[command(subcommand)]
        op: AbssOp,
    },
}

#[derive(Args)]
struct Output {
    /// Write the proof here instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TransformOp {
    /// Replace contractions by cuts.
    EliminateContraction,
    /// Lower the largest cut-formula complexity.
    ReduceDegree,
    /// Remove both contraction and cut.
    EliminateAll,
    /// Replace multiplicative cuts by additive ones.
    McutToAcut,
    /// Invert a logical rule at a formula of the end-sequent.
    Invert {
        /// Inversion item, 1 to 8.
        item: InvertItem,
        /// Which resulting proof, for items with two.
        #[arg(long, default_value_t = 0)]
        component: usize,
        /// Position of the formula on its side.
        #[arg(long, default_value_t = 0)]
        position: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Ascii,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Nonelim,
    Plk0,
    AbssTheorem,
    AbssConverse,
    NssWitness,
}

#[derive(Subcommand)]
enum AbssOp {
    /// Provable tokens.
    Closure {
        file: PathBuf,
        #[arg(long)]
        exclude: Option<String>,
    },
    /// Whether removing a rule keeps every provable token.
    Eliminable { file: PathBuf, rule: String },
    /// Evaluate the four elimination conditions for a rule.
    Check {
        file: PathBuf,
        rule: String,
        #[arg(long)]
        relation: PathBuf,
        #[arg(long)]
        valuation: PathBuf,
    },
    /// Build a relation space and valuation for an eliminable rule.
    Converse { file: PathBuf, rule: String },
}

/// A failed command: exit code and message.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn negative(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn parse_error(src: &str, e: &ParseError) -> Failure {
    let col = src[..e.offset.min(src.len())].chars().count();
    input_error(format!("{e}\n  {src}\n  {}^", " ".repeat(col)))
}

fn read_sequent(src: &str) -> Result<Sequent, Failure> {
    parse_sequent(src).map_err(|e| parse_error(src, &e))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn read_proof(path: &Path) -> Result<Proof, Failure> {
    proof_from_json(&read_file(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_proof(p: &Proof, out: &Output) -> Result<(), Failure> {
    let text = proof_to_json(p) + "\n";
    match &out.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn prover_failure(e: ProverError) -> Failure {
    match e {
        ProverError::NotProvable(s) => negative(format!("`{s}` is not provable")),
        e => negative(e.to_string()),
    }
}

fn summary(p: &Proof) -> String {
    let rules: Vec<&str> = p.rules_used().into_iter().map(|r| r.name()).collect();
    format!(
        "height {}, size {}, degree {}, rules {}",
        p.height(),
        p.size(),
        p.degree(),
        rules.join(" ")
    )
}

fn cmd_decide(src: &str, certificate: bool) -> CmdResult {
    let s = read_sequent(src)?;
    if decide(&s).map_err(prover_failure)? {
        println!("provable");
        if certificate {
            println!(
                "{}",
                proof_to_json(&prove_cutfree(&s).map_err(prover_failure)?)
            );
        }
        Ok(0)
    } else {
        println!("unprovable");
        if certificate {
            let cert = certify_unprovable(&s).map_err(prover_failure)?;
            for step in &cert.steps {
                let (side, i) = step.position;
                println!(
                    "  {}  decompose {side:?} {i}, follow premise {}",
                    step.sequent, step.branch
                );
            }
            println!("  {}  no shared variable", cert.leaf);
        }
        Ok(1)
    }
}

fn cmd_prove(src: &str, contraction_cut_free: bool, out: &Output) -> CmdResult {
    let s = read_sequent(src)?;
    let p = if contraction_cut_free {
        if !decide(&s).map_err(prover_failure)? {
            return Err(negative(format!("`{s}` is not provable")));
        }
        prove_contraction_cut_free(&s)
            .map_err(prover_failure)?
            .ok_or_else(|| {
                negative(format!(
                    "`{s}` is provable, but not without contraction or cut"
                ))
            })?
    } else {
        prove_cutfree(&s).map_err(prover_failure)?
    };
    write_proof(&p, out)?;
    eprintln!("{}", summary(&p));
    Ok(0)
}

fn transform_failure(e: TransformError) -> Failure {
    match e {
        TransformError::InvalidInput(_) | TransformError::WrongShape(_) => {
            input_error(e.to_string())
        }
        e => negative(e.to_string()),
    }
}

fn cmd_transform(file: &Path, op: &TransformOp, out: &Output) -> CmdResult {
    let p = read_proof(file)?;
    let q = match op {
        TransformOp::EliminateContraction => eliminate_contraction(&p),
        TransformOp::ReduceDegree => reduce_cut_degree(&p),
        TransformOp::EliminateAll => eliminate_cut_and_contraction(&p),
        TransformOp::McutToAcut => mcut_to_acut(&p),
        TransformOp::Invert {
            item,
            component,
            position,
        } => invert_component(*item, *component, &p, *position),
    }
    .map_err(transform_failure)?;
    write_proof(&q, out)?;
    eprintln!("before: {}\nafter:  {}", summary(&p), summary(&q));
    Ok(0)
}

fn cmd_render(file: &Path, latex: bool) -> CmdResult {
    let p = read_proof(file)?;
    print!(
        "{}",
        if latex {
            render_latex(&p)
        } else {
            render_ascii(&p)
        }
    );
    Ok(0)
}

fn cmd_identity(src: &str, format: Format) -> CmdResult {
    let f = parse_formula(src).map_err(|e| parse_error(src, &e))?;
    let p = identity_proof(&f);
    match format {
        Format::Json => println!("{}", proof_to_json(&p)),
        Format::Ascii => print!("{}", render_ascii(&p)),
        Format::Latex => print!("{}", render_latex(&p)),
    }
    Ok(0)
}

fn emit<T: Serialize>(json: bool, value: &T, lines: impl FnOnce()) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("report serializes")
        );
    } else {
        lines();
    }
}

fn cmd_verify(suite: Suite, json: bool, trials: Option<u64>, seed: u64, budget: u64) -> CmdResult {
    let failed = match suite {
        Suite::Nonelim => {
            let reports = run_witness_suite(budget).map_err(|e| negative(e.to_string()))?;
            let required = reports.iter().filter(|r| r.verdict == "required").count();
            emit(json, &reports, || {
                for r in &reports {
                    println!("{}", r.line());
                }
                println!("{required}/{} required", reports.len());
            });
            required < reports.len()
        }
        Suite::Plk0 => {
            let reports = run_plk0_suite().map_err(|e| negative(e.to_string()))?;
            let empty = reports
                .iter()
                .filter(|r| r.empty && !r.provable_in_plk)
                .count();
            emit(json, &reports, || {
                for r in &reports {
                    println!(
                        "{:<10} {:<9} nodes={} ms={}",
                        r.sequent,
                        if r.empty { "no proof" } else { "PROOF" },
                        r.nodes,
                        r.millis
                    );
                }
                println!("{empty}/{} without proof", reports.len());
            });
            empty < reports.len()
        }
        Suite::AbssTheorem => {
            let r = run_theorem_trials(seed, trials.unwrap_or(1000));
            emit(json, &r, || {
                println!(
                    "{} structures, {} cases with all conditions true, {} counterexamples",
                    r.structures, r.all_true, r.counterexamples
                );
                if let Some(c) = &r.first_counterexample {
                    println!("first counterexample:\n{c}");
                }
            });
            r.counterexamples > 0
        }
        Suite::AbssConverse => {
            let r = run_converse_trials(seed, trials.unwrap_or(1000));
            emit(json, &r, || {
                println!(
                    "{} structures, {} eligible, {} constructions pass, {} fail",
                    r.structures, r.eligible, r.succeeded, r.failed
                );
                for (c, n) in &r.failures_by_condition {
                    println!("  condition ({c}): {n}");
                }
                if let Some(f) = &r.first_failure {
                    println!("first failure: {f}");
                }
            });
            r.failed > 0
        }
        Suite::NssWitness => {
            let r = run_demo(seed, trials.unwrap_or(10_000) as usize)
                .map_err(|e| negative(e.to_string()))?;
            emit(json, &r, || {
                println!(
                    "non-atomic cut: {}/{} not respected",
                    r.cut_not_respected, r.cut_instances
                );
                println!(
                    "weakening, exchange, logical: {}/{} respected",
                    r.other_respected, r.other_instances
                );
                println!(
                    "contraction: {}/{} premise at least conclusion, strictly iff compound",
                    r.contraction_as_expected, r.contraction_instances
                );
                println!(
                    "seqcomp is a witness for the cut pool: {} (least level {}, sampled)",
                    r.witness.is_witness, r.witness.n0
                );
            });
            !r.passed()
        }
    };
    Ok(u8::from(failed))
}

fn abss_failure(e: AbssError) -> Failure {
    match e {
        AbssError::HypothesisViolated(_) | AbssError::ConverseFails { .. } => {
            negative(e.to_string())
        }
        e => input_error(e.to_string()),
    }
}

fn read_abss(path: &Path) -> Result<FiniteAbss, Failure> {
    FiniteAbss::from_json(&read_file(path)?)
        .map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn cmd_abss(op: &AbssOp) -> CmdResult {
    match op {
        AbssOp::Closure { file, exclude } => {
            let a = read_abss(file)?;
            let c = a.closure(exclude.as_deref()).map_err(abss_failure)?;
            println!("{}", c.into_iter().collect::<Vec<_>>().join(" "));
            Ok(0)
        }
        AbssOp::Eliminable { file, rule } => {
            let e = read_abss(file)?.is_eliminable(rule).map_err(abss_failure)?;
            println!("{}", if e { "eliminable" } else { "not eliminable" });
            Ok(u8::from(!e))
        }
        AbssOp::Check {
            file,
            rule,
            relation,
            valuation,
        } => {
            let a = read_abss(file)?;
            let rs = RelationSpace::from_json(&read_file(relation)?).map_err(abss_failure)?;
            let v = WitnessFunction::from_json(&read_file(valuation)?).map_err(abss_failure)?;
            let r = check_abss_theorem_conditions(&a, rule, &rs, &v).map_err(abss_failure)?;
            println!("{}", serde_json::to_string(&r).expect("report serializes"));
            Ok(u8::from(!r.all()))
        }
        AbssOp::Converse { file, rule } => {
            let a = read_abss(file)?;
            let (rs, v) = converse_construct(&a, rule).map_err(abss_failure)?;
            println!("{}", serde_json::json!({ "relation": rs, "valuation": v }));
            Ok(0)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Decide {
            sequent,
            certificate,
        } => cmd_decide(&sequent, certificate),
        Command::Prove {
            sequent,
            contraction_cut_free,
            out,
            ..
        } => cmd_prove(&sequent, contraction_cut_free, &out),
        Command::Transform { file, op, out } => cmd_transform(&file, &op, &out),
        Command::Render { file, latex, .. } => cmd_render(&file, latex),
        Command::Identity { formula, format } => cmd_identity(&formula, format),
        Command::Verify {
            suite,
            json,
            trials,
            seed,
            budget,
        } => cmd_verify(suite, json, trials, seed, budget),
        Command::Abss { op } => cmd_abss(&op),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
