//! `lmt`: check, normalize, develop, translate and fuzz λμT programs.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lmt_core::cps::{cps_env, cps_term, cps_type, identity_nat, lt_normalize};
use lmt_core::develop::{classify_shape, complete_dev, complete_dev_cmd};
use lmt_core::reduction::{
    b_step_stats, join_search_detailed, normalize_with, JoinOutcome, ReductionError, RuleSet, Strategy,
    DEFAULT_MAX_STEPS, DEFAULT_STATE_CAP,
};
use lmt_core::syntax::{parse_program, parse_type, pretty_command, pretty_expr, pretty_term, Decl};
use lmt_core::testkit::{oracle_normal_forms, run_suite, Suite, CPS_MAX_STEPS};
use lmt_core::typing::{check_command, infer_term};
use lmt_core::{as_numeral, Expr, Term, Type};

#[derive(Parser)]
#[command(name = "lmt", version, about = "Parigot's λμ with Gödel's T")]
struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Let `nrec r s (S t)` unfold for any `t`. Breaks confluence; for testing only.
    #[arg(long, global = true, hide = true)]
    unsafe_suc_prime: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Type-check every declaration.
    Check { file: PathBuf },
    /// Normalize the main declaration.
    Norm {
        file: PathBuf,
        /// Print every step with its rule and position.
        #[arg(long)]
        trace: bool,
        /// `lo` for leftmost-outermost or `rand:SEED`.
        #[arg(long, default_value = "lo", value_parser = parse_strategy)]
        strategy: Strategy,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// List every reachable normal form instead of following one strategy.
        #[arg(long)]
        all: bool,
    },
    /// Classify the main declaration and print its complete development.
    Dev { file: PathBuf },
    /// Translate the main declaration into continuation-passing style.
    Cps {
        file: PathBuf,
        /// The answer type.
        #[arg(long, default_value = "N", value_parser = parse_bottom)]
        bottom: Type,
        /// Check the translation has the translated type.
        #[arg(long)]
        check_type: bool,
        /// Evaluate a closed term of type N both directly and through the translation.
        #[arg(long)]
        run: bool,
    },
    /// Run a property suite on generated terms.
    Fuzz {
        property: Property,
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum term size; defaults depend on the property.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Search for a common reduct of the main declarations of two files.
    Join {
        file1: PathBuf,
        file2: PathBuf,
        /// Maximum steps from each side.
        #[arg(long, default_value_t = 20)]
        budget: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Confluence,
    SubjectReduction,
    NormalForm,
    Develop,
    Postpone,
    CatchThrow,
}

impl Property {
    fn suite(self) -> Suite {
        match self {
            Property::Confluence => Suite::Confluence,
            Property::SubjectReduction => Suite::SubjectReduction,
            Property::NormalForm => Suite::NormalForm,
            Property::Develop => Suite::Develop,
            Property::Postpone => Suite::Postpone,
            Property::CatchThrow => Suite::CatchThrow,
        }
    }
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    if s == "lo" {
        return Ok(Strategy::LeftmostOutermost);
    }
    match s.strip_prefix("rand:").map(str::parse::<u64>) {
        Some(Ok(seed)) => Ok(Strategy::Random(seed)),
        _ => Err("expected `lo` or `rand:SEED`".to_string()),
    }
}

fn parse_bottom(s: &str) -> Result<Type, String> {
    parse_type(s).map_err(|e| e.to_string())
}

/// What a command prints and how it exits.
struct Report {
    code: u8,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: String, json: Value) -> Report {
        Report { code: 0, text, json }
    }

    fn fail(text: String, json: Value) -> Report {
        Report { code: 1, text, json }
    }
}

/// Failures before any result exists.
enum Failure {
    /// Exit code 2.
    Input(String),
    /// Exit code 1.
    Type(String),
}

type Run = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let handle = std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(move || {
            let json = cli.json;
            let (code, text, doc) = match run(&cli) {
                Ok(r) => (r.code, r.text, r.json),
                Err(Failure::Input(m)) => (2, format!("error: {m}"), json!({ "error": m, "kind": "input" })),
                Err(Failure::Type(m)) => (1, format!("type error: {m}"), json!({ "error": m, "kind": "type" })),
            };
            let _ = if json {
                writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&doc).expect("serializable"))
            } else if code == 2 {
                writeln!(std::io::stderr(), "{text}")
            } else if !text.is_empty() {
                writeln!(std::io::stdout(), "{text}")
            } else {
                Ok(())
            };
            code
        })
        .expect("worker thread");
    ExitCode::from(handle.join().unwrap_or(101))
}

fn rules(cli: &Cli) -> RuleSet {
    if cli.unsafe_suc_prime {
        RuleSet::SUC_PRIME
    } else {
        RuleSet::STANDARD
    }
}

fn run(cli: &Cli) -> Run {
    match &cli.cmd {
        Cmd::Check { file } => check(file),
        Cmd::Norm { file, trace, strategy, max_steps, all } => {
            if *all {
                norm_all(file, rules(cli))
            } else {
                norm(file, *trace, *strategy, *max_steps, rules(cli))
            }
        }
        Cmd::Dev { file } => dev(file),
        Cmd::Cps { file, bottom, check_type, run } => cps(file, bottom, *check_type, *run),
        Cmd::Fuzz { property, cases, seed, size } => fuzz(property.suite(), *cases, *seed, *size),
        Cmd::Join { file1, file2, budget } => join(file1, file2, *budget, rules(cli)),
    }
}

fn load(path: &Path) -> Result<lmt_core::syntax::Program, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_program(&src).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))
}

/// Type of a declaration: `Some(type)` for terms, `None` for commands.
fn decl_type(d: &Decl) -> Result<Option<Type>, String> {
    match &d.expr {
        Expr::Term(t) => infer_term(&d.env, t).map(Some).map_err(|e| e.to_string()),
        Expr::Command(c) => check_command(&d.env, c).map(|_| None).map_err(|e| e.to_string()),
    }
}

/// The main declaration as a well-typed term.
fn main_term(path: &Path) -> Result<(Decl, Type), Failure> {
    let p = load(path)?;
    let d = p.main().clone();
    let ty = decl_type(&d).map_err(|e| Failure::Type(format!("{}: {e}", d.name)))?;
    match ty {
        Some(ty) => Ok((d, ty)),
        None => Err(Failure::Input(format!("`{}` is a command; a term is required", d.name))),
    }
}

fn term_of(d: &Decl) -> &Term {
    d.expr.as_term().expect("checked to be a term")
}

fn check(file: &Path) -> Run {
    let p = load(file)?;
    let mut lines = Vec::new();
    let mut docs = Vec::new();
    let mut ok = true;
    for d in &p.decls {
        match decl_type(d) {
            Ok(ty) => {
                let shown = ty.as_ref().map_or("command".to_string(), Type::to_string);
                lines.push(format!("{} : {shown}", d.name));
                docs.push(json!({ "name": d.name, "type": shown }));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{}: type error: {e}", d.name));
                docs.push(json!({ "name": d.name, "error": e }));
            }
        }
    }
    let doc = json!({ "ok": ok, "decls": docs });
    Ok(if ok { Report::ok(lines.join("\n"), doc) } else { Report::fail(lines.join("\n"), doc) })
}

fn budget_failure(e: ReductionError) -> Report {
    let text = e.to_string();
    let mut doc = json!({ "error": text, "kind": "budget" });
    if let ReductionError::StepBudgetExceeded { last, .. } = &e {
        doc["last"] = json!(pretty_term(last));
    }
    Report::fail(format!("error: {text}"), doc)
}

fn path_str(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn norm(file: &Path, trace: bool, strategy: Strategy, max_steps: usize, rules: RuleSet) -> Run {
    let (d, ty) = main_term(file)?;
    let start = Instant::now();
    let n = match normalize_with(term_of(&d), strategy, max_steps, rules, trace) {
        Ok(n) => n,
        Err(e) => return Ok(budget_failure(e)),
    };
    let elapsed = start.elapsed();
    let shown = pretty_term(&n.term);
    let mut lines = Vec::new();
    let mut steps = Vec::new();
    for (i, r) in n.trace.iter().enumerate() {
        let now = pretty_expr(&r.result);
        lines.push(format!("{:>4}  {:<8} at {:<12} {now}", i + 1, r.rule.name(), path_str(&r.path)));
        steps.push(json!({ "rule": r.rule.name(), "path": r.path, "term": now }));
    }
    lines.push(shown.clone());
    let doc = json!({
        "name": d.name,
        "type": ty.to_string(),
        "normal_form": shown,
        "numeral": as_numeral(&n.term),
        "steps": n.steps,
        "millis": elapsed.as_secs_f64() * 1000.0,
        "trace": if trace { Value::Array(steps) } else { Value::Null },
    });
    Ok(Report::ok(lines.join("\n"), doc))
}

fn norm_all(file: &Path, rules: RuleSet) -> Run {
    let (d, _) = main_term(file)?;
    match oracle_normal_forms(term_of(&d), DEFAULT_STATE_CAP, rules) {
        Ok(nfs) => {
            let shown: Vec<String> = nfs.iter().map(pretty_term).collect();
            let doc = json!({ "name": d.name, "normal_forms": shown });
            Ok(Report::ok(shown.join("\n"), doc))
        }
        Err(e) => Ok(Report::fail(format!("error: {e}"), json!({ "error": e.to_string(), "kind": "budget" }))),
    }
}

fn dev(file: &Path) -> Run {
    let p = load(file)?;
    let d = p.main().clone();
    decl_type(&d).map_err(|e| Failure::Type(format!("{}: {e}", d.name)))?;
    let (shape, out) = match &d.expr {
        Expr::Term(t) => (classify_shape(t).name(), pretty_term(&complete_dev(t))),
        Expr::Command(c) => ("command", pretty_command(&complete_dev_cmd(c))),
    };
    let doc = json!({ "name": d.name, "shape": shape, "development": out });
    Ok(Report::ok(format!("shape: {shape}\n{out}"), doc))
}

fn cps(file: &Path, bottom: &Type, check_type: bool, run: bool) -> Run {
    let (d, ty) = main_term(file)?;
    let t = term_of(&d);
    let translated = cps_term(&d.env, t, bottom).map_err(|e| Failure::Type(e.to_string()))?;
    let mut lines = vec![pretty_term(&translated)];
    let mut doc = json!({ "name": d.name, "translation": lines[0] });
    let mut ok = true;
    if check_type {
        let want = cps_type(&ty, bottom);
        let got = infer_term(&cps_env(&d.env, bottom), &translated);
        let good = got.as_ref() == Ok(&want);
        ok &= good;
        let got_s = match &got {
            Ok(g) => g.to_string(),
            Err(e) => e.to_string(),
        };
        lines.push(format!("type: {got_s} (expected {want}) {}", if good { "ok" } else { "MISMATCH" }));
        doc["type"] = json!({ "expected": want.to_string(), "found": got_s, "ok": good });
    }
    if run {
        if *bottom != Type::Nat || ty != Type::Nat || !t.is_closed() {
            return Err(Failure::Input("--run needs a closed term of type N and --bottom=N".to_string()));
        }
        let direct = normalize_with(t, Strategy::LeftmostOutermost, DEFAULT_MAX_STEPS, RuleSet::STANDARD, false);
        let via = lt_normalize(&Term::app(translated, identity_nat()), CPS_MAX_STEPS);
        let (direct, via) = match (direct, via) {
            (Ok(n), Ok(v)) => (as_numeral(&n.term), as_numeral(&v)),
            (Err(e), _) => return Ok(budget_failure(e)),
            (_, Err(e)) => return Ok(Report::fail(format!("error: {e}"), json!({ "error": e.to_string() }))),
        };
        let good = direct.is_some() && direct == via;
        ok &= good;
        let show = |v: Option<u64>| v.map_or("not a numeral".to_string(), |n| n.to_string());
        lines.push(format!("direct: {}\ntranslated: {}", show(direct), show(via)));
        doc["run"] = json!({ "direct": direct, "translated": via, "ok": good });
    }
    doc["ok"] = json!(ok);
    Ok(if ok { Report::ok(lines.join("\n"), doc) } else { Report::fail(lines.join("\n"), doc) })
}

fn fuzz(suite: Suite, cases: usize, seed: u64, size: Option<usize>) -> Run {
    let size = size.unwrap_or(suite.default_size());
    if size == 0 {
        return Err(Failure::Input("--size must be positive".to_string()));
    }
    let start = Instant::now();
    let r = run_suite(suite, cases, seed, size);
    let (b_checked, b_bad) = b_step_stats();
    let mut text = format!(
        "{}: {} cases, {} checks, {} skipped, {} generation failures, {} violations ({:.2}s)\nB steps: {} checked, {} did not shrink",
        r.name,
        r.cases,
        r.checks,
        r.skipped,
        r.gen_failures,
        r.violations.len(),
        start.elapsed().as_secs_f64(),
        b_checked,
        b_bad
    );
    for v in r.violations.iter().take(5) {
        text.push_str(&format!("\n  {v}"));
    }
    let doc = json!({
        "property": r.name,
        "seed": seed,
        "size": size,
        "cases": r.cases,
        "checks": r.checks,
        "skipped": r.skipped,
        "generation_failures": r.gen_failures,
        "violations": r.violations,
        "b_steps": { "checked": b_checked, "violations": b_bad },
    });
    Ok(if r.ok() && b_bad == 0 { Report::ok(text, doc) } else { Report::fail(text, doc) })
}

fn join(file1: &Path, file2: &Path, budget: usize, rules: RuleSet) -> Run {
    let (d1, t1) = main_term(file1)?;
    let (d2, t2) = main_term(file2)?;
    if t1 != t2 {
        return Err(Failure::Type(format!("the terms have different types {t1} and {t2}")));
    }
    match join_search_detailed(term_of(&d1), term_of(&d2), budget, DEFAULT_STATE_CAP, rules) {
        JoinOutcome::Joined(t) => {
            let s = pretty_term(&t);
            Ok(Report::ok(s.clone(), json!({ "joined": true, "reduct": s })))
        }
        JoinOutcome::Apart => Ok(Report::fail(
            format!("no common reduct within {budget} steps"),
            json!({ "joined": false, "reason": "apart" }),
        )),
        JoinOutcome::Exhausted => Ok(Report::fail(
            format!("search gave up after {DEFAULT_STATE_CAP} states"),
            json!({ "joined": false, "reason": "exhausted" }),
        )),
    }
}
