//! One PASS or FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lmt_core::develop::{complete_dev, par_reduces_to};
use lmt_core::reduction::{b_step_stats, reducts};
use lmt_core::syntax::parse_term;
use lmt_core::testkit::{run_suite, Suite, SuiteReport};
use lmt_core::{alpha_eq, Expr};
use serde_json::Value;

const SEED: u64 = 2024;

type Check = Box<dyn Fn() -> Result<String, String>>;

fn example(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name).display().to_string()
}

fn lmt_json(args: &[&str]) -> Result<Value, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_lmt")).arg("--json").args(args).output().map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!("lmt {} exited with {:?}", args.join(" "), o.status.code()));
    }
    serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())
}

fn suite(s: Suite, cases: usize, size: usize) -> Result<SuiteReport, String> {
    let r = run_suite(s, cases, SEED, size);
    if !r.ok() {
        return Err(format!("{} violations, first: {}", r.violations.len(), r.violations[0]));
    }
    if r.gen_failures > 0 {
        return Err(format!("{} cases could not be generated", r.gen_failures));
    }
    Ok(r)
}

fn summary(r: &SuiteReport) -> String {
    format!("{} cases, {} checks, {} skipped, 0 violations", r.cases, r.checks, r.skipped)
}

fn worked_example() -> Result<String, String> {
    let doc = lmt_json(&["norm", &example("f_product.lmt")])?;
    let steps = doc["steps"].as_u64().unwrap_or(u64::MAX);
    let millis = doc["millis"].as_f64().unwrap_or(f64::MAX);
    if doc["normal_form"] != "0" {
        return Err(format!("normal form {}", doc["normal_form"]));
    }
    if steps > 2000 || millis >= 1000.0 {
        return Err(format!("{steps} steps in {millis:.1} ms"));
    }
    Ok(format!("F 2 = 0 in {steps} steps, {millis:.1} ms"))
}

fn restricted_successor() -> Result<String, String> {
    let start = Instant::now();
    let file = example("suc_restricted.lmt");
    let doc = lmt_json(&["norm", "--trace", &file])?;
    let chain: Vec<&str> = doc["trace"].as_array().ok_or("no trace")?.iter().filter_map(|s| s["rule"].as_str()).collect();
    if doc["normal_form"] != "4" || chain != ["mu-suc", "mu-N", "mu-i", "mu-eta"] {
        return Err(format!("got {} via {chain:?}", doc["normal_form"]));
    }
    let all = lmt_json(&["norm", "--all", &file])?;
    let prime = lmt_json(&["norm", "--all", "--unsafe-suc-prime", &file])?;
    let mut forms: Vec<&str> = prime["normal_forms"].as_array().ok_or("no forms")?.iter().filter_map(Value::as_str).collect();
    forms.sort();
    if all["normal_forms"] != serde_json::json!(["4"]) || forms != ["2", "4"] {
        return Err(format!("official {}, unrestricted {forms:?}", all["normal_forms"]));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("4 via {}; unrestricted rule gives {{2, 4}}", chain.join(", ")))
}

fn diagrams() -> Result<(), String> {
    for (src, join) in [
        ("(mu 'a:N -> N. ['a] mu 'g:N -> N. ['a] x) y", "mu 'a:N. ['a] x y"),
        ("mu 'a:N. ['a] (mu 'b:N -> N -> N. ['c] x) y z", "mu 'a:N. ['c] x"),
    ] {
        let t = parse_term(src).map_err(|e| e.to_string())?.0;
        let want = parse_term(join).map_err(|e| e.to_string())?.0;
        let dev = complete_dev(&t);
        if !alpha_eq(&dev, &want) {
            return Err(format!("{src} develops to {dev:?}"));
        }
        for r in reducts(&Expr::Term(t)) {
            if !par_reduces_to(&r.result, &Expr::Term(dev.clone())) {
                return Err(format!("{src}: reduct {:?} does not reach the join", r.result));
            }
        }
    }
    Ok(())
}

fn develop() -> Result<String, String> {
    let start = Instant::now();
    let r = suite(Suite::Develop, 300, 14)?;
    diagrams()?;
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{}; both diagrams join; {:.1}s", summary(&r), elapsed.as_secs_f64()))
}

fn cps() -> Result<String, String> {
    let typing = suite(Suite::CpsTyping, 300, 40)?;
    let semantics = suite(Suite::CpsSemantics, 200, 40)?;
    Ok(format!("typing {}; semantics {}", summary(&typing), summary(&semantics)))
}

fn postpone() -> Result<String, String> {
    let r = suite(Suite::Postpone, 300, Suite::Postpone.default_size())?;
    let pairs = r.checks + r.skipped;
    if pairs == 0 {
        return Err("no B-then-A pairs were generated".into());
    }
    let rate = r.skipped as f64 / pairs as f64;
    if rate >= 0.05 {
        return Err(format!("{} of {pairs} pairs exhausted the budget", r.skipped));
    }
    Ok(format!("{pairs} pairs, {} exhausted ({:.2}%), 0 violations", r.skipped, 100.0 * rate))
}

fn b_termination() -> Result<String, String> {
    let (checked, bad) = b_step_stats();
    if checked == 0 {
        return Err("no B steps were taken".into());
    }
    if bad > 0 {
        return Err(format!("{bad} of {checked} B steps did not shrink the term"));
    }
    Ok(format!("{checked} B steps, all shrinking"))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Check)> = vec![
        ("1 worked example", Box::new(worked_example)),
        ("2 restricted successor", Box::new(restricted_successor)),
        ("3 subject reduction", Box::new(|| suite(Suite::SubjectReduction, 500, 40).map(|r| summary(&r)))),
        ("4 normal forms", Box::new(|| suite(Suite::NormalForm, 500, 40).map(|r| summary(&r)))),
        ("5 complete development", Box::new(develop)),
        ("6 cps", Box::new(cps)),
        ("7 postponement", Box::new(postpone)),
        ("8 B termination", Box::new(b_termination)),
        ("9 catch and throw", Box::new(|| suite(Suite::CatchThrow, 50, Suite::CatchThrow.default_size()).map(|r| summary(&r)))),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
