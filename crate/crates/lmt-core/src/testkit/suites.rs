//! Property suites over generated terms, shared by the CLI and the tests.

use rayon::prelude::*;

use super::gen::{derive_seed, gen_law_instance, gen_typed, GenConfig};
use super::oracle::{oracle_normal_forms, postpone_check};
use crate::cps::{cps_env, cps_term, cps_type, identity_nat, lt_normalize};
use crate::develop::{dev_closes, par_reducts};
use crate::kernel::{as_numeral, is_value, Expr, Term, Type, TypeEnv};
use crate::reduction::{
    check_catch_throw_laws, join_search_detailed, normalize_with, reachable_within, reducts, JoinOutcome, Reach,
    RuleSet, Strategy, DEFAULT_MAX_STEPS, DEFAULT_STATE_CAP,
};
use crate::typing::infer_term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Confluence,
    SubjectReduction,
    NormalForm,
    Develop,
    Postpone,
    CatchThrow,
    CpsTyping,
    CpsSemantics,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Confluence,
        Suite::SubjectReduction,
        Suite::NormalForm,
        Suite::Develop,
        Suite::Postpone,
        Suite::CatchThrow,
        Suite::CpsTyping,
        Suite::CpsSemantics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Confluence => "confluence",
            Suite::SubjectReduction => "subject-reduction",
            Suite::NormalForm => "normal-form",
            Suite::Develop => "develop",
            Suite::Postpone => "postpone",
            Suite::CatchThrow => "catch-throw",
            Suite::CpsTyping => "cps-typing",
            Suite::CpsSemantics => "cps-semantics",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Term size used when none is given.
    pub fn default_size(self) -> usize {
        match self {
            Suite::Develop => 14,
            Suite::CatchThrow => 16,
            Suite::Confluence | Suite::Postpone => 24,
            _ => 40,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    /// Individual assertions evaluated.
    pub checks: usize,
    /// Cases or checks abandoned on a search or step budget.
    pub skipped: usize,
    /// Cases the generator could not produce.
    pub gen_failures: usize,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn absorb(&mut self, c: CaseResult) {
        self.checks += c.checks;
        self.skipped += c.skipped;
        self.gen_failures += c.gen_failed as usize;
        self.violations.extend(c.violations);
    }
}

#[derive(Default)]
struct CaseResult {
    checks: usize,
    skipped: usize,
    gen_failed: bool,
    violations: Vec<String>,
}

impl CaseResult {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(msg());
        }
    }
}

/// Free variables available to open-term suites.
pub fn open_env() -> TypeEnv {
    TypeEnv::new()
        .with_lam("x", Type::Nat)
        .with_lam("f", Type::arrow(Type::Nat, Type::Nat))
        .with_mu("a", Type::Nat)
        .with_mu("b", Type::arrow(Type::Nat, Type::Nat))
}

pub fn run_suite(suite: Suite, cases: usize, seed: u64, size: usize) -> SuiteReport {
    let results: Vec<CaseResult> =
        (0..cases as u64).into_par_iter().map(|i| run_case(suite, derive_seed(seed, i), size)).collect();
    let mut report = SuiteReport { name: suite.name().to_string(), cases, ..SuiteReport::default() };
    for r in results {
        report.absorb(r);
    }
    report
}

fn config(seed: u64, size: usize, closed: bool, target: Option<Type>) -> GenConfig {
    GenConfig { seed, max_nodes: size.max(1), arrow_depth: 2, mu_budget: 4, closed_only: closed, target_type: target }
}

fn run_case(suite: Suite, seed: u64, size: usize) -> CaseResult {
    let mut out = CaseResult::default();
    match suite {
        Suite::Confluence => confluence_case(seed, size, &mut out),
        Suite::SubjectReduction => subject_reduction_case(seed, size, &mut out),
        Suite::NormalForm => normal_form_case(seed, size, &mut out),
        Suite::Develop => develop_case(seed, size, &mut out),
        Suite::Postpone => postpone_case(seed, size, &mut out),
        Suite::CatchThrow => catch_throw_case(seed, size, &mut out),
        Suite::CpsTyping => cps_typing_case(seed, size, &mut out),
        Suite::CpsSemantics => cps_semantics_case(seed, size, &mut out),
    }
    out
}

fn generate(cfg: &GenConfig, env: &TypeEnv, out: &mut CaseResult) -> Option<Term> {
    let t = gen_typed(cfg, env).ok();
    out.gen_failed = t.is_none();
    t
}

fn confluence_case(seed: u64, size: usize, out: &mut CaseResult) {
    let closed_nat = seed.is_multiple_of(2);
    let env = open_env();
    let cfg = if closed_nat { config(seed, size, true, Some(Type::Nat)) } else { config(seed, size, false, None) };
    let Some(t) = generate(&cfg, &env, out) else { return };
    let rs = reducts(&Expr::Term(t.clone()));
    for (i, r1) in rs.iter().enumerate().take(4) {
        for r2 in rs.iter().skip(i + 1).take(3) {
            let (Expr::Term(a), Expr::Term(b)) = (&r1.result, &r2.result) else { continue };
            match join_search_detailed(a, b, 12, DEFAULT_STATE_CAP, RuleSet::STANDARD) {
                JoinOutcome::Joined(_) => out.checks += 1,
                JoinOutcome::Exhausted => out.skipped += 1,
                JoinOutcome::Apart => out.check(false, || format!("no common reduct of {a:?} and {b:?} from {t:?}")),
            }
        }
    }
    if closed_nat {
        match oracle_normal_forms(&t, DEFAULT_STATE_CAP, RuleSet::STANDARD) {
            Ok(nfs) => out.check(nfs.len() == 1 && as_numeral(&nfs[0]).is_some(), || {
                format!("{t:?} has normal forms {nfs:?}")
            }),
            Err(_) => out.skipped += 1,
        }
    }
}

fn subject_reduction_case(seed: u64, size: usize, out: &mut CaseResult) {
    let env = open_env();
    let Some(t) = generate(&config(seed, size, false, None), &env, out) else { return };
    let ty = infer_term(&env, &t).expect("generated terms are typed");
    for r in reducts(&Expr::Term(t.clone())) {
        let Expr::Term(u) = &r.result else { continue };
        let got = infer_term(&env, u);
        out.check(got.as_ref() == Ok(&ty), || {
            format!("{} step at {:?} of {t:?} gives {u:?} with {got:?}, expected {ty}", r.rule.name(), r.path)
        });
    }
}

fn normal_form_case(seed: u64, size: usize, out: &mut CaseResult) {
    let Some(t) = generate(&config(seed, size, true, Some(Type::Nat)), &TypeEnv::new(), out) else { return };
    let mut seen: Option<u64> = None;
    let strategies = [
        Strategy::LeftmostOutermost,
        Strategy::Random(derive_seed(seed, 1)),
        Strategy::Random(derive_seed(seed, 2)),
        Strategy::Random(derive_seed(seed, 3)),
    ];
    for s in strategies {
        match normalize_with(&t, s, DEFAULT_MAX_STEPS, RuleSet::STANDARD, false) {
            Err(_) => out.skipped += 1,
            Ok(n) => {
                let v = as_numeral(&n.term);
                out.check(v.is_some() && (seen.is_none() || seen == v), || {
                    format!("{t:?} normalizes under {s:?} to {:?}, other strategies gave {seen:?}", n.term)
                });
                seen = seen.or(v);
            }
        }
    }
    // With free continuation names, normal forms are values or `mu a.[b]v`.
    let env = TypeEnv::new().with_mu("a", Type::Nat).with_mu("b", Type::arrow(Type::Nat, Type::Nat));
    let cfg = config(derive_seed(seed, 4), size, false, None);
    if let Ok(u) = gen_typed(&cfg, &env) {
        if let Ok(n) = normalize_with(&u, Strategy::LeftmostOutermost, DEFAULT_MAX_STEPS, RuleSet::STANDARD, false) {
            out.check(normal_shape(&n.term), || format!("{u:?} has normal form {:?} of unexpected shape", n.term));
        } else {
            out.skipped += 1;
        }
    }
}

fn normal_shape(t: &Term) -> bool {
    match t {
        Term::Mu(_, _, c) => is_value(&c.body),
        _ => is_value(t),
    }
}

fn develop_case(seed: u64, size: usize, out: &mut CaseResult) {
    let env = open_env();
    let Some(t) = generate(&config(seed, size, false, None), &env, out) else { return };
    let e = Expr::Term(t.clone());
    match dev_closes(&e) {
        Ok(n) => out.checks += n,
        Err(v) => out.check(false, || format!("{:?} reduces in parallel to {:?} but not on to {:?}", v.t, v.reduct, v.dev)),
    }
    let par = par_reducts(&t);
    out.check(par.contains(&t), || format!("{t:?} is not a parallel reduct of itself"));
    for r in reducts(&e) {
        let Expr::Term(u) = &r.result else { continue };
        out.check(par.contains(u), || format!("one-step reduct {u:?} of {t:?} is not a parallel reduct"));
    }
    let fv = t.free_vars();
    for p in &par {
        let pv = p.free_vars();
        out.check(pv.lam.is_subset(&fv.lam) && pv.mu.is_subset(&fv.mu), || {
            format!("parallel reduct {p:?} of {t:?} has new free variables")
        });
        match reachable_within(&e, &Expr::Term(p.clone()), 2_000, RuleSet::STANDARD) {
            Reach::Found(_) => out.checks += 1,
            Reach::Exhausted => out.skipped += 1,
            Reach::Unreachable => out.check(false, || format!("parallel reduct {p:?} of {t:?} is not a reduct")),
        }
    }
}

/// State cap for the postponement search.
pub const POSTPONE_CAP: usize = 1_000;

fn postpone_case(seed: u64, size: usize, out: &mut CaseResult) {
    let env = open_env();
    let Some(t) = generate(&config(seed, size, false, None), &env, out) else { return };
    let r = postpone_check(&t, POSTPONE_CAP);
    out.checks += r.pairs - r.exhausted - r.violations.len();
    out.skipped += r.exhausted;
    for (t2, t3) in r.violations {
        out.check(false, || format!("{t:?} ->B {t2:?} ->A {t3:?} cannot be advanced"));
    }
}

fn catch_throw_case(seed: u64, size: usize, out: &mut CaseResult) {
    let inst = gen_law_instance(seed, size);
    let r = check_catch_throw_laws(std::slice::from_ref(&inst));
    out.checks += r.checked.iter().sum::<usize>() - r.violations.len();
    for v in r.violations {
        out.check(false, || format!("clause {}: {:?} does not reduce to {:?}", v.clause, v.lhs, v.rhs));
    }
}

fn cps_typing_case(seed: u64, size: usize, out: &mut CaseResult) {
    let env = open_env();
    let bottom = Type::Nat;
    let Some(t) = generate(&config(seed, size, false, None), &env, out) else { return };
    let ty = infer_term(&env, &t).expect("generated terms are typed");
    match cps_term(&env, &t, &bottom) {
        Err(e) => out.check(false, || format!("translation of {t:?} failed: {e}")),
        Ok(u) => {
            out.check(u.is_mu_free(), || format!("translation of {t:?} contains a mu"));
            let got = infer_term(&cps_env(&env, &bottom), &u);
            let want = cps_type(&ty, &bottom);
            out.check(got.as_ref() == Ok(&want), || format!("translation of {t:?} has type {got:?}, expected {want}"));
        }
    }
}

/// Step budget for evaluating translated terms.
pub const CPS_MAX_STEPS: usize = 1_000_000;

fn cps_semantics_case(seed: u64, size: usize, out: &mut CaseResult) {
    let Some(t) = generate(&config(seed, size, true, Some(Type::Nat)), &TypeEnv::new(), out) else { return };
    let Ok(n) = normalize_with(&t, Strategy::LeftmostOutermost, DEFAULT_MAX_STEPS, RuleSet::STANDARD, false) else {
        out.skipped += 1;
        return;
    };
    let src = as_numeral(&n.term);
    let translated = match cps_term(&TypeEnv::new(), &t, &Type::Nat) {
        Ok(u) => u,
        Err(e) => return out.check(false, || format!("translation of {t:?} failed: {e}")),
    };
    match lt_normalize(&Term::app(translated, identity_nat()), CPS_MAX_STEPS) {
        Err(_) => out.skipped += 1,
        Ok(v) => {
            let tgt = as_numeral(&v);
            out.check(src.is_some() && src == tgt, || format!("{t:?} evaluates to {src:?} but its translation to {tgt:?}"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("nope"), None);
        assert_eq!(Suite::Develop.default_size(), 14);
    }

    #[test]
    fn every_suite_passes_a_few_cases() {
        for s in Suite::ALL {
            let r = run_suite(s, 8, 11, s.default_size().min(16));
            assert_eq!(r.cases, 8);
            assert!(r.ok(), "{}: {:?}", r.name, r.violations);
        }
    }
}
