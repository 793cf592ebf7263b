//! One-step reduction, its compatible closure, and normalization.
//!
//! ```text
//! (β)     (\x.t) r            -> t[x := r]
//! (μsuc)  suc (mu a.c)        -> mu a.c[a := a (suc □)]
//! (μR)    (mu a.c) s          -> mu a.c[a := a (□ s)]
//! (μη)    mu a.[a]t           -> t                      if a not in FCV t
//! (μi)    [a] mu b.c          -> c[b := a □]
//! (0)     nrec r s 0          -> r
//! (suc)   nrec r s (suc n)    -> s n (nrec r s n)       n a numeral
//! (μN)    nrec r s (mu a.c)   -> mu a.c[a := a (nrec r s □)]
//! ```
//!
//! Lifting a mu binder through a frame re-annotates it with the frame's
//! result type, so reducts of well-typed terms stay well-typed.

mod join;
mod laws;

pub use join::{
    join_search, join_search_detailed, reachable_filtered, reachable_within, JoinOutcome, Reach, DEFAULT_STATE_CAP,
};
pub use laws::{check_catch_throw_laws, LawInstance, LawReport, LawViolation, CLAUSES};

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kernel::{as_numeral, Command, EvalContext, Expr, ExprRef, Frame, Term, Type, Var};
use crate::subst;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    Beta,
    MuSuc,
    MuR,
    MuEta,
    MuI,
    NRecZero,
    NRecSuc,
    MuNat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleClass {
    A,
    B,
}

impl RuleTag {
    pub const ALL: [RuleTag; 8] = [
        RuleTag::Beta,
        RuleTag::MuSuc,
        RuleTag::MuR,
        RuleTag::MuEta,
        RuleTag::MuI,
        RuleTag::NRecZero,
        RuleTag::NRecSuc,
        RuleTag::MuNat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Beta => "beta",
            RuleTag::MuSuc => "mu-suc",
            RuleTag::MuR => "mu-R",
            RuleTag::MuEta => "mu-eta",
            RuleTag::MuI => "mu-i",
            RuleTag::NRecZero => "nrec-0",
            RuleTag::NRecSuc => "nrec-suc",
            RuleTag::MuNat => "mu-N",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleTag> {
        RuleTag::ALL.into_iter().find(|r| r.name() == s)
    }

    /// True for the three rules that move a mu binder out of a frame.
    pub fn is_lifting(self) -> bool {
        matches!(self, RuleTag::MuSuc | RuleTag::MuR | RuleTag::MuNat)
    }
}

pub fn classify(rule: RuleTag) -> RuleClass {
    match rule {
        RuleTag::MuEta | RuleTag::MuI => RuleClass::B,
        _ => RuleClass::A,
    }
}

/// Which rules are active.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RuleSet {
    /// The five mu rules.
    pub mu: bool,
    /// Let `nrec r s (suc t)` fire for any `t`, not only numerals.
    pub unrestricted_suc: bool,
}

impl RuleSet {
    pub const STANDARD: RuleSet = RuleSet { mu: true, unrestricted_suc: false };
    /// The standard rules with the unrestricted successor rule; not confluent.
    pub const SUC_PRIME: RuleSet = RuleSet { mu: true, unrestricted_suc: true };
    /// Reduction of the mu-free fragment.
    pub const LAMBDA_T: RuleSet = RuleSet { mu: false, unrestricted_suc: true };
}

impl Default for RuleSet {
    fn default() -> RuleSet {
        RuleSet::STANDARD
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub path: Vec<usize>,
    pub rule: RuleTag,
    /// The whole subject after contracting at `path`.
    pub result: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("step budget of {budget} exceeded")]
    StepBudgetExceeded { budget: usize, last: Box<Term> },
    #[error("no {rule:?} redex at path {path:?}")]
    NoSuchRedex { path: Vec<usize>, rule: RuleTag },
}

static B_STEPS: AtomicU64 = AtomicU64::new(0);
static B_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// `(checked, violations)`: every mu-eta and mu-i contraction ever performed
/// in this process, and how many of them failed to shrink the term.
pub fn b_step_stats() -> (u64, u64) {
    (B_STEPS.load(Ordering::Relaxed), B_VIOLATIONS.load(Ordering::Relaxed))
}

/// The rule firing at the root of `e`, if any. At most one rule applies at
/// any position.
pub fn root_rule(e: ExprRef<'_>, rules: RuleSet) -> Option<RuleTag> {
    match e {
        ExprRef::Command(c) => match &*c.body {
            Term::Mu(..) if rules.mu => Some(RuleTag::MuI),
            _ => None,
        },
        ExprRef::Term(t) => match t {
            Term::App(f, _) => match &**f {
                Term::Lam(..) => Some(RuleTag::Beta),
                Term::Mu(..) if rules.mu => Some(RuleTag::MuR),
                _ => None,
            },
            Term::Suc(u) => match &**u {
                Term::Mu(..) if rules.mu => Some(RuleTag::MuSuc),
                _ => None,
            },
            Term::Mu(_, _, c) if rules.mu && is_eta_body(c) => Some(RuleTag::MuEta),
            Term::NRec(_, _, _, u) => match &**u {
                Term::Zero => Some(RuleTag::NRecZero),
                Term::Suc(n) if rules.unrestricted_suc || as_numeral(n).is_some() => Some(RuleTag::NRecSuc),
                Term::Mu(..) if rules.mu => Some(RuleTag::MuNat),
                _ => None,
            },
            _ => None,
        },
    }
}

/// `[a]t` directly under `mu a` with `a` not free in `t`.
pub(crate) fn is_eta_body(c: &Command) -> bool {
    c.target == Var::Bound(0) && !subst::mu_index_occurs(&c.body, 0)
}

/// Contracts the `rule` redex at the root of `e`.
pub fn contract(e: ExprRef<'_>, rule: RuleTag) -> Option<Expr> {
    let out = match (e, rule) {
        (ExprRef::Command(c), RuleTag::MuI) => match &*c.body {
            Term::Mu(_, _, inner) => Expr::Command(subst::retarget_bound(inner, &c.target, &EvalContext::hole())),
            _ => return None,
        },
        (ExprRef::Term(t), _) => Expr::Term(contract_term(t, rule)?),
        _ => return None,
    };
    if classify(rule) == RuleClass::B {
        let before = match e {
            ExprRef::Term(t) => t.size(),
            ExprRef::Command(c) => c.size(),
        };
        B_STEPS.fetch_add(1, Ordering::Relaxed);
        if out.size() >= before {
            B_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
            debug_assert!(false, "B step did not shrink the term");
        }
    }
    Some(out)
}

fn lift(h: &crate::kernel::Hint, annot: &Type, c: &Command, frame: Frame) -> Term {
    let ty = frame.result_type(annot);
    Term::Mu(h.clone(), ty, subst::lift_bound(c, &EvalContext::singular(frame)))
}

fn contract_term(t: &Term, rule: RuleTag) -> Option<Term> {
    match (rule, t) {
        (RuleTag::Beta, Term::App(f, r)) => match &**f {
            Term::Lam(_, _, body) => Some(subst::instantiate_lam(body, r)),
            _ => None,
        },
        (RuleTag::MuR, Term::App(f, s)) => match &**f {
            Term::Mu(h, annot, c) => Some(lift(h, annot, c, Frame::App((**s).clone()))),
            _ => None,
        },
        (RuleTag::MuSuc, Term::Suc(u)) => match &**u {
            Term::Mu(h, annot, c) => Some(lift(h, annot, c, Frame::Suc)),
            _ => None,
        },
        (RuleTag::MuNat, Term::NRec(ty, r, s, u)) => match &**u {
            Term::Mu(h, annot, c) => Some(lift(h, annot, c, Frame::NRec(ty.clone(), (**r).clone(), (**s).clone()))),
            _ => None,
        },
        (RuleTag::MuEta, Term::Mu(_, _, c)) if is_eta_body(c) => Some(subst::unshift_mu(&c.body)),
        (RuleTag::NRecZero, Term::NRec(_, r, _, u)) if **u == Term::Zero => Some((**r).clone()),
        (RuleTag::NRecSuc, Term::NRec(ty, r, s, u)) => match &**u {
            Term::Suc(n) => Some(Term::app(
                Term::App(s.clone(), n.clone()),
                Term::NRec(ty.clone(), r.clone(), s.clone(), n.clone()),
            )),
            _ => None,
        },
        _ => None,
    }
}

/// All rule instances at the root of `t`.
pub fn root_step(t: &Term) -> Vec<(RuleTag, Term)> {
    root_step_with(t, RuleSet::STANDARD)
}

pub fn root_step_with(t: &Term, rules: RuleSet) -> Vec<(RuleTag, Term)> {
    let Some(rule) = root_rule(ExprRef::Term(t), rules) else {
        return Vec::new();
    };
    match contract_term(t, rule) {
        Some(r) => vec![(rule, r)],
        None => Vec::new(),
    }
}

/// `[a] mu b.c -> c[b := a □]` at the root of a command.
pub fn root_step_command(c: &Command) -> Option<Command> {
    match contract(ExprRef::Command(c), RuleTag::MuI)? {
        Expr::Command(c) => Some(c),
        Expr::Term(_) => None,
    }
}

/// Redex positions in pre-order.
pub fn redex_sites(e: &Expr, rules: RuleSet) -> Vec<(Vec<usize>, RuleTag)> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    visit(as_ref(e), rules, &mut path, &mut |p, r| {
        out.push((p.to_vec(), r));
        false
    });
    out
}

/// The leftmost-outermost redex position.
pub fn first_site(e: &Expr, rules: RuleSet) -> Option<(Vec<usize>, RuleTag)> {
    let mut out = None;
    let mut path = Vec::new();
    visit(as_ref(e), rules, &mut path, &mut |p, r| {
        out = Some((p.to_vec(), r));
        true
    });
    out
}

pub fn as_ref(e: &Expr) -> ExprRef<'_> {
    match e {
        Expr::Term(t) => ExprRef::Term(t),
        Expr::Command(c) => ExprRef::Command(c),
    }
}

/// Calls `f` on every redex in pre-order; stops once `f` returns true.
fn visit(
    e: ExprRef<'_>,
    rules: RuleSet,
    path: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize], RuleTag) -> bool,
) -> bool {
    if let Some(rule) = root_rule(e, rules) {
        if f(path, rule) {
            return true;
        }
    }
    let children: Vec<ExprRef<'_>> = match e {
        ExprRef::Command(c) => vec![ExprRef::Term(&c.body)],
        ExprRef::Term(t) => (0..3).map_while(|i| t.child(i)).collect(),
    };
    for (i, child) in children.into_iter().enumerate() {
        path.push(i);
        let stop = visit(child, rules, path, f);
        path.pop();
        if stop {
            return true;
        }
    }
    false
}

/// The subexpression at `path`.
pub fn subexpr_at<'a>(e: &'a Expr, path: &[usize]) -> Option<ExprRef<'a>> {
    let mut cur = as_ref(e);
    for &i in path {
        cur = match cur {
            ExprRef::Command(c) if i == 0 => ExprRef::Term(&c.body),
            ExprRef::Command(_) => return None,
            ExprRef::Term(t) => t.child(i)?,
        };
    }
    Some(cur)
}

/// Rebuilds `e` with the subexpression at `path` replaced by `f` of it.
pub fn replace_at(e: &Expr, path: &[usize], f: &mut dyn FnMut(ExprRef<'_>) -> Option<Expr>) -> Option<Expr> {
    match e {
        Expr::Term(t) => replace_term(t, path, f).map(Expr::Term),
        Expr::Command(c) => replace_cmd(c, path, f).map(Expr::Command),
    }
}

fn replace_term(t: &Term, path: &[usize], f: &mut dyn FnMut(ExprRef<'_>) -> Option<Expr>) -> Option<Term> {
    let Some((&i, rest)) = path.split_first() else {
        return match f(ExprRef::Term(t))? {
            Expr::Term(r) => Some(r),
            Expr::Command(_) => None,
        };
    };
    let sub = |u: &Arc<Term>, f: &mut dyn FnMut(ExprRef<'_>) -> Option<Expr>| replace_term(u, rest, f).map(Arc::new);
    Some(match (t, i) {
        (Term::Lam(h, ty, b), 0) => Term::Lam(h.clone(), ty.clone(), sub(b, f)?),
        (Term::App(a, b), 0) => Term::App(sub(a, f)?, b.clone()),
        (Term::App(a, b), 1) => Term::App(a.clone(), sub(b, f)?),
        (Term::Mu(h, ty, c), 0) => Term::Mu(h.clone(), ty.clone(), replace_cmd(c, rest, f)?),
        (Term::Suc(u), 0) => Term::Suc(sub(u, f)?),
        (Term::NRec(ty, r, s, u), 0) => Term::NRec(ty.clone(), sub(r, f)?, s.clone(), u.clone()),
        (Term::NRec(ty, r, s, u), 1) => Term::NRec(ty.clone(), r.clone(), sub(s, f)?, u.clone()),
        (Term::NRec(ty, r, s, u), 2) => Term::NRec(ty.clone(), r.clone(), s.clone(), sub(u, f)?),
        _ => return None,
    })
}

fn replace_cmd(c: &Command, path: &[usize], f: &mut dyn FnMut(ExprRef<'_>) -> Option<Expr>) -> Option<Command> {
    let Some((&i, rest)) = path.split_first() else {
        return match f(ExprRef::Command(c))? {
            Expr::Command(r) => Some(r),
            Expr::Term(_) => None,
        };
    };
    if i != 0 {
        return None;
    }
    Some(Command { target: c.target.clone(), body: Arc::new(replace_term(&c.body, rest, f)?) })
}

/// Contracts the `rule` redex at `path`.
pub fn contract_at(e: &Expr, path: &[usize], rule: RuleTag) -> Result<Expr, ReductionError> {
    replace_at(e, path, &mut |sub| contract(sub, rule))
        .ok_or_else(|| ReductionError::NoSuchRedex { path: path.to_vec(), rule })
}

/// Every one-step reduct, in pre-order.
pub fn reducts(e: &Expr) -> Vec<Redex> {
    reducts_with(e, RuleSet::STANDARD)
}

pub fn reducts_with(e: &Expr, rules: RuleSet) -> Vec<Redex> {
    redex_sites(e, rules)
        .into_iter()
        .map(|(path, rule)| {
            let result = contract_at(e, &path, rule).expect("site found by enumeration contracts");
            Redex { path, rule, result }
        })
        .collect()
}

/// One-step reducts of a term.
pub fn term_reducts(t: &Term, rules: RuleSet) -> Vec<(RuleTag, Term)> {
    reducts_with(&Expr::Term(t.clone()), rules)
        .into_iter()
        .filter_map(|r| match r.result {
            Expr::Term(u) => Some((r.rule, u)),
            Expr::Command(_) => None,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    /// Picks a uniformly random redex at every step.
    Random(u64),
}

pub const DEFAULT_MAX_STEPS: usize = 100_000;

#[derive(Clone, Debug)]
pub struct Normalized {
    pub term: Term,
    pub steps: usize,
    /// Empty unless a trace was requested.
    pub trace: Vec<Redex>,
}

/// Normal form and full trace under the standard rules.
pub fn normalize(t: &Term, strategy: Strategy, max_steps: usize) -> Result<(Term, Vec<Redex>), ReductionError> {
    let n = normalize_with(t, strategy, max_steps, RuleSet::STANDARD, true)?;
    Ok((n.term, n.trace))
}

/// Normal form under the standard rules, no trace.
pub fn normal_form(t: &Term, strategy: Strategy, max_steps: usize) -> Result<Term, ReductionError> {
    normalize_with(t, strategy, max_steps, RuleSet::STANDARD, false).map(|n| n.term)
}

pub fn normalize_with(
    t: &Term,
    strategy: Strategy,
    max_steps: usize,
    rules: RuleSet,
    record_trace: bool,
) -> Result<Normalized, ReductionError> {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::LeftmostOutermost => None,
    };
    let mut cur = Expr::Term(t.clone());
    let mut trace = Vec::new();
    let mut steps = 0;
    loop {
        let site = match rng.as_mut() {
            None => first_site(&cur, rules),
            Some(rng) => {
                let mut sites = redex_sites(&cur, rules);
                if sites.is_empty() {
                    None
                } else {
                    let k = rng.random_range(0..sites.len());
                    Some(sites.swap_remove(k))
                }
            }
        };
        let Some((path, rule)) = site else {
            let Expr::Term(term) = cur else { unreachable!("terms reduce to terms") };
            return Ok(Normalized { term, steps, trace });
        };
        if steps >= max_steps {
            let Expr::Term(last) = cur else { unreachable!("terms reduce to terms") };
            return Err(ReductionError::StepBudgetExceeded { budget: max_steps, last: Box::new(last) });
        }
        cur = contract_at(&cur, &path, rule)?;
        steps += 1;
        if record_trace {
            trace.push(Redex { path, rule, result: cur.clone() });
        }
    }
}

/// Re-applies a trace's `(path, rule)` pairs to `t`.
pub fn replay(t: &Term, trace: &[(Vec<usize>, RuleTag)], rules: RuleSet) -> Result<Term, ReductionError> {
    let mut cur = Expr::Term(t.clone());
    for (path, rule) in trace {
        if root_rule(subexpr_at(&cur, path).ok_or_else(|| missing(path, *rule))?, rules) != Some(*rule) {
            return Err(missing(path, *rule));
        }
        cur = contract_at(&cur, path, *rule)?;
    }
    match cur {
        Expr::Term(t) => Ok(t),
        Expr::Command(_) => unreachable!("terms reduce to terms"),
    }
}

fn missing(path: &[usize], rule: RuleTag) -> ReductionError {
    ReductionError::NoSuchRedex { path: path.to_vec(), rule }
}

/// True when no standard rule applies anywhere.
pub fn is_normal(e: &Expr) -> bool {
    first_site(e, RuleSet::STANDARD).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::numeral;
    use crate::syntax::{parse_program, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap().0
    }

    fn restricted() -> Term {
        t("catch 'a nrec{N}(0; \\x:N. \\h:N. 2; S (throw 4 'a))")
    }

    #[test]
    fn root_steps() {
        assert_eq!(root_step(&t("(\\x:N. x) 0")), vec![(RuleTag::Beta, Term::Zero)]);
        assert_eq!(root_step(&t("S (catch 'a 4)")), vec![(RuleTag::MuSuc, t("catch 'a 5"))]);
        assert!(root_step(&numeral(3)).is_empty());
    }

    #[test]
    fn restricted_successor_rule() {
        let u = t("nrec{N}(0; \\x:N. \\h:N. 2; S (throw 4 'a))");
        assert!(root_step(&u).is_empty());
        let rules: Vec<_> = root_step_with(&u, RuleSet::SUC_PRIME).into_iter().map(|(r, _)| r).collect();
        assert_eq!(rules, vec![RuleTag::NRecSuc]);
        let v = t("nrec{N}(0; \\x:N. \\h:N. 2; 2)");
        assert_eq!(root_step(&v).iter().map(|(r, _)| *r).collect::<Vec<_>>(), vec![RuleTag::NRecSuc]);
        assert_eq!(root_step(&t("nrec{N}(1; \\x:N. \\h:N. 2; 0)")), vec![(RuleTag::NRecZero, numeral(1))]);
    }

    #[test]
    fn command_steps() {
        let c = Command::new("a", t("mu 'b:N. ['b] S (throw 0 'b)"));
        let r = root_step_command(&c).unwrap();
        assert_eq!(r, Command::new("a", t("S (throw 0 'a)")));
    }

    #[test]
    fn reduct_listing() {
        assert!(reducts(&Expr::Term(numeral(3))).is_empty());
        let rs = reducts(&Expr::Term(restricted()));
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].rule, RuleTag::MuSuc);
        let rs = reducts(&Expr::Term(t("(mu 'a:N -> N. ['a] mu 'g:N -> N. ['a] x) y")));
        assert!(rs.iter().any(|r| r.rule == RuleTag::MuR && r.path.is_empty()));
        assert!(rs.iter().any(|r| r.rule == RuleTag::MuI && !r.path.is_empty()));
    }

    #[test]
    fn product_program() {
        let p = parse_program(include_str!("../../../lmt-cli/examples/f_product.lmt")).unwrap();
        let main = p.main().expr.as_term().unwrap().clone();
        let n = normalize_with(&main, Strategy::LeftmostOutermost, 2000, RuleSet::STANDARD, false).unwrap();
        assert_eq!(n.term, Term::Zero);
    }

    #[test]
    fn restricted_example_chain() {
        let (nf, trace) = normalize(&restricted(), Strategy::LeftmostOutermost, 100).unwrap();
        assert_eq!(nf, numeral(4));
        let rules: Vec<_> = trace.iter().map(|r| r.rule).collect();
        assert_eq!(rules, vec![RuleTag::MuSuc, RuleTag::MuNat, RuleTag::MuI, RuleTag::MuEta]);
        let replayed: Vec<_> = trace.iter().map(|r| (r.path.clone(), r.rule)).collect();
        assert_eq!(replay(&restricted(), &replayed, RuleSet::STANDARD), Ok(numeral(4)));
    }

    #[test]
    fn rejected_normal_form_reduces() {
        let u = t("mu 'a:N. ['a] S (mu 'b:N. ['a] 0)");
        assert_eq!(normal_form(&u, Strategy::LeftmostOutermost, 100), Ok(Term::Zero));
        for seed in 0..5 {
            assert_eq!(normal_form(&u, Strategy::Random(seed), 100), Ok(Term::Zero));
        }
    }

    #[test]
    fn budget_is_reported() {
        let p = parse_program(include_str!("../../../lmt-cli/examples/f_product.lmt")).unwrap();
        let main = p.main().expr.as_term().unwrap().clone();
        assert!(matches!(normal_form(&main, Strategy::LeftmostOutermost, 3), Err(ReductionError::StepBudgetExceeded { budget: 3, .. })));
    }

    #[test]
    fn replay_rejects_missing_redexes() {
        let err = replay(&numeral(1), &[(vec![], RuleTag::Beta)], RuleSet::STANDARD);
        assert!(matches!(err, Err(ReductionError::NoSuchRedex { .. })));
    }

    #[test]
    fn joins() {
        let top = t("(mu 'a:N -> N. ['a] mu 'g:N -> N. ['a] x) y");
        let rs = reducts(&Expr::Term(top));
        let (l, r) = (rs[0].result.as_term().unwrap(), rs[1].result.as_term().unwrap());
        assert_eq!(join_search(l, r, 4), Some(t("catch 'a (x y)")));
        let top = t("mu 'a:N. ['a] (mu 'b:N -> N -> N. ['c] x) y z");
        let rs = reducts(&Expr::Term(top));
        assert_eq!(rs.len(), 2);
        let (l, r) = (rs[0].result.as_term().unwrap(), rs[1].result.as_term().unwrap());
        let j = join_search(l, r, 4).unwrap();
        assert_eq!(j, t("(throw x 'c) z"));
        let nf = t("mu 'b:N. ['c] x");
        for u in [l, r, &j] {
            assert_eq!(normal_form(u, Strategy::LeftmostOutermost, 10).as_ref(), Ok(&nf));
        }
        assert_eq!(join_search(&numeral(2), &numeral(2), 0), Some(numeral(2)));
        assert_eq!(join_search(&numeral(2), &numeral(3), 3), None);
    }

    #[test]
    fn rule_classes() {
        assert_eq!(classify(RuleTag::Beta), RuleClass::A);
        assert_eq!(classify(RuleTag::MuEta), RuleClass::B);
        assert_eq!(classify(RuleTag::MuI), RuleClass::B);
        assert_eq!(classify(RuleTag::MuNat), RuleClass::A);
        for r in RuleTag::ALL {
            assert_eq!(RuleTag::from_name(r.name()), Some(r));
        }
    }

    #[test]
    fn catch_throw_examples() {
        let six = t("catch 'a (throw 0 'a)");
        assert!(reducts(&Expr::Term(six)).iter().any(|r| r.rule == RuleTag::MuI && r.result == Expr::Term(t("catch 'a 0"))));
        assert_eq!(root_step(&t("catch 'a 0")), vec![(RuleTag::MuEta, Term::Zero)]);
        let inst = LawInstance {
            a: "a".into(),
            b: "b".into(),
            ty: Type::Nat,
            t: t("S (throw 1 'b)"),
            ctx: EvalContext::suc_ctx(EvalContext::hole()),
        };
        let report = check_catch_throw_laws(&[inst]);
        assert!(report.ok(), "{:?}", report.violations);
        assert_eq!(report.checked, [1; CLAUSES]);
    }

    #[test]
    fn singular_contexts_lift_in_one_step() {
        let body = Command::new("a", Term::Zero);
        let mu = Term::mu("a", Type::Nat, body.clone());
        let frames = [
            EvalContext::suc_ctx(EvalContext::hole()),
            EvalContext::nrec_ctx(Type::Nat, Term::Zero, t("\\x:N. \\h:N. h"), EvalContext::hole()),
        ];
        for e in frames {
            let expected = Term::mu("a", Type::Nat, subst::subst_struct_cmd(&body, "a", "a", &e));
            let lifted: Vec<_> = root_step(&e.plug(mu.clone())).into_iter().filter(|(r, _)| r.is_lifting()).collect();
            assert_eq!(lifted.len(), 1);
            assert_eq!(lifted[0].1, expected);
        }
    }

    #[test]
    fn b_steps_shrink() {
        normal_form(&restricted(), Strategy::LeftmostOutermost, 100).unwrap();
        let (checked, violations) = b_step_stats();
        assert!(checked > 0);
        assert_eq!(violations, 0);
    }
}
