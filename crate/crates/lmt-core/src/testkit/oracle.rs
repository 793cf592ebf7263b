//! Exhaustive oracles over the reduction graph of small terms.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::kernel::{Expr, Term};
use crate::reduction::{classify, reducts_with, RuleClass, RuleSet};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("reduction graph has more than {0} states")]
    BudgetExceeded(usize),
}

/// Every normal form reachable from `t`, found by exploring at most `cap`
/// states.
pub fn oracle_normal_forms(t: &Term, cap: usize, rules: RuleSet) -> Result<Vec<Term>, OracleError> {
    let start = Expr::Term(t.clone());
    let mut seen: HashSet<Expr> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(e) = queue.pop_front() {
        let next = reducts_with(&e, rules);
        if next.is_empty() {
            if let Expr::Term(t) = e {
                out.push(t);
            }
            continue;
        }
        for r in next {
            if seen.insert(r.result.clone()) {
                if seen.len() > cap {
                    return Err(OracleError::BudgetExceeded(cap));
                }
                queue.push_back(r.result);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Length of the longest reduction from `t` using class A rules only.
pub fn max_reduction_length(t: &Term, cap: usize) -> Result<usize, OracleError> {
    let mut memo: HashMap<Expr, usize> = HashMap::new();
    longest(&Expr::Term(t.clone()), cap, &mut memo)
}

fn longest(e: &Expr, cap: usize, memo: &mut HashMap<Expr, usize>) -> Result<usize, OracleError> {
    if let Some(&n) = memo.get(e) {
        return Ok(n);
    }
    let mut best = 0;
    for r in reducts_with(e, RuleSet::STANDARD) {
        if classify(r.rule) == RuleClass::A {
            best = best.max(1 + longest(&r.result, cap, memo)?);
        }
    }
    if memo.len() >= cap {
        return Err(OracleError::BudgetExceeded(cap));
    }
    memo.insert(e.clone(), best);
    Ok(best)
}

/// Outcome of checking that a B step followed by an A step can be replaced
/// by an A step followed by any steps.
#[derive(Clone, Debug, Default)]
pub struct PostponeReport {
    /// `(B, A)` step pairs examined.
    pub pairs: usize,
    /// Pairs whose search hit the state cap.
    pub exhausted: usize,
    /// `(t2, t3)` with `t1 ->B t2 ->A t3` and no `t1 ->A t4 ->> t3`.
    pub violations: Vec<(Term, Term)>,
}

impl PostponeReport {
    pub fn merge(&mut self, other: PostponeReport) {
        self.pairs += other.pairs;
        self.exhausted += other.exhausted;
        self.violations.extend(other.violations);
    }
}

pub fn postpone_check(t1: &Term, cap: usize) -> PostponeReport {
    let start = Expr::Term(t1.clone());
    let mut report = PostponeReport::default();
    let all = reducts_with(&start, RuleSet::STANDARD);
    let a_reducts: Vec<Expr> =
        all.iter().filter(|r| classify(r.rule) == RuleClass::A).map(|r| r.result.clone()).collect();
    for b in all.iter().filter(|r| classify(r.rule) == RuleClass::B) {
        for a in reducts_with(&b.result, RuleSet::STANDARD) {
            if classify(a.rule) != RuleClass::A {
                continue;
            }
            report.pairs += 1;
            match reaches_from_any(&a_reducts, &a.result, cap) {
                Some(true) => {}
                Some(false) => {
                    if let (Expr::Term(t2), Expr::Term(t3)) = (&b.result, &a.result) {
                        report.violations.push((t2.clone(), t3.clone()));
                    }
                }
                None => report.exhausted += 1,
            }
        }
    }
    report
}

/// Multi-source search; `None` when the cap is hit.
fn reaches_from_any(sources: &[Expr], target: &Expr, cap: usize) -> Option<bool> {
    let mut seen: HashSet<Expr> = sources.iter().cloned().collect();
    let mut queue: VecDeque<Expr> = sources.iter().cloned().collect();
    while let Some(e) = queue.pop_front() {
        if &e == target {
            return Some(true);
        }
        for r in reducts_with(&e, RuleSet::STANDARD) {
            if seen.insert(r.result.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(r.result);
            }
        }
    }
    Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::numeral;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap().0
    }

    #[test]
    fn normal_forms() {
        assert_eq!(oracle_normal_forms(&numeral(2), 100, RuleSet::STANDARD), Ok(vec![numeral(2)]));
        let u = t("mu 'a:N. ['a] S (mu 'b:N. ['a] 0)");
        assert_eq!(oracle_normal_forms(&u, 100, RuleSet::STANDARD), Ok(vec![Term::Zero]));
    }

    #[test]
    fn unrestricted_successor_breaks_confluence() {
        let u = t("catch 'a nrec{N}(0; \\x:N. \\h:N. 2; S (throw 4 'a))");
        assert_eq!(oracle_normal_forms(&u, 1000, RuleSet::STANDARD), Ok(vec![numeral(4)]));
        let mut forms = oracle_normal_forms(&u, 1000, RuleSet::SUC_PRIME).unwrap();
        forms.sort_by_key(|f| f.size());
        assert_eq!(forms, vec![numeral(2), numeral(4)]);
    }

    #[test]
    fn budget() {
        let u = t("nrec{N}(0; \\x:N. \\y:N. S y; 6)");
        assert_eq!(oracle_normal_forms(&u, 2, RuleSet::STANDARD), Err(OracleError::BudgetExceeded(2)));
    }

    #[test]
    fn longest_a_sequences() {
        assert_eq!(max_reduction_length(&numeral(5), 100), Ok(0));
        assert_eq!(max_reduction_length(&t("(\\x:N. x) 0"), 100), Ok(1));
        // nrec-suc, beta, beta, nrec-suc, beta, beta, nrec-0
        assert_eq!(max_reduction_length(&t("nrec{N}(0; \\x:N. \\y:N. S y; 2)"), 1000), Ok(7));
        // B steps do not count
        assert_eq!(max_reduction_length(&t("catch 'a 0"), 100), Ok(0));
    }

    #[test]
    fn postponement() {
        let r = postpone_check(&t("(\\x:N. x) (mu 'a:N. ['a] mu 'b:N. ['b] 0)"), 1000);
        assert!(r.pairs > 0);
        assert!(r.violations.is_empty() && r.exhausted == 0);
        let r = postpone_check(&t("S (mu 'a:N. ['a] mu 'b:N. ['a] x)"), 1000);
        assert!(r.pairs > 0);
        assert!(r.violations.is_empty() && r.exhausted == 0);
        let r = postpone_check(&t("(\\x:N. x) 0"), 1000);
        assert_eq!(r.pairs, 0);
        assert!(r.violations.is_empty());
    }
}
