//! Bounded breadth-first searches over the reduction graph.

use std::collections::{HashMap, VecDeque};

use super::{reducts_with, RuleSet};
use crate::kernel::{Expr, Term};

/// States explored per side before a search gives up.
pub const DEFAULT_STATE_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinOutcome {
    Joined(Term),
    /// Both reduction graphs were explored to the depth bound without meeting.
    Apart,
    /// The state cap was hit first.
    Exhausted,
}

/// A common reduct of `a` and `b` reachable within `budget` steps from each,
/// minimising the total number of steps.
pub fn join_search(a: &Term, b: &Term, budget: usize) -> Option<Term> {
    match join_search_detailed(a, b, budget, DEFAULT_STATE_CAP, RuleSet::STANDARD) {
        JoinOutcome::Joined(t) => Some(t),
        _ => None,
    }
}

struct Levels {
    levels: Vec<Vec<Expr>>,
    depth: HashMap<Expr, usize>,
    rules: RuleSet,
}

impl Levels {
    fn new(start: Expr, rules: RuleSet) -> Levels {
        let mut depth = HashMap::new();
        depth.insert(start.clone(), 0);
        Levels { levels: vec![vec![start]], depth, rules }
    }

    /// Makes level `d` available; false once the state cap is hit.
    fn ensure(&mut self, d: usize, cap: usize) -> bool {
        while self.levels.len() <= d {
            let next_depth = self.levels.len();
            let mut next = Vec::new();
            for e in self.levels.last().expect("level 0 exists") {
                for r in reducts_with(e, self.rules) {
                    if !self.depth.contains_key(&r.result) {
                        self.depth.insert(r.result.clone(), next_depth);
                        next.push(r.result);
                    }
                }
            }
            if self.depth.len() > cap {
                return false;
            }
            self.levels.push(next);
        }
        true
    }

    /// Depth of the first empty level, once the whole graph is known.
    fn first_empty(&self) -> Option<usize> {
        self.levels.iter().position(|l| l.is_empty())
    }
}

pub fn join_search_detailed(a: &Term, b: &Term, budget: usize, cap: usize, rules: RuleSet) -> JoinOutcome {
    let mut left = Levels::new(Expr::Term(a.clone()), rules);
    let mut right = Levels::new(Expr::Term(b.clone()), rules);
    for total in 0..=2 * budget {
        let lo = total.saturating_sub(budget);
        let hi = total.min(budget);
        for da in lo..=hi {
            let db = total - da;
            if !left.ensure(da, cap) || !right.ensure(db, cap) {
                return JoinOutcome::Exhausted;
            }
            for e in &left.levels[da] {
                if right.depth.get(e) == Some(&db) {
                    if let Expr::Term(t) = e {
                        return JoinOutcome::Joined(t.clone());
                    }
                }
            }
        }
        if let (Some(l), Some(r)) = (left.first_empty(), right.first_empty()) {
            if total >= l + r {
                return JoinOutcome::Apart;
            }
        }
    }
    JoinOutcome::Apart
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reach {
    /// Reached after this many steps.
    Found(usize),
    Unreachable,
    Exhausted,
}

/// Is `target` reachable from `from` in zero or more steps?
pub fn reachable_within(from: &Expr, target: &Expr, cap: usize, rules: RuleSet) -> Reach {
    reachable_filtered(from, target, cap, rules, &|_| true)
}

/// As [`reachable_within`], following only the rules `allow` accepts.
pub fn reachable_filtered(
    from: &Expr,
    target: &Expr,
    cap: usize,
    rules: RuleSet,
    allow: &dyn Fn(super::RuleTag) -> bool,
) -> Reach {
    let mut seen: HashMap<Expr, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(from.clone(), 0);
    queue.push_back(from.clone());
    while let Some(e) = queue.pop_front() {
        let d = seen[&e];
        if &e == target {
            return Reach::Found(d);
        }
        for r in reducts_with(&e, rules) {
            if !allow(r.rule) || seen.contains_key(&r.result) {
                continue;
            }
            if seen.len() >= cap {
                return Reach::Exhausted;
            }
            seen.insert(r.result.clone(), d + 1);
            queue.push_back(r.result);
        }
    }
    Reach::Unreachable
}
