//! The reduction laws of `catch a t = mu a.[a]t` and `throw t a = mu g.[a]t`.
//!
//! ```text
//! 1. E[catch a t]              ->> catch a E[t[a := a E]]
//! 2. E[throw t a]              ->> throw t a
//! 3. catch a (catch b t)       ->  catch a t[b := a □]
//! 4. throw (throw t b) a       ->  throw t b
//! 5. throw (catch b t) a       ->  throw t[b := a □] a
//! 6. catch a (throw t a)       ->  catch a t
//! 7. catch a t                 ->  t                   a not free in t
//! ```

use super::{reachable_filtered, reducts, Reach, RuleSet, DEFAULT_STATE_CAP};
use crate::kernel::{EvalContext, Expr, Ident, Term, Type};
use crate::subst::{rename_mu, subst_struct};

pub const CLAUSES: usize = 7;

/// Material for one instantiation of all seven clauses: `a` and `b` are
/// distinct continuation names of type `ty`, `t : ty`, and `ctx : ty => _`
/// does not mention `a`.
#[derive(Clone, Debug)]
pub struct LawInstance {
    pub a: Ident,
    pub b: Ident,
    pub ty: Type,
    pub t: Term,
    pub ctx: EvalContext,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    /// 1 to 7
    pub clause: usize,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Clone, Debug, Default)]
pub struct LawReport {
    /// Instances checked per clause, index 0 for clause 1.
    pub checked: [usize; CLAUSES],
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: LawReport) {
        for (a, b) in self.checked.iter_mut().zip(other.checked) {
            *a += b;
        }
        self.violations.extend(other.violations);
    }
}

/// The two sides of clause `k` for an instance, and whether one step suffices.
pub fn clause_sides(inst: &LawInstance, k: usize) -> (Term, Term, bool) {
    let (a, b, ty, t, e) = (&*inst.a, &*inst.b, &inst.ty, &inst.t, &inst.ctx);
    let outer = e.result_type(ty);
    match k {
        1 => (
            e.plug(Term::catch(a, ty.clone(), t.clone())),
            Term::catch(a, outer, e.plug(subst_struct(t, a, a, e))),
            false,
        ),
        2 => (e.plug(Term::throw(t.clone(), a, ty.clone())), Term::throw(t.clone(), a, outer), false),
        3 => (
            Term::catch(a, ty.clone(), Term::catch(b, ty.clone(), t.clone())),
            Term::catch(a, ty.clone(), rename_mu(t, b, a)),
            true,
        ),
        4 => (
            Term::throw(Term::throw(t.clone(), b, ty.clone()), a, ty.clone()),
            Term::throw(t.clone(), b, ty.clone()),
            true,
        ),
        5 => (
            Term::throw(Term::catch(b, ty.clone(), t.clone()), a, ty.clone()),
            Term::throw(rename_mu(t, b, a), a, ty.clone()),
            true,
        ),
        6 => (
            Term::catch(a, ty.clone(), Term::throw(t.clone(), a, ty.clone())),
            Term::catch(a, ty.clone(), t.clone()),
            true,
        ),
        7 => {
            let u = rename_mu(t, a, b);
            (Term::catch(a, ty.clone(), u.clone()), u, true)
        }
        _ => panic!("clause {k} does not exist"),
    }
}

/// Checks one clause; `true` when it holds.
pub fn check_clause(inst: &LawInstance, k: usize) -> bool {
    let (lhs, rhs, one_step) = clause_sides(inst, k);
    let (lhs, rhs) = (Expr::Term(lhs), Expr::Term(rhs));
    if one_step {
        return reducts(&lhs).iter().any(|r| r.result == rhs);
    }
    let lifting = reachable_filtered(&lhs, &rhs, DEFAULT_STATE_CAP, RuleSet::STANDARD, &|r| r.is_lifting());
    matches!(lifting, Reach::Found(_))
        || matches!(reachable_filtered(&lhs, &rhs, DEFAULT_STATE_CAP, RuleSet::STANDARD, &|_| true), Reach::Found(_))
}

pub fn check_catch_throw_laws(instances: &[LawInstance]) -> LawReport {
    let mut report = LawReport::default();
    for inst in instances {
        for k in 1..=CLAUSES {
            report.checked[k - 1] += 1;
            if !check_clause(inst, k) {
                let (lhs, rhs, _) = clause_sides(inst, k);
                report.violations.push(LawViolation { clause: k, lhs, rhs });
            }
        }
    }
    report
}
