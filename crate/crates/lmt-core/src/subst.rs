//! Substitution on the locally nameless representation.
//!
//! Public operations take free names and are capture-free by construction:
//! binders carry no names, so nothing can be captured. The index-level
//! helpers are used by the reduction engine, which works below binders
//! without opening them; every term moved under a binder is shifted.

use std::sync::Arc;

use crate::kernel::{Command, EvalContext, Expr, Term, Var};

/// `t[x := r]`
pub fn subst_lam(t: &Term, x: &str, r: &Term) -> Term {
    lam_free(t, x, r, 0, 0)
}

pub fn subst_lam_cmd(c: &Command, x: &str, r: &Term) -> Command {
    Command { target: c.target.clone(), body: Arc::new(lam_free(&c.body, x, r, 0, 0)) }
}

pub fn subst_lam_expr(e: &Expr, x: &str, r: &Term) -> Expr {
    match e {
        Expr::Term(t) => Expr::Term(subst_lam(t, x, r)),
        Expr::Command(c) => Expr::Command(subst_lam_cmd(c, x, r)),
    }
}

/// `t[a := b E]`: every `[a]q` becomes `[b]E[q']`.
pub fn subst_struct(t: &Term, a: &str, b: &str, e: &EvalContext) -> Term {
    let to = Var::free(b);
    structural(t, &Mode::Free(a, &to), e, 0, 0)
}

pub fn subst_struct_cmd(c: &Command, a: &str, b: &str, e: &EvalContext) -> Command {
    let to = Var::free(b);
    structural_cmd(c, &Mode::Free(a, &to), e, 0, 0)
}

pub fn subst_struct_expr(x: &Expr, a: &str, b: &str, e: &EvalContext) -> Expr {
    match x {
        Expr::Term(t) => Expr::Term(subst_struct(t, a, b, e)),
        Expr::Command(c) => Expr::Command(subst_struct_cmd(c, a, b, e)),
    }
}

/// `t[a := b □]`
pub fn rename_mu(t: &Term, a: &str, b: &str) -> Term {
    subst_struct(t, a, b, &EvalContext::hole())
}

pub fn rename_mu_cmd(c: &Command, a: &str, b: &str) -> Command {
    subst_struct_cmd(c, a, b, &EvalContext::hole())
}

// ---------------------------------------------------------------------------
// index level

/// Adds `dl` to dangling lambda indices and `dm` to dangling mu indices.
pub fn shift(t: &Term, dl: u32, dm: u32) -> Term {
    if dl == 0 && dm == 0 {
        return t.clone();
    }
    shift_at(t, dl, dm, 0, 0)
}

pub fn shift_cmd(c: &Command, dl: u32, dm: u32) -> Command {
    if dl == 0 && dm == 0 {
        return c.clone();
    }
    shift_cmd_at(c, dl, dm, 0, 0)
}

pub fn shift_ctx(e: &EvalContext, dl: u32, dm: u32) -> EvalContext {
    if dl == 0 && dm == 0 {
        return e.clone();
    }
    e.map_terms(|t| shift(t, dl, dm))
}

fn shift_at(t: &Term, dl: u32, dm: u32, cl: u32, cm: u32) -> Term {
    match t {
        Term::Var(Var::Bound(i)) if *i >= cl => Term::Var(Var::Bound(i + dl)),
        Term::Var(_) | Term::Zero => t.clone(),
        Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), Arc::new(shift_at(b, dl, dm, cl + 1, cm))),
        Term::App(f, a) => Term::App(Arc::new(shift_at(f, dl, dm, cl, cm)), Arc::new(shift_at(a, dl, dm, cl, cm))),
        Term::Mu(h, ty, c) => Term::Mu(h.clone(), ty.clone(), shift_cmd_at(c, dl, dm, cl, cm + 1)),
        Term::Suc(u) => Term::Suc(Arc::new(shift_at(u, dl, dm, cl, cm))),
        Term::NRec(ty, r, s, u) => Term::NRec(
            ty.clone(),
            Arc::new(shift_at(r, dl, dm, cl, cm)),
            Arc::new(shift_at(s, dl, dm, cl, cm)),
            Arc::new(shift_at(u, dl, dm, cl, cm)),
        ),
    }
}

fn shift_cmd_at(c: &Command, dl: u32, dm: u32, cl: u32, cm: u32) -> Command {
    let target = match &c.target {
        Var::Bound(j) if *j >= cm => Var::Bound(j + dm),
        v => v.clone(),
    };
    Command { target, body: Arc::new(shift_at(&c.body, dl, dm, cl, cm)) }
}

/// Removes one mu binder that `t` does not refer to.
pub fn unshift_mu(t: &Term) -> Term {
    unshift_mu_at(t, 0)
}

fn unshift_mu_at(t: &Term, cm: u32) -> Term {
    map_cmds(t, cm, &|c, cm| {
        let target = match &c.target {
            Var::Bound(j) if *j > cm => Var::Bound(j - 1),
            Var::Bound(j) if *j == cm => panic!("unshift_mu: index {j} is still referenced"),
            v => v.clone(),
        };
        Command { target, body: Arc::new(unshift_mu_at(&c.body, cm)) }
    })
}

/// Rebuilds `t`, handing every top-level command (with its mu depth) to `f`.
fn map_cmds(t: &Term, cm: u32, f: &dyn Fn(&Command, u32) -> Command) -> Term {
    match t {
        Term::Var(_) | Term::Zero => t.clone(),
        Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), Arc::new(map_cmds(b, cm, f))),
        Term::App(a, b) => Term::App(Arc::new(map_cmds(a, cm, f)), Arc::new(map_cmds(b, cm, f))),
        Term::Mu(h, ty, c) => Term::Mu(h.clone(), ty.clone(), f(c, cm + 1)),
        Term::Suc(u) => Term::Suc(Arc::new(map_cmds(u, cm, f))),
        Term::NRec(ty, r, s, u) => Term::NRec(
            ty.clone(),
            Arc::new(map_cmds(r, cm, f)),
            Arc::new(map_cmds(s, cm, f)),
            Arc::new(map_cmds(u, cm, f)),
        ),
    }
}

/// Does mu index `k` (relative to the root of `t`) occur in `t`?
pub fn mu_index_occurs(t: &Term, k: u32) -> bool {
    match t {
        Term::Var(_) | Term::Zero => false,
        Term::Lam(_, _, b) | Term::Suc(b) => mu_index_occurs(b, k),
        Term::App(a, b) => mu_index_occurs(a, k) || mu_index_occurs(b, k),
        Term::Mu(_, _, c) => mu_index_occurs_cmd(c, k + 1),
        Term::NRec(_, r, s, u) => mu_index_occurs(r, k) || mu_index_occurs(s, k) || mu_index_occurs(u, k),
    }
}

pub fn mu_index_occurs_cmd(c: &Command, k: u32) -> bool {
    c.target == Var::Bound(k) || mu_index_occurs(&c.body, k)
}

/// Substitutes `r` for lambda index 0 of `body` and drops that binder.
pub fn instantiate_lam(body: &Term, r: &Term) -> Term {
    inst_lam(body, r, 0, 0)
}

fn inst_lam(t: &Term, r: &Term, dl: u32, dm: u32) -> Term {
    match t {
        Term::Var(Var::Bound(i)) => {
            if *i == dl {
                shift(r, dl, dm)
            } else if *i > dl {
                Term::Var(Var::Bound(i - 1))
            } else {
                t.clone()
            }
        }
        Term::Var(Var::Free(_)) | Term::Zero => t.clone(),
        Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), Arc::new(inst_lam(b, r, dl + 1, dm))),
        Term::App(f, a) => Term::App(Arc::new(inst_lam(f, r, dl, dm)), Arc::new(inst_lam(a, r, dl, dm))),
        Term::Mu(h, ty, c) => Term::Mu(
            h.clone(),
            ty.clone(),
            Command { target: c.target.clone(), body: Arc::new(inst_lam(&c.body, r, dl, dm + 1)) },
        ),
        Term::Suc(u) => Term::Suc(Arc::new(inst_lam(u, r, dl, dm))),
        Term::NRec(ty, a, s, u) => Term::NRec(
            ty.clone(),
            Arc::new(inst_lam(a, r, dl, dm)),
            Arc::new(inst_lam(s, r, dl, dm)),
            Arc::new(inst_lam(u, r, dl, dm)),
        ),
    }
}

fn lam_free(t: &Term, x: &str, r: &Term, dl: u32, dm: u32) -> Term {
    match t {
        Term::Var(Var::Free(y)) if &**y == x => shift(r, dl, dm),
        Term::Var(_) | Term::Zero => t.clone(),
        Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), Arc::new(lam_free(b, x, r, dl + 1, dm))),
        Term::App(f, a) => Term::App(Arc::new(lam_free(f, x, r, dl, dm)), Arc::new(lam_free(a, x, r, dl, dm))),
        Term::Mu(h, ty, c) => Term::Mu(
            h.clone(),
            ty.clone(),
            Command { target: c.target.clone(), body: Arc::new(lam_free(&c.body, x, r, dl, dm + 1)) },
        ),
        Term::Suc(u) => Term::Suc(Arc::new(lam_free(u, x, r, dl, dm))),
        Term::NRec(ty, a, s, u) => Term::NRec(
            ty.clone(),
            Arc::new(lam_free(a, x, r, dl, dm)),
            Arc::new(lam_free(s, x, r, dl, dm)),
            Arc::new(lam_free(u, x, r, dl, dm)),
        ),
    }
}

/// Turns free `x` into the lambda index of a binder placed directly above `t`.
pub fn close_lam(t: &Term, x: &str) -> Term {
    close_lam_at(t, x, 0)
}

fn close_lam_at(t: &Term, x: &str, dl: u32) -> Term {
    match t {
        Term::Var(Var::Free(y)) if &**y == x => Term::Var(Var::Bound(dl)),
        Term::Var(_) | Term::Zero => t.clone(),
        Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), Arc::new(close_lam_at(b, x, dl + 1))),
        Term::App(f, a) => Term::App(Arc::new(close_lam_at(f, x, dl)), Arc::new(close_lam_at(a, x, dl))),
        Term::Mu(h, ty, c) => Term::Mu(
            h.clone(),
            ty.clone(),
            Command { target: c.target.clone(), body: Arc::new(close_lam_at(&c.body, x, dl)) },
        ),
        Term::Suc(u) => Term::Suc(Arc::new(close_lam_at(u, x, dl))),
        Term::NRec(ty, r, s, u) => Term::NRec(
            ty.clone(),
            Arc::new(close_lam_at(r, x, dl)),
            Arc::new(close_lam_at(s, x, dl)),
            Arc::new(close_lam_at(u, x, dl)),
        ),
    }
}

/// Turns free `'a` into the mu index of a binder placed directly above `c`.
pub fn close_mu_cmd(c: &Command, a: &str) -> Command {
    close_mu_cmd_at(c, a, 0)
}

fn close_mu_cmd_at(c: &Command, a: &str, dm: u32) -> Command {
    let target = match &c.target {
        Var::Free(b) if &**b == a => Var::Bound(dm),
        v => v.clone(),
    };
    Command { target, body: Arc::new(map_cmds(&c.body, dm, &|c, dm| close_mu_cmd_at(c, a, dm))) }
}

/// Replaces lambda index 0 of `body` by the free name `x`.
pub fn open_lam(body: &Term, x: &str) -> Term {
    instantiate_lam(body, &Term::var(x))
}

/// Replaces mu index 0 of `c` by the free name `'a`.
pub fn open_mu(c: &Command, a: &str) -> Command {
    structural_cmd(c, &Mode::RemoveBound(&Var::free(a)), &EvalContext::hole(), 0, 0)
}

/// What a structural substitution rewrites.
pub(crate) enum Mode<'a> {
    /// `[a]q` for the free name `a`, retargeted to the given variable.
    Free(&'a str, &'a Var),
    /// The binder at mu index 0 stays in place: `c[a := a E]` under `mu a`.
    KeepBound,
    /// The binder at mu index 0 disappears and its commands go to the given
    /// variable, which lives at the level outside that binder.
    RemoveBound(&'a Var),
}

fn lift(v: &Var, dm: u32) -> Var {
    match v {
        Var::Bound(k) => Var::Bound(k + dm),
        Var::Free(_) => v.clone(),
    }
}

pub(crate) fn structural(t: &Term, mode: &Mode<'_>, e: &EvalContext, dl: u32, dm: u32) -> Term {
    match t {
        Term::Var(_) | Term::Zero => t.clone(),
        Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), Arc::new(structural(b, mode, e, dl + 1, dm))),
        Term::App(f, a) => Term::App(Arc::new(structural(f, mode, e, dl, dm)), Arc::new(structural(a, mode, e, dl, dm))),
        Term::Mu(h, ty, c) => Term::Mu(h.clone(), ty.clone(), structural_cmd(c, mode, e, dl, dm + 1)),
        Term::Suc(u) => Term::Suc(Arc::new(structural(u, mode, e, dl, dm))),
        Term::NRec(ty, r, s, u) => Term::NRec(
            ty.clone(),
            Arc::new(structural(r, mode, e, dl, dm)),
            Arc::new(structural(s, mode, e, dl, dm)),
            Arc::new(structural(u, mode, e, dl, dm)),
        ),
    }
}

pub(crate) fn structural_cmd(c: &Command, mode: &Mode<'_>, e: &EvalContext, dl: u32, dm: u32) -> Command {
    let body = structural(&c.body, mode, e, dl, dm);
    let hit = |target: Var, extra: u32| Command {
        target,
        body: Arc::new(shift_ctx(e, dl, dm + extra).plug(body.clone())),
    };
    match mode {
        Mode::Free(a, to) => match &c.target {
            Var::Free(x) if &**x == *a => hit(lift(to, dm), 0),
            v => Command { target: v.clone(), body: Arc::new(body) },
        },
        Mode::KeepBound => match &c.target {
            Var::Bound(j) if *j == dm => hit(Var::Bound(dm), 1),
            v => Command { target: v.clone(), body: Arc::new(body) },
        },
        Mode::RemoveBound(to) => match &c.target {
            Var::Bound(j) if *j == dm => hit(lift(to, dm), 0),
            Var::Bound(j) if *j > dm => Command { target: Var::Bound(j - 1), body: Arc::new(body) },
            v => Command { target: v.clone(), body: Arc::new(body) },
        },
    }
}

/// `c[a := a E]` where `a` is the binder directly above `c`, which stays.
pub fn lift_bound(c: &Command, e: &EvalContext) -> Command {
    structural_cmd(c, &Mode::KeepBound, e, 0, 0)
}

/// `c[b := to E]` where `b` is the binder directly above `c`, which is removed.
pub fn retarget_bound(c: &Command, to: &Var, e: &EvalContext) -> Command {
    structural_cmd(c, &Mode::RemoveBound(to), e, 0, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{alpha_eq, Type};
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap().0
    }

    #[test]
    fn lam_substitution() {
        let r = subst_lam(&Term::app(Term::var("x"), Term::var("y")), "x", &Term::Zero);
        assert_eq!(r, Term::app(Term::Zero, Term::var("y")));
        let mu = Term::mu("a", Type::Nat, Command::new("a", Term::var("x")));
        assert_eq!(subst_lam(&mu, "x", &Term::Zero), Term::mu("a", Type::Nat, Command::new("a", Term::Zero)));
    }

    #[test]
    fn lam_substitution_avoids_capture() {
        let r = subst_lam(&Term::lam("y", Type::Nat, Term::var("x")), "x", &Term::var("y"));
        assert_eq!(r, Term::lam("z", Type::Nat, Term::var("y")));
        assert_eq!(r.free_vars().lam.iter().map(|s| &**s).collect::<Vec<_>>(), ["y"]);
    }

    #[test]
    fn structural_substitution() {
        let c = Command::new("a", Term::var("x"));
        let e = EvalContext::app_ctx(EvalContext::hole(), Term::var("s"));
        assert_eq!(subst_struct_cmd(&c, "a", "b", &e), Command::new("b", Term::app(Term::var("x"), Term::var("s"))));
        let c = Command::new("g", Term::Zero);
        assert_eq!(subst_struct_cmd(&c, "a", "b", &EvalContext::hole()), c);
    }

    #[test]
    fn structural_substitution_reaches_nested_commands() {
        // mu g.[a] mu d.[g] 0 with a := b (S []) touches only the [a] command
        let u = t("mu 'g:N. ['a] mu 'd:N. ['g] 0");
        let r = subst_struct(&u, "a", "b", &EvalContext::suc_ctx(EvalContext::hole()));
        assert_eq!(r, t("mu 'g:N. ['b] S (mu 'd:N. ['g] 0)"));
    }

    #[test]
    fn renaming() {
        assert_eq!(rename_mu_cmd(&Command::new("a", Term::Zero), "a", "b"), Command::new("b", Term::Zero));
        let m = Term::mu("a", Type::Nat, Command::new("a", Term::Zero));
        assert!(alpha_eq(&rename_mu(&m, "a", "b"), &m));
        let c = Command::new("a", Term::suc(Term::var("x")));
        assert_eq!(rename_mu_cmd(&c, "a", "b"), Command::new("b", Term::suc(Term::var("x"))));
    }

    #[test]
    fn identity_laws() {
        for s in ["\\y:N. x y", "mu 'g:N. ['a] S (x)", "nrec{N}(x; \\u:N. \\v:N. v; mu 'g:N. ['a] 2)"] {
            let (u, _) = parse_term(s).unwrap();
            assert_eq!(subst_lam(&u, "x", &Term::var("x")), u);
            assert_eq!(subst_struct(&u, "a", "a", &EvalContext::hole()), u);
        }
    }

    #[test]
    fn structural_substitution_avoids_capture_of_context_names() {
        // the context mentions a free continuation named like the binder
        let u = t("mu 'g:N. ['a] 0");
        let e = EvalContext::app_ctx(EvalContext::hole(), t("mu 'd:N. ['g] 1"));
        let r = subst_struct(&u, "a", "a", &e);
        assert!(r.free_vars().mu.iter().any(|m| &**m == "g"));
    }
}
