//! Continuation-passing translation into the mu-free fragment.
//!
//! Types: `¬ρ = ρ -> ⊥`, `ρ* = ¬¬ρ~`, `N~ = N`, `(σ -> τ)~ = σ* -> τ*`.
//!
//! ```text
//! x*            = \k. x k
//! (\x.t)*       = \k. k (\x. t*)
//! (t r)*        = t* @ r*                  where t @ r = \k. t (\l. l r k)
//! 0*            = \k. k 0
//! (suc t)*      = \k. t* (\l. k (suc l))
//! (nrec r s t)* = \k. t* (\l. nrec r* s' l k)
//!                 where s' = \x p. (s* @ (\k. k x)) @ p
//! (mu a.c)*     = \k_a. c*
//! ([a]t)*       = t* k_a
//! ```

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{fresh, Command, Ident, Term, Type, TypeEnv, Var};
use crate::reduction::{normalize_with, ReductionError, RuleSet, Strategy};
use crate::subst::{open_lam, open_mu};
use crate::typing::{infer_term, TypeError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CpsError {
    #[error("continuation variable '{0} has no continuation assigned")]
    UnmappedMuVar(String),
    #[error("ill-typed source: {0}")]
    IllTyped(#[from] TypeError),
    #[error("expected a term of type {expected}, found {found}")]
    ArityMismatch { expected: Type, found: Type },
    #[error("term has free variables")]
    NotClosed,
    #[error("term contains a mu or a command")]
    NonLambdaT,
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// `ρ -> ⊥`
pub fn neg(ty: Type, bottom: &Type) -> Type {
    Type::arrow(ty, bottom.clone())
}

/// `ρ~`
pub fn cps_type_tilde(ty: &Type, bottom: &Type) -> Type {
    match ty {
        Type::Nat => Type::Nat,
        Type::Arrow(a, b) => Type::arrow(cps_type(a, bottom), cps_type(b, bottom)),
    }
}

/// `ρ* = ¬¬ρ~`
pub fn cps_type(ty: &Type, bottom: &Type) -> Type {
    neg(neg(cps_type_tilde(ty, bottom), bottom), bottom)
}

/// The continuation variable standing for a free `'a`. The `$` keeps it
/// apart from every name the parser accepts.
pub fn cont_var(a: &str) -> Ident {
    Arc::from(format!("k${a}"))
}

/// `Γ*, Δ*`: lambda variables at `ρ*`, continuation variables at `¬ρ~`.
pub fn cps_env(env: &TypeEnv, bottom: &Type) -> TypeEnv {
    let mut out = TypeEnv::new();
    for (x, ty) in &env.lam {
        out = out.with_lam(x, cps_type(ty, bottom));
    }
    for (a, ty) in &env.mu {
        out = out.with_lam(&cont_var(a), neg(cps_type_tilde(ty, bottom), bottom));
    }
    out
}

/// `\k. k t` for `t : N`.
pub fn natneg(t: Term, bottom: &Type) -> Term {
    let k = fresh("k");
    Term::lam(&k, neg(Type::Nat, bottom), Term::app(Term::var(&k), t))
}

/// `t @ r = \k. t (\l. l r k)` where the source application has type
/// `arg -> res`.
pub fn cps_app(t: Term, r: Term, arg: &Type, res: &Type, bottom: &Type) -> Term {
    let k = fresh("k");
    let l = fresh("l");
    let l_ty = Type::arrow(cps_type(arg, bottom), cps_type(res, bottom));
    Term::lam(
        &k,
        neg(cps_type_tilde(res, bottom), bottom),
        Term::app(t, Term::lam(&l, l_ty, Term::apps(Term::var(&l), [r, Term::var(&k)]))),
    )
}

/// Translates a term typable in `env`. Free `'a` become [`cont_var`]`(a)`.
pub fn cps_term(env: &TypeEnv, t: &Term, bottom: &Type) -> Result<Term, CpsError> {
    let fv = t.free_vars();
    if let Some(a) = fv.mu.iter().find(|a| env.mu_type(a).is_none()) {
        return Err(CpsError::UnmappedMuVar(a.to_string()));
    }
    infer_term(env, t)?;
    let mut tr = Translator::new(env, bottom);
    Ok(tr.term(t)?.0)
}

/// Translates a command; its value has type `⊥`.
pub fn cps_command(env: &TypeEnv, c: &Command, bottom: &Type) -> Result<Term, CpsError> {
    if let Var::Free(a) = &c.target {
        if env.mu_type(a).is_none() {
            return Err(CpsError::UnmappedMuVar(a.to_string()));
        }
    }
    crate::typing::check_command(env, c)?;
    let mut tr = Translator::new(env, bottom);
    tr.command(c)
}

struct Translator<'a> {
    bottom: &'a Type,
    lams: HashMap<Ident, Type>,
    /// source continuation name to its lambda variable and source type
    mus: HashMap<Ident, (Ident, Type)>,
}

impl<'a> Translator<'a> {
    fn new(env: &TypeEnv, bottom: &'a Type) -> Translator<'a> {
        let lams = env.lam.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mus = env.mu.iter().map(|(a, ty)| (a.clone(), (cont_var(a), ty.clone()))).collect();
        Translator { bottom, lams, mus }
    }

    fn star(&self, ty: &Type) -> Type {
        cps_type(ty, self.bottom)
    }

    fn negtilde(&self, ty: &Type) -> Type {
        neg(cps_type_tilde(ty, self.bottom), self.bottom)
    }

    fn term(&mut self, t: &Term) -> Result<(Term, Type), CpsError> {
        let bot = self.bottom;
        Ok(match t {
            Term::Var(Var::Free(x)) => {
                let ty = self.lams.get(x).cloned().ok_or(CpsError::NotClosed)?;
                let k = fresh("k");
                (Term::lam(&k, self.negtilde(&ty), Term::app(Term::var(x), Term::var(&k))), ty)
            }
            Term::Var(Var::Bound(_)) => return Err(CpsError::NotClosed),
            Term::Lam(h, sigma, b) => {
                let x = fresh(h.as_str());
                self.lams.insert(x.clone(), sigma.clone());
                let (body, tau) = self.term(&open_lam(b, &x))?;
                let ty = Type::arrow(sigma.clone(), tau);
                let k = fresh("k");
                let inner = Term::lam(&x, self.star(sigma), body);
                (Term::lam(&k, self.negtilde(&ty), Term::app(Term::var(&k), inner)), ty)
            }
            Term::App(f, a) => {
                let (fs, fty) = self.term(f)?;
                let (as_, _) = self.term(a)?;
                let (Some(dom), Some(cod)) = (fty.domain().cloned(), fty.codomain().cloned()) else {
                    unreachable!("checked before translation")
                };
                (cps_app(fs, as_, &dom, &cod, bot), cod)
            }
            Term::Zero => (natneg(Term::Zero, bot), Type::Nat),
            Term::Suc(u) => {
                let (us, _) = self.term(u)?;
                let (k, l) = (fresh("k"), fresh("l"));
                let cont = Term::lam(&l, Type::Nat, Term::app(Term::var(&k), Term::suc(Term::var(&l))));
                (Term::lam(&k, neg(Type::Nat, bot), Term::app(us, cont)), Type::Nat)
            }
            Term::NRec(rho, r, s, u) => {
                let (rs, _) = self.term(r)?;
                let (ss, _) = self.term(s)?;
                let (us, _) = self.term(u)?;
                let (x, p) = (fresh("x"), fresh("p"));
                let rho_to_rho = Type::arrow(rho.clone(), rho.clone());
                let applied = cps_app(ss, natneg(Term::var(&x), bot), &Type::Nat, &rho_to_rho, bot);
                let step = Term::lam(
                    &x,
                    Type::Nat,
                    Term::lam(&p, self.star(rho), cps_app(applied, Term::var(&p), rho, rho, bot)),
                );
                let (k, l) = (fresh("k"), fresh("l"));
                let rec = Term::nrec(self.star(rho), rs, step, Term::var(&l));
                let cont = Term::lam(&l, Type::Nat, Term::app(rec, Term::var(&k)));
                (Term::lam(&k, self.negtilde(rho), Term::app(us, cont)), rho.clone())
            }
            Term::Mu(h, rho, c) => {
                let a = fresh(h.as_str());
                let k = fresh("k");
                self.mus.insert(a.clone(), (k.clone(), rho.clone()));
                let body = self.command(&open_mu(c, &a))?;
                (Term::lam(&k, self.negtilde(rho), body), rho.clone())
            }
        })
    }

    fn command(&mut self, c: &Command) -> Result<Term, CpsError> {
        let Var::Free(a) = &c.target else {
            return Err(CpsError::NotClosed);
        };
        let (k, _) = self.mus.get(a).cloned().ok_or_else(|| CpsError::UnmappedMuVar(a.to_string()))?;
        let (body, _) = self.term(&c.body)?;
        Ok(Term::app(body, Term::var(&k)))
    }
}

/// `\x1..xn. (t* @ x1' @ .. @ xn') (\x:N. x)` with `⊥ = N`, for closed
/// `t : N -> .. -> N`.
pub fn represent(t: &Term, arity: usize) -> Result<Term, CpsError> {
    if !t.is_closed() {
        return Err(CpsError::NotClosed);
    }
    let found = infer_term(&TypeEnv::new(), t)?;
    let expected = Type::arrows(std::iter::repeat_n(Type::Nat, arity), Type::Nat);
    if found != expected {
        return Err(CpsError::ArityMismatch { expected, found });
    }
    let bot = Type::Nat;
    let mut body = cps_term(&TypeEnv::new(), t, &bot)?;
    let xs: Vec<Ident> = (0..arity).map(|_| fresh("x")).collect();
    for (i, x) in xs.iter().enumerate() {
        let rest = Type::arrows(std::iter::repeat_n(Type::Nat, arity - i - 1), Type::Nat);
        body = cps_app(body, natneg(Term::var(x), &bot), &Type::Nat, &rest, &bot);
    }
    let id = identity_nat();
    let mut out = Term::app(body, id);
    for x in xs.iter().rev() {
        out = Term::lam(x, Type::Nat, out);
    }
    Ok(out)
}

/// `\x:N. x`
pub fn identity_nat() -> Term {
    Term::lam("x", Type::Nat, Term::var("x"))
}

/// Normal form under the mu-free rules, where `nrec r s (suc t)` unfolds for
/// any `t`.
pub fn lt_normalize(t: &Term, max_steps: usize) -> Result<Term, CpsError> {
    if !t.is_mu_free() {
        return Err(CpsError::NonLambdaT);
    }
    Ok(normalize_with(t, Strategy::LeftmostOutermost, max_steps, RuleSet::LAMBDA_T, false)?.term)
}
