//! Syntax-directed type inference for terms, commands and evaluation contexts.
//!
//! Errors carry the path (child indices, see [`Term::child`]) of the offending
//! subterm, relative to the expression that was checked.

use thiserror::Error;

use crate::kernel::{Command, EvalContext, Expr, Frame, Term, Type, TypeEnv, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("unbound variable {0}")]
    UnboundLamVar(String),
    #[error("unbound continuation variable '{0}")]
    UnboundMuVar(String),
    #[error("applying a term of type {0}, which is not a function")]
    ArrowExpected(Type),
    #[error("argument has type {found}, expected {expected}")]
    ArgMismatch { expected: Type, found: Type },
    #[error("expected N, found {0}")]
    NatExpected(Type),
    #[error("annotation says {expected}, found {found}")]
    AnnotMismatch { expected: Type, found: Type },
    #[error("passing a term of type {found} to a continuation of type {expected}")]
    PassivateMismatch { expected: Type, found: Type },
    #[error("context cannot take a hole of type {0}")]
    HoleTypeMismatch(Type),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at {}", render_path(.path))]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Vec<usize>,
}

pub fn render_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        let parts: Vec<String> = path.iter().map(|i| i.to_string()).collect();
        format!("/{}", parts.join("/"))
    }
}

pub fn infer_term(env: &TypeEnv, t: &Term) -> Result<Type, TypeError> {
    Checker::new(env).term(t)
}

pub fn check_command(env: &TypeEnv, c: &Command) -> Result<(), TypeError> {
    Checker::new(env).command(c)
}

/// The type of a term, or `None` for a well-typed command.
pub fn infer_expr(env: &TypeEnv, e: &Expr) -> Result<Option<Type>, TypeError> {
    match e {
        Expr::Term(t) => infer_term(env, t).map(Some),
        Expr::Command(c) => check_command(env, c).map(|_| None),
    }
}

/// `σ` with `Γ;Δ ⊢ E : ρ ⇒ σ` where `ρ` is `hole`.
pub fn infer_context(env: &TypeEnv, e: &EvalContext, hole: &Type) -> Result<Type, TypeError> {
    let mut ck = Checker::new(env);
    let mut ty = hole.clone();
    for (i, frame) in e.frames().iter().enumerate() {
        ck.path.push(i);
        ty = match frame {
            Frame::App(a) => {
                let Type::Arrow(dom, cod) = &ty else {
                    return Err(ck.err(TypeErrorKind::HoleTypeMismatch(ty)));
                };
                ck.path.push(1);
                let found = ck.term(a)?;
                if found != **dom {
                    return Err(ck.err(TypeErrorKind::ArgMismatch { expected: (**dom).clone(), found }));
                }
                ck.path.pop();
                (**cod).clone()
            }
            Frame::Suc => {
                if ty != Type::Nat {
                    return Err(ck.err(TypeErrorKind::HoleTypeMismatch(ty)));
                }
                Type::Nat
            }
            Frame::NRec(rho, r, s) => {
                if ty != Type::Nat {
                    return Err(ck.err(TypeErrorKind::HoleTypeMismatch(ty)));
                }
                ck.nrec_parts(rho, r, s)?;
                rho.clone()
            }
        };
        ck.path.pop();
    }
    Ok(ty)
}

struct Checker<'a> {
    env: &'a TypeEnv,
    lams: Vec<Type>,
    mus: Vec<Type>,
    path: Vec<usize>,
}

impl<'a> Checker<'a> {
    fn new(env: &'a TypeEnv) -> Checker<'a> {
        Checker { env, lams: Vec::new(), mus: Vec::new(), path: Vec::new() }
    }

    fn err(&self, kind: TypeErrorKind) -> TypeError {
        TypeError { kind, path: self.path.clone() }
    }

    fn child<T>(&mut self, i: usize, f: impl FnOnce(&mut Self) -> Result<T, TypeError>) -> Result<T, TypeError> {
        self.path.push(i);
        let r = f(self)?;
        self.path.pop();
        Ok(r)
    }

    fn lookup_lam(&self, v: &Var) -> Result<Type, TypeError> {
        let found = match v {
            Var::Free(x) => self.env.lam_type(x).cloned(),
            Var::Bound(i) => self.lams.len().checked_sub(*i as usize + 1).map(|k| self.lams[k].clone()),
        };
        found.ok_or_else(|| self.err(TypeErrorKind::UnboundLamVar(var_name(v))))
    }

    fn lookup_mu(&self, v: &Var) -> Result<Type, TypeError> {
        let found = match v {
            Var::Free(a) => self.env.mu_type(a).cloned(),
            Var::Bound(i) => self.mus.len().checked_sub(*i as usize + 1).map(|k| self.mus[k].clone()),
        };
        found.ok_or_else(|| self.err(TypeErrorKind::UnboundMuVar(var_name(v))))
    }

    fn term(&mut self, t: &Term) -> Result<Type, TypeError> {
        match t {
            Term::Var(v) => self.lookup_lam(v),
            Term::Lam(_, ty, body) => {
                self.lams.push(ty.clone());
                let res = self.child(0, |ck| ck.term(body));
                self.lams.pop();
                Ok(Type::arrow(ty.clone(), res?))
            }
            Term::App(f, a) => {
                let fty = self.child(0, |ck| ck.term(f))?;
                let Type::Arrow(dom, cod) = &fty else {
                    self.path.push(0);
                    let e = self.err(TypeErrorKind::ArrowExpected(fty.clone()));
                    return Err(e);
                };
                let aty = self.child(1, |ck| ck.term(a))?;
                if aty != **dom {
                    self.path.push(1);
                    let e = self.err(TypeErrorKind::ArgMismatch { expected: (**dom).clone(), found: aty });
                    return Err(e);
                }
                Ok((**cod).clone())
            }
            Term::Mu(_, ty, c) => {
                self.mus.push(ty.clone());
                let res = self.child(0, |ck| ck.command(c));
                self.mus.pop();
                res.map(|_| ty.clone())
            }
            Term::Zero => Ok(Type::Nat),
            Term::Suc(u) => {
                let uty = self.child(0, |ck| ck.term(u))?;
                if uty != Type::Nat {
                    self.path.push(0);
                    let e = self.err(TypeErrorKind::NatExpected(uty));
                    return Err(e);
                }
                Ok(Type::Nat)
            }
            Term::NRec(rho, r, s, u) => {
                self.nrec_parts(rho, r, s)?;
                let uty = self.child(2, |ck| ck.term(u))?;
                if uty != Type::Nat {
                    self.path.push(2);
                    let e = self.err(TypeErrorKind::NatExpected(uty));
                    return Err(e);
                }
                Ok(rho.clone())
            }
        }
    }

    fn nrec_parts(&mut self, rho: &Type, r: &Term, s: &Term) -> Result<(), TypeError> {
        let rty = self.child(0, |ck| ck.term(r))?;
        if rty != *rho {
            self.path.push(0);
            let e = self.err(TypeErrorKind::AnnotMismatch { expected: rho.clone(), found: rty });
            return Err(e);
        }
        let sty = self.child(1, |ck| ck.term(s))?;
        let want = Type::arrows([Type::Nat, rho.clone()], rho.clone());
        if sty != want {
            self.path.push(1);
            let e = self.err(TypeErrorKind::AnnotMismatch { expected: want, found: sty });
            return Err(e);
        }
        Ok(())
    }

    fn command(&mut self, c: &Command) -> Result<(), TypeError> {
        let expected = self.lookup_mu(&c.target)?;
        let found = self.child(0, |ck| ck.term(&c.body))?;
        if found != expected {
            return Err(self.err(TypeErrorKind::PassivateMismatch { expected, found }));
        }
        Ok(())
    }
}

fn var_name(v: &Var) -> String {
    match v {
        Var::Free(x) => x.to_string(),
        Var::Bound(i) => format!("#{i}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::numeral;
    use crate::syntax::parse_term;

    fn nn() -> Type {
        Type::arrow(Type::Nat, Type::Nat)
    }

    #[test]
    fn inference() {
        let env = TypeEnv::new();
        assert_eq!(infer_term(&env, &Term::lam("x", Type::Nat, Term::var("x"))), Ok(nn()));
        assert_eq!(infer_term(&env, &Term::mu("a", Type::Nat, Command::new("a", Term::Zero))), Ok(Type::Nat));
        let step = Term::lam("x", Type::Nat, Term::lam("y", Type::Nat, Term::suc(Term::var("y"))));
        assert_eq!(infer_term(&env, &Term::nrec(Type::Nat, Term::Zero, step, numeral(2))), Ok(Type::Nat));
    }

    #[test]
    fn commands() {
        let c = Command::new("a", Term::Zero);
        assert_eq!(check_command(&TypeEnv::new().with_mu("a", Type::Nat), &c), Ok(()));
        let err = check_command(&TypeEnv::new().with_mu("a", nn()), &c).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::PassivateMismatch { .. }));
        let err = check_command(&TypeEnv::new(), &c).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::UnboundMuVar("a".into()));
    }

    #[test]
    fn contexts() {
        let env = TypeEnv::new();
        assert_eq!(infer_context(&env, &EvalContext::hole(), &nn()), Ok(nn()));
        assert_eq!(infer_context(&env, &EvalContext::suc_ctx(EvalContext::hole()), &Type::Nat), Ok(Type::Nat));
        let e = EvalContext::app_ctx(EvalContext::hole(), Term::Zero);
        assert_eq!(infer_context(&env, &e, &nn()), Ok(Type::Nat));
        assert!(infer_context(&env, &e, &Type::Nat).is_err());
    }

    #[test]
    fn plugging_agrees_with_context_typing() {
        let env = TypeEnv::new().with_lam("f", nn());
        let e = EvalContext::suc_ctx(EvalContext::app_ctx(EvalContext::hole(), Term::Zero));
        let hole = Term::var("f");
        let via_ctx = infer_context(&env, &e, &infer_term(&env, &hole).unwrap());
        assert_eq!(via_ctx, infer_term(&env, &e.plug(hole)));
    }

    #[test]
    fn errors_carry_paths() {
        let (t, env) = parse_term("\\x:N. S (\\y:N. y)").unwrap();
        let err = infer_term(&env, &t).unwrap_err();
        assert_eq!(err.path, vec![0, 0]);
        assert!(matches!(err.kind, TypeErrorKind::NatExpected(_)));
        assert_eq!(render_path(&err.path), "/0/0");
        assert_eq!(render_path(&[]), "root");
        let err = infer_term(&TypeEnv::new(), &Term::var("q")).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::UnboundLamVar("q".into()));
    }

    #[test]
    fn annotations_must_match() {
        let t = Term::mu("a", nn(), Command::new("a", Term::Zero));
        assert!(infer_term(&TypeEnv::new(), &t).is_err());
        let t = Term::app(Term::lam("x", nn(), Term::Zero), Term::Zero);
        assert!(matches!(infer_term(&TypeEnv::new(), &t).unwrap_err().kind, TypeErrorKind::ArgMismatch { .. }));
    }
}
