//! Elaboration of surface trees into terms. `catch` and `throw` carry no
//! annotation and free variables no declared type, so these are solved by
//! unification; whatever stays unconstrained becomes `N`. Elaboration never
//! fails: inconsistent constraints leave some annotation wrong and the type
//! checker reports the error afterwards.

use std::collections::BTreeMap;
use std::rc::Rc;

use super::parser::{Surface, SurfaceCmd, SurfaceExpr};
use crate::kernel::{numeral, Command, Expr, Term, Type, TypeEnv};

#[derive(Clone, Debug)]
enum MType {
    Nat,
    Arrow(Rc<MType>, Rc<MType>),
    Meta(usize),
}

impl MType {
    fn from_type(t: &Type) -> MType {
        match t {
            Type::Nat => MType::Nat,
            Type::Arrow(a, b) => MType::Arrow(Rc::new(MType::from_type(a)), Rc::new(MType::from_type(b))),
        }
    }
}

/// A term whose mu annotations may still be metavariables.
enum Pre {
    Var(String),
    Num(u64),
    Lam(String, Type, Box<Pre>),
    Mu(String, MType, String, Box<Pre>),
    Throw(Box<Pre>, String, MType),
    App(Box<Pre>, Box<Pre>),
    Suc(Box<Pre>),
    NRec(Type, Box<Pre>, Box<Pre>, Box<Pre>),
}

#[derive(Default)]
struct Elab {
    metas: Vec<Option<MType>>,
    lams: Vec<(String, MType)>,
    mus: Vec<(String, MType)>,
    free_lam: BTreeMap<String, MType>,
    free_mu: BTreeMap<String, MType>,
}

impl Elab {
    fn with_env(env: &TypeEnv) -> Elab {
        let mut e = Elab::default();
        for (x, t) in &env.lam {
            e.free_lam.insert(x.to_string(), MType::from_type(t));
        }
        for (a, t) in &env.mu {
            e.free_mu.insert(a.to_string(), MType::from_type(t));
        }
        e
    }

    fn meta(&mut self) -> MType {
        self.metas.push(None);
        MType::Meta(self.metas.len() - 1)
    }

    fn walk(&self, t: &MType) -> MType {
        let mut t = t.clone();
        while let MType::Meta(i) = t {
            match &self.metas[i] {
                Some(u) => t = u.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, m: usize, t: &MType) -> bool {
        match self.walk(t) {
            MType::Nat => false,
            MType::Meta(j) => j == m,
            MType::Arrow(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
        }
    }

    /// Unifies what it can; a clash leaves both sides as they were.
    fn unify(&mut self, a: &MType, b: &MType) {
        match (self.walk(a), self.walk(b)) {
            (MType::Meta(i), MType::Meta(j)) if i == j => {}
            (MType::Meta(i), t) | (t, MType::Meta(i)) => {
                if !self.occurs(i, &t) {
                    self.metas[i] = Some(t);
                }
            }
            (MType::Arrow(a1, b1), MType::Arrow(a2, b2)) => {
                self.unify(&a1, &a2);
                self.unify(&b1, &b2);
            }
            _ => {}
        }
    }

    fn resolve(&self, t: &MType) -> Type {
        match self.walk(t) {
            MType::Nat | MType::Meta(_) => Type::Nat,
            MType::Arrow(a, b) => Type::arrow(self.resolve(&a), self.resolve(&b)),
        }
    }

    fn lam_var(&mut self, x: &str) -> MType {
        if let Some((_, t)) = self.lams.iter().rev().find(|(y, _)| y == x) {
            return t.clone();
        }
        if let Some(t) = self.free_lam.get(x) {
            return t.clone();
        }
        let m = self.meta();
        self.free_lam.insert(x.to_string(), m.clone());
        m
    }

    fn mu_var(&mut self, a: &str) -> MType {
        if let Some((_, t)) = self.mus.iter().rev().find(|(b, _)| b == a) {
            return t.clone();
        }
        if let Some(t) = self.free_mu.get(a) {
            return t.clone();
        }
        let m = self.meta();
        self.free_mu.insert(a.to_string(), m.clone());
        m
    }

    fn term(&mut self, s: &Surface) -> (Pre, MType) {
        match s {
            Surface::Var(x) => (Pre::Var(x.clone()), self.lam_var(x)),
            Surface::Num(n) => (Pre::Num(*n), MType::Nat),
            Surface::Lam(x, ty, b) => {
                let dom = MType::from_type(ty);
                self.lams.push((x.clone(), dom.clone()));
                let (b, cod) = self.term(b);
                self.lams.pop();
                (Pre::Lam(x.clone(), ty.clone(), Box::new(b)), MType::Arrow(Rc::new(dom), Rc::new(cod)))
            }
            Surface::App(f, a) => {
                let (f, tf) = self.term(f);
                let (a, ta) = self.term(a);
                let r = self.meta();
                self.unify(&tf, &MType::Arrow(Rc::new(ta), Rc::new(r.clone())));
                (Pre::App(Box::new(f), Box::new(a)), r)
            }
            Surface::Suc(u) => {
                let (u, tu) = self.term(u);
                self.unify(&tu, &MType::Nat);
                (Pre::Suc(Box::new(u)), MType::Nat)
            }
            Surface::NRec(ty, r, st, n) => {
                let rho = MType::from_type(ty);
                let (r, tr) = self.term(r);
                self.unify(&tr, &rho);
                let (st, ts) = self.term(st);
                let step = MType::from_type(&Type::arrows([Type::Nat, ty.clone()], ty.clone()));
                self.unify(&ts, &step);
                let (n, tn) = self.term(n);
                self.unify(&tn, &MType::Nat);
                (Pre::NRec(ty.clone(), Box::new(r), Box::new(st), Box::new(n)), rho)
            }
            Surface::Mu(a, ty, c) => {
                let rho = MType::from_type(ty);
                self.mus.push((a.clone(), rho.clone()));
                let (target, body) = self.command(c);
                self.mus.pop();
                (Pre::Mu(a.clone(), rho.clone(), target, Box::new(body)), rho)
            }
            Surface::Catch(a, body) => {
                let m = self.meta();
                self.mus.push((a.clone(), m.clone()));
                let (body, tb) = self.term(body);
                self.unify(&m, &tb);
                self.mus.pop();
                (Pre::Mu(a.clone(), m.clone(), a.clone(), Box::new(body)), m)
            }
            Surface::Throw(body, a) => {
                let (body, tb) = self.term(body);
                let ta = self.mu_var(a);
                self.unify(&ta, &tb);
                let m = self.meta();
                (Pre::Throw(Box::new(body), a.clone(), m.clone()), m)
            }
        }
    }

    fn command(&mut self, c: &SurfaceCmd) -> (String, Pre) {
        let (body, tb) = self.term(&c.body);
        let ta = self.mu_var(&c.target);
        self.unify(&ta, &tb);
        (c.target.clone(), body)
    }

    fn build(&self, p: &Pre) -> Term {
        match p {
            Pre::Var(x) => Term::var(x),
            Pre::Num(n) => numeral(*n),
            Pre::Lam(x, ty, b) => Term::lam(x, ty.clone(), self.build(b)),
            Pre::Mu(a, ty, target, body) => Term::mu(a, self.resolve(ty), Command::new(target, self.build(body))),
            Pre::Throw(body, a, ty) => Term::throw(self.build(body), a, self.resolve(ty)),
            Pre::App(f, a) => Term::app(self.build(f), self.build(a)),
            Pre::Suc(u) => Term::suc(self.build(u)),
            Pre::NRec(ty, r, s, n) => Term::nrec(ty.clone(), self.build(r), self.build(s), self.build(n)),
        }
    }

    fn env(&self) -> TypeEnv {
        let mut env = TypeEnv::new();
        for (x, t) in &self.free_lam {
            env = env.with_lam(x, self.resolve(t));
        }
        for (a, t) in &self.free_mu {
            env = env.with_mu(a, self.resolve(t));
        }
        env
    }
}

/// The elaborated expression and the inferred types of its free variables,
/// starting from the types given in `env`.
pub fn elaborate(s: &SurfaceExpr, env: &TypeEnv) -> (Expr, TypeEnv) {
    let mut e = Elab::with_env(env);
    match s {
        SurfaceExpr::Term(t) => {
            let (p, _) = e.term(t);
            (Expr::Term(e.build(&p)), e.env())
        }
        SurfaceExpr::Command(c) => {
            let (target, body) = e.command(c);
            (Expr::Command(Command::new(&target, e.build(&body))), e.env())
        }
    }
}
