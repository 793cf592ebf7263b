//! Types, terms and commands.
//!
//! Bound variables are de Bruijn indices living in two separate spaces:
//! a `Term::Var(Var::Bound(i))` counts enclosing lambdas only, a command
//! target `Var::Bound(i)` counts enclosing mus only. Free variables are names.
//! Binders keep a [`Hint`] for printing, and hints are ignored by `==`, so
//! structural equality on [`Term`] and [`Command`] is alpha-equivalence.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::subst;

pub type Ident = Arc<str>;

/// Printing name of a binder. Compares equal to every other hint.
#[derive(Clone)]
pub struct Hint(Ident);

impl Hint {
    /// Strips any internal freshness suffix (`x#12` becomes `x`).
    pub fn new(name: &str) -> Hint {
        let base = name.split('#').next().unwrap_or("");
        Hint(Arc::from(if base.is_empty() { "v" } else { base }))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Hint) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Hint) -> Ordering {
        Ordering::Equal
    }
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

static FRESH: AtomicU64 = AtomicU64::new(0);

/// A name that no parser can produce and no earlier call returned.
pub fn fresh(hint: &str) -> Ident {
    let n = FRESH.fetch_add(1, AtomicOrdering::Relaxed);
    let base = hint.split('#').next().unwrap_or("v");
    Arc::from(format!("{base}#{n}"))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Nat,
    Arrow(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Arc::new(dom), Arc::new(cod))
    }

    /// `args[0] -> args[1] -> ... -> res`
    pub fn arrows(args: impl IntoIterator<Item = Type>, res: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter().rev().fold(res, |acc, a| Type::arrow(a, acc))
    }

    pub fn domain(&self) -> Option<&Type> {
        match self {
            Type::Arrow(d, _) => Some(d),
            Type::Nat => None,
        }
    }

    pub fn codomain(&self) -> Option<&Type> {
        match self {
            Type::Arrow(_, c) => Some(c),
            Type::Nat => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Nat => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Nat => f.write_str("N"),
            Type::Arrow(a, b) => match **a {
                Type::Nat => write!(f, "N -> {b}"),
                Type::Arrow(..) => write!(f, "({a}) -> {b}"),
            },
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Free(Ident),
    Bound(u32),
}

impl Var {
    pub fn free(name: &str) -> Var {
        Var::Free(Arc::from(name))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Lam(Hint, Type, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Mu(Hint, Type, Command),
    Zero,
    Suc(Arc<Term>),
    NRec(Type, Arc<Term>, Arc<Term>, Arc<Term>),
}

/// `[target] body`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Command {
    pub target: Var,
    pub body: Arc<Term>,
}

/// Either sort of expression, used where an operation accepts both.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Term(Term),
    Command(Command),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::free(name))
    }

    /// `\x:ty. body`, binding every free `x` in `body`.
    pub fn lam(x: &str, ty: Type, body: Term) -> Term {
        let closed = subst::close_lam(&body, x);
        Term::Lam(Hint::new(x), ty, Arc::new(closed))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// `mu 'a:ty. cmd`, binding every free `'a` in `cmd`.
    pub fn mu(a: &str, ty: Type, cmd: Command) -> Term {
        let closed = subst::close_mu_cmd(&cmd, a);
        Term::Mu(Hint::new(a), ty, closed)
    }

    pub fn suc(t: Term) -> Term {
        Term::Suc(Arc::new(t))
    }

    pub fn nrec(ty: Type, base: Term, step: Term, scrut: Term) -> Term {
        Term::NRec(ty, Arc::new(base), Arc::new(step), Arc::new(scrut))
    }

    /// `catch 'a t`, that is `mu 'a:ty. ['a] t`.
    pub fn catch(a: &str, ty: Type, t: Term) -> Term {
        Term::mu(a, ty, Command::new(a, t))
    }

    /// `throw t 'a`, that is `mu 'g:ty. ['a] t` with a binder nothing refers to.
    pub fn throw(t: Term, a: &str, ty: Type) -> Term {
        Term::Mu(Hint::new("g"), ty, Command::new(a, t))
    }

    /// Number of term and command nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero => 1,
            Term::Lam(_, _, b) | Term::Suc(b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Mu(_, _, c) => 1 + c.size(),
            Term::NRec(_, r, s, t) => 1 + r.size() + s.size() + t.size(),
        }
    }

    pub fn mu_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero => 0,
            Term::Lam(_, _, b) | Term::Suc(b) => b.mu_count(),
            Term::App(f, a) => f.mu_count() + a.mu_count(),
            Term::Mu(_, _, c) => 1 + c.body.mu_count(),
            Term::NRec(_, r, s, t) => r.mu_count() + s.mu_count() + t.mu_count(),
        }
    }

    /// True when no `Mu` node (and hence no command) occurs.
    pub fn is_mu_free(&self) -> bool {
        self.mu_count() == 0
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        collect_term(self, &mut fv);
        fv
    }

    /// True when there are no free variables of either sort.
    pub fn is_closed(&self) -> bool {
        let fv = self.free_vars();
        fv.lam.is_empty() && fv.mu.is_empty()
    }

    /// Children in path order.
    pub fn child(&self, i: usize) -> Option<ExprRef<'_>> {
        match (self, i) {
            (Term::Lam(_, _, b), 0) | (Term::Suc(b), 0) => Some(ExprRef::Term(b)),
            (Term::App(f, _), 0) => Some(ExprRef::Term(f)),
            (Term::App(_, a), 1) => Some(ExprRef::Term(a)),
            (Term::Mu(_, _, c), 0) => Some(ExprRef::Command(c)),
            (Term::NRec(_, r, _, _), 0) => Some(ExprRef::Term(r)),
            (Term::NRec(_, _, s, _), 1) => Some(ExprRef::Term(s)),
            (Term::NRec(_, _, _, t), 2) => Some(ExprRef::Term(t)),
            _ => None,
        }
    }
}

impl Command {
    pub fn new(target: &str, body: Term) -> Command {
        Command { target: Var::free(target), body: Arc::new(body) }
    }

    pub fn size(&self) -> usize {
        1 + self.body.size()
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        collect_cmd(self, &mut fv);
        fv
    }
}

#[derive(Clone, Copy, Debug)]
pub enum ExprRef<'a> {
    Term(&'a Term),
    Command(&'a Command),
}

impl Expr {
    pub fn size(&self) -> usize {
        match self {
            Expr::Term(t) => t.size(),
            Expr::Command(c) => c.size(),
        }
    }

    pub fn free_vars(&self) -> FreeVars {
        match self {
            Expr::Term(t) => t.free_vars(),
            Expr::Command(c) => c.free_vars(),
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Expr::Term(t) => Some(t),
            Expr::Command(_) => None,
        }
    }

    pub fn as_command(&self) -> Option<&Command> {
        match self {
            Expr::Command(c) => Some(c),
            Expr::Term(_) => None,
        }
    }
}

impl From<Term> for Expr {
    fn from(t: Term) -> Expr {
        Expr::Term(t)
    }
}

impl From<Command> for Expr {
    fn from(c: Command) -> Expr {
        Expr::Command(c)
    }
}

/// FV and FCV of an expression.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub lam: BTreeSet<Ident>,
    pub mu: BTreeSet<Ident>,
}

fn collect_term(t: &Term, fv: &mut FreeVars) {
    match t {
        Term::Var(Var::Free(x)) => {
            fv.lam.insert(x.clone());
        }
        Term::Var(Var::Bound(_)) | Term::Zero => {}
        Term::Lam(_, _, b) | Term::Suc(b) => collect_term(b, fv),
        Term::App(f, a) => {
            collect_term(f, fv);
            collect_term(a, fv);
        }
        Term::Mu(_, _, c) => collect_cmd(c, fv),
        Term::NRec(_, r, s, u) => {
            collect_term(r, fv);
            collect_term(s, fv);
            collect_term(u, fv);
        }
    }
}

fn collect_cmd(c: &Command, fv: &mut FreeVars) {
    if let Var::Free(a) = &c.target {
        fv.mu.insert(a.clone());
    }
    collect_term(&c.body, fv);
}

pub fn numeral(n: u64) -> Term {
    let mut t = Term::Zero;
    for _ in 0..n {
        t = Term::suc(t);
    }
    t
}

pub fn as_numeral(t: &Term) -> Option<u64> {
    let mut n = 0;
    let mut cur = t;
    loop {
        match cur {
            Term::Zero => return Some(n),
            Term::Suc(inner) => {
                n += 1;
                cur = inner;
            }
            _ => return None,
        }
    }
}

/// `0 | suc v | \x.r`
pub fn is_value(t: &Term) -> bool {
    let mut cur = t;
    loop {
        match cur {
            Term::Zero | Term::Lam(..) => return true,
            Term::Suc(inner) => cur = inner,
            _ => return false,
        }
    }
}

pub fn alpha_eq<T: PartialEq>(a: &T, b: &T) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n() -> Type {
        Type::Nat
    }

    #[test]
    fn numerals() {
        assert_eq!(numeral(0), Term::Zero);
        assert_eq!(numeral(1), Term::suc(Term::Zero));
        assert_eq!(numeral(3), Term::suc(Term::suc(Term::suc(Term::Zero))));
        for k in [0, 1, 7, 10_000] {
            assert_eq!(as_numeral(&numeral(k)), Some(k));
            assert!(numeral(k).free_vars().lam.is_empty());
        }
    }

    #[test]
    fn numeral_recognition_is_syntactic() {
        assert_eq!(as_numeral(&Term::suc(Term::Zero)), Some(1));
        assert_eq!(as_numeral(&Term::suc(Term::mu("a", n(), Command::new("a", Term::Zero)))), None);
        assert_eq!(as_numeral(&Term::Zero), Some(0));
    }

    #[test]
    fn values() {
        assert!(is_value(&Term::lam("x", n(), Term::var("x"))));
        assert!(is_value(&numeral(2)));
        assert!(!is_value(&Term::mu("a", n(), Command::new("a", Term::Zero))));
        assert!(!is_value(&Term::suc(Term::var("x"))));
    }

    #[test]
    fn free_variables() {
        let c = Command::new("a", Term::var("x"));
        let fv = c.free_vars();
        assert_eq!(fv.lam.iter().map(|s| &**s).collect::<Vec<_>>(), ["x"]);
        assert_eq!(fv.mu.iter().map(|s| &**s).collect::<Vec<_>>(), ["a"]);
        let fv = Term::mu("a", n(), Command::new("a", Term::Zero)).free_vars();
        assert!(fv.lam.is_empty() && fv.mu.is_empty());
        let fv = Term::lam("x", n(), Term::app(Term::var("x"), Term::var("y"))).free_vars();
        assert_eq!(fv.lam.iter().map(|s| &**s).collect::<Vec<_>>(), ["y"]);
        assert!(fv.mu.is_empty());
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&Term::lam("x", n(), Term::var("x")), &Term::lam("y", n(), Term::var("y"))));
        assert!(alpha_eq(
            &Term::mu("a", n(), Command::new("a", Term::Zero)),
            &Term::mu("b", n(), Command::new("b", Term::Zero))
        ));
        assert!(!alpha_eq(&Term::var("x"), &Term::var("y")));
        assert!(!alpha_eq(&Term::lam("x", n(), Term::var("x")), &Term::lam("x", n(), Term::var("y"))));
    }

    #[test]
    fn bound_and_free_sorts_stay_apart() {
        // a lambda named like a free continuation does not bind it
        let t = Term::lam("a", n(), Term::mu("b", n(), Command::new("a", Term::var("a"))));
        let fv = t.free_vars();
        assert!(fv.lam.is_empty());
        assert_eq!(fv.mu.len(), 1);
    }

    #[test]
    fn hints_strip_fresh_suffix() {
        let x = fresh("k");
        assert!(x.starts_with("k#"));
        assert_eq!(Hint::new(&x).as_str(), "k");
        assert_ne!(fresh("k"), x);
    }

    #[test]
    fn types_print_right_nested() {
        let t = Type::arrows([n(), n()], n());
        assert_eq!(t.to_string(), "N -> N -> N");
        assert_eq!(Type::arrow(Type::arrow(n(), n()), n()).to_string(), "(N -> N) -> N");
    }

    #[test]
    fn sizes_and_children() {
        let t = Term::nrec(n(), Term::Zero, Term::var("s"), Term::var("t"));
        assert_eq!(t.size(), 4);
        assert!(matches!(t.child(2), Some(ExprRef::Term(Term::Var(_)))));
        assert!(t.child(3).is_none());
        assert_eq!(Term::mu("a", n(), Command::new("a", Term::Zero)).size(), 3);
    }
}
