//! Printing in the surface syntax. Binder names come from hints, renamed
//! with a numeric suffix when they would clash. `mu` binders print as
//! `catch` or `throw` when re-reading the sugar gives back the same term.

use std::collections::BTreeSet;

use super::lexer::{is_ident_char, is_ident_start, KEYWORDS};
use crate::kernel::{as_numeral, Command, Expr, Hint, Term, Var};
use crate::reduction::as_ref;
use crate::subst::mu_index_occurs_cmd;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Top,
    Head,
    Atom,
}

struct Printer<'a> {
    lams: Vec<String>,
    mus: Vec<String>,
    free: BTreeSet<String>,
    /// Paths of mu nodes that must print without sugar.
    plain: &'a BTreeSet<Vec<usize>>,
    path: Vec<usize>,
}

fn sanitize(h: &Hint, fallback: &str) -> String {
    let s: String = h.as_str().chars().filter(|c| is_ident_char(*c)).collect();
    if s.chars().next().is_some_and(is_ident_start) {
        s
    } else {
        fallback.to_string()
    }
}

impl Printer<'_> {
    fn pick(&self, h: &Hint, fallback: &str, taken: &[String]) -> String {
        let base = sanitize(h, fallback);
        let clash = |s: &str| taken.iter().any(|t| t == s) || self.free.contains(s) || KEYWORDS.contains(&s);
        if !clash(&base) {
            return base;
        }
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { fallback } else { stem };
        (1..).map(|i| format!("{stem}{i}")).find(|s| !clash(s)).expect("unbounded suffixes")
    }

    fn lam_name(&self, v: &Var) -> String {
        match v {
            Var::Free(x) => x.to_string(),
            Var::Bound(i) => self.lams.iter().rev().nth(*i as usize).cloned().unwrap_or_else(|| format!("?{i}")),
        }
    }

    fn mu_name(&self, v: &Var) -> String {
        match v {
            Var::Free(a) => a.to_string(),
            Var::Bound(i) => self.mus.iter().rev().nth(*i as usize).cloned().unwrap_or_else(|| format!("?{i}")),
        }
    }

    fn child(&mut self, i: usize, f: impl FnOnce(&mut Self) -> String) -> String {
        self.path.push(i);
        let s = f(self);
        self.path.pop();
        s
    }

    fn term(&mut self, t: &Term, prec: Prec) -> String {
        if let Some(n) = as_numeral(t) {
            return n.to_string();
        }
        let (s, needs) = match t {
            Term::Var(v) => (self.lam_name(v), Prec::Atom),
            Term::Zero => ("0".to_string(), Prec::Atom),
            Term::Lam(h, ty, b) => {
                let x = self.pick(h, "x", &self.lams);
                self.lams.push(x.clone());
                let body = self.child(0, |p| p.term(b, Prec::Top));
                self.lams.pop();
                (format!("\\{x}:{ty}. {body}"), Prec::Top)
            }
            Term::App(f, a) => {
                let f = self.child(0, |p| p.term(f, Prec::Head));
                let a = self.child(1, |p| p.term(a, Prec::Atom));
                (format!("{f} {a}"), Prec::Head)
            }
            Term::Suc(u) => (format!("S {}", self.child(0, |p| p.term(u, Prec::Atom))), Prec::Head),
            Term::NRec(ty, r, s, n) => {
                let r = self.child(0, |p| p.term(r, Prec::Top));
                let s = self.child(1, |p| p.term(s, Prec::Top));
                let n = self.child(2, |p| p.term(n, Prec::Top));
                (format!("nrec{{{ty}}}({r}; {s}; {n})"), Prec::Head)
            }
            Term::Mu(h, ty, c) => (self.mu(h, ty, c), Prec::Top),
        };
        if prec > needs {
            format!("({s})")
        } else {
            s
        }
    }

    fn mu(&mut self, h: &Hint, ty: &crate::kernel::Type, c: &Command) -> String {
        let sugar = !self.plain.contains(&self.path);
        let a = self.pick(h, "a", &self.mus);
        self.mus.push(a.clone());
        let out = if sugar && c.target == Var::Bound(0) {
            let body = self.child(0, |p| p.child(0, |p| p.term(&c.body, Prec::Atom)));
            format!("catch '{a} {body}")
        } else if sugar && !mu_index_occurs_cmd(c, 0) {
            let body = self.child(0, |p| p.child(0, |p| p.term(&c.body, Prec::Atom)));
            format!("throw {body} '{}", self.mu_name(&c.target))
        } else {
            format!("mu '{a}:{ty}. {}", self.child(0, |p| p.command(c)))
        };
        self.mus.pop();
        out
    }

    fn command(&mut self, c: &Command) -> String {
        let body = self.child(0, |p| p.term(&c.body, Prec::Top));
        format!("['{}] {body}", self.mu_name(&c.target))
    }
}

fn render(e: &Expr, plain: &BTreeSet<Vec<usize>>) -> String {
    let fv = e.free_vars();
    let free = fv.lam.iter().chain(fv.mu.iter()).map(|s| s.to_string()).collect();
    let mut p = Printer { lams: Vec::new(), mus: Vec::new(), free, plain, path: Vec::new() };
    match e {
        Expr::Term(t) => p.term(t, Prec::Top),
        Expr::Command(c) => p.command(c),
    }
}

/// Paths of mu nodes whose annotations differ between two terms of the same
/// shape.
fn annotation_mismatches(a: &Expr, b: &Expr) -> Option<BTreeSet<Vec<usize>>> {
    fn go(a: crate::kernel::ExprRef<'_>, b: crate::kernel::ExprRef<'_>, path: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) -> bool {
        use crate::kernel::ExprRef::{Command as C, Term as T};
        match (a, b) {
            (T(Term::Mu(_, t1, _)), T(Term::Mu(_, t2, _))) if t1 != t2 => {
                out.insert(path.clone());
            }
            (T(x), T(y)) if std::mem::discriminant(x) != std::mem::discriminant(y) => return false,
            (C(_), T(_)) | (T(_), C(_)) => return false,
            _ => {}
        }
        let (ca, cb) = (children(a), children(b));
        if ca.len() != cb.len() {
            return false;
        }
        for (i, (x, y)) in ca.into_iter().zip(cb).enumerate() {
            path.push(i);
            let ok = go(x, y, path, out);
            path.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    fn children(e: crate::kernel::ExprRef<'_>) -> Vec<crate::kernel::ExprRef<'_>> {
        match e {
            crate::kernel::ExprRef::Term(t) => (0..3).map_while(|i| t.child(i)).collect(),
            crate::kernel::ExprRef::Command(c) => vec![crate::kernel::ExprRef::Term(&c.body)],
        }
    }
    let mut out = BTreeSet::new();
    go(as_ref(a), as_ref(b), &mut Vec::new(), &mut out).then_some(out)
}

/// Surface text that parses back to `e` up to renaming of bound names.
pub fn pretty_expr(e: &Expr) -> String {
    let mut plain = BTreeSet::new();
    loop {
        let s = render(e, &plain);
        let back = super::parse_expr(&s).map(|(x, _)| x);
        let Ok(back) = back else { return render(e, &all_mu_paths(e)) };
        if &back == e {
            return s;
        }
        match annotation_mismatches(e, &back) {
            Some(diff) if !diff.is_empty() && !diff.is_subset(&plain) => plain.extend(diff),
            _ => return render(e, &all_mu_paths(e)),
        }
    }
}

fn all_mu_paths(e: &Expr) -> BTreeSet<Vec<usize>> {
    fn go(e: crate::kernel::ExprRef<'_>, path: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        let kids: Vec<_> = match e {
            crate::kernel::ExprRef::Term(t) => {
                if matches!(t, Term::Mu(..)) {
                    out.insert(path.clone());
                }
                (0..3).map_while(|i| t.child(i)).collect()
            }
            crate::kernel::ExprRef::Command(c) => vec![crate::kernel::ExprRef::Term(&c.body)],
        };
        for (i, k) in kids.into_iter().enumerate() {
            path.push(i);
            go(k, path, out);
            path.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(as_ref(e), &mut Vec::new(), &mut out);
    out
}

pub fn pretty_term(t: &Term) -> String {
    pretty_expr(&Expr::Term(t.clone()))
}

pub fn pretty_command(c: &Command) -> String {
    pretty_expr(&Expr::Command(c.clone()))
}
