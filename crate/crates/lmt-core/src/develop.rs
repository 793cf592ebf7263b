//! Parallel reduction and complete developments.
//!
//! Parallel reduction `=>` contracts any set of redexes at once:
//!
//! ```text
//! (t1) x => x                 (t2) 0 => 0              (t3) \x.t => \x.t'
//! (t4) E[t] => E'[t']         for a singular E
//! (t5) (\x.t) r => t'[x := r']
//! (t6) E[mu a.c] => mu a.c'[a := a E']
//! (t7) mu a.[a]t => t'        a not free in t
//! (t8) nrec r s 0 => r'
//! (t9) nrec r s (suc n) => s' n (nrec r' s' n)
//! (c1) [a]t => [a]t'          (c2) [a]E[mu b.c] => c'[b := a E']
//! ```
//!
//! The complete development `t°` is reachable from every parallel reduct of `t`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::kernel::{
    as_numeral, spine, Command, EtaContext, EtaFrame, EvalContext, Expr, Frame, Hint, Term, Type,
};
use crate::reduction::is_eta_body;
use crate::subst::{instantiate_lam, lift_bound, retarget_bound, unshift_mu};

/// The exclusive cases of term classification. Pieces of the η-wrapped
/// cases are expressed at the level of the classified term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Var,
    NumeralV,
    LamV,
    BetaRedex,
    NRecNumRedex,
    /// `H[r]` with `H` not a hole and `r = E[\x.s]`, `E[0]` or `E[x]`.
    EtaWrappedStable { h: EtaContext, core: Term },
    /// `H[E[mu b.c]]` where `mu b.c` is not itself an η-frame. `body` lies
    /// under the binder.
    EtaWrappedMu { h: EtaContext, e: EvalContext, binder: Hint, annot: Type, body: Command },
    OtherApp,
    OtherNRec,
    OtherSuc,
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Var => "var",
            Shape::NumeralV => "numeral",
            Shape::LamV => "lambda",
            Shape::BetaRedex => "beta-redex",
            Shape::NRecNumRedex => "nrec-numeral-redex",
            Shape::EtaWrappedStable { .. } => "eta-wrapped-stable",
            Shape::EtaWrappedMu { .. } => "eta-wrapped-mu",
            Shape::OtherApp => "other-app",
            Shape::OtherNRec => "other-nrec",
            Shape::OtherSuc => "other-suc",
        }
    }
}

/// Peels the longest chain of η-frames off `t`.
fn peel_eta(t: &Term) -> (EtaContext, Term) {
    let mut frames = Vec::new();
    let mut cur = t.clone();
    loop {
        let (e, head) = spine(&cur);
        let next = match head {
            Term::Mu(h, annot, c) if is_eta_body(c) => {
                frames.push(EtaFrame { outer: e, binder: h.clone(), annot: annot.clone() });
                unshift_mu(&c.body)
            }
            _ => break,
        };
        cur = next;
    }
    (EtaContext::from_frames(frames), cur)
}

pub fn classify_shape(t: &Term) -> Shape {
    let (h, core) = peel_eta(t);
    let (e, head) = spine(&core);
    if let Term::Mu(binder, annot, body) = head {
        return Shape::EtaWrappedMu { h, e, binder: binder.clone(), annot: annot.clone(), body: body.clone() };
    }
    if !h.is_hole() {
        return Shape::EtaWrappedStable { h, core };
    }
    match t {
        Term::Var(_) => Shape::Var,
        Term::Zero => Shape::NumeralV,
        Term::Suc(_) if as_numeral(t).is_some() => Shape::NumeralV,
        Term::Suc(_) => Shape::OtherSuc,
        Term::Lam(..) => Shape::LamV,
        Term::App(f, _) if matches!(**f, Term::Lam(..)) => Shape::BetaRedex,
        Term::App(..) => Shape::OtherApp,
        Term::NRec(_, _, _, u) if as_numeral(u).is_some() => Shape::NRecNumRedex,
        Term::NRec(..) => Shape::OtherNRec,
        Term::Mu(..) => unreachable!("a mu is its own spine head"),
    }
}

/// `t°`
pub fn complete_dev(t: &Term) -> Term {
    match classify_shape(t) {
        Shape::Var | Shape::NumeralV => t.clone(),
        Shape::LamV => match t {
            Term::Lam(h, ty, b) => Term::Lam(h.clone(), ty.clone(), Arc::new(complete_dev(b))),
            _ => unreachable!(),
        },
        Shape::BetaRedex => match t {
            Term::App(f, r) => match &**f {
                Term::Lam(_, _, b) => instantiate_lam(&complete_dev(b), &complete_dev(r)),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        },
        Shape::NRecNumRedex => match t {
            Term::NRec(ty, r, s, u) => match &**u {
                Term::Suc(n) => {
                    let s0 = complete_dev(s);
                    Term::app(Term::App(Arc::new(s0.clone()), n.clone()), Term::NRec(ty.clone(), Arc::new(complete_dev(r)), Arc::new(s0), n.clone()))
                }
                _ => complete_dev(r),
            },
            _ => unreachable!(),
        },
        Shape::EtaWrappedStable { h, core } => complete_dev_eta(&h).plug(complete_dev(&core)),
        Shape::EtaWrappedMu { h, e, binder, annot, body } => {
            let ctx = complete_dev_eta(&h).compose(&complete_dev_ctx(&e));
            let ty = ctx.result_type(&annot);
            Term::Mu(binder, ty, lift_bound(&complete_dev_cmd(&body), &ctx))
        }
        Shape::OtherApp => match t {
            Term::App(f, a) => Term::app(complete_dev(f), complete_dev(a)),
            _ => unreachable!(),
        },
        Shape::OtherSuc => match t {
            Term::Suc(u) => Term::suc(complete_dev(u)),
            _ => unreachable!(),
        },
        Shape::OtherNRec => match t {
            Term::NRec(ty, r, s, u) => Term::nrec(ty.clone(), complete_dev(r), complete_dev(s), complete_dev(u)),
            _ => unreachable!(),
        },
    }
}

/// `([a]E[mu b.c])° = c°[b := a E°]`, otherwise `([a]t)° = [a]t°`.
pub fn complete_dev_cmd(c: &Command) -> Command {
    let (e, head) = spine(&c.body);
    match head {
        Term::Mu(_, _, inner) => retarget_bound(&complete_dev_cmd(inner), &c.target, &complete_dev_ctx(&e)),
        _ => Command { target: c.target.clone(), body: Arc::new(complete_dev(&c.body)) },
    }
}

pub fn complete_dev_ctx(e: &EvalContext) -> EvalContext {
    e.map_terms(complete_dev)
}

/// `(E[mu a.[a]H])° = E° H°`
pub fn complete_dev_eta(h: &EtaContext) -> EvalContext {
    complete_dev_ctx(&h.collapse())
}

pub fn complete_dev_expr(e: &Expr) -> Expr {
    match e {
        Expr::Term(t) => Expr::Term(complete_dev(t)),
        Expr::Command(c) => Expr::Command(complete_dev_cmd(c)),
    }
}

/// Every `t'` with `t => t'`, without duplicates.
pub fn par_reducts(t: &Term) -> Vec<Term> {
    Par::default().term(t)
}

pub fn par_reducts_cmd(c: &Command) -> Vec<Command> {
    Par::default().cmd(c)
}

pub fn par_reducts_ctx(e: &EvalContext) -> Vec<EvalContext> {
    Par::default().ctx(e)
}

pub fn par_reducts_expr(e: &Expr) -> Vec<Expr> {
    match e {
        Expr::Term(t) => par_reducts(t).into_iter().map(Expr::Term).collect(),
        Expr::Command(c) => par_reducts_cmd(c).into_iter().map(Expr::Command).collect(),
    }
}

/// Does `from => to` hold?
pub fn par_reduces_to(from: &Expr, to: &Expr) -> bool {
    par_reducts_expr(from).contains(to)
}

fn dedup<T: Clone + Eq + std::hash::Hash>(items: Vec<T>) -> Vec<T> {
    let mut seen = HashSet::new();
    items.into_iter().filter(|x| seen.insert(x.clone())).collect()
}

#[derive(Default)]
struct Par {
    memo: HashMap<Term, Vec<Term>>,
}

impl Par {
    fn term(&mut self, t: &Term) -> Vec<Term> {
        if let Some(hit) = self.memo.get(t) {
            return hit.clone();
        }
        let out = dedup(self.term_uncached(t));
        self.memo.insert(t.clone(), out.clone());
        out
    }

    fn term_uncached(&mut self, t: &Term) -> Vec<Term> {
        let mut out = Vec::new();
        match t {
            Term::Var(_) | Term::Zero => out.push(t.clone()),
            Term::Lam(h, ty, b) => {
                for b2 in self.term(b) {
                    out.push(Term::Lam(h.clone(), ty.clone(), Arc::new(b2)));
                }
            }
            Term::App(f, a) => {
                let fs = self.term(f);
                let as_ = self.term(a);
                for f2 in &fs {
                    for a2 in &as_ {
                        out.push(Term::app(f2.clone(), a2.clone()));
                    }
                }
                if let Term::Lam(_, _, b) = &**f {
                    for b2 in self.term(b) {
                        for a2 in &as_ {
                            out.push(instantiate_lam(&b2, a2));
                        }
                    }
                }
                self.jump(t, &mut out);
            }
            Term::Suc(u) => {
                for u2 in self.term(u) {
                    out.push(Term::suc(u2));
                }
                self.jump(t, &mut out);
            }
            Term::NRec(ty, r, s, u) => {
                let rs = self.term(r);
                let ss = self.term(s);
                let us = self.term(u);
                for r2 in &rs {
                    for s2 in &ss {
                        for u2 in &us {
                            out.push(Term::nrec(ty.clone(), r2.clone(), s2.clone(), u2.clone()));
                        }
                    }
                }
                match &**u {
                    Term::Zero => out.extend(rs.iter().cloned()),
                    Term::Suc(n) if as_numeral(n).is_some() => {
                        for r2 in &rs {
                            for s2 in &ss {
                                out.push(Term::app(
                                    Term::App(Arc::new(s2.clone()), n.clone()),
                                    Term::NRec(ty.clone(), Arc::new(r2.clone()), Arc::new(s2.clone()), n.clone()),
                                ));
                            }
                        }
                    }
                    _ => {}
                }
                self.jump(t, &mut out);
            }
            Term::Mu(h, ty, c) => {
                for c2 in self.cmd(c) {
                    out.push(Term::Mu(h.clone(), ty.clone(), c2));
                }
                if is_eta_body(c) {
                    out.extend(self.term(&unshift_mu(&c.body)));
                }
            }
        }
        out
    }

    /// `(t6)` for a nonempty spine ending in a mu.
    fn jump(&mut self, t: &Term, out: &mut Vec<Term>) {
        let (e, head) = spine(t);
        if let Term::Mu(h, annot, c) = head {
            let ty = e.result_type(annot);
            let cs = self.cmd(c);
            for e2 in self.ctx(&e) {
                for c2 in &cs {
                    out.push(Term::Mu(h.clone(), ty.clone(), lift_bound(c2, &e2)));
                }
            }
        }
    }

    fn cmd(&mut self, c: &Command) -> Vec<Command> {
        let mut out: Vec<Command> = self
            .term(&c.body)
            .into_iter()
            .map(|b| Command { target: c.target.clone(), body: Arc::new(b) })
            .collect();
        let (e, head) = spine(&c.body);
        if let Term::Mu(_, _, inner) = head {
            let cs = self.cmd(inner);
            for e2 in self.ctx(&e) {
                for c2 in &cs {
                    out.push(retarget_bound(c2, &c.target, &e2));
                }
            }
        }
        dedup(out)
    }

    fn ctx(&mut self, e: &EvalContext) -> Vec<EvalContext> {
        let mut acc: Vec<Vec<Frame>> = vec![Vec::new()];
        for frame in e.frames() {
            let options: Vec<Frame> = match frame {
                Frame::App(a) => self.term(a).into_iter().map(Frame::App).collect(),
                Frame::Suc => vec![Frame::Suc],
                Frame::NRec(ty, r, s) => {
                    let ss = self.term(s);
                    let mut v = Vec::new();
                    for r2 in self.term(r) {
                        for s2 in &ss {
                            v.push(Frame::NRec(ty.clone(), r2.clone(), s2.clone()));
                        }
                    }
                    v
                }
            };
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |o| {
                        let mut p = prefix.clone();
                        p.push(o.clone());
                        p
                    })
                })
                .collect();
        }
        dedup(acc.into_iter().map(EvalContext::from_frames).collect())
    }
}

/// A parallel reduct `t'` of `t` from which `t°` is not a parallel reduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DevViolation {
    pub t: Expr,
    pub reduct: Expr,
    pub dev: Expr,
}

/// Checks `t => t'` implies `t' => t°` for every parallel reduct `t'`.
pub fn dev_closes(t: &Expr) -> Result<usize, Box<DevViolation>> {
    let dev = complete_dev_expr(t);
    let reducts = par_reducts_expr(t);
    for r in &reducts {
        if !par_reduces_to(r, &dev) {
            return Err(Box::new(DevViolation { t: t.clone(), reduct: r.clone(), dev }));
        }
    }
    Ok(reducts.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{alpha_eq, Var};
    use crate::reduction::reducts;
    use crate::syntax::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap().0
    }

    const FIRST: &str = "(mu 'a:N -> N. ['a] mu 'g:N -> N. ['a] x) y";
    const SECOND: &str = "mu 'a:N. ['a] (mu 'b:N -> N -> N. ['c] x) y z";

    #[test]
    fn shapes() {
        assert_eq!(classify_shape(&t("x")), Shape::Var);
        assert_eq!(classify_shape(&t("3")), Shape::NumeralV);
        assert_eq!(classify_shape(&t("S x")), Shape::OtherSuc);
        assert_eq!(classify_shape(&t("(\\x:N. x) y")), Shape::BetaRedex);
        assert_eq!(classify_shape(&t("f x")), Shape::OtherApp);
        assert_eq!(classify_shape(&t("nrec{N}(0; \\x:N. \\h:N. h; 2)")), Shape::NRecNumRedex);
        assert_eq!(classify_shape(&t("nrec{N}(0; \\x:N. \\h:N. h; x)")), Shape::OtherNRec);
        assert_eq!(classify_shape(&t("catch 'a (S x)")).name(), "eta-wrapped-stable");
    }

    #[test]
    fn first_diagram_shape() {
        match classify_shape(&t(FIRST)) {
            Shape::EtaWrappedMu { h, e, body, .. } => {
                assert!(h.is_hole());
                assert_eq!(e, EvalContext::app_ctx(EvalContext::hole(), t("y")));
                assert!(matches!(body.target, Var::Bound(0)));
            }
            s => panic!("unexpected shape {}", s.name()),
        }
    }

    #[test]
    fn parallel_reducts() {
        assert_eq!(par_reducts(&t("x")), vec![t("x")]);
        let beta = par_reducts(&t("(\\x:N. x) y"));
        assert_eq!(beta.len(), 2);
        assert!(beta.contains(&t("(\\x:N. x) y")) && beta.contains(&t("y")));
        let first = par_reducts(&t(FIRST));
        assert!(first.contains(&t("mu 'a:N. ['a] (mu 'g:N -> N. ['a] x y) y")));
        assert!(first.contains(&t("catch 'a (x y)")));
    }

    #[test]
    fn developments() {
        assert_eq!(complete_dev(&t("(\\x:N. x) y")), t("y"));
        assert_eq!(complete_dev(&t(FIRST)), t("catch 'a (x y)"));
        let second = complete_dev(&t(SECOND));
        assert!(alpha_eq(&second, &t("mu 'b:N. ['c] x")));
    }

    #[test]
    fn developments_close_the_diagrams() {
        let eta_chain = "(mu 'a:N -> N. ['a] mu 'b:N -> N. ['b] mu 'g:N -> N. ['a] f) (mu 'd:N. ['d] mu 'e:N. ['d] y)";
        for s in ["(\\x:N. x) y", FIRST, SECOND, eta_chain] {
            let u = t(s);
            let dev = Expr::Term(complete_dev(&u));
            for r in reducts(&Expr::Term(u.clone())) {
                assert!(par_reduces_to(&r.result, &dev), "{s}: {:?}", r.result);
            }
            assert!(dev_closes(&Expr::Term(u)).is_ok(), "{s}");
        }
    }

    #[test]
    fn parallel_reduction_is_reflexive_and_contains_steps() {
        for s in [FIRST, SECOND, "S (catch 'a (throw 2 'a))"] {
            let u = Expr::Term(t(s));
            let pr = par_reducts_expr(&u);
            assert!(pr.contains(&u));
            for r in reducts(&u) {
                assert!(pr.contains(&r.result), "{s}: {:?}", r.result);
            }
        }
    }
}
