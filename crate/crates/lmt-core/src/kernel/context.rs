//! Evaluation contexts `E ::= □ | E t | suc E | nrec r s E` and
//! η-contexts `H ::= □ | E[mu a.[a]H]`.

use std::sync::Arc;

use super::term::{Command, Hint, Term, Type, Var};
use crate::subst;

/// One layer of an evaluation context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    /// `□ t`
    App(Term),
    /// `suc □`
    Suc,
    /// `nrec_ty r s □`
    NRec(Type, Term, Term),
}

impl Frame {
    pub fn wrap(&self, t: Term) -> Term {
        match self {
            Frame::App(a) => Term::App(Arc::new(t), Arc::new(a.clone())),
            Frame::Suc => Term::Suc(Arc::new(t)),
            Frame::NRec(ty, r, s) => Term::NRec(ty.clone(), Arc::new(r.clone()), Arc::new(s.clone()), Arc::new(t)),
        }
    }

    /// Type of the frame given the type of its hole; total on ill-typed input.
    pub fn result_type(&self, hole: &Type) -> Type {
        match self {
            Frame::App(_) => hole.codomain().cloned().unwrap_or_else(|| hole.clone()),
            Frame::Suc => Type::Nat,
            Frame::NRec(ty, _, _) => ty.clone(),
        }
    }
}

/// Frames are stored innermost first: `frames[0]` surrounds the hole.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvalContext {
    frames: Vec<Frame>,
}

impl EvalContext {
    pub fn hole() -> EvalContext {
        EvalContext { frames: Vec::new() }
    }

    pub fn from_frames(frames: Vec<Frame>) -> EvalContext {
        EvalContext { frames }
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    /// `inner t`
    pub fn app_ctx(mut inner: EvalContext, arg: Term) -> EvalContext {
        inner.frames.push(Frame::App(arg));
        inner
    }

    /// `suc inner`
    pub fn suc_ctx(mut inner: EvalContext) -> EvalContext {
        inner.frames.push(Frame::Suc);
        inner
    }

    /// `nrec_ty r s inner`
    pub fn nrec_ctx(ty: Type, base: Term, step: Term, mut inner: EvalContext) -> EvalContext {
        inner.frames.push(Frame::NRec(ty, base, step));
        inner
    }

    pub fn singular(frame: Frame) -> EvalContext {
        EvalContext { frames: vec![frame] }
    }

    pub fn is_hole(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn is_singular(&self) -> bool {
        self.frames.len() == 1
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    pub fn plug(&self, t: Term) -> Term {
        self.frames.iter().fold(t, |acc, f| f.wrap(acc))
    }

    /// `EF`, so that `EF[t] = E[F[t]]`.
    pub fn compose(&self, inner: &EvalContext) -> EvalContext {
        let mut frames = inner.frames.clone();
        frames.extend(self.frames.iter().cloned());
        EvalContext { frames }
    }

    pub fn result_type(&self, hole: &Type) -> Type {
        self.frames.iter().fold(hole.clone(), |ty, f| f.result_type(&ty))
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> EvalContext {
        let frames = self
            .frames
            .iter()
            .map(|fr| match fr {
                Frame::App(a) => Frame::App(f(a)),
                Frame::Suc => Frame::Suc,
                Frame::NRec(ty, r, s) => {
                    let r = f(r);
                    Frame::NRec(ty.clone(), r, f(s))
                }
            })
            .collect();
        EvalContext { frames }
    }

    pub fn size(&self) -> usize {
        self.frames
            .iter()
            .map(|f| match f {
                Frame::App(a) => 1 + a.size(),
                Frame::Suc => 1,
                Frame::NRec(_, r, s) => 1 + r.size() + s.size(),
            })
            .sum()
    }
}

/// Splits `t` as `E[h]` with `E` maximal, so `h` is a variable, lambda, zero or mu.
pub fn spine(t: &Term) -> (EvalContext, &Term) {
    let mut outer_first = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::App(f, a) => {
                outer_first.push(Frame::App((**a).clone()));
                cur = f;
            }
            Term::Suc(u) => {
                outer_first.push(Frame::Suc);
                cur = u;
            }
            Term::NRec(ty, r, s, u) => {
                outer_first.push(Frame::NRec(ty.clone(), (**r).clone(), (**s).clone()));
                cur = u;
            }
            _ => break,
        }
    }
    outer_first.reverse();
    (EvalContext { frames: outer_first }, cur)
}

/// One η-frame `E[mu a:annot.[a]□]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaFrame {
    pub outer: EvalContext,
    pub binder: Hint,
    pub annot: Type,
}

/// Frames are stored outermost first. The binder of a frame is never
/// referenced below it, which holds by construction: [`EtaContext::plug`]
/// shifts what it places under a binder.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaContext {
    frames: Vec<EtaFrame>,
}

impl EtaContext {
    pub fn hole() -> EtaContext {
        EtaContext { frames: Vec::new() }
    }

    /// `outer[mu binder:annot.[binder] inner]`
    pub fn frame(outer: EvalContext, binder: &str, annot: Type, inner: EtaContext) -> EtaContext {
        let mut frames = vec![EtaFrame { outer, binder: Hint::new(binder), annot }];
        frames.extend(inner.frames);
        EtaContext { frames }
    }

    pub fn from_frames(frames: Vec<EtaFrame>) -> EtaContext {
        EtaContext { frames }
    }

    pub fn frames(&self) -> &[EtaFrame] {
        &self.frames
    }

    pub fn is_hole(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn plug(&self, t: Term) -> Term {
        self.frames.iter().rev().fold(t, |acc, fr| {
            let cmd = Command { target: Var::Bound(0), body: Arc::new(subst::shift(&acc, 0, 1)) };
            fr.outer.plug(Term::Mu(fr.binder.clone(), fr.annot.clone(), cmd))
        })
    }

    /// The evaluation context left once every η-binder is dropped.
    pub fn collapse(&self) -> EvalContext {
        self.frames.iter().fold(EvalContext::hole(), |acc, fr| acc.compose(&fr.outer))
    }
}
