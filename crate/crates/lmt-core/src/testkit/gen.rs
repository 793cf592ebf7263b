//! Type-directed random generation of well-typed terms.

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kernel::{numeral, Command, EvalContext, Frame, Ident, Term, Type, TypeEnv};
use crate::reduction::LawInstance;
use crate::typing::{infer_context, infer_term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_nodes: usize,
    /// Nesting depth of arrows in invented types.
    pub arrow_depth: usize,
    /// Maximum number of mu binders.
    pub mu_budget: usize,
    /// Ignore the variables of the environment.
    pub closed_only: bool,
    pub target_type: Option<Type>,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig { seed: 0, max_nodes: 40, arrow_depth: 2, mu_budget: 4, closed_only: true, target_type: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("no term of type {0} fits in {1} nodes")]
    GenerationFailed(Type, usize),
}

const ATTEMPTS: usize = 64;

/// Mixes a case index into a seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E8AD);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gen_typed(cfg: &GenConfig, env: &TypeEnv) -> Result<Term, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let target = match &cfg.target_type {
        Some(ty) => ty.clone(),
        None => random_type(&mut rng, cfg.arrow_depth),
    };
    for _ in 0..ATTEMPTS {
        let mut g = Gen::new(cfg, env, &mut rng);
        let lo = (cfg.max_nodes / 2).max(1);
        let size = g.rng.random_range(lo..=cfg.max_nodes.max(1));
        if let Some(t) = g.term(&target, size) {
            debug_assert!(t.size() <= cfg.max_nodes);
            if infer_term(env, &t).as_ref() == Ok(&target) {
                return Ok(t);
            }
        }
    }
    Err(GenError::GenerationFailed(target, cfg.max_nodes))
}

pub fn random_type<R: Rng>(rng: &mut R, depth: usize) -> Type {
    if depth == 0 || rng.random_bool(0.55) {
        Type::Nat
    } else {
        Type::arrow(random_type(rng, depth - 1), random_type(rng, depth - 1))
    }
}

/// Smallest closed inhabitant size.
fn min_size(ty: &Type) -> usize {
    match ty {
        Type::Nat => 1,
        Type::Arrow(_, b) => 1 + min_size(b),
    }
}

struct Gen<'a, R> {
    cfg: &'a GenConfig,
    rng: &'a mut R,
    lams: Vec<(Ident, Type)>,
    mus: Vec<(Ident, Type)>,
    mus_left: usize,
    counter: usize,
}

impl<'a, R: Rng> Gen<'a, R> {
    fn new(cfg: &'a GenConfig, env: &TypeEnv, rng: &'a mut R) -> Gen<'a, R> {
        let (lams, mus) = if cfg.closed_only {
            (Vec::new(), Vec::new())
        } else {
            (
                env.lam.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
                env.mu.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            )
        };
        Gen { cfg, rng, lams, mus, mus_left: cfg.mu_budget, counter: 0 }
    }

    fn name(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    fn small_type(&mut self) -> Type {
        let d = self.cfg.arrow_depth.min(2);
        random_type(self.rng, d)
    }

    /// Random sizes `>= mins` summing to at most `total`.
    fn split(&mut self, total: usize, mins: &[usize]) -> Option<Vec<usize>> {
        let need: usize = mins.iter().sum();
        if need > total {
            return None;
        }
        let mut extra = total - need;
        let mut out = mins.to_vec();
        let n = out.len();
        for (i, slot) in out.iter_mut().enumerate() {
            let give = if i + 1 == n { extra } else { self.rng.random_range(0..=extra) };
            *slot += give;
            extra -= give;
        }
        Some(out)
    }

    fn term(&mut self, ty: &Type, size: usize) -> Option<Term> {
        if size == 0 {
            return None;
        }
        let vars: Vec<Ident> = self.lams.iter().filter(|(_, t)| t == ty).map(|(x, _)| x.clone()).collect();
        // (kind, weight)
        let mut options: Vec<(u8, u32)> = Vec::new();
        if !vars.is_empty() {
            options.push((0, if size <= 2 { 8 } else { 2 }));
        }
        match ty {
            Type::Nat => {
                options.push((1, if size <= 2 { 6 } else { 1 }));
                if size >= 2 {
                    options.push((2, 2));
                }
            }
            Type::Arrow(..) => options.push((3, 6)),
        }
        if size >= 3 {
            options.push((4, 4));
        }
        if size >= 5 {
            options.push((5, 2));
        }
        if size >= 3 && self.mus_left > 0 {
            options.push((6, 4));
        }
        while !options.is_empty() {
            let total: u32 = options.iter().map(|o| o.1).sum();
            let mut pick = self.rng.random_range(0..total);
            let idx = options
                .iter()
                .position(|o| {
                    if pick < o.1 {
                        true
                    } else {
                        pick -= o.1;
                        false
                    }
                })
                .expect("pick below total");
            let (kind, _) = options.swap_remove(idx);
            let saved = (self.lams.len(), self.mus.len(), self.mus_left);
            let got = match kind {
                0 => Some(Term::var(&vars[self.rng.random_range(0..vars.len())])),
                1 => Some(numeral(self.rng.random_range(0..=3u64).min(size as u64 - 1))),
                2 => self.term(&Type::Nat, size - 1).map(Term::suc),
                3 => self.lam(ty, size),
                4 => self.app(ty, size),
                5 => self.nrec(ty, size),
                _ => self.mu(ty, size),
            };
            if got.is_some() {
                return got;
            }
            self.lams.truncate(saved.0);
            self.mus.truncate(saved.1);
            self.mus_left = saved.2;
        }
        if size >= min_size(ty) {
            Some(self.minimal(ty))
        } else {
            None
        }
    }

    fn minimal(&mut self, ty: &Type) -> Term {
        match ty {
            Type::Nat => Term::Zero,
            Type::Arrow(a, b) => {
                let x = self.name("x");
                Term::lam(&x, (**a).clone(), self.minimal(b))
            }
        }
    }

    fn lam(&mut self, ty: &Type, size: usize) -> Option<Term> {
        let (Some(dom), Some(cod)) = (ty.domain().cloned(), ty.codomain().cloned()) else {
            return None;
        };
        let x = self.name("x");
        self.lams.push((Ident::from(x.as_str()), dom.clone()));
        let body = self.term(&cod, size - 1);
        self.lams.pop();
        Some(Term::lam(&x, dom, body?))
    }

    fn app(&mut self, ty: &Type, size: usize) -> Option<Term> {
        let arg_ty = self.small_type();
        let fty = Type::arrow(arg_ty.clone(), ty.clone());
        let sizes = self.split(size - 1, &[1, 1])?;
        let f = self.term(&fty, sizes[0])?;
        let a = self.term(&arg_ty, sizes[1])?;
        Some(Term::app(f, a))
    }

    fn nrec(&mut self, ty: &Type, size: usize) -> Option<Term> {
        let step_ty = Type::arrows([Type::Nat, ty.clone()], ty.clone());
        let sizes = self.split(size - 1, &[1, 3, 1])?;
        let r = self.term(ty, sizes[0])?;
        let s = self.term(&step_ty, sizes[1])?;
        let n = self.term(&Type::Nat, sizes[2])?;
        Some(Term::nrec(ty.clone(), r, s, n))
    }

    fn mu(&mut self, ty: &Type, size: usize) -> Option<Term> {
        self.mus_left -= 1;
        let a = self.name("a");
        self.mus.push((Ident::from(a.as_str()), ty.clone()));
        let (target, target_ty) = if self.rng.random_bool(0.5) {
            (Ident::from(a.as_str()), ty.clone())
        } else {
            let i = self.rng.random_range(0..self.mus.len());
            self.mus[i].clone()
        };
        let body = self.term(&target_ty, size - 2);
        self.mus.pop();
        Some(Term::mu(&a, ty.clone(), Command::new(&target, body?)))
    }
}

/// An evaluation context `E : hole => _` with up to `frames` frames whose
/// pieces are generated by `cfg` in `env`.
pub fn gen_context(cfg: &GenConfig, env: &TypeEnv, hole: &Type, frames: usize) -> EvalContext {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 0xC0));
    let mut e = EvalContext::hole();
    let mut ty = hole.clone();
    let n = rng.random_range(0..=frames);
    let piece = |ty: Type, salt: u64| {
        let c = GenConfig {
            seed: derive_seed(cfg.seed, salt),
            max_nodes: (cfg.max_nodes / 3).max(min_size(&ty) + 2),
            target_type: Some(ty),
            ..cfg.clone()
        };
        gen_typed(&c, env).ok()
    };
    for i in 0..n {
        let frame = match &ty {
            Type::Arrow(dom, _) => match piece((**dom).clone(), 100 + i as u64) {
                Some(a) => Frame::App(a),
                None => break,
            },
            Type::Nat if rng.random_bool(0.5) => Frame::Suc,
            Type::Nat => {
                let rho = random_type(&mut rng, 1);
                let step = Type::arrows([Type::Nat, rho.clone()], rho.clone());
                match (piece(rho.clone(), 200 + i as u64), piece(step, 300 + i as u64)) {
                    (Some(r), Some(s)) => Frame::NRec(rho, r, s),
                    _ => break,
                }
            }
        };
        ty = frame.result_type(&ty);
        e = EvalContext::singular(frame).compose(&e);
    }
    debug_assert!(infer_context(env, &e, hole).is_ok());
    e
}

/// An instantiation of the catch and throw laws.
pub fn gen_law_instance(seed: u64, max_nodes: usize) -> LawInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ty = random_type(&mut rng, 1);
    let env = TypeEnv::new().with_mu("a", ty.clone()).with_mu("b", ty.clone());
    let cfg = GenConfig {
        seed: derive_seed(seed, 1),
        max_nodes,
        arrow_depth: 1,
        mu_budget: 2,
        closed_only: false,
        target_type: Some(ty.clone()),
    };
    let t = gen_typed(&cfg, &env).unwrap_or(Term::Zero);
    let ctx_env = TypeEnv::new().with_mu("b", ty.clone());
    let ctx_cfg = GenConfig { seed: derive_seed(seed, 2), ..cfg };
    let ctx = gen_context(&ctx_cfg, &ctx_env, &ty, 3);
    LawInstance { a: Ident::from("a"), b: Ident::from("b"), ty, t, ctx }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::check_catch_throw_laws;

    fn nat(seed: u64, max_nodes: usize) -> GenConfig {
        GenConfig { seed, max_nodes, target_type: Some(Type::Nat), ..GenConfig::default() }
    }

    #[test]
    fn smallest_inhabitant() {
        assert_eq!(gen_typed(&nat(7, 1), &TypeEnv::new()), Ok(Term::Zero));
    }

    #[test]
    fn deterministic() {
        for seed in 0..20 {
            let cfg = GenConfig { seed, ..GenConfig::default() };
            assert_eq!(gen_typed(&cfg, &TypeEnv::new()), gen_typed(&cfg, &TypeEnv::new()));
        }
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
    }

    #[test]
    fn respects_budgets() {
        for seed in 0..200 {
            let cfg = GenConfig { seed, mu_budget: 0, ..GenConfig::default() };
            let t = gen_typed(&cfg, &TypeEnv::new()).unwrap();
            assert!(t.is_mu_free());
            assert!(t.size() <= cfg.max_nodes);
            let cfg = GenConfig { mu_budget: 2, ..nat(seed, 30) };
            let t = gen_typed(&cfg, &TypeEnv::new()).unwrap();
            assert!(t.mu_count() <= 2 && t.size() <= 30 && t.is_closed());
            assert_eq!(infer_term(&TypeEnv::new(), &t), Ok(Type::Nat));
        }
    }

    #[test]
    fn open_terms_use_the_environment() {
        let env = TypeEnv::new().with_lam("x", Type::Nat).with_mu("a", Type::Nat);
        let mut saw_free = false;
        for seed in 0..100 {
            let cfg = GenConfig { closed_only: false, ..nat(seed, 20) };
            let t = gen_typed(&cfg, &env).unwrap();
            assert_eq!(infer_term(&env, &t), Ok(Type::Nat));
            saw_free |= !t.is_closed();
        }
        assert!(saw_free);
    }

    #[test]
    fn contexts_are_well_typed() {
        for seed in 0..50 {
            let e = gen_context(&GenConfig { seed, max_nodes: 20, ..GenConfig::default() }, &TypeEnv::new(), &Type::Nat, 3);
            assert!(infer_context(&TypeEnv::new(), &e, &Type::Nat).is_ok());
        }
    }

    #[test]
    fn law_instances_hold() {
        let insts: Vec<_> = (0..10).map(|s| gen_law_instance(s, 10)).collect();
        for i in &insts {
            let env = TypeEnv::new().with_mu("a", i.ty.clone()).with_mu("b", i.ty.clone());
            assert_eq!(infer_term(&env, &i.t).as_ref(), Ok(&i.ty));
            assert!(!i.ctx.plug(Term::Zero).free_vars().mu.iter().any(|m| &**m == "a"));
        }
        let r = check_catch_throw_laws(&insts);
        assert!(r.ok(), "{:?}", r.violations);
    }
}
