use lmt_core::reduction::{reachable_filtered, root_step, Reach, RuleSet};
use lmt_core::subst::subst_struct_cmd;
use lmt_core::syntax::{parse_expr_in, pretty_term};
use lmt_core::testkit::{derive_seed, gen_context, gen_typed, open_env, random_type, GenConfig};
use lmt_core::typing::{infer_context, infer_term};
use lmt_core::{as_numeral, numeral, Command, EvalContext, Expr, Term, Type, TypeEnv};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn term(seed: u64, size: usize, env: &TypeEnv, closed: bool) -> Term {
    let cfg = GenConfig { seed, max_nodes: size, closed_only: closed, ..GenConfig::default() };
    gen_typed(&cfg, env).expect("generation succeeds")
}

fn ctx(seed: u64, hole: &Type) -> EvalContext {
    gen_context(&GenConfig { seed, max_nodes: 15, ..GenConfig::default() }, &TypeEnv::new(), hole, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn numerals_round_trip(n in 0u64..=10_000) {
        prop_assert_eq!(as_numeral(&numeral(n)), Some(n));
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>(), closed in any::<bool>()) {
        let env = open_env();
        let t = term(seed, 40, &env, closed);
        let s = pretty_term(&t);
        let (back, _) = parse_expr_in(&s, &env).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
        prop_assert_eq!(back, Expr::Term(t), "{}", s);
    }

    #[test]
    fn plug_and_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hole = random_type(&mut rng, 1);
        let f = ctx(derive_seed(seed, 1), &hole);
        let mid = f.result_type(&hole);
        let e = ctx(derive_seed(seed, 2), &mid);
        let t = gen_typed(&GenConfig { seed, max_nodes: 10, target_type: Some(hole.clone()), ..GenConfig::default() }, &TypeEnv::new()).unwrap();
        prop_assert_eq!(e.compose(&f).plug(t.clone()), e.plug(f.plug(t.clone())));
        prop_assert_eq!(e.compose(&EvalContext::hole()), e.clone());
        prop_assert_eq!(EvalContext::hole().compose(&e), e.clone());
        let via_ctx = infer_context(&TypeEnv::new(), &e.compose(&f), &hole);
        prop_assert_eq!(via_ctx.clone(), infer_term(&TypeEnv::new(), &e.compose(&f).plug(t)));
        prop_assert_eq!(via_ctx, infer_context(&TypeEnv::new(), &e, &mid));
    }

    #[test]
    fn singular_contexts_lift_at_the_root(seed in any::<u64>()) {
        let e = ctx(seed, &Type::Nat);
        let Some(frame) = e.frames().first().cloned() else { return Ok(()) };
        let s = EvalContext::singular(frame);
        let env = TypeEnv::new().with_mu("a", Type::Nat);
        let body = term(derive_seed(seed, 3), 12, &env, false);
        let c = Command::new("a", body);
        let lifted: Vec<_> = root_step(&s.plug(Term::mu("a", Type::Nat, c.clone())))
            .into_iter()
            .filter(|(r, _)| r.is_lifting())
            .collect();
        prop_assert_eq!(lifted.len(), 1);
        prop_assert_eq!(&lifted[0].1, &Term::mu("a", s.result_type(&Type::Nat), subst_struct_cmd(&c, "a", "a", &s)));
    }

    #[test]
    fn lifting_through_any_context(seed in any::<u64>()) {
        let e = ctx(seed, &Type::Nat);
        let env = TypeEnv::new().with_mu("a", Type::Nat);
        let c = Command::new("a", term(derive_seed(seed, 4), 10, &env, false));
        let from = Expr::Term(e.plug(Term::mu("a", Type::Nat, c.clone())));
        let to = Expr::Term(Term::mu("a", e.result_type(&Type::Nat), subst_struct_cmd(&c, "a", "a", &e)));
        let reach = reachable_filtered(&from, &to, 10_000, RuleSet::STANDARD, &|r| r.is_lifting());
        prop_assert_eq!(reach, Reach::Found(e.depth()));
    }

    #[test]
    fn typing_ignores_unused_assumptions(seed in any::<u64>(), closed in any::<bool>()) {
        let env = open_env();
        let t = term(seed, 30, &env, closed);
        let ty = infer_term(&env, &t);
        prop_assert!(ty.is_ok());
        let wider = env.clone().with_lam("unused", Type::Nat).with_mu("z", Type::arrow(Type::Nat, Type::Nat));
        prop_assert_eq!(infer_term(&wider, &t), ty.clone());
        if t.is_closed() {
            prop_assert_eq!(infer_term(&TypeEnv::new(), &t), ty);
        }
    }
}
