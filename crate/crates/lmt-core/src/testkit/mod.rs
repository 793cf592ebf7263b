//! Random generation of well-typed terms, exhaustive oracles and property suites.

mod gen;
mod oracle;
mod suites;

pub use gen::{derive_seed, gen_context, gen_law_instance, gen_typed, random_type, GenConfig, GenError};
pub use oracle::{max_reduction_length, oracle_normal_forms, postpone_check, OracleError, PostponeReport};
pub use suites::{open_env, run_suite, Suite, SuiteReport, CPS_MAX_STEPS, POSTPONE_CAP};
