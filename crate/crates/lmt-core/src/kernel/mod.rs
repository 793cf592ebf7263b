//! Abstract syntax, numerals, values and contexts.

mod context;
mod env;
mod term;

pub use context::{spine, EtaContext, EtaFrame, EvalContext, Frame};
pub use env::TypeEnv;
pub use term::{
    alpha_eq, as_numeral, fresh, is_value, numeral, Command, Expr, ExprRef, FreeVars, Hint, Ident, Term, Type, Var,
};
