//! The λμT calculus: Parigot's λμ with natural numbers and primitive recursion.

pub mod cps;
pub mod develop;
pub mod kernel;
pub mod reduction;
pub mod subst;
pub mod syntax;
pub mod testkit;
pub mod typing;

pub use kernel::*;
