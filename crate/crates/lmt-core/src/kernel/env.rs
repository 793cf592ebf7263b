//! Typing environments: Γ for lambda variables, Δ for mu variables.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::term::{Ident, Type};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeEnv {
    pub lam: BTreeMap<Ident, Type>,
    pub mu: BTreeMap<Ident, Type>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    /// Extension shadows an earlier entry of the same name.
    pub fn with_lam(mut self, x: &str, ty: Type) -> TypeEnv {
        self.lam.insert(Arc::from(x), ty);
        self
    }

    pub fn with_mu(mut self, a: &str, ty: Type) -> TypeEnv {
        self.mu.insert(Arc::from(a), ty);
        self
    }

    pub fn lam_type(&self, x: &str) -> Option<&Type> {
        self.lam.get(x)
    }

    pub fn mu_type(&self, a: &str) -> Option<&Type> {
        self.mu.get(a)
    }
}
