//! Declared sorts, function symbols and free variables.

use indexmap::IndexMap;
use thiserror::Error;

use crate::term::{Sym, Var};
use crate::types::{Sort, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate declaration of {kind} `{name}`")]
    DuplicateDeclaration { kind: &'static str, name: String },
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: IndexMap<String, Sort>,
    funs: IndexMap<String, Sym>,
    vars: IndexMap<String, Var>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, name: &str) -> Result<Sort, SignatureError> {
        if self.sorts.contains_key(name) {
            return Err(SignatureError::DuplicateDeclaration {
                kind: "sort",
                name: name.to_string(),
            });
        }
        let s = Sort::new(name);
        self.sorts.insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn check_type(&self, ty: &Type) -> Result<(), SignatureError> {
        if !self.sorts.contains_key(ty.result().name()) {
            return Err(SignatureError::UnknownSort(ty.result().name().to_string()));
        }
        ty.args().iter().try_for_each(|a| self.check_type(a))
    }

    fn check_fresh_name(&self, name: &str, kind: &'static str) -> Result<(), SignatureError> {
        if self.funs.contains_key(name) || self.vars.contains_key(name) {
            return Err(SignatureError::DuplicateDeclaration {
                kind,
                name: name.to_string(),
            });
        }
        Ok(())
    }

    pub fn add_fun(&mut self, name: &str, ty: Type) -> Result<Sym, SignatureError> {
        self.check_fresh_name(name, "function symbol")?;
        self.check_type(&ty)?;
        let s = Sym::new(name, ty);
        self.funs.insert(name.to_string(), s.clone());
        Ok(s)
    }

    pub fn add_var(&mut self, name: &str, ty: Type) -> Result<Var, SignatureError> {
        self.check_fresh_name(name, "variable")?;
        self.check_type(&ty)?;
        let v = Var::new(name, ty);
        self.vars.insert(name.to_string(), v.clone());
        Ok(v)
    }

    pub fn sort(&self, name: &str) -> Option<&Sort> {
        self.sorts.get(name)
    }

    pub fn fun(&self, name: &str) -> Option<&Sym> {
        self.funs.get(name)
    }

    pub fn var(&self, name: &str) -> Option<&Var> {
        self.vars.get(name)
    }

    pub fn sorts(&self) -> impl Iterator<Item = &Sort> {
        self.sorts.values()
    }

    /// Function symbols in declaration order.
    pub fn funs(&self) -> impl Iterator<Item = &Sym> {
        self.funs.values()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.vars.values()
    }

    /// Whether `name` is taken by a function symbol or a declared variable.
    pub fn is_declared(&self, name: &str) -> bool {
        self.funs.contains_key(name) || self.vars.contains_key(name)
    }
}
