//! Substitutions: finite maps from free variables to closed terms of the
//! same type, with hereditary (β-reducing) application.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::term::{instantiate, Head, Term, TypeError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("binding for {var} has type {found}, expected {expected}")]
    TypeMismatch {
        var: String,
        expected: String,
        found: String,
    },
    #[error("binding for {var} is ill-typed: {source}")]
    IllTyped {
        var: String,
        #[source]
        source: TypeError,
    },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Checks the image against the variable's type before inserting.
    pub fn insert(&mut self, var: Var, image: Term) -> Result<(), SubstError> {
        let found = image.type_of().map_err(|source| SubstError::IllTyped {
            var: var.name().to_string(),
            source,
        })?;
        if &found != var.ty() {
            return Err(SubstError::TypeMismatch {
                var: var.name().to_string(),
                expected: var.ty().to_string(),
                found: found.to_string(),
            });
        }
        self.bindings.insert(var, image);
        Ok(())
    }

    pub fn singleton(var: Var, image: Term) -> Result<Self, SubstError> {
        let mut s = Self::new();
        s.insert(var, image)?;
        Ok(s)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Result<Self, SubstError> {
        let mut s = Self::new();
        for (v, t) in pairs {
            s.insert(v, t)?;
        }
        Ok(s)
    }

    /// Inserts without the type check. Callers guarantee well-typedness.
    pub(crate) fn insert_unchecked(&mut self, var: Var, image: Term) {
        debug_assert_eq!(image.type_of().as_ref(), Ok(var.ty()));
        self.bindings.insert(var, image);
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.bindings.get(var)
    }

    /// `θ(x)`, which is the canonical form `x↑` outside the domain.
    pub fn image_of(&self, var: &Var) -> Term {
        self.bindings
            .get(var)
            .cloned()
            .unwrap_or_else(|| Term::canonical_form(var))
    }

    pub fn contains(&self, var: &Var) -> bool {
        self.bindings.contains_key(var)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.bindings.keys().cloned().collect()
    }

    /// Free variables introduced by the images.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.bindings.values() {
            t.collect_free_vars(&mut out);
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        let fv = self.free_vars();
        self.bindings.keys().all(|v| !fv.contains(v))
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        apply_rec(t, self)
    }

    /// `θδ`: first `self`, then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut bindings: BTreeMap<Var, Term> = self
            .bindings
            .iter()
            .map(|(v, t)| (v.clone(), other.apply(t)))
            .collect();
        for (v, t) in &other.bindings {
            bindings.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Substitution { bindings }
    }

    pub fn restrict(&self, keep: &BTreeSet<Var>) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| keep.contains(*v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    /// Drops bindings `x ↦ x↑`.
    pub fn without_identities(&self) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, t)| **t != Term::canonical_form(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    /// Equality over `vars`: `θ1(x) = θ2(x)` for every `x ∈ vars`.
    pub fn agrees_on(&self, other: &Substitution, vars: &BTreeSet<Var>) -> bool {
        vars.iter().all(|v| self.image_of(v) == other.image_of(v))
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    /// Collects bindings that are already known to be well-typed.
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.insert_unchecked(v, t);
        }
        s
    }
}

fn apply_rec(t: &Term, theta: &Substitution) -> Term {
    let args: Vec<Term> = t.args.iter().map(|a| apply_rec(a, theta)).collect();
    if let Head::Free(v) = &t.head {
        if let Some(image) = theta.get(v) {
            // Images are closed, so no shifting is needed before reducing.
            let reduced = instantiate(&image.body(), 0, &args);
            return Term::new(t.binders.clone(), reduced.head, reduced.args);
        }
    }
    Term::new(t.binders.clone(), t.head.clone(), args)
}
