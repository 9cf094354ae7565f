//! Simply-typed λ-terms in βη-long normal form.
//!
//! Binding is nameless: a [`Head::Bound`] index counts individual bound
//! variables outwards from the innermost binder, across binder lists. A term
//! `λx y. f x` is stored as binders `[a, a]`, head `f`, argument `Bound(1)`.
//! Consequently α-equivalent terms are structurally equal and `==` *is*
//! α-equality.
//!
//! Terms are interpreted relative to a context of enclosing bound variables.
//! A term with no loose indices is *closed*; only closed terms appear as
//! equation sides and substitution images.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::types::Type;

/// A free (instantiable) variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Arc<str>,
    ty: Type,
}

impl Var {
    pub fn new(name: &str, ty: Type) -> Self {
        Var {
            name: Arc::from(name),
            ty,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}

/// A function symbol of the signature.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym {
    name: Arc<str>,
    ty: Type,
}

impl Sym {
    pub fn new(name: &str, ty: Type) -> Self {
        Sym {
            name: Arc::from(name),
            ty,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Head {
    Const(Sym),
    Free(Var),
    Bound(usize),
}

impl Head {
    pub fn is_free(&self) -> bool {
        matches!(self, Head::Free(_))
    }

    /// Function symbols and bound variables.
    pub fn is_rigid(&self) -> bool {
        !self.is_free()
    }

    pub fn as_free(&self) -> Option<&Var> {
        match self {
            Head::Free(v) => Some(v),
            _ => None,
        }
    }

    fn shifted(&self, by: usize, cutoff: usize) -> Head {
        match self {
            Head::Bound(i) if *i >= cutoff => Head::Bound(i + by),
            other => other.clone(),
        }
    }
}

/// `λ binders. head(args)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Term {
    pub binders: Vec<Type>,
    pub head: Head,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("bound index {index} escapes a context of {depth} variables")]
    LooseIndex { index: usize, depth: usize },
    #[error("head of type {head} applied to {given} arguments (path {path:?})")]
    Arity {
        head: Type,
        given: usize,
        path: Vec<usize>,
    },
    #[error("argument {position} has type {found}, expected {expected} (path {path:?})")]
    Argument {
        position: usize,
        expected: Type,
        found: Type,
        path: Vec<usize>,
    },
}

impl Term {
    pub fn new(binders: Vec<Type>, head: Head, args: Vec<Term>) -> Self {
        Term {
            binders,
            head,
            args,
        }
    }

    /// A head with no arguments and no binders, e.g. a constant of base type.
    pub fn atom(head: Head) -> Self {
        Term::new(Vec::new(), head, Vec::new())
    }

    pub fn constant(sym: &Sym, args: Vec<Term>) -> Self {
        Term::new(Vec::new(), Head::Const(sym.clone()), args)
    }

    /// The canonical (η-expanded) form `x↑` of a free variable.
    pub fn canonical_form(var: &Var) -> Term {
        let tys = var.ty().args();
        Term::new(tys.to_vec(), Head::Free(var.clone()), eta_args(tys))
    }

    /// The canonical form of the bound variable `index` of type `ty`, as a
    /// term living in the same context as the index.
    pub fn eta_bound(index: usize, ty: &Type) -> Term {
        let tys = ty.args();
        Term::new(tys.to_vec(), Head::Bound(index + tys.len()), eta_args(tys))
    }

    /// Strips the binders, leaving the base-typed body.
    pub fn body(&self) -> Term {
        Term::new(Vec::new(), self.head.clone(), self.args.clone())
    }

    /// Same body under a different binder list.
    pub fn with_binders(&self, binders: Vec<Type>) -> Term {
        Term::new(binders, self.head.clone(), self.args.clone())
    }

    /// `x̄.t_i`: argument `i` with this term's binders prepended.
    pub fn arg_under_binders(&self, i: usize) -> Term {
        let arg = &self.args[i];
        let mut binders = self.binders.clone();
        binders.extend(arg.binders.iter().cloned());
        arg.with_binders(binders)
    }

    /// `|s|`: one plus the sizes of the arguments; binders are free.
    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.args.iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<Var>) {
        if let Head::Free(v) = &self.head {
            out.insert(v.clone());
        }
        for a in &self.args {
            a.collect_free_vars(out);
        }
    }

    pub fn has_free_vars(&self) -> bool {
        self.head.is_free() || self.args.iter().any(Term::has_free_vars)
    }

    pub fn mentions(&self, var: &Var) -> bool {
        matches!(&self.head, Head::Free(v) if v == var) || self.args.iter().any(|a| a.mentions(var))
    }

    /// Loose bound indices of the term, relative to its enclosing context.
    pub fn loose_indices(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_loose(0, &mut out);
        out
    }

    fn collect_loose(&self, depth: usize, out: &mut BTreeSet<usize>) {
        let d = depth + self.binders.len();
        if let Head::Bound(i) = self.head {
            if i >= d {
                out.insert(i - d);
            }
        }
        for a in &self.args {
            a.collect_loose(d, out);
        }
    }

    pub fn is_closed(&self) -> bool {
        self.max_loose(0).is_none()
    }

    fn max_loose(&self, depth: usize) -> Option<usize> {
        let d = depth + self.binders.len();
        let own = match self.head {
            Head::Bound(i) if i >= d => Some(i - d),
            _ => None,
        };
        self.args
            .iter()
            .filter_map(|a| a.max_loose(d))
            .chain(own)
            .max()
    }

    /// Weakening: adds `by` to every loose index `>= cutoff`.
    pub fn shifted(&self, by: usize, cutoff: usize) -> Term {
        if by == 0 {
            return self.clone();
        }
        let c = cutoff + self.binders.len();
        Term::new(
            self.binders.clone(),
            self.head.shifted(by, c),
            self.args.iter().map(|a| a.shifted(by, c)).collect(),
        )
    }

    /// Strengthening: removes the bound variables `cutoff .. cutoff+by` from
    /// the context. Fails if the term mentions one of them.
    pub fn lowered(&self, by: usize, cutoff: usize) -> Option<Term> {
        if by == 0 {
            return Some(self.clone());
        }
        let c = cutoff + self.binders.len();
        let head = match self.head {
            Head::Bound(i) if i >= c + by => Head::Bound(i - by),
            Head::Bound(i) if i >= c => return None,
            ref other => other.clone(),
        };
        let args = self
            .args
            .iter()
            .map(|a| a.lowered(by, c))
            .collect::<Option<Vec<_>>>()?;
        Some(Term::new(self.binders.clone(), head, args))
    }

    /// Applies a term `λw̄. b` (with exactly `args.len()` binders) to `args`,
    /// reducing hereditarily. `args` live in the same context as `self`.
    pub fn apply_to(&self, args: &[Term]) -> Term {
        debug_assert_eq!(self.binders.len(), args.len());
        instantiate(&self.body(), 0, args)
    }

    /// Infers (and checks) the type of the term in a context of bound
    /// variable types, listed outermost first.
    pub fn type_in(&self, context: &[Type]) -> Result<Type, TypeError> {
        let mut ctx = context.to_vec();
        let mut path = Vec::new();
        self.check_in(&mut ctx, &mut path)
    }

    /// Type of a closed term.
    pub fn type_of(&self) -> Result<Type, TypeError> {
        self.type_in(&[])
    }

    fn check_in(&self, ctx: &mut Vec<Type>, path: &mut Vec<usize>) -> Result<Type, TypeError> {
        let base = ctx.len();
        ctx.extend(self.binders.iter().cloned());
        let head_ty = match &self.head {
            Head::Const(s) => s.ty().clone(),
            Head::Free(v) => v.ty().clone(),
            Head::Bound(i) => {
                if *i >= ctx.len() {
                    let depth = ctx.len();
                    ctx.truncate(base);
                    return Err(TypeError::LooseIndex { index: *i, depth });
                }
                ctx[ctx.len() - 1 - i].clone()
            }
        };
        if head_ty.arity() != self.args.len() {
            ctx.truncate(base);
            return Err(TypeError::Arity {
                head: head_ty,
                given: self.args.len(),
                path: path.clone(),
            });
        }
        for (i, (arg, expected)) in self.args.iter().zip(head_ty.args()).enumerate() {
            path.push(i);
            let found = arg.check_in(ctx, path);
            path.pop();
            let found = match found {
                Ok(t) => t,
                Err(e) => {
                    ctx.truncate(base);
                    return Err(e);
                }
            };
            if &found != expected {
                ctx.truncate(base);
                return Err(TypeError::Argument {
                    position: i,
                    expected: expected.clone(),
                    found,
                    path: path.clone(),
                });
            }
        }
        ctx.truncate(base);
        Ok(Type::arrow(self.binders.clone(), Type::base(head_ty.result().clone())))
    }

    /// `s ⊆ t`: `t` occurs in `self` at some position, with the binders
    /// on the path carried down into the occurrence.
    pub fn has_subterm(&self, t: &Term) -> bool {
        let mut prefix = Vec::new();
        self.has_subterm_under(&mut prefix, t)
    }

    fn has_subterm_under(&self, prefix: &mut Vec<Type>, t: &Term) -> bool {
        let base = prefix.len();
        let total = base + self.binders.len();
        if total == t.binders.len()
            && self.head == t.head
            && self.args == t.args
            && t.binders[..base] == prefix[..]
            && t.binders[base..] == self.binders[..]
        {
            return true;
        }
        prefix.extend(self.binders.iter().cloned());
        let found = self.args.iter().any(|a| a.has_subterm_under(prefix, t));
        prefix.truncate(base);
        found
    }

    /// Visits every node together with its argument-index path and the
    /// binder types accumulated from the root (including the node's own).
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Term, &[usize], &[Type])) {
        let mut path = Vec::new();
        let mut ctx = Vec::new();
        self.visit_rec(&mut path, &mut ctx, f);
    }

    fn visit_rec<'a>(
        &'a self,
        path: &mut Vec<usize>,
        ctx: &mut Vec<Type>,
        f: &mut dyn FnMut(&'a Term, &[usize], &[Type]),
    ) {
        let base = ctx.len();
        ctx.extend(self.binders.iter().cloned());
        f(self, path, ctx);
        for (i, a) in self.args.iter().enumerate() {
            path.push(i);
            a.visit_rec(path, ctx, f);
            path.pop();
        }
        ctx.truncate(base);
    }

    /// Renames free variables according to `rename` (types must agree).
    pub fn rename_free(&self, rename: &dyn Fn(&Var) -> Option<Var>) -> Term {
        let head = match &self.head {
            Head::Free(v) => Head::Free(rename(v).unwrap_or_else(|| v.clone())),
            other => other.clone(),
        };
        Term::new(
            self.binders.clone(),
            head,
            self.args.iter().map(|a| a.rename_free(rename)).collect(),
        )
    }
}

/// Arguments `ȳ↑` for a fresh binder list of the given types.
pub(crate) fn eta_args(tys: &[Type]) -> Vec<Term> {
    let n = tys.len();
    tys.iter()
        .enumerate()
        .map(|(k, ty)| Term::eta_bound(n - 1 - k, ty))
        .collect()
}

/// Hereditary instantiation of bound variables.
///
/// `t` lives in `Γ, ȳ, Δ` with `|ȳ| = args.len()` and `|Δ| = depth`; `args`
/// live in `Γ`. The result lives in `Γ, Δ` and has `ȳ` replaced by `args`,
/// with every head occurrence of a replaced variable β-reduced away.
pub fn instantiate(t: &Term, depth: usize, args: &[Term]) -> Term {
    let n = args.len();
    let d = depth + t.binders.len();
    let new_args: Vec<Term> = t.args.iter().map(|a| instantiate(a, d, args)).collect();
    match t.head {
        Head::Bound(i) if i >= d && i < d + n => {
            let image = args[n - 1 - (i - d)].shifted(d, 0);
            let reduced = image.apply_to(&new_args);
            debug_assert!(reduced.binders.is_empty());
            Term::new(t.binders.clone(), reduced.head, reduced.args)
        }
        Head::Bound(i) if i >= d + n => Term::new(t.binders.clone(), Head::Bound(i - n), new_args),
        ref head => Term::new(t.binders.clone(), head.clone(), new_args),
    }
}
