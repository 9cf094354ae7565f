//! Seeded random generators for well-typed canonical terms.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dhp::{check_dhp, CheckMode};
use crate::expanded::is_expanded_at;
use crate::subst::Substitution;
use crate::term::{Head, Sym, Term, Var};
use crate::types::Type;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// What generated terms may mention.
#[derive(Debug, Clone, Default)]
pub struct Palette {
    pub consts: Vec<Sym>,
    pub vars: Vec<Var>,
    /// Probability of preferring a bound variable at a leaf.
    pub bound_bias: f64,
}

#[derive(Clone, Copy)]
enum Cand<'a> {
    Bound(usize, &'a Type),
    Const(&'a Sym),
    Free(&'a Var),
}

impl Cand<'_> {
    fn ty(&self) -> &Type {
        match self {
            Cand::Bound(_, t) => t,
            Cand::Const(s) => s.ty(),
            Cand::Free(v) => v.ty(),
        }
    }
}

/// A random term of type `ty` in `scope` (outermost first), or `None` if the
/// palette cannot build one within the depth limit.
pub fn term(rng: &mut Rng8, ty: &Type, scope: &mut Vec<Type>, pal: &Palette, depth: usize) -> Option<Term> {
    let base = scope.len();
    scope.extend(ty.args().iter().cloned());
    let body = body(rng, ty, scope, pal, depth);
    scope.truncate(base);
    let body = body?;
    Some(Term::new(ty.args().to_vec(), body.head, body.args))
}

fn body(rng: &mut Rng8, ty: &Type, scope: &mut Vec<Type>, pal: &Palette, depth: usize) -> Option<Term> {
    let sort = ty.result();
    let n = scope.len();
    let scope_copy = scope.clone();
    let mut cands: Vec<Cand> = scope_copy
        .iter()
        .enumerate()
        .filter(|(_, t)| t.result() == sort)
        .map(|(j, t)| Cand::Bound(n - 1 - j, t))
        .collect();
    let n_bound = cands.len();
    cands.extend(pal.consts.iter().filter(|s| s.ty().result() == sort).map(Cand::Const));
    cands.extend(pal.vars.iter().filter(|v| v.ty().result() == sort).map(Cand::Free));
    if cands.is_empty() {
        return None;
    }
    let leaves: Vec<Cand> = cands.iter().copied().filter(|c| c.ty().arity() == 0).collect();
    let pick = if depth == 0 {
        let bound_leaves: Vec<Cand> = leaves.iter().copied().filter(|c| matches!(c, Cand::Bound(..))).collect();
        if !bound_leaves.is_empty() && rng.gen_bool(pal.bound_bias) {
            *bound_leaves.choose(rng)?
        } else if !leaves.is_empty() {
            *leaves.choose(rng)?
        } else {
            // Only non-nullary heads: keep going, but give up eventually.
            *cands.choose(rng)?
        }
    } else if n_bound > 0 && rng.gen_bool(pal.bound_bias / 2.0) {
        cands[rng.gen_range(0..n_bound)]
    } else {
        *cands.choose(rng)?
    };
    if depth == 0 && pick.ty().arity() > 0 && scope.len() > 8 {
        return None;
    }
    let head_ty = pick.ty().clone();
    let next = depth.saturating_sub(1);
    let mut args = Vec::with_capacity(head_ty.arity());
    for aty in head_ty.args() {
        if depth == 0 && scope.len() > 6 {
            return None;
        }
        args.push(term(rng, aty, scope, pal, next)?);
    }
    let head = match pick {
        Cand::Bound(i, _) => Head::Bound(i),
        Cand::Const(s) => Head::Const(s.clone()),
        Cand::Free(v) => Head::Free(v.clone()),
    };
    Some(Term::new(vec![], head, args))
}

/// Retries [`term`] until it succeeds and satisfies `accept`.
pub fn term_where(
    rng: &mut Rng8,
    ty: &Type,
    env: &[Type],
    pal: &Palette,
    depth: usize,
    tries: usize,
    accept: impl Fn(&Term) -> bool,
) -> Option<Term> {
    for _ in 0..tries {
        let mut scope = env.to_vec();
        if let Some(t) = term(rng, ty, &mut scope, pal, depth) {
            if accept(&t) {
                return Some(t);
            }
        }
    }
    None
}

/// A random closed DHP of type `ty`.
pub fn dhp(rng: &mut Rng8, ty: &Type, pal: &Palette, depth: usize) -> Option<Term> {
    term_where(rng, ty, &[], pal, depth, 200, |t| check_dhp(t, CheckMode::Strict).accepted)
}

/// A random substitution on `vars` whose images are built from `pal`.
pub fn substitution(rng: &mut Rng8, vars: &[Var], pal: &Palette, depth: usize) -> Option<Substitution> {
    let mut theta = Substitution::new();
    for v in vars {
        let t = term_where(rng, v.ty(), &[], pal, depth, 50, |_| true)?;
        theta.insert(v.clone(), t).ok()?;
    }
    Some(theta)
}

/// A random substitution whose images are DHPs.
pub fn dhp_substitution(rng: &mut Rng8, vars: &[Var], pal: &Palette, depth: usize) -> Option<Substitution> {
    let mut theta = Substitution::new();
    for v in vars {
        theta.insert(v.clone(), dhp(rng, v.ty(), pal, depth)?).ok()?;
    }
    Some(theta)
}

/// A random term `x̄.t` of type `ty` under the prefix `env` that is expanded
/// with respect to `env`, free of free variables, and mentions `env`.
pub fn expanded_arg(rng: &mut Rng8, env: &[Type], ty: &Type, pal: &Palette, depth: usize) -> Option<Term> {
    let closed = Palette {
        vars: Vec::new(),
        ..pal.clone()
    };
    term_where(rng, ty, env, &closed, depth, 100, |t| {
        let whole = t.with_binders(env.iter().chain(&t.binders).cloned().collect());
        !t.loose_indices().is_empty() && is_expanded_at(&whole, env.len())
    })
    .map(|t| t.with_binders(env.iter().chain(&t.binders).cloned().collect()))
}
