//! Brute-force referees for small problems.
//!
//! Everything here is deliberately naive: terms are enumerated exhaustively
//! by size and candidate unifiers are checked by plain substitution, so the
//! results are independent of the matcher and the unification engine.

pub mod random;

use std::collections::BTreeSet;

use crate::dhp::CheckMode;
use crate::matching::is_instance;
use crate::signature::Signature;
use crate::subst::Substitution;
use crate::term::{Head, Term, Var};
use crate::types::{Sort, Type};
use crate::unify::{enumerate_reserving, EngineConfig, Equation, Status};

/// Enumeration limits. Sizes count head occurrences, so `λx. f x` has size 2.
#[derive(Debug, Clone)]
pub struct EnumBudget {
    pub max_term_size: usize,
    /// Size of the pool `V1, V2, …` of extra free variables available to
    /// enumerated terms.
    pub max_fresh_vars: usize,
    pub signature: Signature,
}

impl EnumBudget {
    pub fn new(signature: Signature, max_term_size: usize, max_fresh_vars: usize) -> Self {
        EnumBudget {
            max_term_size,
            max_fresh_vars,
            signature,
        }
    }
}

struct Enumerator<'a> {
    sig: &'a Signature,
    pool: Vec<String>,
}

/// Splits `total` into `parts` positive summands, lexicographically.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn product(lists: Vec<Vec<Term>>) -> Vec<Vec<Term>> {
    let mut acc: Vec<Vec<Term>> = vec![vec![]];
    for list in lists {
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for t in &list {
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

impl Enumerator<'_> {
    /// Terms of type `ty` and size exactly `size` in `scope`.
    fn exact(&self, ty: &Type, scope: &mut Vec<Type>, size: usize) -> Vec<Term> {
        let base = scope.len();
        scope.extend(ty.args().iter().cloned());
        let bodies = self.exact_base(ty.result(), scope, size);
        scope.truncate(base);
        bodies
            .into_iter()
            .map(|b| Term::new(ty.args().to_vec(), b.head, b.args))
            .collect()
    }

    fn applications(&self, head: Head, head_ty: &Type, scope: &mut Vec<Type>, size: usize, out: &mut Vec<Term>) {
        let n = head_ty.arity();
        for split in compositions(size - 1, n) {
            let lists: Vec<Vec<Term>> = head_ty
                .args()
                .iter()
                .zip(&split)
                .map(|(ty, &s)| self.exact(ty, scope, s))
                .collect();
            for args in product(lists) {
                out.push(Term::new(vec![], head.clone(), args));
            }
        }
    }

    fn exact_base(&self, sort: &Sort, scope: &mut Vec<Type>, size: usize) -> Vec<Term> {
        let mut out = Vec::new();
        if size == 0 {
            return out;
        }
        let n = scope.len();
        for j in 0..n {
            let ty = scope[j].clone();
            if ty.result() == sort {
                self.applications(Head::Bound(n - 1 - j), &ty, scope, size, &mut out);
            }
        }
        for sym in self.sig.funs() {
            if sym.ty().result() == sort {
                self.applications(Head::Const(sym.clone()), sym.ty(), scope, size, &mut out);
            }
        }
        if !self.pool.is_empty() {
            let args: Vec<Term> = scope
                .iter()
                .enumerate()
                .map(|(j, ty)| Term::eta_bound(n - 1 - j, ty))
                .collect();
            if 1 + args.iter().map(Term::size).sum::<usize>() == size {
                let ty = Type::arrow(scope.clone(), Type::base(sort.clone()));
                for name in &self.pool {
                    out.push(Term::new(vec![], Head::Free(Var::new(name, ty.clone())), args.clone()));
                }
            }
        }
        out
    }
}

fn fresh_pool(count: usize, reserved: &BTreeSet<String>) -> Vec<String> {
    (1..)
        .map(|i| format!("V{i}"))
        .filter(|n| !reserved.contains(n))
        .take(count)
        .collect()
}

fn reserved_names(sig: &Signature, extra: &BTreeSet<Var>) -> BTreeSet<String> {
    sig.vars()
        .map(|v| v.name().to_string())
        .chain(sig.funs().map(|s| s.name().to_string()))
        .chain(extra.iter().map(|v| v.name().to_string()))
        .collect()
}

fn enumerate_with(ty: &Type, env: &[Type], budget: &EnumBudget, pool: Vec<String>) -> Vec<Term> {
    let e = Enumerator {
        sig: &budget.signature,
        pool,
    };
    let mut scope = env.to_vec();
    (1..=budget.max_term_size).flat_map(|s| e.exact(ty, &mut scope, s)).collect()
}

/// All canonical terms of type `ty` with size at most the budget, whose loose
/// bound indices refer to `env` (outermost first). Ordered by size, then by
/// head: bound variables outermost first, function symbols in declaration
/// order, then pool variables. A pool variable is applied to every bound
/// variable in scope.
pub fn enumerate_terms(ty: &Type, env: &[Type], budget: &EnumBudget) -> Vec<Term> {
    let reserved = reserved_names(&budget.signature, &BTreeSet::new());
    enumerate_with(ty, env, budget, fresh_pool(budget.max_fresh_vars, &reserved))
}

/// Renames pool variables `V1, V2, …` in order of first occurrence.
/// Returns `None` if more than `max` distinct ones occur.
fn canonicalize(theta: &Substitution, pool: &[String], max: usize) -> Option<Substitution> {
    let mut seen: Vec<Var> = Vec::new();
    fn walk(t: &Term, pool: &[String], seen: &mut Vec<Var>) {
        if let Head::Free(v) = &t.head {
            if pool.iter().any(|n| n == v.name()) && !seen.contains(v) {
                seen.push(v.clone());
            }
        }
        for a in &t.args {
            walk(a, pool, seen);
        }
    }
    for (_, t) in theta.iter() {
        walk(t, pool, &mut seen);
    }
    if seen.len() > max {
        return None;
    }
    let rename = |v: &Var| {
        seen.iter()
            .position(|s| s == v)
            .map(|i| Var::new(&pool[i], v.ty().clone()))
    };
    Some(theta.iter().map(|(v, t)| (v.clone(), t.rename_free(&rename))).collect())
}

/// Every `θ` with `dom(θ) = fv(E)` and images from [`enumerate_terms`] that
/// unifies all of `eqs`, without duplicates up to renaming of pool variables.
pub fn brute_force_unifiers(eqs: &[Equation], budget: &EnumBudget) -> Vec<Substitution> {
    let mut fv = BTreeSet::new();
    for e in eqs {
        fv.extend(e.free_vars());
    }
    let vars: Vec<Var> = fv.iter().cloned().collect();
    let reserved = reserved_names(&budget.signature, &fv);
    let pool = fresh_pool(budget.max_fresh_vars, &reserved);
    let candidates: Vec<Vec<Term>> = vars
        .iter()
        .map(|v| enumerate_with(v.ty(), &[], budget, pool.clone()))
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let theta: Substitution = vars
            .iter()
            .zip(&idx)
            .zip(&candidates)
            .map(|((v, &i), c)| (v.clone(), c[i].clone()))
            .collect();
        if eqs.iter().all(|e| e.is_solved_by(&theta)) {
            if let Some(canon) = canonicalize(&theta, &pool, budget.max_fresh_vars) {
                assert!(eqs.iter().all(|e| e.is_solved_by(&canon)));
                if seen.insert(canon.clone()) {
                    out.push(canon);
                }
            }
        }
        // Odometer, last variable fastest.
        let mut k = vars.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completeness {
    /// Number of oracle unifiers checked.
    pub checked: usize,
    /// Oracle unifiers that are not an instance of any engine solution.
    pub counterexamples: Vec<Substitution>,
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks that every bounded oracle unifier of `eqs` is an instance of one
/// of `solutions`.
pub fn check_csu_completeness(solutions: &[Substitution], eqs: &[Equation], budget: &EnumBudget) -> Completeness {
    let mut w = BTreeSet::new();
    for e in eqs {
        w.extend(e.free_vars());
    }
    let oracle = brute_force_unifiers(eqs, budget);
    let counterexamples = oracle
        .iter()
        .filter(|delta| {
            !solutions
                .iter()
                .any(|theta| is_instance(delta, theta, &w, CheckMode::Off).unwrap_or(false))
        })
        .cloned()
        .collect();
    Completeness {
        checked: oracle.len(),
        counterexamples,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Orthogonality {
    Orthogonal,
    CommonInstance(Substitution),
    Unknown,
}

/// A rigid head clash at corresponding positions reachable through rigid
/// heads only.
fn rigid_clash(s: &Term, t: &Term) -> bool {
    if !s.head.is_rigid() || !t.head.is_rigid() {
        return false;
    }
    if s.head != t.head || s.args.len() != t.args.len() {
        return true;
    }
    s.args.iter().zip(&t.args).any(|(a, b)| rigid_clash(a, b))
}

/// Decides whether `θ1` and `θ2` (with equal domains) have a common instance.
pub fn check_orthogonality(theta1: &Substitution, theta2: &Substitution, step_bound: usize) -> Orthogonality {
    let dom: Vec<Var> = theta1.domain().union(&theta2.domain()).cloned().collect();
    for x in &dom {
        if rigid_clash(&theta1.image_of(x), &theta2.image_of(x)) {
            return Orthogonality::Orthogonal;
        }
    }
    // Rename the free variables of θ2's images apart from those of θ1.
    let mut taken: BTreeSet<String> = theta1
        .free_vars()
        .iter()
        .chain(theta2.free_vars().iter())
        .chain(dom.iter())
        .map(|v| v.name().to_string())
        .collect();
    let mut renaming: Vec<(Var, Var)> = Vec::new();
    for v in theta2.free_vars() {
        let mut name = format!("{}'", v.name());
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        renaming.push((v.clone(), Var::new(&name, v.ty().clone())));
    }
    let rename = |v: &Var| renaming.iter().find(|(a, _)| a == v).map(|(_, b)| b.clone());
    let eqs: Vec<Equation> = dom
        .iter()
        .map(|x| Equation::new(theta1.image_of(x), theta2.image_of(x).rename_free(&rename)))
        .collect();
    let config = EngineConfig {
        max_steps: step_bound,
        max_solutions: Some(1),
        ..EngineConfig::default()
    };
    match enumerate_reserving(eqs, config, taken) {
        Ok(outcome) => match outcome.solutions.into_iter().next() {
            Some(sol) => Orthogonality::CommonInstance(sol.unifier),
            None if outcome.status == Status::Complete => Orthogonality::Orthogonal,
            None => Orthogonality::Unknown,
        },
        Err(_) => Orthogonality::Unknown,
    }
}
