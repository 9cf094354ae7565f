//! The inference rules: classification of equations, partial bindings,
//! flex-flex solutions and the one-step successor relation.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::dhp::CheckMode;
use crate::matching::{dedup, invert};
use crate::subst::Substitution;
use crate::term::{eta_args, Head, Term, Var};
use crate::types::Type;

use super::{EngineError, Equation, ProblemState, Rule, TraceNode, TraceStep};

/// Source of fresh variable names `H1, H2, …`, skipping reserved names.
#[derive(Debug, Clone)]
pub struct Fresh<'a> {
    pub counter: usize,
    pub reserved: &'a BTreeSet<String>,
}

impl Fresh<'_> {
    pub fn var(&mut self, ty: Type) -> Var {
        loop {
            self.counter += 1;
            let name = format!("H{}", self.counter);
            if !self.reserved.contains(&name) {
                return Var::new(&name, ty);
            }
        }
    }
}

/// Shape of an equation, as far as rule selection is concerned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EqClass {
    Trivial,
    /// Variable elimination applies; `lhs_is_var` tells which side is `x̄.F(x̄↑)`.
    Eliminable { lhs_is_var: bool },
    RigidRigid,
    FlexRigid { cyclic: bool, lhs_flex: bool },
    FlexFlex,
}

fn eliminable(side: &Term, other: &Term) -> bool {
    match &side.head {
        Head::Free(f) => *side == Term::canonical_form(f) && !other.mentions(f),
        _ => false,
    }
}

pub fn classify(eq: &Equation) -> EqClass {
    let (l, r) = (&eq.lhs, &eq.rhs);
    if l == r {
        return EqClass::Trivial;
    }
    if eliminable(l, r) {
        return EqClass::Eliminable { lhs_is_var: true };
    }
    if eliminable(r, l) {
        return EqClass::Eliminable { lhs_is_var: false };
    }
    match (&l.head, &r.head) {
        (Head::Free(_), Head::Free(_)) => EqClass::FlexFlex,
        (Head::Free(f), _) => EqClass::FlexRigid {
            cyclic: r.mentions(f),
            lhs_flex: true,
        },
        (_, Head::Free(f)) => EqClass::FlexRigid {
            cyclic: l.mentions(f),
            lhs_flex: false,
        },
        _ => EqClass::RigidRigid,
    }
}

/// Selection priority under the locally optimal strategy; `None` means the
/// equation is postponed indefinitely.
pub fn priority(class: EqClass, postpone_cyclic: bool) -> Option<u8> {
    Some(match class {
        EqClass::Trivial => 0,
        EqClass::Eliminable { .. } => 1,
        EqClass::RigidRigid => 2,
        EqClass::FlexRigid { cyclic: true, .. } if postpone_cyclic => return None,
        EqClass::FlexRigid { .. } => 3,
        EqClass::FlexFlex => 4,
    })
}

/// The partial binding `x̄.h(ȳ¹.H₁(x̄↑, ȳ¹↑), …)` of type `tau`.
///
/// `head` is either a function symbol or `Bound(i)` addressing one of the
/// binding's own binders; `head_ty` is its type.
pub fn partial_binding(tau: &Type, head: Head, head_ty: &Type, fresh: &mut Fresh) -> Term {
    let xs = tau.args();
    let args = head_ty
        .args()
        .iter()
        .map(|arg_ty| {
            let ys = arg_ty.args();
            let mut all = xs.to_vec();
            all.extend(ys.iter().cloned());
            let h = fresh.var(Type::function(all.clone(), arg_ty.result().clone()));
            Term::new(ys.to_vec(), Head::Free(h), eta_args(&all))
        })
        .collect();
    Term::new(xs.to_vec(), head, args)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot imitate a head of sort {head} for a variable of sort {var}")]
pub struct SortMismatch {
    pub head: String,
    pub var: String,
}

pub fn make_imitation_binding(tau: &Type, h: &crate::term::Sym, fresh: &mut Fresh) -> Result<Term, SortMismatch> {
    if h.ty().result() != tau.result() {
        return Err(SortMismatch {
            head: h.ty().result().to_string(),
            var: tau.result().to_string(),
        });
    }
    Ok(partial_binding(tau, Head::Const(h.clone()), h.ty(), fresh))
}

/// Projection bindings `z̄.z_i(…)` whose application to `args` exposes
/// `target` (a head living in the same context as `args`), by ascending `i`.
pub fn make_projection_bindings(
    tau: &Type,
    target: &Head,
    args: &[Term],
    fresh: &mut Fresh,
) -> Vec<(usize, Term)> {
    let xs = tau.args();
    let n = xs.len();
    let mut out = Vec::new();
    for (i, sigma) in xs.iter().enumerate() {
        if sigma.result() != tau.result() {
            continue;
        }
        // Arguments are expanded, so projecting onto them exposes their head.
        let Some(arg) = args.get(i) else { continue };
        let exposed = match &arg.head {
            Head::Bound(j) if *j < arg.binders.len() => continue,
            Head::Bound(j) => Head::Bound(j - arg.binders.len()),
            h => h.clone(),
        };
        if exposed != *target {
            continue;
        }
        out.push((i, partial_binding(tau, Head::Bound(n - 1 - i), sigma, fresh)));
    }
    out
}

/// `F ↦ ȳ.H(y_{i1}↑, …)` keeping the positions where both argument lists agree.
pub fn solve_flex_flex_same(f: &Var, s: &[Term], t: &[Term], fresh: &mut Fresh) -> Substitution {
    let xs = f.ty().args();
    let n = xs.len();
    let keep: Vec<usize> = (0..n).filter(|&i| s[i] == t[i]).collect();
    let h = fresh.var(Type::function(
        keep.iter().map(|&i| xs[i].clone()).collect(),
        f.ty().result().clone(),
    ));
    let args = keep.iter().map(|&i| Term::eta_bound(n - 1 - i, &xs[i])).collect();
    let image = Term::new(xs.to_vec(), Head::Free(h), args);
    std::iter::once((f.clone(), image)).collect()
}

/// Most general solution of `x̄.F(s̄) ≈ x̄.G(t̄)` for distinct `F`, `G`.
///
/// Pairs are collected as `(y_i↑, w)` for every inversion `w` of `s_i`
/// against `t̄`, then `(w, z_i↑)` for every inversion of `t_i` against `s̄`.
/// With `strict`, an argument with more than one inversion is an error.
pub fn solve_flex_flex_diff(
    prefix: &[Type],
    f: &Var,
    s: &[Term],
    g: &Var,
    t: &[Term],
    strict: bool,
    fresh: &mut Fresh,
) -> Result<Substitution, EngineError> {
    let ys = f.ty().args();
    let zs = g.ty().args();
    let (n, m) = (ys.len(), zs.len());
    let mut pairs: Vec<(Term, Term, Type)> = Vec::new();
    for (i, si) in s.iter().enumerate() {
        let ws = invert(si, prefix, t);
        if strict && ws.len() > 1 {
            return Err(EngineError::Invariant(format!(
                "argument {i} of {} has {} inversions",
                f.name(),
                ws.len()
            )));
        }
        for w in ws {
            pairs.push((Term::eta_bound(n - 1 - i, &ys[i]), w, ys[i].clone()));
        }
    }
    for (i, ti) in t.iter().enumerate() {
        let ws = invert(ti, prefix, s);
        if strict && ws.len() > 1 {
            return Err(EngineError::Invariant(format!(
                "argument {i} of {} has {} inversions",
                g.name(),
                ws.len()
            )));
        }
        for w in ws {
            pairs.push((w, Term::eta_bound(m - 1 - i, &zs[i]), zs[i].clone()));
        }
    }
    let pairs = dedup(pairs);
    let h = fresh.var(Type::function(
        pairs.iter().map(|p| p.2.clone()).collect(),
        f.ty().result().clone(),
    ));
    let u = Term::new(ys.to_vec(), Head::Free(h.clone()), pairs.iter().map(|p| p.0.clone()).collect());
    let v = Term::new(zs.to_vec(), Head::Free(h), pairs.into_iter().map(|p| p.1).collect());
    Ok([(f.clone(), u), (g.clone(), v)].into_iter().collect())
}

/// Replaces equation `idx` by `extra`, applies `binding` to the result and
/// records the step.
fn successor(
    state: &ProblemState,
    idx: usize,
    rule: Rule,
    binding: Substitution,
    extra: Vec<Equation>,
    counter: usize,
) -> ProblemState {
    let mut equations: Vec<Equation> = state
        .equations
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, e)| e.clone())
        .chain(extra)
        .map(|e| if binding.is_empty() { e } else { e.apply(&binding) })
        .collect();
    equations.sort();
    let accumulated = if binding.is_empty() {
        state.accumulated.clone()
    } else {
        state.accumulated.compose(&binding)
    };
    let step = TraceStep {
        rule,
        equation: state.equations[idx].clone(),
        binding,
        accumulated: accumulated.clone(),
    };
    ProblemState {
        equations,
        accumulated,
        fresh_counter: counter,
        depth: state.depth + 1,
        trace: Some(Arc::new(TraceNode {
            step,
            parent: state.trace.clone(),
        })),
    }
}

/// All successors of `state` obtained by processing equation `idx`.
pub fn step(
    state: &ProblemState,
    idx: usize,
    mode: CheckMode,
    reserved: &BTreeSet<String>,
) -> Result<Vec<ProblemState>, EngineError> {
    let eq = &state.equations[idx];
    let (l, r) = (&eq.lhs, &eq.rhs);
    let mut fresh = Fresh {
        counter: state.fresh_counter,
        reserved,
    };
    let out = match classify(eq) {
        EqClass::Trivial => vec![successor(state, idx, Rule::Rem, Substitution::new(), vec![], fresh.counter)],
        EqClass::Eliminable { lhs_is_var } => {
            let (var_side, other) = if lhs_is_var { (l, r) } else { (r, l) };
            let f = var_side.head.as_free().expect("eliminable side has a free head").clone();
            let binding: Substitution = std::iter::once((f, other.clone())).collect();
            vec![successor(state, idx, Rule::Var, binding, vec![], fresh.counter)]
        }
        EqClass::RigidRigid => {
            if l.head != r.head {
                Vec::new()
            } else {
                let parts = (0..l.args.len())
                    .map(|i| Equation::new(l.arg_under_binders(i), r.arg_under_binders(i)))
                    .collect();
                vec![successor(state, idx, Rule::Dec, Substitution::new(), parts, fresh.counter)]
            }
        }
        EqClass::FlexRigid { lhs_flex, .. } => {
            let (flex, rigid) = if lhs_flex { (l, r) } else { (r, l) };
            let f = flex.head.as_free().expect("flex side").clone();
            let mut out = Vec::new();
            let projections = make_projection_bindings(f.ty(), &rigid.head, &flex.args, &mut fresh);
            // Each branch draws its fresh names from the same starting point.
            let mut branch_fresh = Fresh {
                counter: state.fresh_counter,
                reserved,
            };
            for (i, _) in projections {
                branch_fresh.counter = state.fresh_counter;
                let xs = f.ty().args();
                let u = partial_binding(f.ty(), Head::Bound(xs.len() - 1 - i), &xs[i], &mut branch_fresh);
                let binding: Substitution = std::iter::once((f.clone(), u)).collect();
                debug_assert_eq!(binding.apply(flex).head, rigid.head);
                out.push(successor(state, idx, Rule::Prj, binding, vec![eq.clone()], branch_fresh.counter));
            }
            if let Head::Const(h) = &rigid.head {
                branch_fresh.counter = state.fresh_counter;
                if let Ok(u) = make_imitation_binding(f.ty(), h, &mut branch_fresh) {
                    let binding: Substitution = std::iter::once((f.clone(), u)).collect();
                    out.push(successor(state, idx, Rule::Imt, binding, vec![eq.clone()], branch_fresh.counter));
                }
            }
            out
        }
        EqClass::FlexFlex => {
            let f = l.head.as_free().expect("flex").clone();
            let g = r.head.as_free().expect("flex").clone();
            let prefix = l.binders.clone();
            if f == g {
                let binding = solve_flex_flex_same(&f, &l.args, &r.args, &mut fresh);
                vec![successor(state, idx, Rule::Ffe, binding, vec![eq.clone()], fresh.counter)]
            } else {
                let strict = mode == CheckMode::Strict;
                let binding = solve_flex_flex_diff(&prefix, &f, &l.args, &g, &r.args, strict, &mut fresh)?;
                vec![successor(state, idx, Rule::Ffne, binding, vec![eq.clone()], fresh.counter)]
            }
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Sym;
    use crate::types::Sort;

    fn a() -> Type {
        Type::base(Sort::new("a"))
    }
    fn aa() -> Type {
        Type::arrow(vec![a()], a())
    }
    fn a2() -> Type {
        Type::arrow(vec![a(), a()], a())
    }
    fn b(i: usize) -> Term {
        Term::atom(Head::Bound(i))
    }
    fn fv(name: &str, ty: Type) -> Var {
        Var::new(name, ty)
    }

    #[test]
    fn imitation_bindings() {
        let reserved = BTreeSet::new();
        let mut fresh = Fresh { counter: 0, reserved: &reserved };
        let f = Sym::new("f", aa());
        let u = make_imitation_binding(&a2(), &f, &mut fresh).unwrap();
        let h1 = fv("H1", a2());
        let expected = Term::new(
            vec![a(), a()],
            Head::Const(f),
            vec![Term::new(vec![], Head::Free(h1), vec![b(1), b(0)])],
        );
        assert_eq!(u, expected);
        let c = Sym::new("c", a());
        assert_eq!(make_imitation_binding(&a(), &c, &mut fresh).unwrap(), Term::constant(&c, vec![]));
        let g = Sym::new("g", a2());
        let u = make_imitation_binding(&aa(), &g, &mut fresh).unwrap();
        assert_eq!(u.args.len(), 2);
        assert_eq!(u.args[0].head, Head::Free(fv("H2", aa())));
        assert_eq!(u.args[1].head, Head::Free(fv("H3", aa())));
        let other = Sym::new("d", Type::base(Sort::new("b")));
        assert!(make_imitation_binding(&a(), &other, &mut fresh).is_err());
    }

    #[test]
    fn fresh_names_skip_reserved() {
        let reserved: BTreeSet<String> = ["H1".to_string()].into_iter().collect();
        let mut fresh = Fresh { counter: 0, reserved: &reserved };
        assert_eq!(fresh.var(a()).name(), "H2");
    }

    #[test]
    fn projection_bindings_follow_argument_heads() {
        let reserved = BTreeSet::new();
        let mut fresh = Fresh { counter: 0, reserved: &reserved };
        let f = Sym::new("f", aa());
        let args = vec![Term::constant(&f, vec![b(1)]), Term::constant(&f, vec![b(0)])];
        let ps = make_projection_bindings(&a2(), &Head::Const(f.clone()), &args, &mut fresh);
        assert_eq!(
            ps.iter().map(|p| p.1.clone()).collect::<Vec<_>>(),
            vec![
                Term::new(vec![a(), a()], Head::Bound(1), vec![]),
                Term::new(vec![a(), a()], Head::Bound(0), vec![])
            ]
        );
        assert!(make_projection_bindings(&a2(), &Head::Bound(1), &args, &mut fresh).is_empty());
    }

    #[test]
    fn higher_order_projection() {
        // τ = (a→a, a) → a, target g, args (λz. g x z, f x)
        let reserved = BTreeSet::new();
        let mut fresh = Fresh { counter: 0, reserved: &reserved };
        let g = Sym::new("g", a2());
        let f = Sym::new("f", aa());
        let tau = Type::arrow(vec![aa(), a()], a());
        let args = vec![
            Term::new(vec![a()], Head::Const(g.clone()), vec![b(1), b(0)]),
            Term::constant(&f, vec![b(0)]),
        ];
        let ps = make_projection_bindings(&tau, &Head::Const(g), &args, &mut fresh);
        assert_eq!(ps.len(), 1);
        let h1 = fv("H1", Type::arrow(vec![aa(), a()], a()));
        let expected = Term::new(
            vec![aa(), a()],
            Head::Bound(1),
            vec![Term::new(vec![], Head::Free(h1), vec![Term::new(vec![a()], Head::Bound(2), vec![b(0)]), b(0)])],
        );
        assert_eq!(ps[0].1, expected);
        assert_eq!(ps[0].1.type_of().unwrap(), tau);
    }

    #[test]
    fn flex_flex_same() {
        // F (f x) (g x y) ≈ F (f y) (g x y)  ⇒  F ↦ λy1 y2. H y2
        let reserved = BTreeSet::new();
        let mut fresh = Fresh { counter: 0, reserved: &reserved };
        let f = Sym::new("f", aa());
        let g = Sym::new("g", a2());
        let big_f = fv("F", a2());
        let s = vec![Term::constant(&f, vec![b(1)]), Term::constant(&g, vec![b(1), b(0)])];
        let t = vec![Term::constant(&f, vec![b(0)]), Term::constant(&g, vec![b(1), b(0)])];
        let theta = solve_flex_flex_same(&big_f, &s, &t, &mut fresh);
        let h = fv("H1", aa());
        assert_eq!(theta.get(&big_f), Some(&Term::new(vec![a(), a()], Head::Free(h), vec![b(0)])));
    }

    #[test]
    fn flex_flex_diff_example() {
        // H (f x) (f y) ≈ N y x
        let reserved = BTreeSet::new();
        let mut fresh = Fresh { counter: 0, reserved: &reserved };
        let f = Sym::new("f", aa());
        let h = fv("H", a2());
        let n = fv("N", a2());
        let s = vec![Term::constant(&f, vec![b(1)]), Term::constant(&f, vec![b(0)])];
        let t = vec![b(0), b(1)];
        let theta = solve_flex_flex_diff(&[a(), a()], &h, &s, &n, &t, true, &mut fresh).unwrap();
        let z = fv("H1", a2());
        assert_eq!(theta.get(&h), Some(&Term::new(vec![a(), a()], Head::Free(z.clone()), vec![b(1), b(0)])));
        assert_eq!(
            theta.get(&n),
            Some(&Term::new(
                vec![a(), a()],
                Head::Free(z),
                vec![Term::constant(&f, vec![b(0)]), Term::constant(&f, vec![b(1)])]
            ))
        );
    }

    #[test]
    fn flex_flex_diff_without_common_arguments() {
        // F (f x) ≈ G (g x x)
        let reserved = BTreeSet::new();
        let mut fresh = Fresh { counter: 0, reserved: &reserved };
        let f = Sym::new("f", aa());
        let g = Sym::new("g", a2());
        let big_f = fv("F", aa());
        let big_g = fv("G", aa());
        let theta = solve_flex_flex_diff(
            &[a()],
            &big_f,
            &[Term::constant(&f, vec![b(0)])],
            &big_g,
            &[Term::constant(&g, vec![b(0), b(0)])],
            true,
            &mut fresh,
        )
        .unwrap();
        let h = fv("H1", a());
        assert_eq!(theta.get(&big_f), Some(&Term::new(vec![a()], Head::Free(h.clone()), vec![])));
        assert_eq!(theta.get(&big_g), Some(&Term::new(vec![a()], Head::Free(h), vec![])));
    }
}
