//! Matching a DHP against a term, and the subsumption check built on it.
//!
//! Free variables of the target are treated as constants.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::dhp::{check_dhp, CheckMode, DhpViolation};
use crate::expanded::{expansion_at, Expansion};
use crate::subst::Substitution;
use crate::term::{Head, Term, Var};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchResult {
    NoMatch,
    Unique(Substitution),
    Ambiguous(Vec<Substitution>),
}

impl MatchResult {
    fn from_list(mut list: Vec<Substitution>) -> Self {
        match list.len() {
            0 => MatchResult::NoMatch,
            1 => MatchResult::Unique(list.pop().unwrap()),
            _ => MatchResult::Ambiguous(list),
        }
    }

    pub fn solutions(&self) -> Vec<Substitution> {
        match self {
            MatchResult::NoMatch => Vec::new(),
            MatchResult::Unique(s) => vec![s.clone()],
            MatchResult::Ambiguous(v) => v.clone(),
        }
    }

    pub fn is_ambiguous(&self) -> bool {
        matches!(self, MatchResult::Ambiguous(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("pattern has type {pattern}, target has type {target}")]
    TypeMismatch { pattern: String, target: String },
    #[error("pattern is ill-typed")]
    IllTyped,
    #[error("pattern is not a deterministic higher-order pattern")]
    NotDhp(Vec<DhpViolation>),
    #[error("matching produced more than one witness for a strict pattern")]
    Ambiguous,
}

/// All terms `w` over fresh binders `z̄` (one per argument, outermost first)
/// such that `w{z̄ ↦ args} = body`.
///
/// `body` and `args` live under `prefix`; the results live under `z̄`, so
/// they never mention `prefix`. Candidates come out in a fixed order:
/// projections onto `z_i` by ascending `i`, then the head copy.
pub fn invert(body: &Term, prefix: &[Type], args: &[Term]) -> Vec<Term> {
    let expansions: Vec<Option<Expansion>> = args
        .iter()
        .map(|a| {
            let mut binders = prefix.to_vec();
            binders.extend(a.binders.iter().cloned());
            expansion_at(&a.with_binders(binders), prefix.len())
        })
        .collect();
    let inv = Inverter {
        expansions: &expansions,
    };
    inv.run(body, 0)
}

struct Inverter<'a> {
    expansions: &'a [Option<Expansion>],
}

impl Inverter<'_> {
    /// `t` lives under `x̄ ++ L` with `|L| = depth`; results live under `z̄ ++ L`.
    fn run(&self, t: &Term, depth: usize) -> Vec<Term> {
        let d = depth + t.binders.len();
        let nz = self.expansions.len();
        let mut out: Vec<Term> = Vec::new();
        for (i, exp) in self.expansions.iter().enumerate() {
            let Some(e) = exp else { continue };
            let head = match &e.head {
                Head::Bound(j) => Head::Bound(j + d),
                h => h.clone(),
            };
            let m = e.args.len();
            if t.head != head || t.args.len() != m + e.trailing {
                continue;
            }
            if !t.args[..m].iter().zip(&e.args).all(|(a, q)| *a == q.shifted(d, 0)) {
                continue;
            }
            let rest: Vec<Vec<Term>> = t.args[m..].iter().map(|a| self.run(a, d)).collect();
            for combo in product(rest) {
                out.push(Term::new(t.binders.clone(), Head::Bound(d + nz - 1 - i), combo));
            }
        }
        let copied = match &t.head {
            Head::Bound(j) if *j < d => Some(Head::Bound(*j)),
            Head::Bound(_) => None,
            h => Some(h.clone()),
        };
        if let Some(head) = copied {
            let parts: Vec<Vec<Term>> = t.args.iter().map(|a| self.run(a, d)).collect();
            for combo in product(parts) {
                out.push(Term::new(t.binders.clone(), head.clone(), combo));
            }
        }
        dedup(out)
    }
}

fn product(lists: Vec<Vec<Term>>) -> Vec<Vec<Term>> {
    let mut acc: Vec<Vec<Term>> = vec![Vec::new()];
    for list in lists {
        if list.is_empty() {
            return Vec::new();
        }
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for item in &list {
                let mut v = prefix.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

pub(crate) fn dedup<T: PartialEq>(items: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for it in items {
        if !out.contains(&it) {
            out.push(it);
        }
    }
    out
}

type Partial = BTreeMap<Var, Term>;

fn match_rec(p: &Term, t: &Term, ctx: &mut Vec<Type>, cands: Vec<Partial>) -> Vec<Partial> {
    if cands.is_empty() || p.binders != t.binders {
        return Vec::new();
    }
    let base = ctx.len();
    ctx.extend(p.binders.iter().cloned());
    let out = match &p.head {
        Head::Free(f) => {
            let images: Vec<Term> = invert(&t.body(), ctx, &p.args)
                .into_iter()
                .map(|w| w.with_binders(f.ty().args().to_vec()))
                .collect();
            let mut next = Vec::new();
            for c in &cands {
                for img in &images {
                    match c.get(f) {
                        Some(existing) if existing != img => {}
                        Some(_) => next.push(c.clone()),
                        None => {
                            let mut c2 = c.clone();
                            c2.insert(f.clone(), img.clone());
                            next.push(c2);
                        }
                    }
                }
            }
            dedup(next)
        }
        head => {
            if *head != t.head || p.args.len() != t.args.len() {
                Vec::new()
            } else {
                p.args
                    .iter()
                    .zip(&t.args)
                    .fold(cands, |acc, (pa, ta)| match_rec(pa, ta, ctx, acc))
            }
        }
    };
    ctx.truncate(base);
    out
}

fn ensure_pattern(p: &Term, mode: CheckMode) -> Result<(), MatchError> {
    let report = check_dhp(p, mode);
    if report.accepted {
        Ok(())
    } else {
        Err(MatchError::NotDhp(report.violations))
    }
}

/// All `θ` with `dom(θ) ⊆ fv(pᵢ)` and `pᵢθ = tᵢ` for every pair.
pub fn match_all(pairs: &[(Term, Term)], mode: CheckMode) -> Result<Vec<Substitution>, MatchError> {
    for (p, t) in pairs {
        let pt = p.type_of().map_err(|_| MatchError::IllTyped)?;
        let tt = t.type_of().map_err(|_| MatchError::IllTyped)?;
        if pt != tt {
            return Err(MatchError::TypeMismatch {
                pattern: pt.to_string(),
                target: tt.to_string(),
            });
        }
        ensure_pattern(p, mode)?;
    }
    let mut cands = vec![Partial::new()];
    let mut ctx = Vec::new();
    for (p, t) in pairs {
        cands = match_rec(p, t, &mut ctx, cands);
    }
    let out: Vec<Substitution> = cands
        .into_iter()
        .map(|c| c.into_iter().collect::<Substitution>())
        .filter(|theta| {
            let ok = pairs.iter().all(|(p, t)| theta.apply(p) == *t);
            debug_assert!(ok, "matcher produced an unsound witness");
            ok
        })
        .collect();
    Ok(out)
}

/// Matches `p` against `t`.
pub fn match_term(p: &Term, t: &Term, mode: CheckMode) -> Result<MatchResult, MatchError> {
    let list = match_all(&[(p.clone(), t.clone())], mode)?;
    let result = MatchResult::from_list(list);
    if mode == CheckMode::Strict && result.is_ambiguous() {
        return Err(MatchError::Ambiguous);
    }
    Ok(result)
}

/// The witness `γ` with `θγ = δ` on `w`, if any.
pub fn instance_witness(
    delta: &Substitution,
    theta: &Substitution,
    w: &BTreeSet<Var>,
    mode: CheckMode,
) -> Result<Option<Substitution>, MatchError> {
    let pairs: Vec<(Term, Term)> = w.iter().map(|x| (theta.image_of(x), delta.image_of(x))).collect();
    let mut list = match_all(&pairs, mode)?;
    if mode == CheckMode::Strict && list.len() > 1 {
        return Err(MatchError::Ambiguous);
    }
    Ok(if list.is_empty() { None } else { Some(list.swap_remove(0)) })
}

/// `θ ⊑ δ` over `w`: some `γ` has `θγ = δ` on `w`.
pub fn is_instance(
    delta: &Substitution,
    theta: &Substitution,
    w: &BTreeSet<Var>,
    mode: CheckMode,
) -> Result<bool, MatchError> {
    Ok(instance_witness(delta, theta, w, mode)?.is_some())
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
    fn f() -> Sym {
        Sym::new("f", aa())
    }
    fn g() -> Sym {
        Sym::new("g", aa())
    }
    fn app(s: &Sym, args: Vec<Term>) -> Term {
        Term::constant(s, args)
    }

    #[test]
    fn unique_match() {
        // λx y. F (f x)  against  λx y. g (f x)
        let big_f = Var::new("F", aa());
        let p = Term::new(vec![a(), a()], Head::Free(big_f.clone()), vec![app(&f(), vec![b(1)])]);
        let t = Term::new(vec![a(), a()], Head::Const(g()), vec![app(&f(), vec![b(1)])]);
        let r = match_term(&p, &t, CheckMode::Strict).unwrap();
        let expected = Substitution::singleton(big_f, Term::new(vec![a()], Head::Const(g()), vec![b(0)])).unwrap();
        assert_eq!(r, MatchResult::Unique(expected));
        // against λx y. g x and λx y. y
        let t2 = Term::new(vec![a(), a()], Head::Const(g()), vec![b(1)]);
        assert_eq!(match_term(&p, &t2, CheckMode::Strict).unwrap(), MatchResult::NoMatch);
        let t3 = Term::new(vec![a(), a()], Head::Bound(0), vec![]);
        assert_eq!(match_term(&p, &t3, CheckMode::Strict).unwrap(), MatchResult::NoMatch);
    }

    #[test]
    fn invert_examples() {
        // body g x y with args (λz. g x z, f x, y) under x, y: {z1 z3}
        let g2 = Sym::new("g", a2());
        let ctx = vec![a(), a()];
        let body = app(&g2, vec![b(1), b(0)]);
        let args = vec![
            Term::new(vec![a()], Head::Const(g2.clone()), vec![b(2), b(0)]),
            app(&f(), vec![b(1)]),
            b(0),
        ];
        // z̄ = z1 z2 z3, so z1 is index 2 and z3 is index 0
        assert_eq!(invert(&body, &ctx, &args), vec![Term::new(vec![], Head::Bound(2), vec![b(0)])]);
        // body f x with args (y, x): f z2
        let body = app(&f(), vec![b(1)]);
        assert_eq!(invert(&body, &ctx, &[b(0), b(1)]), vec![app(&f(), vec![b(0)])]);
        // closed body is copied
        let c = app(&Sym::new("c", a()), vec![]);
        assert_eq!(invert(&c, &ctx[..1], &[app(&f(), vec![b(0)])]), vec![c]);
    }

    #[test]
    fn ambiguous_for_non_dhp_pattern() {
        // λx. F (f x c) (λz. f x z) against λx. f x c, with x : a and f : (a,a) → a
        let f2 = Sym::new("f", a2());
        let c = app(&Sym::new("c", a()), vec![]);
        let big_f = Var::new("F", Type::arrow(vec![a(), aa()], a()));
        let p = Term::new(
            vec![a()],
            Head::Free(big_f.clone()),
            vec![app(&f2, vec![b(0), c.clone()]), Term::new(vec![a()], Head::Const(f2.clone()), vec![b(1), b(0)])],
        );
        let t = Term::new(vec![a()], Head::Const(f2), vec![b(0), c.clone()]);
        assert!(match_term(&p, &t, CheckMode::Strict).is_err());
        let r = match_term(&p, &t, CheckMode::Lenient).unwrap();
        let proj1 = Term::new(vec![a(), aa()], Head::Bound(1), vec![]);
        let proj2 = Term::new(vec![a(), aa()], Head::Bound(0), vec![c]);
        assert_eq!(
            r,
            MatchResult::Ambiguous(vec![
                Substitution::singleton(big_f.clone(), proj1).unwrap(),
                Substitution::singleton(big_f, proj2).unwrap(),
            ])
        );
    }

    #[test]
    fn instance_checks() {
        let m = Var::new("M", a2());
        let w: BTreeSet<Var> = [m.clone()].into_iter().collect();
        let p1 = Substitution::singleton(m.clone(), Term::new(vec![a(), a()], Head::Bound(1), vec![])).unwrap();
        let p2 = Substitution::singleton(m.clone(), Term::new(vec![a(), a()], Head::Bound(0), vec![])).unwrap();
        assert!(is_instance(&p1, &p1, &w, CheckMode::Strict).unwrap());
        assert!(!is_instance(&p1, &p2, &w, CheckMode::Strict).unwrap());
        // {} ⊑ anything
        assert!(is_instance(&p1, &Substitution::new(), &w, CheckMode::Strict).unwrap());
    }
}
