#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use dhp_unify::dhp::CheckMode;
use dhp_unify::expanded::{expanded_subterm_at, is_expanded_at};
use dhp_unify::frontend::{parse_problem, parse_substitution, ProblemFile, QueryKind};
use dhp_unify::matching::is_instance;
use dhp_unify::oracle::random::Palette;
use dhp_unify::term::instantiate;
use dhp_unify::unify::Equation;
use dhp_unify::{Head, Substitution, Sym, Term, Type, Var};

pub fn problems_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

pub fn problem_path(name: &str) -> String {
    problems_dir().join(name).to_string_lossy().into_owned()
}

pub fn load(name: &str) -> ProblemFile {
    let path = problems_dir().join(name);
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_problem(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn equations(p: &ProblemFile, query: &str) -> Vec<Equation> {
    match &p.query(query).unwrap_or_else(|| panic!("no query {query}")).kind {
        QueryKind::Unify(l, r) => vec![Equation::new(l.clone(), r.clone())],
        other => panic!("{query} is a {} query", other.keyword()),
    }
}

pub fn subst(p: &ProblemFile, text: &str) -> Substitution {
    parse_substitution(text, &p.signature).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn fv(eqs: &[Equation]) -> BTreeSet<Var> {
    eqs.iter().flat_map(Equation::free_vars).collect()
}

/// Equal up to renaming of the variables introduced in the images.
pub fn equivalent(a: &Substitution, b: &Substitution, w: &BTreeSet<Var>) -> bool {
    is_instance(a, b, w, CheckMode::Off).unwrap_or(false) && is_instance(b, a, w, CheckMode::Off).unwrap_or(false)
}

/// `sig`: the first-order signature `{c : a, f : a -> a, g : (a, a) -> a}`
/// plus variables of the given declarations.
pub fn signature_with(vars: &str) -> ProblemFile {
    parse_problem(&format!("sort a.\nfun c : a.\nfun f : a -> a.\nfun g : (a, a) -> a.\n{vars}")).unwrap()
}

pub fn palette(p: &ProblemFile, bound_bias: f64) -> Palette {
    Palette {
        consts: p.signature.funs().cloned().collect::<Vec<Sym>>(),
        vars: p.signature.vars().cloned().collect::<Vec<Var>>(),
        bound_bias,
    }
}

pub fn base(p: &ProblemFile) -> Type {
    Type::base(p.signature.sort("a").unwrap().clone())
}

pub fn arrow(args: Vec<Type>, r: Type) -> Type {
    Type::arrow(args, r)
}

/// `x̄.t` as a closed term.
pub fn close(prefix: &[Type], t: &Term) -> Term {
    t.with_binders(prefix.iter().chain(&t.binders).cloned().collect())
}

/// `ū{ȳ ↦ s̄}` where `u` lives under `ȳ` and every `sᵢ` under `x̄`; the
/// result lives under `x̄`.
pub fn subst_bound(u: &Term, s: &[Term]) -> Term {
    instantiate(u, 0, s)
}

/// Every `x̄.t` with `x̄.s ⊴E x̄.t`, built directly from the definition: pick
/// a node of `s` below the prefix, keep its head and a prefix of its
/// arguments, and replace the remaining arguments by fresh trailing binders.
/// `s` is closed and `prefix` counts its leading binders.
pub fn expanded_subterms(s: &Term, prefix: usize) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    s.visit(&mut |node, _path, ctx| {
        if ctx.len() < prefix {
            return;
        }
        let d = ctx.len() - prefix;
        let head = match &node.head {
            Head::Bound(i) if *i < d => return,
            Head::Bound(i) => Head::Bound(i - d),
            h => h.clone(),
        };
        let arg_tys: Vec<Type> = node
            .args
            .iter()
            .map(|a| a.type_in(ctx).expect("well-typed"))
            .collect();
        for m in 0..=node.args.len() {
            let Some(kept) = node.args[..m]
                .iter()
                .map(|a| a.lowered(d, 0))
                .collect::<Option<Vec<Term>>>()
            else {
                continue;
            };
            let trailing = &arg_tys[m..];
            let k = trailing.len();
            let mut args: Vec<Term> = kept.iter().map(|a| a.shifted(k, 0)).collect();
            args.extend(trailing.iter().enumerate().map(|(j, ty)| Term::eta_bound(k - 1 - j, ty)));
            let head = match &head {
                Head::Bound(i) => Head::Bound(i + k),
                h => h.clone(),
            };
            let mut binders = ctx[..prefix].to_vec();
            binders.extend(trailing.iter().cloned());
            let t = Term::new(binders, head, args);
            if !out.contains(&t) {
                out.push(t);
            }
        }
    });
    out
}

/// `∅ ≠ fv(t) ⊆ x̄`, reading bound prefix variables as the free ones.
pub fn mentions_only_prefix(t: &Term, prefix: usize) -> bool {
    if t.has_free_vars() {
        return false;
    }
    let body = Term::new(t.binders[prefix..].to_vec(), t.head.clone(), t.args.clone());
    !body.loose_indices().is_empty()
}

pub fn is_esub(s: &Term, t: &Term, prefix: usize) -> Option<bool> {
    if !is_expanded_at(t, prefix) {
        return None;
    }
    expanded_subterm_at(s, t, prefix).ok()
}
