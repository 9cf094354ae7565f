//! Expanded terms and the expanded-subterm relation `⊴E`.
//!
//! A term `x̄.s` is handled as a closed [`Term`] whose binder list starts
//! with the shared prefix `x̄`; `prefix` is `|x̄|`.

use thiserror::Error;

use crate::term::{Head, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term is not expanded with respect to a prefix of {prefix} binders")]
pub struct NotExpanded {
    pub prefix: usize,
}

/// The decomposition `x̄,ȳk.h(s̄m, ȳk↑)` of an expanded term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    /// `|x̄|`.
    pub prefix: usize,
    /// `k`.
    pub trailing: usize,
    /// `h`, living under `x̄`.
    pub head: Head,
    /// `s̄m`, living under `x̄`.
    pub args: Vec<Term>,
}

/// Number of trailing arguments that are, in order, the η-expanded trailing
/// binders.
fn trailing_etas(t: &Term, limit: usize) -> usize {
    let nb = t.binders.len();
    let na = t.args.len();
    let mut k = 0;
    while k < limit.min(na).min(nb) {
        let ty = &t.binders[nb - 1 - k];
        if t.args[na - 1 - k] != Term::eta_bound(k, ty) {
            break;
        }
        k += 1;
    }
    k
}

fn expansion_with(t: &Term, prefix: usize, k: usize) -> Option<Expansion> {
    let na = t.args.len();
    if k > na || prefix + k != t.binders.len() {
        return None;
    }
    if trailing_etas(t, k) != k {
        return None;
    }
    let head = match t.head {
        Head::Bound(i) if i < k => return None,
        Head::Bound(i) => Head::Bound(i - k),
        ref h => h.clone(),
    };
    let args = t.args[..na - k]
        .iter()
        .map(|a| a.lowered(k, 0))
        .collect::<Option<Vec<_>>>()?;
    Some(Expansion {
        prefix,
        trailing: k,
        head,
        args,
    })
}

/// Expansion of `x̄.t` with `|x̄| = prefix`; the trailing segment is then
/// exactly the binders past the prefix.
pub fn expansion_at(t: &Term, prefix: usize) -> Option<Expansion> {
    if prefix > t.binders.len() {
        return None;
    }
    expansion_with(t, prefix, t.binders.len() - prefix)
}

pub fn is_expanded_at(t: &Term, prefix: usize) -> bool {
    expansion_at(t, prefix).is_some()
}

/// Expansion of a standalone term: the trailing segment is chosen greedily
/// maximal, and the remaining binders form the prefix.
pub fn expansion(t: &Term) -> Option<Expansion> {
    let k = trailing_etas(t, usize::MAX);
    expansion_with(t, t.binders.len() - k, k)
}

pub fn is_expanded(t: &Term) -> bool {
    expansion(t).is_some()
}

/// `x̄.s ⊴E x̄.t` for an already decomposed `x̄.t`.
pub fn expanded_subterm_of(s: &Term, t: &Expansion) -> bool {
    if s.binders.len() < t.prefix {
        return false;
    }
    let mut found = false;
    s.visit(&mut |node, _path, ctx| {
        if found || ctx.len() < t.prefix {
            return;
        }
        let d = ctx.len() - t.prefix;
        if node.args.len() != t.args.len() + t.trailing {
            return;
        }
        let head = match &t.head {
            Head::Bound(i) => Head::Bound(i + d),
            h => h.clone(),
        };
        if node.head != head {
            return;
        }
        if node.args.iter().zip(&t.args).all(|(a, p)| *a == p.shifted(d, 0)) {
            found = true;
        }
    });
    found
}

/// `x̄.s ⊴E x̄.t` with `|x̄| = prefix`. Requires `x̄.t` to be expanded.
pub fn expanded_subterm_at(s: &Term, t: &Term, prefix: usize) -> Result<bool, NotExpanded> {
    let exp = expansion_at(t, prefix).ok_or(NotExpanded { prefix })?;
    Ok(expanded_subterm_of(s, &exp))
}

/// `x̄.s ⊴E x̄.t` where the prefix is read off `t` via its greedy expansion.
pub fn expanded_subterm(s: &Term, t: &Term) -> Result<bool, NotExpanded> {
    let exp = expansion(t).ok_or(NotExpanded {
        prefix: t.binders.len(),
    })?;
    if s.binders[..exp.prefix.min(s.binders.len())] != t.binders[..exp.prefix.min(s.binders.len())] {
        return Ok(false);
    }
    Ok(expanded_subterm_of(s, &exp))
}

/// The strict variant `⊲E`.
pub fn strict_expanded_subterm(s: &Term, t: &Term) -> Result<bool, NotExpanded> {
    Ok(s != t && expanded_subterm(s, t)?)
}
