//! Membership in the class of deterministic higher-order patterns.
//!
//! For every subterm `x̄.y(t̄m)` with a free head `y`, where `x̄` are all the
//! binders accumulated from the root, each argument must
//!
//! * (i) mention at least one of `x̄` and no free variable,
//! * (ii) be expanded with respect to `x̄`,
//! * (iii) not be an expanded subterm of a sibling argument.

use std::fmt;

use crate::expanded::{expanded_subterm_of, expansion_at, Expansion};
use crate::term::Term;
use crate::types::Type;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CheckMode {
    #[default]
    Strict,
    /// Condition (iii) violations are reported but do not reject.
    Lenient,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    I,
    II,
    III,
}

impl Condition {
    pub fn tag(self) -> &'static str {
        match self {
            Condition::I => "i",
            Condition::II => "ii",
            Condition::III => "iii",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhpViolation {
    pub condition: Condition,
    /// Argument-index path from the root to the offending argument.
    pub path: Vec<usize>,
    /// The offending argument `x̄.t_i`, closed over the accumulated binders.
    pub witness: Term,
    /// For condition (iii): the sibling argument that contains the witness.
    pub container: Option<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhpReport {
    pub accepted: bool,
    pub violations: Vec<DhpViolation>,
}

impl DhpReport {
    fn from_violations(violations: Vec<DhpViolation>, mode: CheckMode) -> Self {
        let accepted = match mode {
            CheckMode::Strict => violations.is_empty(),
            CheckMode::Lenient => violations.iter().all(|v| v.condition == Condition::III),
            CheckMode::Off => true,
        };
        DhpReport { accepted, violations }
    }
}

pub fn check_dhp(s: &Term, mode: CheckMode) -> DhpReport {
    if mode == CheckMode::Off {
        return DhpReport::from_violations(Vec::new(), mode);
    }
    let mut violations = Vec::new();
    s.visit(&mut |node, path, ctx| {
        if node.head.is_free() {
            var_arg_violations(ctx, &node.args, path, &mut violations);
        }
    });
    DhpReport::from_violations(violations, mode)
}

/// Strict membership.
pub fn is_dhp(s: &Term) -> bool {
    check_dhp(s, CheckMode::Strict).accepted
}

/// Checks `x̄.t̄` with `x̄ = prefix` as a var-arg list; `args` live under
/// `prefix`. Paths are argument indices into `args`.
pub fn check_var_arg_list(prefix: &[Type], args: &[Term], mode: CheckMode) -> DhpReport {
    if mode == CheckMode::Off {
        return DhpReport::from_violations(Vec::new(), mode);
    }
    let mut violations = Vec::new();
    var_arg_violations(prefix, args, &[], &mut violations);
    DhpReport::from_violations(violations, mode)
}

fn under(prefix: &[Type], arg: &Term) -> Term {
    let mut binders = prefix.to_vec();
    binders.extend(arg.binders.iter().cloned());
    arg.with_binders(binders)
}

fn var_arg_violations(prefix: &[Type], args: &[Term], path: &[usize], out: &mut Vec<DhpViolation>) {
    let n = prefix.len();
    let closed: Vec<Term> = args.iter().map(|a| under(prefix, a)).collect();
    let mut expansions: Vec<Option<Expansion>> = Vec::with_capacity(args.len());
    let at = |i: usize| {
        let mut p = path.to_vec();
        p.push(i);
        p
    };
    for (i, arg) in args.iter().enumerate() {
        if arg.has_free_vars() || arg.loose_indices().is_empty() {
            out.push(DhpViolation {
                condition: Condition::I,
                path: at(i),
                witness: closed[i].clone(),
                container: None,
            });
        }
        let exp = expansion_at(&closed[i], n);
        if exp.is_none() {
            out.push(DhpViolation {
                condition: Condition::II,
                path: at(i),
                witness: closed[i].clone(),
                container: None,
            });
        }
        expansions.push(exp);
    }
    for i in 0..args.len() {
        for j in i + 1..args.len() {
            let j_in_i = expansions[j].as_ref().is_some_and(|e| expanded_subterm_of(&closed[i], e));
            let i_in_j = expansions[i].as_ref().is_some_and(|e| expanded_subterm_of(&closed[j], e));
            let (inner, outer) = match (j_in_i, i_in_j) {
                (true, _) => (j, i),
                (false, true) => (i, j),
                _ => continue,
            };
            out.push(DhpViolation {
                condition: Condition::III,
                path: at(inner),
                witness: closed[inner].clone(),
                container: Some(closed[outer].clone()),
            });
        }
    }
}
