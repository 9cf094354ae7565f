//! Deterministic, re-parseable single-line printing.
//!
//! Bound variables are named after their depth from the root: `z1, z2, …`
//! in substitution images and `x1, x2, …` elsewhere. A name that clashes
//! with a symbol or free variable of the term gets primes appended.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::subst::Substitution;
use crate::term::{Head, Term};
use crate::types::Type;
use crate::unify::Equation;

fn global_names(t: &Term, out: &mut BTreeSet<String>) {
    match &t.head {
        Head::Const(s) => {
            out.insert(s.name().to_string());
        }
        Head::Free(v) => {
            out.insert(v.name().to_string());
        }
        Head::Bound(_) => {}
    }
    for a in &t.args {
        global_names(a, out);
    }
}

fn binder_type(ty: &Type) -> String {
    if ty.is_base() {
        ty.to_string()
    } else {
        format!("({ty})")
    }
}

struct Printer<'a> {
    letter: char,
    avoid: &'a BTreeSet<String>,
    scope: Vec<String>,
}

impl Printer<'_> {
    fn fresh_name(&self) -> String {
        let mut name = format!("{}{}", self.letter, self.scope.len() + 1);
        while self.avoid.contains(&name) {
            name.push('\'');
        }
        name
    }

    fn term(&mut self, t: &Term, out: &mut String) {
        let base = self.scope.len();
        if !t.binders.is_empty() {
            out.push('\\');
            for (i, ty) in t.binders.iter().enumerate() {
                let name = self.fresh_name();
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{name}:{}", binder_type(ty));
                self.scope.push(name);
            }
            out.push_str(". ");
        }
        match &t.head {
            Head::Bound(i) => out.push_str(&self.scope[self.scope.len() - 1 - i]),
            Head::Const(s) => out.push_str(s.name()),
            Head::Free(v) => out.push_str(v.name()),
        }
        for a in &t.args {
            out.push(' ');
            if a.binders.is_empty() && a.args.is_empty() {
                self.term(a, out);
            } else {
                out.push('(');
                self.term(a, out);
                out.push(')');
            }
        }
        self.scope.truncate(base);
    }
}

fn print_with(t: &Term, letter: char) -> String {
    let mut avoid = BTreeSet::new();
    global_names(t, &mut avoid);
    let mut p = Printer {
        letter,
        avoid: &avoid,
        scope: Vec::new(),
    };
    let mut out = String::new();
    p.term(t, &mut out);
    out
}

/// A closed term, with binders named `x1, x2, …`.
pub fn term(t: &Term) -> String {
    print_with(t, 'x')
}

/// A substitution image, with binders named `z1, z2, …`.
pub fn image(t: &Term) -> String {
    print_with(t, 'z')
}

/// `M |-> \z1:a z2:a. z1, N |-> …`, or `{}` when empty.
pub fn substitution(theta: &Substitution) -> String {
    if theta.is_empty() {
        return "{}".to_string();
    }
    theta
        .iter()
        .map(|(v, t)| format!("{} |-> {}", v.name(), image(t)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn equation(eq: &Equation) -> String {
    format!("{} =? {}", term(&eq.lhs), term(&eq.rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Sym, Var};
    use crate::types::Sort;

    fn a() -> Type {
        Type::base(Sort::new("a"))
    }

    #[test]
    fn prints_projection_binding() {
        let m = Var::new("M", Type::arrow(vec![a(), a()], a()));
        let theta = Substitution::singleton(m, Term::new(vec![a(), a()], Head::Bound(1), vec![])).unwrap();
        assert_eq!(substitution(&theta), "M |-> \\z1:a z2:a. z1");
    }

    #[test]
    fn parenthesises_compound_arguments_and_types() {
        let aa = Type::arrow(vec![a()], a());
        let g = Sym::new("g", Type::arrow(vec![aa.clone()], a()));
        let f = Sym::new("f", aa.clone());
        // λx. g (λy. f y) with x : a → a
        let inner = Term::new(vec![a()], Head::Const(f), vec![Term::atom(Head::Bound(0))]);
        let t = Term::new(vec![aa], Head::Const(g), vec![inner]);
        assert_eq!(term(&t), "\\x1:(a -> a). g (\\x2:a. f x2)");
    }

    #[test]
    fn avoids_clashing_names() {
        let x1 = Var::new("x1", a());
        let f = Sym::new("f", Type::arrow(vec![a(), a()], a()));
        let t = Term::new(vec![a()], Head::Const(f), vec![Term::atom(Head::Bound(0)), Term::atom(Head::Free(x1))]);
        assert_eq!(term(&t), "\\x1':a. f x1' x1");
    }
}
