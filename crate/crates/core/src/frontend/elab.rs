//! Elaboration of raw syntax into canonical η-long terms.
//!
//! Binder types are propagated from the expected type; underapplied heads
//! and missing binders are η-expanded unless strict η-longness is demanded.
//! β-redexes are rejected rather than reduced.

use std::collections::BTreeMap;

use thiserror::Error;

use super::syntax::{Pos, RawTerm, RawType};
use crate::signature::Signature;
use crate::term::{eta_args, Head, Term, Var};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error("{pos}: unknown identifier `{name}`")]
    UnknownHead { name: String, pos: Pos },
    #[error("{pos}: unknown sort `{name}`")]
    UnknownSort { name: String, pos: Pos },
    #[error("{pos}: expected type {expected}, found {found}")]
    TypeMismatch { expected: String, found: String, pos: Pos },
    #[error("{pos}: `{head}` is applied to too many arguments")]
    TooManyArguments { head: String, pos: Pos },
    #[error("{pos}: abstraction has more binders than its type allows")]
    TooManyBinders { pos: Pos },
    #[error("{pos}: term is not η-long")]
    NotEtaLong { pos: Pos },
    #[error("{pos}: β-redex in input")]
    BetaRedexPresent { pos: Pos },
    #[error("{pos}: cannot infer the type of binder `{name}`; add an annotation")]
    UntypeableBinder { name: String, pos: Pos },
}

pub fn elaborate_type(raw: &RawType, sig: &Signature) -> Result<Type, ElabError> {
    match raw {
        RawType::Name(name, pos) => sig
            .sort(name)
            .map(|s| Type::base(s.clone()))
            .ok_or_else(|| ElabError::UnknownSort {
                name: name.clone(),
                pos: *pos,
            }),
        RawType::Arrow(args, result) => {
            let args = args.iter().map(|a| elaborate_type(a, sig)).collect::<Result<Vec<_>, _>>()?;
            Ok(Type::arrow(args, elaborate_type(result, sig)?))
        }
    }
}

/// Elaboration context.
pub struct Elaborator<'a> {
    sig: &'a Signature,
    /// Require η-long input instead of expanding it.
    strict_eta: bool,
    /// Treat unknown identifiers in head position as free variables whose
    /// type is inferred from the first occurrence.
    infer_free: bool,
    inferred: BTreeMap<String, Var>,
    /// Bound variables, outermost first.
    scope: Vec<(String, Type)>,
}

enum Resolved {
    Bound(usize, Type),
    Global(Head, Type),
    Unknown,
}

impl<'a> Elaborator<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Elaborator {
            sig,
            strict_eta: false,
            infer_free: false,
            inferred: BTreeMap::new(),
            scope: Vec::new(),
        }
    }

    pub fn strict_eta(mut self, on: bool) -> Self {
        self.strict_eta = on;
        self
    }

    pub fn infer_free(mut self, on: bool) -> Self {
        self.infer_free = on;
        self
    }

    fn resolve(&self, name: &str) -> Resolved {
        if let Some(k) = self.scope.iter().rev().position(|(n, _)| n == name) {
            let ty = self.scope[self.scope.len() - 1 - k].1.clone();
            return Resolved::Bound(k, ty);
        }
        if let Some(s) = self.sig.fun(name) {
            return Resolved::Global(Head::Const(s.clone()), s.ty().clone());
        }
        if let Some(v) = self.sig.var(name).or_else(|| self.inferred.get(name)) {
            return Resolved::Global(Head::Free(v.clone()), v.ty().clone());
        }
        Resolved::Unknown
    }

    fn binder_type(&self, b: &super::syntax::RawBinder) -> Result<Option<Type>, ElabError> {
        b.ty.as_ref().map(|t| elaborate_type(t, self.sig)).transpose()
    }

    /// Checks `raw` against `expected` in the current scope.
    pub fn check(&mut self, raw: &RawTerm, expected: &Type) -> Result<Term, ElabError> {
        match raw {
            RawTerm::Lam(binders, body, pos) => {
                if binders.len() > expected.arity() {
                    return Err(ElabError::TooManyBinders { pos: *pos });
                }
                let mut tys = Vec::new();
                for (b, want) in binders.iter().zip(expected.args()) {
                    if let Some(ann) = self.binder_type(b)? {
                        if ann != *want {
                            return Err(ElabError::TypeMismatch {
                                expected: want.to_string(),
                                found: ann.to_string(),
                                pos: b.pos,
                            });
                        }
                    }
                    tys.push(want.clone());
                }
                let rest = expected.drop_args(binders.len());
                if self.strict_eta && !rest.is_base() {
                    return Err(ElabError::NotEtaLong { pos: *pos });
                }
                let base = self.scope.len();
                for (b, ty) in binders.iter().zip(&tys) {
                    self.scope.push((b.name.clone(), ty.clone()));
                }
                let inner = self.check(body, &rest);
                self.scope.truncate(base);
                let inner = inner?;
                tys.extend(inner.binders.iter().cloned());
                Ok(inner.with_binders(tys))
            }
            _ => {
                let (term, ty) = self.synth_app(raw, Some(expected))?;
                if ty != *expected {
                    return Err(ElabError::TypeMismatch {
                        expected: expected.to_string(),
                        found: ty.to_string(),
                        pos: raw.pos(),
                    });
                }
                Ok(term)
            }
        }
    }

    /// Infers the type of `raw`; abstractions need annotated binders.
    pub fn synth(&mut self, raw: &RawTerm) -> Result<(Term, Type), ElabError> {
        match raw {
            RawTerm::Lam(binders, body, _) => {
                let mut tys = Vec::new();
                for b in binders {
                    match self.binder_type(b)? {
                        Some(t) => tys.push(t),
                        None => {
                            return Err(ElabError::UntypeableBinder {
                                name: b.name.clone(),
                                pos: b.pos,
                            })
                        }
                    }
                }
                let base = self.scope.len();
                for (b, ty) in binders.iter().zip(&tys) {
                    self.scope.push((b.name.clone(), ty.clone()));
                }
                let inner = self.synth(body);
                self.scope.truncate(base);
                let (inner, ity) = inner?;
                let ty = Type::arrow(tys.clone(), ity);
                tys.extend(inner.binders.iter().cloned());
                Ok((inner.with_binders(tys), ty))
            }
            _ => self.synth_app(raw, None),
        }
    }

    /// Elaborates an identifier or application. The result is η-expanded
    /// to the remaining type of the head.
    fn synth_app(&mut self, raw: &RawTerm, expected: Option<&Type>) -> Result<(Term, Type), ElabError> {
        let (head_raw, args): (&RawTerm, &[RawTerm]) = match raw {
            RawTerm::App(h, args, _) => (h, args),
            other => (other, &[]),
        };
        let (name, pos) = match head_raw {
            RawTerm::Ident(n, p) => (n, *p),
            RawTerm::Lam(_, _, p) => return Err(ElabError::BetaRedexPresent { pos: *p }),
            RawTerm::App(_, _, p) => return Err(ElabError::NotEtaLong { pos: *p }),
        };
        let (head, head_ty, elaborated) = match self.resolve(name) {
            Resolved::Bound(k, ty) => (Head::Bound(k), ty, None),
            Resolved::Global(h, ty) => (h, ty, None),
            Resolved::Unknown if self.infer_free => {
                // Argument types come from the arguments themselves.
                let mut arg_terms = Vec::new();
                let mut arg_tys = Vec::new();
                for a in args {
                    let (t, ty) = self.synth(a)?;
                    arg_terms.push(t);
                    arg_tys.push(ty);
                }
                let Some(expected) = expected else {
                    return Err(ElabError::UnknownHead {
                        name: name.clone(),
                        pos,
                    });
                };
                let ty = Type::arrow(arg_tys, expected.clone());
                let v = Var::new(name, ty.clone());
                self.inferred.insert(name.clone(), v.clone());
                (Head::Free(v), ty, Some(arg_terms))
            }
            Resolved::Unknown => {
                return Err(ElabError::UnknownHead {
                    name: name.clone(),
                    pos,
                })
            }
        };
        if args.len() > head_ty.arity() {
            return Err(ElabError::TooManyArguments {
                head: name.clone(),
                pos,
            });
        }
        let arg_terms = match elaborated {
            Some(ts) => ts,
            None => args
                .iter()
                .zip(head_ty.args())
                .map(|(a, ty)| self.check(a, ty))
                .collect::<Result<Vec<_>, _>>()?,
        };
        let rest = head_ty.drop_args(args.len());
        if self.strict_eta && !rest.is_base() {
            return Err(ElabError::NotEtaLong { pos });
        }
        // η-expand over the missing arguments.
        let k = rest.arity();
        let head = match head {
            Head::Bound(i) => Head::Bound(i + k),
            h => h,
        };
        let mut all_args: Vec<Term> = arg_terms.iter().map(|t| t.shifted(k, 0)).collect();
        all_args.extend(eta_args(rest.args()));
        let ty = rest.clone();
        Ok((Term::new(rest.args().to_vec(), head, all_args), ty))
    }
}

/// Elaborates a closed term against `expected`, η-expanding as needed.
pub fn elaborate(raw: &RawTerm, expected: &Type, sig: &Signature) -> Result<Term, ElabError> {
    Elaborator::new(sig).check(raw, expected)
}

/// Checks that `raw` is already a well-typed η-long term of type `expected`.
pub fn typecheck(raw: &RawTerm, expected: &Type, sig: &Signature) -> Result<Term, ElabError> {
    Elaborator::new(sig).strict_eta(true).check(raw, expected)
}

/// Elaborates the two sides of a query: one side must determine the type.
pub fn elaborate_pair(l: &RawTerm, r: &RawTerm, sig: &Signature) -> Result<(Term, Term), ElabError> {
    let mut el = Elaborator::new(sig);
    match el.synth(l) {
        Ok((lt, ty)) => {
            let rt = el.check(r, &ty)?;
            Ok((lt, rt))
        }
        Err(e @ ElabError::UntypeableBinder { .. }) => {
            let (rt, ty) = match el.synth(r) {
                Ok(x) => x,
                Err(ElabError::UntypeableBinder { .. }) => return Err(e),
                Err(other) => return Err(other),
            };
            let lt = el.check(l, &ty)?;
            Ok((lt, rt))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::syntax::Parser;
    use crate::term::Sym;
    use crate::types::Sort;

    fn sig() -> Signature {
        let mut sig = Signature::new();
        let a = Type::base(sig.add_sort("a").unwrap());
        let aa = Type::arrow(vec![a.clone()], a.clone());
        sig.add_fun("f", aa.clone()).unwrap();
        sig.add_fun("c", a.clone()).unwrap();
        sig.add_var("M", Type::arrow(vec![a.clone(), a.clone()], a.clone())).unwrap();
        sig.add_var("F", aa).unwrap();
        sig
    }

    fn raw(s: &str) -> RawTerm {
        Parser::new(s).unwrap().parse_term().unwrap()
    }

    fn a() -> Type {
        Type::base(Sort::new("a"))
    }

    #[test]
    fn elaborates_example_term() {
        let sig = sig();
        let t = elaborate(&raw("\\x:a y:a. M (f x) (f y)"), &Type::arrow(vec![a(), a()], a()), &sig).unwrap();
        let f = Sym::new("f", Type::arrow(vec![a()], a()));
        let m = sig.var("M").unwrap().clone();
        let expected = Term::new(
            vec![a(), a()],
            Head::Free(m),
            vec![
                Term::constant(&f, vec![Term::atom(Head::Bound(1))]),
                Term::constant(&f, vec![Term::atom(Head::Bound(0))]),
            ],
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn eta_expands_missing_binders() {
        let sig = sig();
        let t = elaborate(&raw("\\x:a. F"), &Type::arrow(vec![a(), a()], a()), &sig).unwrap();
        let fv = sig.var("F").unwrap().clone();
        assert_eq!(t, Term::new(vec![a(), a()], Head::Free(fv), vec![Term::atom(Head::Bound(0))]));
        assert!(matches!(
            typecheck(&raw("\\x:a. F"), &Type::arrow(vec![a(), a()], a()), &sig),
            Err(ElabError::NotEtaLong { .. })
        ));
    }

    #[test]
    fn typecheck_cases() {
        let sig = sig();
        let mut el = Elaborator::new(&sig).strict_eta(true);
        el.scope.push(("x".into(), a()));
        assert!(el.check(&raw("f x"), &a()).is_ok());
        assert!(matches!(
            typecheck(&raw("f"), &Type::arrow(vec![a()], a()), &sig),
            Err(ElabError::NotEtaLong { .. })
        ));
    }

    #[test]
    fn rejects_beta_redexes() {
        let sig = sig();
        assert!(matches!(
            elaborate(&raw("(\\x:a. x) c"), &a(), &sig),
            Err(ElabError::BetaRedexPresent { .. })
        ));
    }

    #[test]
    fn query_sides_share_a_type() {
        let sig = sig();
        let (l, r) = elaborate_pair(&raw("\\x y. M x y"), &raw("\\x:a y:a. f x"), &sig).unwrap();
        assert_eq!(l.type_of().unwrap(), r.type_of().unwrap());
        assert!(matches!(
            elaborate_pair(&raw("\\x. F x"), &raw("\\y. F y"), &sig),
            Err(ElabError::UntypeableBinder { .. })
        ));
    }

    #[test]
    fn infers_fresh_heads() {
        let sig = sig();
        let mut el = Elaborator::new(&sig).infer_free(true);
        let t = el.check(&raw("\\z1:a z2:a. H1 (f z2) z1"), &Type::arrow(vec![a(), a()], a())).unwrap();
        let h = t.head.as_free().unwrap();
        assert_eq!(h.name(), "H1");
        assert_eq!(*h.ty(), Type::arrow(vec![a(), a()], a()));
    }
}
