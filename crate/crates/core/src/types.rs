//! Sorts and flattened simple types.

use std::fmt;
use std::sync::Arc;

/// A base sort such as `a`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort(Arc<str>);

impl Sort {
    pub fn new(name: &str) -> Self {
        Sort(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A flattened simple type `(σ1, …, σn) → a`.
///
/// A type with no arguments *is* its result sort; there is no separate
/// representation for `() → a`, so structural equality already respects
/// that identification.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Type {
    args: Vec<Type>,
    result: Sort,
}

impl Type {
    pub fn base(sort: Sort) -> Self {
        Type {
            args: Vec::new(),
            result: sort,
        }
    }

    /// Builds `(args) → result`, flattening a functional result type.
    pub fn arrow(args: Vec<Type>, result: Type) -> Self {
        let mut all = args;
        all.extend(result.args);
        Type {
            args: all,
            result: result.result,
        }
    }

    pub fn function(args: Vec<Type>, result: Sort) -> Self {
        Type { args, result }
    }

    pub fn args(&self) -> &[Type] {
        &self.args
    }

    pub fn result(&self) -> &Sort {
        &self.result
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_base(&self) -> bool {
        self.args.is_empty()
    }

    /// The type left after supplying the first `n` arguments.
    pub fn drop_args(&self, n: usize) -> Type {
        Type {
            args: self.args[n..].to_vec(),
            result: self.result.clone(),
        }
    }

    /// Order of the type: 1 for sorts, one more than the maximal argument order otherwise.
    pub fn order(&self) -> usize {
        1 + self.args.iter().map(Type::order).max().unwrap_or(0)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.args.as_slice() {
            [] => write!(f, "{}", self.result),
            [single] if single.is_base() => write!(f, "{} -> {}", single, self.result),
            args => {
                f.write_str("(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ") -> {}", self.result)
            }
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Type {
        Type::base(Sort::new("a"))
    }

    #[test]
    fn empty_arrow_is_the_sort() {
        assert_eq!(Type::arrow(vec![], a()), a());
        assert_eq!(Type::function(vec![], Sort::new("a")), a());
    }

    #[test]
    fn arrow_flattens_functional_results() {
        let aa = Type::arrow(vec![a()], a());
        let curried = Type::arrow(vec![a()], aa.clone());
        assert_eq!(curried, Type::function(vec![a(), a()], Sort::new("a")));
        let higher = Type::arrow(vec![aa.clone()], a());
        assert_ne!(higher, curried);
        assert_eq!(higher.order(), 3);
    }

    #[test]
    fn display_forms() {
        let aa = Type::arrow(vec![a()], a());
        assert_eq!(aa.to_string(), "a -> a");
        assert_eq!(Type::arrow(vec![a(), a()], a()).to_string(), "(a, a) -> a");
        assert_eq!(Type::arrow(vec![aa], a()).to_string(), "(a -> a) -> a");
    }
}
