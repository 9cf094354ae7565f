//! Unification and matching of deterministic higher-order patterns.

pub mod cli;
pub mod dhp;
pub mod expanded;
pub mod frontend;
pub mod matching;
pub mod oracle;
pub mod signature;
pub mod subst;
pub mod term;
pub mod types;
pub mod unify;

pub use subst::{SubstError, Substitution};
pub use term::{instantiate, Head, Sym, Term, TypeError, Var};
pub use types::{Sort, Type};
