//! Text syntax for problem files, elaboration, printing and reports.

pub mod elab;
pub mod print;
pub mod report;
pub mod syntax;

use thiserror::Error;

use crate::signature::{Signature, SignatureError};
use crate::subst::{SubstError, Substitution};
use crate::term::Term;

pub use elab::{elaborate, elaborate_pair, elaborate_type, typecheck, ElabError, Elaborator};
pub use syntax::{parse_raw, ParseError, Pos};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),
    #[error("{pos}: {source}")]
    Signature { pos: Pos, source: SignatureError },
    #[error("{0}")]
    Elab(#[from] ElabError),
    #[error("{pos}: binding for `{name}`: {source}")]
    Binding { name: String, pos: Pos, source: SubstError },
    #[error("{pos}: `{name}` is not a declared variable")]
    NotAVariable { name: String, pos: Pos },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryKind {
    Unify(Term, Term),
    /// Pattern, target.
    Match(Term, Term),
    Dhp(Term),
}

impl QueryKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            QueryKind::Unify(..) => "unify",
            QueryKind::Match(..) => "match",
            QueryKind::Dhp(_) => "dhp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    /// Explicit name, or `q<n>` by position.
    pub name: String,
    pub kind: QueryKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, Default)]
pub struct ProblemFile {
    pub signature: Signature,
    pub queries: Vec<Query>,
}

impl ProblemFile {
    pub fn query(&self, name: &str) -> Option<&Query> {
        self.queries.iter().find(|q| q.name == name)
    }
}

fn declare(raw: &syntax::RawFile) -> Result<Signature, FrontendError> {
    let mut sig = Signature::new();
    for (decl, pos) in &raw.decls {
        let res = match decl {
            syntax::Decl::Sort(name) => sig.add_sort(name).map(drop),
            syntax::Decl::Fun(name, ty) => {
                let ty = elaborate_type(ty, &sig)?;
                sig.add_fun(name, ty).map(drop)
            }
            syntax::Decl::Var(name, ty) => {
                let ty = elaborate_type(ty, &sig)?;
                sig.add_var(name, ty).map(drop)
            }
        };
        res.map_err(|source| FrontendError::Signature { pos: *pos, source })?;
    }
    Ok(sig)
}

/// Parses and elaborates a whole problem file.
pub fn parse_problem(src: &str) -> Result<ProblemFile, FrontendError> {
    let raw = parse_raw(src)?;
    let signature = declare(&raw)?;
    let mut queries = Vec::new();
    for (i, q) in raw.queries.iter().enumerate() {
        let kind = match &q.kind {
            syntax::RawQueryKind::Unify(l, r) => {
                let (l, r) = elaborate_pair(l, r, &signature)?;
                QueryKind::Unify(l, r)
            }
            syntax::RawQueryKind::Match(l, r) => {
                let (l, r) = elaborate_pair(l, r, &signature)?;
                QueryKind::Match(l, r)
            }
            syntax::RawQueryKind::Dhp(t) => QueryKind::Dhp(Elaborator::new(&signature).synth(t)?.0),
        };
        queries.push(Query {
            name: q.name.clone().unwrap_or_else(|| format!("q{}", i + 1)),
            kind,
            pos: q.pos,
        });
    }
    Ok(ProblemFile { signature, queries })
}

/// Parses printed substitution text such as `M |-> \z1:a z2:a. z1`.
///
/// The domain must consist of declared variables; other free variables in
/// the images (e.g. fresh `H1`) are typed from their first occurrence.
pub fn parse_substitution(text: &str, sig: &Signature) -> Result<Substitution, FrontendError> {
    if text.trim() == "{}" {
        return Ok(Substitution::new());
    }
    let bindings = syntax::Parser::new(text)?.parse_bindings()?;
    let mut el = Elaborator::new(sig).infer_free(true);
    let mut theta = Substitution::new();
    for (name, pos, raw) in bindings {
        let Some(var) = sig.var(&name) else {
            return Err(FrontendError::NotAVariable { name, pos });
        };
        let image = el.check(&raw, var.ty())?;
        theta
            .insert(var.clone(), image)
            .map_err(|source| FrontendError::Binding { name, pos, source })?;
    }
    Ok(theta)
}
