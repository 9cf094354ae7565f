//! The `dhp` command-line interface.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dhp::{check_dhp, CheckMode};
use crate::frontend::{parse_problem, report, ProblemFile, Query, QueryKind};
use crate::matching::{match_term, MatchError};
use crate::oracle::{brute_force_unifiers, EnumBudget};
use crate::unify::{enumerate_reserving, EngineConfig, EngineError, Equation, Outcome, Solution, Status, Traversal};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BOUNDED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "dhp", version, about = "Unification and matching of deterministic higher-order patterns")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Classify the `dhp` queries of a problem file.
    Check(Common),
    /// Solve the `match` queries of a problem file.
    Match(Common),
    /// Enumerate unifiers for the `unify` queries of a problem file.
    Unify(Common),
    /// Brute-force the bounded unifiers of `unify` queries.
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Problem file; `-` reads standard input.
    #[arg(long)]
    input: PathBuf,
    /// Run only the query with this name.
    #[arg(long)]
    query: Option<String>,
    #[arg(long)]
    max_solutions: Option<usize>,
    #[arg(long, default_value_t = 64)]
    max_steps: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    dhp_check: ModeArg,
    #[arg(long, value_enum, default_value_t = TraversalArg::Bfs)]
    traversal: TraversalArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include derivations with each solution.
    #[arg(long)]
    trace: bool,
    /// Defer cyclic flex-rigid equations and give up when only they remain.
    #[arg(long)]
    postpone_cyclic: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 3)]
    image_size: usize,
    #[arg(long, default_value_t = 0)]
    fresh_vars: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Strict,
    Lenient,
    Off,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TraversalArg {
    Bfs,
    Iddfs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

impl Common {
    fn mode(&self) -> CheckMode {
        match self.dhp_check {
            ModeArg::Strict => CheckMode::Strict,
            ModeArg::Lenient => CheckMode::Lenient,
            ModeArg::Off => CheckMode::Off,
        }
    }

    fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            max_steps: self.max_steps,
            max_solutions: self.max_solutions,
            check_mode: self.mode(),
            traversal: match self.traversal {
                TraversalArg::Bfs => Traversal::BreadthFirst,
                TraversalArg::Iddfs => Traversal::IterativeDeepening,
            },
            postpone_cyclic: self.postpone_cyclic,
        }
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    format: Format,
}

impl Io<'_> {
    fn fail(&mut self, code: i32, message: &str) -> i32 {
        if self.format == Format::Json {
            let _ = writeln!(self.out, "{}", report::to_json(&report::error_report(message)));
        }
        let _ = writeln!(self.err, "error: {message}");
        code
    }
}

fn load(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading standard input: {e}"))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
}

fn select<'p>(problem: &'p ProblemFile, keyword: &str, name: Option<&str>) -> Result<Vec<&'p Query>, String> {
    match name {
        Some(n) => match problem.query(n) {
            Some(q) if q.kind.keyword() == keyword => Ok(vec![q]),
            Some(q) => Err(format!("query `{n}` is a `{}` query, not `{keyword}`", q.kind.keyword())),
            None => Err(format!("no query named `{n}`")),
        },
        None => {
            let qs: Vec<&Query> = problem.queries.iter().filter(|q| q.kind.keyword() == keyword).collect();
            if qs.is_empty() {
                Err(format!("the input contains no `{keyword}` queries"))
            } else {
                Ok(qs)
            }
        }
    }
}

fn reserved(problem: &ProblemFile) -> BTreeSet<String> {
    problem
        .signature
        .vars()
        .map(|v| v.name().to_string())
        .chain(problem.signature.funs().map(|s| s.name().to_string()))
        .collect()
}

fn engine_error_code(e: &EngineError) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_INTERNAL
    }
}

fn emit_outcome(io: &mut Io, q: &Query, kind: &str, outcome: &Outcome, trace: bool) {
    let text = match io.format {
        Format::Json => format!("{}\n", report::to_json(&report::unify_report(outcome, trace))),
        Format::Text => report::solution_text(&q.name, kind, outcome, trace),
    };
    let _ = io.out.write_all(text.as_bytes());
}

fn run_unify(io: &mut Io, problem: &ProblemFile, q: &Query, c: &Common) -> i32 {
    let QueryKind::Unify(l, r) = &q.kind else { unreachable!() };
    let eqs = vec![Equation::new(l.clone(), r.clone())];
    match enumerate_reserving(eqs, c.engine_config(), reserved(problem)) {
        Ok(outcome) => {
            emit_outcome(io, q, "unify", &outcome, c.trace);
            match outcome.status {
                Status::Complete => EXIT_OK,
                Status::BoundExhausted => EXIT_BOUNDED,
            }
        }
        Err(e) => io.fail(engine_error_code(&e), &format!("{}: {e}", q.name)),
    }
}

fn run_match(io: &mut Io, q: &Query, c: &Common) -> i32 {
    let QueryKind::Match(p, t) = &q.kind else { unreachable!() };
    match match_term(p, t, c.mode()) {
        Ok(result) => {
            let text = match io.format {
                Format::Json => format!("{}\n", report::to_json(&report::match_report(&result))),
                Format::Text => report::match_text(&q.name, &result),
            };
            let _ = io.out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(MatchError::Ambiguous) => io.fail(
            EXIT_INTERNAL,
            &format!("{}: a deterministic pattern matched ambiguously", q.name),
        ),
        Err(e) => io.fail(EXIT_INPUT, &format!("{}: {e}", q.name)),
    }
}

fn run_check(io: &mut Io, q: &Query, c: &Common) -> i32 {
    let QueryKind::Dhp(t) = &q.kind else { unreachable!() };
    let rep = check_dhp(t, c.mode());
    let text = match io.format {
        Format::Json => format!("{}\n", report::to_json(&report::check_report(&rep))),
        Format::Text => report::check_text(&q.name, &rep),
    };
    let _ = io.out.write_all(text.as_bytes());
    EXIT_OK
}

fn run_oracle(io: &mut Io, problem: &ProblemFile, q: &Query, o: &OracleArgs) -> i32 {
    let QueryKind::Unify(l, r) = &q.kind else { unreachable!() };
    let eqs = vec![Equation::new(l.clone(), r.clone())];
    let budget = EnumBudget::new(problem.signature.clone(), o.image_size, o.fresh_vars);
    let mut solutions: Vec<Solution> = brute_force_unifiers(&eqs, &budget)
        .into_iter()
        .map(|unifier| Solution {
            unifier,
            trace: Vec::new(),
        })
        .collect();
    if let Some(n) = o.common.max_solutions {
        solutions.truncate(n);
    }
    let outcome = Outcome {
        solutions,
        status: Status::Complete,
    };
    emit_outcome(io, q, "oracle", &outcome, false);
    EXIT_OK
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code: 0 answered, 2 bound exhausted, 3 input error, 4 internal error.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let (keyword, common) = match &cli.cmd {
        Cmd::Check(c) => ("dhp", c),
        Cmd::Match(c) => ("match", c),
        Cmd::Unify(c) => ("unify", c),
        Cmd::Oracle(o) => ("unify", &o.common),
    };
    let mut io = Io {
        out,
        err,
        format: common.format,
    };
    let src = match load(&common.input) {
        Ok(s) => s,
        Err(m) => return io.fail(EXIT_INPUT, &m),
    };
    let problem = match parse_problem(&src) {
        Ok(p) => p,
        Err(e) => return io.fail(EXIT_INPUT, &format!("{}: {e}", common.input.display())),
    };
    let queries = match select(&problem, keyword, common.query.as_deref()) {
        Ok(q) => q,
        Err(m) => return io.fail(EXIT_INPUT, &m),
    };
    let mut code = EXIT_OK;
    for q in queries {
        let c = match &cli.cmd {
            Cmd::Check(c) => run_check(&mut io, q, c),
            Cmd::Match(c) => run_match(&mut io, q, c),
            Cmd::Unify(c) => run_unify(&mut io, &problem, q, c),
            Cmd::Oracle(o) => run_oracle(&mut io, &problem, q, o),
        };
        code = code.max(c);
    }
    let _ = io.out.flush();
    code
}
