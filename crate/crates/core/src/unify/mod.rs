//! Enumeration of complete sets of unifiers for DHP unification problems.
//!
//! The search explores the derivation tree of the inference system from
//! `(E0, {})`. Rule selection is locally optimal: trivial equations and
//! variable elimination always go first, and the state determines a single
//! equation to work on. Fresh names depend only on the path from the root,
//! so breadth-first and iterative-deepening traversal see identical trees.

mod rules;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::dhp::{check_dhp, CheckMode, DhpViolation};
use crate::subst::Substitution;
use crate::term::{Term, Var};

pub use rules::{
    classify, make_imitation_binding, make_projection_bindings, partial_binding, solve_flex_flex_diff,
    solve_flex_flex_same, EqClass, Fresh, SortMismatch,
};

/// An unordered pair, stored with `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(a: Term, b: Term) -> Self {
        if a <= b {
            Equation { lhs: a, rhs: b }
        } else {
            Equation { lhs: b, rhs: a }
        }
    }

    pub fn apply(&self, theta: &Substitution) -> Equation {
        Equation::new(theta.apply(&self.lhs), theta.apply(&self.rhs))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = self.lhs.free_vars();
        self.rhs.collect_free_vars(&mut out);
        out
    }

    pub fn is_solved_by(&self, theta: &Substitution) -> bool {
        theta.apply(&self.lhs) == theta.apply(&self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Rem,
    Dec,
    Var,
    Imt,
    Prj,
    Ffe,
    Ffne,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::Rem => "rem",
            Rule::Dec => "dec",
            Rule::Var => "var",
            Rule::Imt => "imt",
            Rule::Prj => "prj",
            Rule::Ffe => "ffe",
            Rule::Ffne => "ffne",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    /// The equation the rule was applied to.
    pub equation: Equation,
    /// The substitution introduced by the step (empty for `rem` and `dec`).
    pub binding: Substitution,
    /// The accumulated substitution after the step.
    pub accumulated: Substitution,
}

#[derive(Debug)]
pub struct TraceNode {
    pub step: TraceStep,
    pub parent: Option<Arc<TraceNode>>,
}

#[derive(Debug, Clone)]
pub struct ProblemState {
    /// Sorted, so that the state has a canonical form.
    pub equations: Vec<Equation>,
    pub accumulated: Substitution,
    pub fresh_counter: usize,
    pub depth: usize,
    pub trace: Option<Arc<TraceNode>>,
}

impl ProblemState {
    pub fn initial(mut equations: Vec<Equation>) -> Self {
        equations.sort();
        ProblemState {
            equations,
            accumulated: Substitution::new(),
            fresh_counter: 0,
            depth: 0,
            trace: None,
        }
    }

    /// Applied steps, root first.
    pub fn trace(&self) -> Vec<TraceStep> {
        let mut steps = Vec::new();
        let mut node = self.trace.as_deref();
        while let Some(n) = node {
            steps.push(n.step.clone());
            node = n.parent.as_deref();
        }
        steps.reverse();
        steps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Traversal {
    #[default]
    BreadthFirst,
    IterativeDeepening,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// Maximal number of steps along any derivation.
    pub max_steps: usize,
    pub max_solutions: Option<usize>,
    pub check_mode: CheckMode,
    pub traversal: Traversal,
    /// Defer flex-rigid equations whose variable occurs on the rigid side,
    /// and cut the branch once nothing else is left.
    pub postpone_cyclic: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_steps: 64,
            max_solutions: None,
            check_mode: CheckMode::Strict,
            traversal: Traversal::BreadthFirst,
            postpone_cyclic: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Complete,
    BoundExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Restricted to the free variables of the input problem.
    pub unifier: Substitution,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub solutions: Vec<Solution>,
    pub status: Status,
}

impl Outcome {
    pub fn unifiers(&self) -> Vec<Substitution> {
        self.solutions.iter().map(|s| s.unifier.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("equation sides have different types: {0}")]
    TypeMismatch(String),
    #[error("input term is not accepted by the DHP check")]
    NotDhp(Vec<DhpViolation>),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl EngineError {
    /// Input validation problems as opposed to broken invariants.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, EngineError::Invariant(_))
    }
}

/// Checks the input problem against the configuration.
pub fn validate(equations: &[Equation], config: &EngineConfig) -> Result<(), EngineError> {
    if config.max_steps == 0 {
        return Err(EngineError::Config("max_steps must be at least 1".into()));
    }
    if config.max_solutions == Some(0) {
        return Err(EngineError::Config("max_solutions must be at least 1".into()));
    }
    for eq in equations {
        let lt = eq.lhs.type_of().map_err(|e| EngineError::TypeMismatch(e.to_string()))?;
        let rt = eq.rhs.type_of().map_err(|e| EngineError::TypeMismatch(e.to_string()))?;
        if lt != rt {
            return Err(EngineError::TypeMismatch(format!("{lt} vs {rt}")));
        }
        for side in [&eq.lhs, &eq.rhs] {
            let report = check_dhp(side, config.check_mode);
            if !report.accepted {
                return Err(EngineError::NotDhp(report.violations));
            }
        }
    }
    Ok(())
}

/// Lazily enumerates unifiers.
pub struct Search {
    config: EngineConfig,
    problem: Vec<Equation>,
    problem_vars: BTreeSet<Var>,
    reserved: BTreeSet<String>,
    emitted: usize,
    cut: bool,
    done: bool,
    frontier: Frontier,
}

enum Frontier {
    Breadth(VecDeque<ProblemState>),
    Deepening {
        root: ProblemState,
        stack: Vec<ProblemState>,
        bound: usize,
        deeper: bool,
    },
}

impl Search {
    pub fn new(equations: Vec<Equation>, config: EngineConfig) -> Result<Self, EngineError> {
        Self::with_reserved(equations, config, BTreeSet::new())
    }

    /// `reserved` lists names fresh variables must avoid, in addition to the
    /// free variables of the problem.
    pub fn with_reserved(
        equations: Vec<Equation>,
        config: EngineConfig,
        mut reserved: BTreeSet<String>,
    ) -> Result<Self, EngineError> {
        validate(&equations, &config)?;
        let problem_vars: BTreeSet<Var> = equations.iter().flat_map(Equation::free_vars).collect();
        reserved.extend(problem_vars.iter().map(|v| v.name().to_string()));
        let root = ProblemState::initial(equations.clone());
        let frontier = match config.traversal {
            Traversal::BreadthFirst => Frontier::Breadth(VecDeque::from([root])),
            Traversal::IterativeDeepening => Frontier::Deepening {
                stack: vec![root.clone()],
                root,
                bound: 0,
                deeper: false,
            },
        };
        Ok(Search {
            config,
            problem: equations,
            problem_vars,
            reserved,
            emitted: 0,
            cut: false,
            done: false,
            frontier,
        })
    }

    /// Status of the search so far; final once `next_solution` returned `None`.
    pub fn status(&self) -> Status {
        if self.cut || !self.done {
            Status::BoundExhausted
        } else {
            Status::Complete
        }
    }

    /// Successors of an unsolved state below the step bound.
    fn expand(&mut self, state: &ProblemState) -> Result<Vec<ProblemState>, EngineError> {
        let Some(idx) = select_equation(state, &self.config) else {
            self.cut = true;
            return Ok(Vec::new());
        };
        let succ = rules::step(state, idx, self.config.check_mode, &self.reserved)?;
        if self.config.check_mode == CheckMode::Strict {
            for s in &succ {
                for eq in &s.equations {
                    for side in [&eq.lhs, &eq.rhs] {
                        let report = check_dhp(side, CheckMode::Strict);
                        if !report.accepted {
                            return Err(EngineError::Invariant(format!(
                                "step produced a non-DHP equation side ({} violations)",
                                report.violations.len()
                            )));
                        }
                    }
                }
            }
        }
        Ok(succ)
    }

    fn emit(&mut self, state: &ProblemState) -> Result<Solution, EngineError> {
        let unifier = state.accumulated.restrict(&self.problem_vars);
        for eq in &self.problem {
            if !eq.is_solved_by(&unifier) {
                return Err(EngineError::Invariant("emitted substitution is not a unifier".into()));
            }
        }
        self.emitted += 1;
        Ok(Solution {
            unifier,
            trace: state.trace(),
        })
    }

    fn limit_reached(&self) -> bool {
        self.config.max_solutions.is_some_and(|m| self.emitted >= m)
    }

    pub fn next_solution(&mut self) -> Result<Option<Solution>, EngineError> {
        if self.done {
            return Ok(None);
        }
        if self.limit_reached() {
            self.stop_early();
            return Ok(None);
        }
        let max_steps = self.config.max_steps;
        loop {
            let state = match &mut self.frontier {
                Frontier::Breadth(queue) => match queue.pop_front() {
                    Some(s) => s,
                    None => {
                        self.done = true;
                        return Ok(None);
                    }
                },
                Frontier::Deepening {
                    root,
                    stack,
                    bound,
                    deeper,
                } => match stack.pop() {
                    Some(s) => s,
                    None => {
                        if !*deeper || *bound >= max_steps {
                            self.done = true;
                            return Ok(None);
                        }
                        *bound += 1;
                        *deeper = false;
                        stack.push(root.clone());
                        continue;
                    }
                },
            };
            match &mut self.frontier {
                Frontier::Breadth(_) => {
                    if state.equations.is_empty() {
                        let sol = self.emit(&state)?;
                        return Ok(Some(sol));
                    }
                    if state.depth >= max_steps {
                        self.cut = true;
                        continue;
                    }
                    let succ = self.expand(&state)?;
                    if let Frontier::Breadth(queue) = &mut self.frontier {
                        queue.extend(succ);
                    }
                }
                Frontier::Deepening { bound, deeper, .. } => {
                    let bound = *bound;
                    if state.depth == bound {
                        if state.equations.is_empty() {
                            let sol = self.emit(&state)?;
                            return Ok(Some(sol));
                        }
                        if bound >= max_steps {
                            self.cut = true;
                        } else {
                            *deeper = true;
                        }
                        continue;
                    }
                    if state.equations.is_empty() {
                        continue;
                    }
                    let succ = self.expand(&state)?;
                    if let Frontier::Deepening { stack, .. } = &mut self.frontier {
                        stack.extend(succ.into_iter().rev());
                    }
                }
            }
        }
    }

    /// Ends the search after the solution limit; unexplored states make the
    /// result inconclusive.
    fn stop_early(&mut self) {
        let pending = match &self.frontier {
            Frontier::Breadth(q) => !q.is_empty(),
            Frontier::Deepening { stack, deeper, .. } => !stack.is_empty() || *deeper,
        };
        if pending {
            self.cut = true;
        }
        self.done = true;
    }
}

impl Iterator for Search {
    type Item = Result<Solution, EngineError>;

    fn next(&mut self) -> Option<Self::Item> {
        self.next_solution().transpose()
    }
}

/// Runs the search to completion (or the solution limit).
pub fn enumerate(equations: Vec<Equation>, config: EngineConfig) -> Result<Outcome, EngineError> {
    enumerate_reserving(equations, config, BTreeSet::new())
}

pub fn enumerate_reserving(
    equations: Vec<Equation>,
    config: EngineConfig,
    reserved: BTreeSet<String>,
) -> Result<Outcome, EngineError> {
    let mut search = Search::with_reserved(equations, config, reserved)?;
    let mut solutions = Vec::new();
    while let Some(sol) = search.next_solution()? {
        solutions.push(sol);
    }
    Ok(Outcome {
        solutions,
        status: search.status(),
    })
}

/// Successor states of `state` for the equation chosen by the default
/// strategy; `None` if the state is solved or gives up.
pub fn step_state(
    state: &ProblemState,
    config: &EngineConfig,
    reserved: &BTreeSet<String>,
) -> Result<Option<Vec<ProblemState>>, EngineError> {
    let Some(idx) = select_equation(state, config) else {
        return Ok(None);
    };
    rules::step(state, idx, config.check_mode, reserved).map(Some)
}

/// Index of the equation the locally optimal strategy works on next, or
/// `None` if every remaining equation is postponed.
pub fn select_equation(state: &ProblemState, config: &EngineConfig) -> Option<usize> {
    state
        .equations
        .iter()
        .enumerate()
        .filter_map(|(i, e)| rules::priority(classify(e), config.postpone_cyclic).map(|p| (p, i)))
        .min()
        .map(|(_, i)| i)
}

pub use rules::step;
