//! Query reports in text and JSON form.
//!
//! JSON field order is fixed by the struct definitions and solution maps are
//! keyed by variable name, so output is byte-stable across runs.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use super::print;
use crate::dhp::{DhpReport, DhpViolation};
use crate::matching::MatchResult;
use crate::subst::Substitution;
use crate::unify::{Outcome, Status, TraceStep};

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: &'static str,
    pub equation: String,
    pub binding: String,
    pub substitution: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ViolationEntry {
    pub condition: &'static str,
    pub path: Vec<usize>,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MatchKind {
    NoMatch,
    Unique,
    Ambiguous,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SolutionReport {
    pub status: &'static str,
    pub solutions: Vec<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<MatchKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Vec<TraceEntry>>>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CheckReport {
    pub status: &'static str,
    pub accepted: bool,
    pub violations: Vec<ViolationEntry>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ErrorReport {
    pub status: &'static str,
    pub message: String,
}

pub fn status_label(status: Status) -> &'static str {
    match status {
        Status::Complete => "complete",
        Status::BoundExhausted => "bounded",
    }
}

pub fn solution_map(theta: &Substitution) -> BTreeMap<String, String> {
    theta
        .iter()
        .map(|(v, t)| (v.name().to_string(), print::image(t)))
        .collect()
}

pub fn trace_entries(steps: &[TraceStep]) -> Vec<TraceEntry> {
    steps
        .iter()
        .map(|s| TraceEntry {
            rule: s.rule.label(),
            equation: print::equation(&s.equation),
            binding: print::substitution(&s.binding),
            substitution: print::substitution(&s.accumulated),
        })
        .collect()
}

pub fn violation_entry(v: &DhpViolation) -> ViolationEntry {
    ViolationEntry {
        condition: v.condition.tag(),
        path: v.path.clone(),
        witness: print::term(&v.witness),
    }
}

pub fn unify_report(outcome: &Outcome, with_trace: bool) -> SolutionReport {
    SolutionReport {
        status: status_label(outcome.status),
        solutions: outcome.solutions.iter().map(|s| solution_map(&s.unifier)).collect(),
        result: None,
        trace: with_trace.then(|| outcome.solutions.iter().map(|s| trace_entries(&s.trace)).collect()),
    }
}

pub fn match_report(result: &MatchResult) -> SolutionReport {
    let kind = match result {
        MatchResult::NoMatch => MatchKind::NoMatch,
        MatchResult::Unique(_) => MatchKind::Unique,
        MatchResult::Ambiguous(_) => MatchKind::Ambiguous,
    };
    SolutionReport {
        status: "complete",
        solutions: result.solutions().iter().map(solution_map).collect(),
        result: Some(kind),
        trace: None,
    }
}

pub fn check_report(report: &DhpReport) -> CheckReport {
    CheckReport {
        status: "complete",
        accepted: report.accepted,
        violations: report.violations.iter().map(violation_entry).collect(),
    }
}

pub fn error_report(message: impl Into<String>) -> ErrorReport {
    ErrorReport {
        status: "error",
        message: message.into(),
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string(report).expect("reports contain only strings, integers and maps")
}

/// Text rendering of a unify or match report. The header is a comment line,
/// so each solution line can be fed back to the substitution parser.
pub fn solution_text(query: &str, kind: &str, outcome: &Outcome, with_trace: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {query} {kind}: {}, {} solution(s)",
        status_label(outcome.status),
        outcome.solutions.len()
    );
    for s in &outcome.solutions {
        let _ = writeln!(out, "{}", print::substitution(&s.unifier));
        if with_trace {
            for e in trace_entries(&s.trace) {
                let _ = writeln!(out, "#   {} on {} with {}", e.rule, e.equation, e.binding);
            }
        }
    }
    out
}

pub fn match_text(query: &str, result: &MatchResult) -> String {
    let label = match result {
        MatchResult::NoMatch => "nomatch",
        MatchResult::Unique(_) => "unique",
        MatchResult::Ambiguous(_) => "ambiguous",
    };
    let mut out = String::new();
    let _ = writeln!(out, "# {query} match: {label}");
    for s in result.solutions() {
        let _ = writeln!(out, "{}", print::substitution(&s));
    }
    out
}

pub fn check_text(query: &str, report: &DhpReport) -> String {
    let mut out = String::new();
    let verdict = if report.accepted { "accepted" } else { "rejected" };
    let _ = writeln!(out, "# {query} dhp: {verdict}");
    for v in &report.violations {
        let _ = writeln!(
            out,
            "violation ({}) at {:?}: {}",
            v.condition.tag(),
            v.path,
            print::term(&v.witness)
        );
    }
    out
}
