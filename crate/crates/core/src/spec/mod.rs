//! The declarative specification: alphabet, lexicon, grouping and
//! abstraction patterns, context rules, violation phrase and monitor.
//!
//! File format (UTF-8, `#` starts a comment outside double quotes, sections
//! in any order):
//!
//! ```text
//! [alphabet]      whitespace-separated action symbols
//! [subject]       one line, prepended to every predicate
//! [lexicon]       symbol = predicate
//! [groups]        name = regex
//! [abstract]      regex => "template"      (^{n} marks the counted part)
//! [context]       action / pre _ post => "predicate"
//! [violation]     one line appended to the violating clause
//! [monitor]       initial S | error S... | state S... | FROM SYMBOL TO
//! ```

mod parse;
mod serialize;
mod syntax;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::clause::Clause;
use crate::fsm::{Alphabet, Groups, RegexAst, Symbol};
use crate::rewrite::ContextRule;

pub use parse::parse_spec;
pub use validate::validate_spec;

/// The login example shipped with the crate.
pub const DEFAULT_SPEC: &str = include_str!("../../specs/login.spec");

/// Placeholder for the repetition count in abstraction templates.
pub const COUNT_PLACEHOLDER: &str = "{n}";

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loc {
    pub line: usize,
    pub column: usize,
}

impl Loc {
    pub fn new(line: usize, column: usize) -> Self {
        Loc { line, column }
    }
}

impl Default for Loc {
    fn default() -> Self {
        Loc { line: 1, column: 1 }
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    SyntaxError,
    DuplicateSymbol,
    MissingLexiconEntry,
    UnknownSymbol,
    UnknownGroup,
    RecursiveGroup,
    BadCountRange,
    CountMismatch,
    EmptyMatchPattern,
    NoRuleForAction,
    NondeterministicMonitor,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub loc: Loc,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, loc: Loc, message: impl Into<String>) -> Self {
        Diagnostic {
            kind,
            loc,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.loc, self.kind, self.message)
    }
}

/// One or more diagnostics that prevented a spec from being accepted.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SpecError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Pattern whose matches are summarized by a single sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractionRule {
    pub pattern: RegexAst,
    pub template: String,
}

impl AbstractionRule {
    /// `(min, max)` of the counted sub-pattern, if there is one.
    pub fn count_range(&self) -> Option<(u32, Option<u32>)> {
        self.pattern.count_range()
    }

    /// Template with the count placeholder filled in.
    pub fn render(&self, n: Option<u32>) -> String {
        match n {
            Some(n) => self.template.replace(COUNT_PLACEHOLDER, &n.to_string()),
            None => self.template.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorTransition {
    pub from: String,
    pub symbol: Symbol,
    pub to: String,
}

/// Deterministic automaton over the action alphabet with designated error
/// states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorAutomaton {
    pub states: BTreeSet<String>,
    pub initial: String,
    pub error_states: BTreeSet<String>,
    pub transitions: Vec<MonitorTransition>,
}

impl MonitorAutomaton {
    /// Target of the first transition for `(state, symbol)`.
    pub fn next(&self, state: &str, symbol: &Symbol) -> Option<&str> {
        self.transitions
            .iter()
            .find(|t| t.from == state && &t.symbol == symbol)
            .map(|t| t.to.as_str())
    }

    pub fn is_error(&self, state: &str) -> bool {
        self.error_states.contains(state)
    }
}

/// Source positions of parsed items, used for diagnostics.
#[derive(Debug, Clone, Default)]
pub struct SourceMap {
    pub alphabet: HashMap<Symbol, Loc>,
    pub lexicon: HashMap<Symbol, Loc>,
    pub groups: Vec<Loc>,
    pub abstraction_rules: Vec<Loc>,
    pub context_rules: Vec<Loc>,
    pub monitor_transitions: Vec<Loc>,
    pub monitor: Option<Loc>,
}

/// A parsed specification. Equality ignores source positions.
#[derive(Debug, Clone)]
pub struct Spec {
    pub alphabet: Alphabet,
    pub subject: String,
    pub lexicon: BTreeMap<Symbol, Clause>,
    pub groups: Vec<(String, RegexAst)>,
    pub abstraction_rules: Vec<AbstractionRule>,
    pub context_rules: Vec<ContextRule>,
    pub violation_phrase: String,
    pub monitor: Option<MonitorAutomaton>,
    pub source: SourceMap,
}

impl PartialEq for Spec {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.subject == other.subject
            && self.lexicon == other.lexicon
            && self.groups == other.groups
            && self.abstraction_rules == other.abstraction_rules
            && self.context_rules == other.context_rules
            && self.violation_phrase == other.violation_phrase
            && self.monitor == other.monitor
    }
}

impl Eq for Spec {}

impl Spec {
    /// Parses and validates.
    pub fn load(text: &str) -> Result<Spec, SpecError> {
        let spec = parse_spec(text)?;
        let diagnostics = validate_spec(&spec);
        if diagnostics.is_empty() {
            Ok(spec)
        } else {
            Err(SpecError { diagnostics })
        }
    }

    /// The shipped login example.
    pub fn default_login() -> Spec {
        Spec::load(DEFAULT_SPEC).expect("shipped spec is valid")
    }

    pub fn groups_map(&self) -> Groups {
        self.groups.iter().cloned().collect()
    }

    /// Lexicon clause for an action.
    pub fn clause(&self, action: &Symbol) -> Option<&Clause> {
        self.lexicon.get(action)
    }

    /// Same spec without abstraction rules.
    pub fn without_abstractions(&self) -> Spec {
        Spec {
            abstraction_rules: Vec::new(),
            source: SourceMap {
                abstraction_rules: Vec::new(),
                ..self.source.clone()
            },
            ..self.clone()
        }
    }
}
