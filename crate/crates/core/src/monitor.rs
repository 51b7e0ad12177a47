//! Runs the specification automaton to find the violating step.

use crate::fsm::Symbol;
use crate::spec::MonitorAutomaton;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The whole trace was read; carries the state reached.
    Ok(String),
    /// The action at this index entered an error state.
    Violation(usize),
    /// The action at this index has no transition.
    Stuck(usize),
}

impl Verdict {
    pub fn violation_index(&self) -> Option<usize> {
        match self {
            Verdict::Violation(i) => Some(*i),
            _ => None,
        }
    }
}

/// Single deterministic pass; stops at the first error entry or missing
/// transition. Symbols after that point are never read.
pub fn run_monitor(automaton: &MonitorAutomaton, trace: &[Symbol]) -> Verdict {
    let mut state = automaton.initial.as_str();
    for (i, action) in trace.iter().enumerate() {
        match automaton.next(state, action) {
            None => return Verdict::Stuck(i),
            Some(next) if automaton.is_error(next) => return Verdict::Violation(i),
            Some(next) => state = next,
        }
    }
    Verdict::Ok(state.to_string())
}
