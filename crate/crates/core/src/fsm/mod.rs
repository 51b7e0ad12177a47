//! Finite-state acceptors and transducers over multi-character symbols.

mod compile;
mod dfa;
mod fst;
pub mod ops;
mod regex;
mod symbol;

use thiserror::Error;

pub use compile::{compile_dfa, compile_regex, regex_nfa, Groups};
pub use dfa::Dfa;
pub use fst::{Fst, FstBuilder, Label, StateId, Transition};
pub use regex::{RegexAst, DEFAULT_MIN_COUNT};
pub use symbol::{
    compact, symbols, Alphabet, Symbol, SymbolError, COMMA_NAME, EPSILON_NAME, PARAGRAPH_SEP_NAME, SENTENCE_SEP_NAME,
    SUBJECT_ELISION_NAME,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FsmError {
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("reference to undeclared group `{0}`")]
    UnknownGroup(String),
    #[error("group `{0}` refers to itself")]
    RecursiveGroup(String),
    #[error("counted sub-pattern must be expanded before compilation")]
    UnexpandedCount,
    #[error("epsilon-input cycle through state {0} emits output")]
    EpsilonOutputCycle(StateId),
    #[error("transition or initial state refers to missing state {0}")]
    InvalidState(StateId),
}
