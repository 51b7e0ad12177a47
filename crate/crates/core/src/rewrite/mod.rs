//! Rewrite-rule compilers.

mod context;
mod replace;

use thiserror::Error;

use crate::fsm::{compile_dfa, Alphabet, FsmError, Fst, Groups, RegexAst, Symbol};

pub use context::{compile_context_rules, ContextDecider, ContextRule};
pub use replace::{leftmost_longest, Emission, MatchRule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Fsm(#[from] FsmError),
    #[error("pattern of rule {rule} matches the empty string")]
    EmptyMatchPattern { rule: usize },
    #[error("context rules for action `{0}` do not end with an unconstrained rule")]
    NoRuleForAction(String),
}

/// Pattern plus the symbols written in place of each match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplaceRule {
    pub pattern: RegexAst,
    pub replacement: Vec<Symbol>,
}

/// Copies the input, inserting `marker` right after every leftmost-longest,
/// non-overlapping match of `pattern`.
pub fn mark_after(pattern: &RegexAst, marker: Symbol, alphabet: &Alphabet) -> Result<Fst, RewriteError> {
    let rule = MatchRule {
        pattern: compile_dfa(pattern, alphabet, &Groups::new())?,
        emission: Emission::MarkAfter(marker),
    };
    leftmost_longest(&[rule], alphabet)
}

/// Obligatory leftmost-longest replacement; ties go to the earlier rule.
pub fn replace_leftmost_longest(rules: &[ReplaceRule], alphabet: &Alphabet) -> Result<Fst, RewriteError> {
    let compiled = rules
        .iter()
        .map(|r| {
            Ok(MatchRule {
                pattern: compile_dfa(&r.pattern, alphabet, &Groups::new())?,
                emission: Emission::Replace(r.replacement.clone()),
            })
        })
        .collect::<Result<Vec<_>, RewriteError>>()?;
    leftmost_longest(&compiled, alphabet)
}
