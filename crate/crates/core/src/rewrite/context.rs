//! Context-conditioned choice of a rendering for a single action.

use std::collections::HashMap;

use super::RewriteError;
use crate::clause::Clause;
use crate::fsm::ops::concat;
use crate::fsm::{regex_nfa, Alphabet, Dfa, Fst, Groups, RegexAst, Symbol};

/// `action / pre _ post => rendering`. A missing side is unconstrained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextRule {
    pub action: Symbol,
    pub pre: Option<RegexAst>,
    pub post: Option<RegexAst>,
    pub rendering: Clause,
}

impl ContextRule {
    pub fn is_otherwise(&self) -> bool {
        self.pre.is_none() && self.post.is_none()
    }
}

struct CompiledContext {
    rule: usize,
    /// Accepts prefixes whose some suffix matches the pre-context.
    pre: Option<Dfa>,
    /// Accepts suffixes whose some prefix matches the post-context.
    post: Option<Dfa>,
}

/// Decision procedure compiled from an ordered list of context rules.
pub struct ContextDecider {
    by_action: HashMap<Symbol, Vec<CompiledContext>>,
}

impl std::fmt::Debug for ContextDecider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ContextDecider")
            .field("actions", &self.by_action.len())
            .finish()
    }
}

/// Compiles the rules. Every action that has rules must end its list with
/// an unconstrained one.
pub fn compile_context_rules(
    rules: &[ContextRule],
    alphabet: &Alphabet,
    groups: &Groups,
) -> Result<ContextDecider, RewriteError> {
    let any_star = Fst::identity(alphabet.iter());
    let anchored = |ast: &RegexAst, at_end: bool| -> Result<Dfa, RewriteError> {
        let nfa = regex_nfa(ast, alphabet, groups)?;
        let framed = if at_end {
            concat(&any_star, &nfa)
        } else {
            concat(&nfa, &any_star)
        };
        Ok(Dfa::from_nfa(&framed, alphabet)?.minimize())
    };
    let mut by_action: HashMap<Symbol, Vec<CompiledContext>> = HashMap::new();
    for (i, rule) in rules.iter().enumerate() {
        if !alphabet.contains(&rule.action) {
            return Err(crate::fsm::FsmError::UnknownSymbol(rule.action.name().to_string()).into());
        }
        let compiled = CompiledContext {
            rule: i,
            pre: rule.pre.as_ref().map(|p| anchored(p, true)).transpose()?,
            post: rule.post.as_ref().map(|p| anchored(p, false)).transpose()?,
        };
        by_action.entry(rule.action.clone()).or_default().push(compiled);
    }
    for (action, list) in &by_action {
        let last = list.last().expect("non-empty");
        if !rules[last.rule].is_otherwise() {
            return Err(RewriteError::NoRuleForAction(action.name().to_string()));
        }
    }
    Ok(ContextDecider { by_action })
}

impl ContextDecider {
    /// Index of the first rule for `trace[index]` whose pre-context matches a
    /// suffix of `trace[..index]` and whose post-context matches a prefix of
    /// `trace[index + 1..]`. `None` when the action has no rules.
    pub fn decide(&self, trace: &[Symbol], index: usize) -> Option<usize> {
        let list = self.by_action.get(&trace[index])?;
        let before = &trace[..index];
        let after = &trace[index + 1..];
        list.iter()
            .find(|c| {
                c.pre.as_ref().is_none_or(|d| d.accepts(before)) && c.post.as_ref().is_none_or(|d| d.accepts(after))
            })
            .map(|c| c.rule)
    }

    pub fn has_rules_for(&self, action: &Symbol) -> bool {
        self.by_action.contains_key(action)
    }
}
