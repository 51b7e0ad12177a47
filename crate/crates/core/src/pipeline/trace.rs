use crate::fsm::{Alphabet, Symbol};

use super::PipelineError;

/// A sequence of actions, all drawn from a spec alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    actions: Vec<Symbol>,
}

impl Trace {
    pub fn new(actions: Vec<Symbol>, alphabet: &Alphabet) -> Result<Trace, PipelineError> {
        if let Some(position) = actions.iter().position(|a| !alphabet.contains(a)) {
            return Err(PipelineError::UnknownAction {
                symbol: actions[position].name().to_string(),
                position,
            });
        }
        Ok(Trace { actions })
    }

    /// Reads one action per non-whitespace character when every symbol of
    /// the alphabet is a single character, else whitespace-separated tokens.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Trace, PipelineError> {
        let single = alphabet.iter().all(|s| s.name().chars().count() == 1);
        let mut buf = [0u8; 4];
        let tokens: Vec<&str> = if single {
            // Borrowing from `text` keeps positions aligned with actions.
            text.char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .map(|(i, c)| &text[i..i + c.encode_utf8(&mut buf).len()])
                .collect()
        } else {
            text.split_whitespace().collect()
        };
        let mut actions = Vec::with_capacity(tokens.len());
        for (position, tok) in tokens.into_iter().enumerate() {
            match Symbol::new(tok) {
                Ok(sym) if alphabet.contains(&sym) => actions.push(sym),
                _ => {
                    return Err(PipelineError::UnknownAction {
                        symbol: tok.to_string(),
                        position,
                    })
                }
            }
        }
        Ok(Trace { actions })
    }

    pub fn actions(&self) -> &[Symbol] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}
