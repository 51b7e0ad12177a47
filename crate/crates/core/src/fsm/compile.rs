//! Regular expression compilation (Thompson construction, then subset
//! construction and minimization).

use std::collections::BTreeMap;

use super::dfa::Dfa;
use super::fst::{Fst, FstBuilder, StateId};
use super::regex::RegexAst;
use super::symbol::{Alphabet, Symbol};
use super::FsmError;

/// Named sub-expressions that a [`RegexAst::NamedRef`] may point to.
pub type Groups = BTreeMap<String, RegexAst>;

struct Thompson<'a> {
    alphabet: &'a Alphabet,
    groups: &'a Groups,
    active: Vec<&'a str>,
    b: FstBuilder,
}

impl<'a> Thompson<'a> {
    fn symbol_arc(&mut self, from: StateId, to: StateId, sym: &Symbol) {
        self.b.add_transition(from, Some(sym.clone()), Some(sym.clone()), to);
    }

    fn eps(&mut self, from: StateId, to: StateId) {
        self.b.add_transition(from, None, None, to);
    }

    /// Builds a fragment and returns its (entry, exit) states.
    fn build(&mut self, ast: &'a RegexAst) -> Result<(StateId, StateId), FsmError> {
        let entry = self.b.add_state();
        let exit = self.b.add_state();
        match ast {
            RegexAst::Literal(sym) => {
                if !self.alphabet.contains(sym) {
                    return Err(FsmError::UnknownSymbol(sym.name().to_string()));
                }
                self.symbol_arc(entry, exit, sym);
            }
            RegexAst::Epsilon => self.eps(entry, exit),
            RegexAst::AnySymbol => {
                for sym in self.alphabet.iter() {
                    self.symbol_arc(entry, exit, sym);
                }
            }
            RegexAst::NotSymbols(excluded) => {
                if let Some(bad) = excluded.iter().find(|s| !self.alphabet.contains(s)) {
                    return Err(FsmError::UnknownSymbol(bad.name().to_string()));
                }
                for sym in self.alphabet.iter() {
                    if !excluded.contains(sym) {
                        self.symbol_arc(entry, exit, sym);
                    }
                }
            }
            RegexAst::Concat(items) => {
                let mut cur = entry;
                for item in items {
                    let (s, e) = self.build(item)?;
                    self.eps(cur, s);
                    cur = e;
                }
                self.eps(cur, exit);
            }
            RegexAst::Union(items) => {
                for item in items {
                    let (s, e) = self.build(item)?;
                    self.eps(entry, s);
                    self.eps(e, exit);
                }
            }
            RegexAst::Star(child) => {
                let (s, e) = self.build(child)?;
                self.eps(entry, s);
                self.eps(e, s);
                self.eps(e, exit);
                self.eps(entry, exit);
            }
            RegexAst::Plus(child) => {
                let (s, e) = self.build(child)?;
                self.eps(entry, s);
                self.eps(e, s);
                self.eps(e, exit);
            }
            RegexAst::Optional(child) => {
                let (s, e) = self.build(child)?;
                self.eps(entry, s);
                self.eps(e, exit);
                self.eps(entry, exit);
            }
            RegexAst::Repeat(child, n) => {
                let mut cur = entry;
                for _ in 0..*n {
                    let (s, e) = self.build(child)?;
                    self.eps(cur, s);
                    cur = e;
                }
                self.eps(cur, exit);
            }
            RegexAst::NamedRef(name) => {
                if self.active.contains(&name.as_str()) {
                    return Err(FsmError::RecursiveGroup(name.clone()));
                }
                let (key, body) = self
                    .groups
                    .get_key_value(name)
                    .ok_or_else(|| FsmError::UnknownGroup(name.clone()))?;
                self.active.push(key.as_str());
                let (s, e) = self.build(body)?;
                self.active.pop();
                self.eps(entry, s);
                self.eps(e, exit);
            }
            RegexAst::Counted { .. } => return Err(FsmError::UnexpandedCount),
        }
        Ok((entry, exit))
    }
}

/// Epsilon-NFA acceptor for `ast` (not determinized).
pub fn regex_nfa(ast: &RegexAst, alphabet: &Alphabet, groups: &Groups) -> Result<Fst, FsmError> {
    let mut t = Thompson {
        alphabet,
        groups,
        active: Vec::new(),
        b: FstBuilder::new(),
    };
    let (s, e) = t.build(ast)?;
    t.eps(0, s);
    t.b.set_final(e, true);
    t.b.build()
}

/// Minimal complete DFA for `ast`.
pub fn compile_dfa(ast: &RegexAst, alphabet: &Alphabet, groups: &Groups) -> Result<Dfa, FsmError> {
    let nfa = regex_nfa(ast, alphabet, groups)?;
    Ok(Dfa::from_nfa(&nfa, alphabet)?.minimize())
}

/// Deterministic, minimized acceptor for the language of `ast`. Equal
/// languages produce identical machines.
pub fn compile_regex(ast: &RegexAst, alphabet: &Alphabet, groups: &Groups) -> Result<Fst, FsmError> {
    Ok(compile_dfa(ast, alphabet, groups)?.to_fst())
}
