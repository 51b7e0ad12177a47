use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Name used when printing an epsilon label.
pub const EPSILON_NAME: &str = "<eps>";
/// Separator inserted after every action symbol.
pub const SENTENCE_SEP_NAME: &str = "<.>";
/// Paragraph delimiter.
pub const PARAGRAPH_SEP_NAME: &str = "<|>";
/// Non-final clause separator inside an aggregated paragraph.
pub const COMMA_NAME: &str = "<,>";
/// Marks an elided subject.
pub const SUBJECT_ELISION_NAME: &str = "<subj>";

const RESERVED: [&str; 5] = [
    EPSILON_NAME,
    SENTENCE_SEP_NAME,
    PARAGRAPH_SEP_NAME,
    COMMA_NAME,
    SUBJECT_ELISION_NAME,
];

const FORBIDDEN_CHARS: [char; 6] = ['.', '|', ',', '/', '=', '#'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("symbol name is empty")]
    Empty,
    #[error("symbol `{0}` contains a forbidden character")]
    ForbiddenChar(String),
    #[error("symbol name `{0}` is reserved")]
    Reserved(String),
}

/// An atomic, possibly multi-character token of a trace or of an
/// intermediate symbol stream.
///
/// Ordering is lexicographic on the name, which is what every sorted
/// iteration in the crate relies on.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    /// Creates a user-level symbol, rejecting reserved names and names
    /// containing whitespace or any of `. | , / = #`.
    pub fn new(name: impl AsRef<str>) -> Result<Self, SymbolError> {
        let name = name.as_ref();
        if name.is_empty() {
            return Err(SymbolError::Empty);
        }
        if RESERVED.contains(&name) {
            return Err(SymbolError::Reserved(name.to_string()));
        }
        if name.chars().any(|c| c.is_whitespace() || FORBIDDEN_CHARS.contains(&c)) {
            return Err(SymbolError::ForbiddenChar(name.to_string()));
        }
        Ok(Symbol(Arc::from(name)))
    }

    /// Internal marker symbols bypass user-level validation.
    pub(crate) fn internal(name: impl AsRef<str>) -> Self {
        Symbol(Arc::from(name.as_ref()))
    }

    pub fn sentence_sep() -> Self {
        Self::internal(SENTENCE_SEP_NAME)
    }

    pub fn paragraph_sep() -> Self {
        Self::internal(PARAGRAPH_SEP_NAME)
    }

    pub fn comma() -> Self {
        Self::internal(COMMA_NAME)
    }

    pub fn subject_elision() -> Self {
        Self::internal(SUBJECT_ELISION_NAME)
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True for the fixed marker names that user symbols may not take.
    pub fn is_reserved(&self) -> bool {
        RESERVED.contains(&self.name())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Builds a symbol sequence from whitespace-free single-character names,
/// e.g. `symbols("lgrx")`. Panics on invalid names; meant for literals.
pub fn symbols(chars: &str) -> Vec<Symbol> {
    chars
        .chars()
        .map(|c| Symbol::new(c.to_string()).expect("valid single-character symbol"))
        .collect()
}

/// Joins symbol names without separators, abbreviating the stream markers to
/// `.`, `|` and `,`.
pub fn compact(seq: &[Symbol]) -> String {
    seq.iter()
        .map(|s| match s.name() {
            SENTENCE_SEP_NAME => ".",
            PARAGRAPH_SEP_NAME => "|",
            COMMA_NAME => ",",
            other => other,
        })
        .collect()
}

/// An ordered set of symbols. Iteration follows insertion order.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
    index: HashMap<Symbol, usize>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `sym`; returns false if it was already present.
    pub fn insert(&mut self, sym: Symbol) -> bool {
        if self.index.contains_key(&sym) {
            return false;
        }
        self.index.insert(sym.clone(), self.symbols.len());
        self.symbols.push(sym);
        true
    }

    pub fn contains(&self, sym: &Symbol) -> bool {
        self.index.contains_key(sym)
    }

    pub fn position(&self, sym: &Symbol) -> Option<usize> {
        self.index.get(sym).copied()
    }

    pub fn get(&self, i: usize) -> Option<&Symbol> {
        self.symbols.get(i)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.symbols.iter()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.symbols
    }

    /// A copy of this alphabet with `extra` appended (duplicates skipped).
    pub fn extended<I: IntoIterator<Item = Symbol>>(&self, extra: I) -> Self {
        let mut out = self.clone();
        for s in extra {
            out.insert(s);
        }
        out
    }
}

impl FromIterator<Symbol> for Alphabet {
    fn from_iter<T: IntoIterator<Item = Symbol>>(iter: T) -> Self {
        let mut a = Alphabet::new();
        for s in iter {
            a.insert(s);
        }
        a
    }
}

impl<'a> IntoIterator for &'a Alphabet {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.symbols.iter()
    }
}
