use std::fmt;

use super::symbol::Symbol;

/// Lower bound used when a counted sub-pattern does not state one.
pub const DEFAULT_MIN_COUNT: u32 = 2;

/// Regular expression over symbols.
///
/// `Display` prints the canonical spec-file syntax: juxtaposition for
/// concatenation, `|`, postfix `* + ? ^N`, `.` for any symbol, `[^a b]` for
/// the complement of a symbol set, `()` for the empty string and `^{n}` for a
/// counted sub-pattern. Parenthesization follows the tree exactly, so
/// printing and re-parsing yields the same tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegexAst {
    Literal(Symbol),
    Epsilon,
    AnySymbol,
    /// Exactly one symbol of the alphabet that is not listed.
    NotSymbols(Vec<Symbol>),
    Concat(Vec<RegexAst>),
    Union(Vec<RegexAst>),
    Star(Box<RegexAst>),
    Plus(Box<RegexAst>),
    Optional(Box<RegexAst>),
    Repeat(Box<RegexAst>, u32),
    NamedRef(String),
    /// `body^{n}` with `n` ranging over `min..=max`; an open `max` is
    /// bounded by the caller at expansion time. Must be expanded with
    /// [`RegexAst::instantiate`] before compilation.
    Counted {
        body: Box<RegexAst>,
        min: u32,
        max: Option<u32>,
    },
}

impl RegexAst {
    pub fn lit(sym: Symbol) -> Self {
        RegexAst::Literal(sym)
    }

    /// Concatenation; collapses the trivial cases.
    pub fn concat(mut items: Vec<RegexAst>) -> Self {
        match items.len() {
            0 => RegexAst::Epsilon,
            1 => items.pop().unwrap(),
            _ => RegexAst::Concat(items),
        }
    }

    /// Union; a single alternative is returned unchanged.
    pub fn union(mut items: Vec<RegexAst>) -> Self {
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            RegexAst::Union(items)
        }
    }

    pub fn star(self) -> Self {
        RegexAst::Star(Box::new(self))
    }

    pub fn plus(self) -> Self {
        RegexAst::Plus(Box::new(self))
    }

    pub fn optional(self) -> Self {
        RegexAst::Optional(Box::new(self))
    }

    pub fn repeat(self, n: u32) -> Self {
        RegexAst::Repeat(Box::new(self), n)
    }

    fn children(&self) -> Vec<&RegexAst> {
        match self {
            RegexAst::Concat(v) | RegexAst::Union(v) => v.iter().collect(),
            RegexAst::Star(c) | RegexAst::Plus(c) | RegexAst::Optional(c) | RegexAst::Repeat(c, _) => vec![c],
            RegexAst::Counted { body, .. } => vec![body],
            _ => Vec::new(),
        }
    }

    /// All counted sub-patterns in the tree, outermost first.
    pub fn counted_parts(&self) -> Vec<&RegexAst> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if matches!(node, RegexAst::Counted { .. }) {
                out.push(node);
            }
            let mut kids = node.children();
            kids.reverse();
            stack.extend(kids);
        }
        out
    }

    /// The `(min, max)` range of the (first) counted sub-pattern, if any.
    pub fn count_range(&self) -> Option<(u32, Option<u32>)> {
        self.counted_parts().first().map(|c| match c {
            RegexAst::Counted { min, max, .. } => (*min, *max),
            _ => unreachable!(),
        })
    }

    /// Replaces every counted sub-pattern by `body^n`.
    pub fn instantiate(&self, n: u32) -> RegexAst {
        match self {
            RegexAst::Counted { body, .. } => body.instantiate(n).repeat(n),
            RegexAst::Concat(v) => RegexAst::Concat(v.iter().map(|c| c.instantiate(n)).collect()),
            RegexAst::Union(v) => RegexAst::Union(v.iter().map(|c| c.instantiate(n)).collect()),
            RegexAst::Star(c) => c.instantiate(n).star(),
            RegexAst::Plus(c) => c.instantiate(n).plus(),
            RegexAst::Optional(c) => c.instantiate(n).optional(),
            RegexAst::Repeat(c, k) => c.instantiate(n).repeat(*k),
            other => other.clone(),
        }
    }

    /// Nesting depth of `*`/`+` operators.
    pub fn star_height(&self) -> usize {
        let inner = self
            .children()
            .into_iter()
            .map(RegexAst::star_height)
            .max()
            .unwrap_or(0);
        match self {
            RegexAst::Star(_) | RegexAst::Plus(_) => inner + 1,
            _ => inner,
        }
    }

    /// Group names referenced directly by this tree.
    pub fn named_refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if let RegexAst::NamedRef(name) = node {
                out.push(name.as_str());
            }
            stack.extend(node.children());
        }
        out
    }

    /// Symbols mentioned as literals or in complement sets.
    pub fn mentioned_symbols(&self) -> Vec<&Symbol> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                RegexAst::Literal(s) => out.push(s),
                RegexAst::NotSymbols(set) => out.extend(set.iter()),
                _ => {}
            }
            stack.extend(node.children());
        }
        out
    }
}

fn needs_parens_in_concat(node: &RegexAst) -> bool {
    matches!(node, RegexAst::Concat(_) | RegexAst::Union(_))
}

fn fmt_postfix_operand(node: &RegexAst, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if needs_parens_in_concat(node) {
        write!(f, "({node})")
    } else {
        write!(f, "{node}")
    }
}

impl fmt::Display for RegexAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegexAst::Literal(s) => write!(f, "{s}"),
            RegexAst::Epsilon => f.write_str("()"),
            RegexAst::AnySymbol => f.write_str("."),
            RegexAst::NotSymbols(set) => {
                f.write_str("[^")?;
                for (i, s) in set.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str("]")
            }
            RegexAst::NamedRef(name) => f.write_str(name),
            RegexAst::Concat(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    fmt_postfix_operand(item, f)?;
                }
                Ok(())
            }
            RegexAst::Union(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    if matches!(item, RegexAst::Union(_)) {
                        write!(f, "({item})")?;
                    } else {
                        write!(f, "{item}")?;
                    }
                }
                Ok(())
            }
            RegexAst::Star(c) => {
                fmt_postfix_operand(c, f)?;
                f.write_str("*")
            }
            RegexAst::Plus(c) => {
                fmt_postfix_operand(c, f)?;
                f.write_str("+")
            }
            RegexAst::Optional(c) => {
                fmt_postfix_operand(c, f)?;
                f.write_str("?")
            }
            RegexAst::Repeat(c, n) => {
                fmt_postfix_operand(c, f)?;
                write!(f, "^{n}")
            }
            RegexAst::Counted { body, min, max } => {
                fmt_postfix_operand(body, f)?;
                match (min, max) {
                    (&DEFAULT_MIN_COUNT, None) => f.write_str("^{n}"),
                    (min, None) => write!(f, "^{{n:{min}..}}"),
                    (min, Some(max)) => write!(f, "^{{n:{min}..{max}}}"),
                }
            }
        }
    }
}
