//! Character-level recursive-descent parser for the pattern language.
//!
//! ```text
//! union   := concat ('|' concat)*
//! concat  := postfix*
//! postfix := atom ('*' | '+' | '?' | '^' NUM | '^{n}' | '^{n:MIN..}' | '^{n:MIN..MAX}')*
//! atom    := IDENT | '.' | '[^' IDENT* ']' | '(' union ')'
//! ```

use crate::fsm::{RegexAst, Symbol, DEFAULT_MIN_COUNT};

use super::DiagnosticKind;

/// What an identifier inside a pattern refers to.
pub(crate) enum Resolved {
    Symbol(Symbol),
    Group,
    Unknown,
}

/// Error with a 0-based character offset into the pattern text.
#[derive(Debug)]
pub(crate) struct SyntaxIssue {
    pub offset: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

fn issue(offset: usize, kind: DiagnosticKind, message: impl Into<String>) -> SyntaxIssue {
    SyntaxIssue {
        offset,
        kind,
        message: message.into(),
    }
}

/// Characters that may not appear in symbol or group names.
pub(crate) const OPERATOR_CHARS: &str = "()|*+?^[].{}\"/=#,";

pub(crate) fn is_ident_char(c: char) -> bool {
    !c.is_whitespace() && !OPERATOR_CHARS.contains(c)
}

pub(crate) fn is_ident(text: &str) -> bool {
    !text.is_empty() && text != "_" && text.chars().all(is_ident_char)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Resolved,
    allow_count: bool,
    counts: usize,
}

/// Parses a pattern. `allow_count` admits the `^{n...}` operator.
pub(crate) fn parse_pattern(
    text: &str,
    resolve: &dyn Fn(&str) -> Resolved,
    allow_count: bool,
) -> Result<RegexAst, SyntaxIssue> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        resolve,
        allow_count,
        counts: 0,
    };
    let ast = p.union()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(issue(p.pos, DiagnosticKind::SyntaxError, format!("unexpected `{c}`")));
    }
    if p.counts > 1 {
        return Err(issue(
            0,
            DiagnosticKind::BadCountRange,
            "at most one counted sub-pattern is allowed",
        ));
    }
    Ok(ast)
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxIssue> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of pattern".to_string(), |f| format!("`{f}`"));
            Err(issue(
                self.pos,
                DiagnosticKind::SyntaxError,
                format!("expected `{c}`, found {found}"),
            ))
        }
    }

    fn union(&mut self) -> Result<RegexAst, SyntaxIssue> {
        let mut alts = vec![self.concat()?];
        while self.eat('|') {
            alts.push(self.concat()?);
        }
        Ok(RegexAst::union(alts))
    }

    fn concat(&mut self) -> Result<RegexAst, SyntaxIssue> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') | Some('|') => break,
                _ => items.push(self.postfix()?),
            }
        }
        Ok(RegexAst::concat(items))
    }

    fn number(&mut self) -> Result<u32, SyntaxIssue> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse()
            .map_err(|_| issue(start, DiagnosticKind::SyntaxError, "expected a number"))
    }

    fn postfix(&mut self) -> Result<RegexAst, SyntaxIssue> {
        let mut ast = self.atom()?;
        loop {
            self.skip_ws();
            let at = self.pos;
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    ast = ast.star();
                }
                Some('+') => {
                    self.pos += 1;
                    ast = ast.plus();
                }
                Some('?') => {
                    self.pos += 1;
                    ast = ast.optional();
                }
                Some('^') => {
                    self.pos += 1;
                    if self.eat('{') {
                        ast = self.counted(ast, at)?;
                    } else {
                        ast = ast.repeat(self.number()?);
                    }
                }
                _ => return Ok(ast),
            }
        }
    }

    fn counted(&mut self, body: RegexAst, at: usize) -> Result<RegexAst, SyntaxIssue> {
        if !self.allow_count {
            return Err(issue(
                at,
                DiagnosticKind::SyntaxError,
                "counted repetition is only allowed in abstraction patterns",
            ));
        }
        self.expect('n')?;
        let (mut min, mut max) = (DEFAULT_MIN_COUNT, None);
        if self.eat(':') {
            min = self.number()?;
            self.expect('.')?;
            self.expect('.')?;
            self.skip_ws();
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                max = Some(self.number()?);
            }
        }
        self.expect('}')?;
        if min == 0 {
            return Err(issue(
                at,
                DiagnosticKind::BadCountRange,
                "minimum count must be at least 1",
            ));
        }
        if max.is_some_and(|m| m < min) {
            return Err(issue(
                at,
                DiagnosticKind::BadCountRange,
                "maximum count is below the minimum",
            ));
        }
        self.counts += 1;
        Ok(RegexAst::Counted {
            body: Box::new(body),
            min,
            max,
        })
    }

    fn ident(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        (start, self.chars[start..self.pos].iter().collect())
    }

    fn atom(&mut self) -> Result<RegexAst, SyntaxIssue> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.union()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('.') => {
                self.pos += 1;
                Ok(RegexAst::AnySymbol)
            }
            Some('[') => {
                self.pos += 1;
                if self.peek() != Some('^') {
                    return Err(issue(self.pos, DiagnosticKind::SyntaxError, "expected `^` after `[`"));
                }
                self.pos += 1;
                let mut set = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() == Some(']') {
                        self.pos += 1;
                        break;
                    }
                    let (start, name) = self.ident();
                    if name.is_empty() {
                        return Err(issue(start, DiagnosticKind::SyntaxError, "expected a symbol or `]`"));
                    }
                    match (self.resolve)(&name) {
                        Resolved::Symbol(s) => set.push(s),
                        _ => {
                            return Err(issue(
                                start,
                                DiagnosticKind::UnknownSymbol,
                                format!("`{name}` is not in the alphabet"),
                            ));
                        }
                    }
                }
                Ok(RegexAst::NotSymbols(set))
            }
            Some(c) if is_ident_char(c) => {
                let (start, name) = self.ident();
                match (self.resolve)(&name) {
                    Resolved::Symbol(s) => Ok(RegexAst::lit(s)),
                    Resolved::Group => Ok(RegexAst::NamedRef(name)),
                    Resolved::Unknown => Err(issue(
                        start,
                        DiagnosticKind::UnknownGroup,
                        format!("`{name}` is neither a symbol nor a group"),
                    )),
                }
            }
            Some(c) => Err(issue(at, DiagnosticKind::SyntaxError, format!("unexpected `{c}`"))),
            None => Err(issue(at, DiagnosticKind::SyntaxError, "unexpected end of pattern")),
        }
    }
}
