use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::clause::Clause;
use crate::fsm::{Alphabet, RegexAst, Symbol};
use crate::rewrite::ContextRule;

use super::syntax::{is_ident, parse_pattern, Resolved, SyntaxIssue};
use super::{
    AbstractionRule, Diagnostic, DiagnosticKind, Loc, MonitorAutomaton, MonitorTransition, SourceMap, Spec, SpecError,
};

const SECTIONS: [&str; 8] = [
    "alphabet",
    "subject",
    "lexicon",
    "groups",
    "abstract",
    "context",
    "violation",
    "monitor",
];

/// A non-blank line with its comment removed and surrounding space trimmed.
#[derive(Debug, Clone)]
struct Line {
    number: usize,
    /// 1-based column of the first character of `text`.
    column: usize,
    text: String,
}

impl Line {
    fn loc(&self) -> Loc {
        self.loc_at(0)
    }

    /// Location of the character at `offset` (in chars) within `text`.
    fn loc_at(&self, offset: usize) -> Loc {
        Loc::new(self.number, self.column + offset)
    }
}

/// Cuts a line at the first `#` outside a double-quoted string.
fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if quoted => escaped = true,
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Whitespace-separated tokens with their char offsets.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (chars, (i, c)) in text.char_indices().enumerate() {
        if c.is_whitespace() {
            if let Some((byte, col)) = start.take() {
                out.push((col, &text[byte..i]));
            }
        } else if start.is_none() {
            start = Some((i, chars));
        }
    }
    if let Some((byte, col)) = start {
        out.push((col, &text[byte..]));
    }
    out
}

/// Parses a double-quoted string that must make up the whole of `text`.
fn quoted(text: &str) -> Option<String> {
    let inner = text.strip_prefix('"')?;
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?),
            '"' => return chars.as_str().trim().is_empty().then_some(out),
            c => out.push(c),
        }
    }
    None
}

/// Splits at the first occurrence of `sep`, returning the char offset of the
/// right-hand part.
fn split_once_at<'a>(text: &'a str, sep: &str) -> Option<(&'a str, usize, &'a str)> {
    let i = text.find(sep)?;
    let right = &text[i + sep.len()..];
    Some((&text[..i], char_len(&text[..i]) + char_len(sep), right))
}

/// Offset of leading whitespace, plus the trimmed text.
fn trim_with_offset(text: &str) -> (usize, &str) {
    let trimmed = text.trim_start();
    (char_len(text) - char_len(trimmed), trimmed.trim_end())
}

struct SpecParser {
    diagnostics: Vec<Diagnostic>,
    alphabet: Alphabet,
    group_names: HashSet<String>,
}

impl SpecParser {
    fn error(&mut self, kind: DiagnosticKind, loc: Loc, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic::new(kind, loc, message));
    }

    fn syntax(&mut self, loc: Loc, message: impl Into<String>) {
        self.error(DiagnosticKind::SyntaxError, loc, message);
    }

    fn symbol(&self, name: &str) -> Option<Symbol> {
        let sym = Symbol::new(name).ok()?;
        self.alphabet.contains(&sym).then_some(sym)
    }

    /// Parses a pattern whose text starts at `offset` within `line`.
    fn pattern(&mut self, line: &Line, offset: usize, text: &str, allow_count: bool) -> Option<RegexAst> {
        let (lead, trimmed) = trim_with_offset(text);
        if trimmed.is_empty() {
            self.syntax(line.loc_at(offset), "empty pattern");
            return None;
        }
        let resolve = |name: &str| match self.symbol(name) {
            Some(s) => Resolved::Symbol(s),
            None if self.group_names.contains(name) => Resolved::Group,
            None => Resolved::Unknown,
        };
        match parse_pattern(trimmed, &resolve, allow_count) {
            Ok(ast) => Some(ast),
            Err(SyntaxIssue {
                offset: o,
                kind,
                message,
            }) => {
                self.error(kind, line.loc_at(offset + lead + o), message);
                None
            }
        }
    }

    /// `left => "quoted"`; returns the left part and the unquoted string.
    fn arrow_template<'a>(&mut self, line: &'a Line) -> Option<(&'a str, String)> {
        let Some((left, right_offset, right)) = split_once_at(&line.text, "=>") else {
            self.syntax(line.loc(), "expected `=>`");
            return None;
        };
        let (lead, right_trimmed) = trim_with_offset(right);
        match quoted(right_trimmed) {
            Some(s) => Some((left, s)),
            None => {
                self.syntax(line.loc_at(right_offset + lead), "expected a double-quoted string");
                None
            }
        }
    }

    fn single_line(&mut self, lines: &[Line], name: &str) -> String {
        if let Some(extra) = lines.get(1) {
            self.syntax(extra.loc(), format!("[{name}] takes a single line"));
        }
        lines.first().map(|l| l.text.clone()).unwrap_or_default()
    }
}

/// Parses spec text. Structural problems, unknown names and malformed
/// patterns are reported together; semantic checks are left to
/// [`validate_spec`](super::validate_spec).
pub fn parse_spec(text: &str) -> Result<Spec, SpecError> {
    let mut p = SpecParser {
        diagnostics: Vec::new(),
        alphabet: Alphabet::new(),
        group_names: HashSet::new(),
    };

    // Split into sections.
    let mut sections: HashMap<&'static str, (Loc, Vec<Line>)> = HashMap::new();
    let mut current: Option<&'static str> = None;
    // Lines under a rejected header are skipped without further reports.
    let mut skipping = false;
    for (i, raw) in text.lines().enumerate() {
        let content = strip_comment(raw);
        let (lead, trimmed) = trim_with_offset(content);
        if trimmed.is_empty() {
            continue;
        }
        let line = Line {
            number: i + 1,
            column: lead + 1,
            text: trimmed.to_string(),
        };
        if let Some(name) = trimmed.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if !name.is_empty() && name.chars().all(|c| c.is_ascii_lowercase()) {
                match SECTIONS.iter().find(|s| **s == name) {
                    Some(s) if sections.contains_key(s) => {
                        p.syntax(line.loc(), format!("duplicate section [{name}]"));
                        current = None;
                        skipping = true;
                    }
                    Some(s) => {
                        sections.insert(s, (line.loc(), Vec::new()));
                        current = Some(s);
                    }
                    None => {
                        p.syntax(line.loc(), format!("unknown section [{name}]"));
                        current = None;
                        skipping = true;
                    }
                }
                continue;
            }
        }
        match current {
            Some(s) => sections.get_mut(s).expect("opened").1.push(line),
            None if skipping => {}
            None => {
                p.syntax(line.loc(), "content before the first section header");
                skipping = true;
            }
        }
    }
    let take = |sections: &mut HashMap<&'static str, (Loc, Vec<Line>)>, name: &str| {
        sections.remove(name).unwrap_or((Loc::default(), Vec::new()))
    };
    let mut source = SourceMap::default();

    // [alphabet]
    let (alphabet_loc, alphabet_lines) = take(&mut sections, "alphabet");
    let mut alphabet_order = Vec::new();
    for line in &alphabet_lines {
        for (offset, tok) in tokens(&line.text) {
            let loc = line.loc_at(offset);
            if !is_ident(tok) {
                p.syntax(loc, format!("`{tok}` is not a valid symbol name"));
                continue;
            }
            match Symbol::new(tok) {
                Ok(sym) => {
                    if p.alphabet.insert(sym.clone()) {
                        source.alphabet.insert(sym.clone(), loc);
                        alphabet_order.push(sym);
                    } else {
                        p.error(
                            DiagnosticKind::DuplicateSymbol,
                            loc,
                            format!("symbol `{tok}` declared twice"),
                        );
                    }
                }
                Err(e) => p.syntax(loc, e.to_string()),
            }
        }
    }
    if p.alphabet.is_empty() && p.diagnostics.is_empty() {
        p.syntax(alphabet_loc, "the alphabet is empty");
    }

    // [subject]
    let (_, subject_lines) = take(&mut sections, "subject");
    let subject = p.single_line(&subject_lines, "subject");

    // [violation]
    let (_, violation_lines) = take(&mut sections, "violation");
    let violation_phrase = p.single_line(&violation_lines, "violation");

    // [lexicon]
    let (_, lexicon_lines) = take(&mut sections, "lexicon");
    let mut lexicon = BTreeMap::new();
    for line in &lexicon_lines {
        let Some((left, right_offset, right)) = split_once_at(&line.text, "=") else {
            p.syntax(line.loc(), "expected `symbol = predicate`");
            continue;
        };
        let name = left.trim();
        let predicate = right.trim();
        if predicate.is_empty() {
            p.syntax(line.loc_at(right_offset), "empty predicate");
            continue;
        }
        let Some(sym) = p.symbol(name) else {
            p.error(
                DiagnosticKind::UnknownSymbol,
                line.loc(),
                format!("`{name}` is not in the alphabet"),
            );
            continue;
        };
        if lexicon.contains_key(&sym) {
            p.error(
                DiagnosticKind::DuplicateSymbol,
                line.loc(),
                format!("`{name}` has two lexicon entries"),
            );
            continue;
        }
        source.lexicon.insert(sym.clone(), line.loc());
        lexicon.insert(sym, Clause::new(subject.clone(), predicate));
    }
    for sym in &alphabet_order {
        if !lexicon.contains_key(sym) {
            p.error(
                DiagnosticKind::MissingLexiconEntry,
                source.alphabet[sym],
                format!("symbol `{sym}` has no lexicon entry"),
            );
        }
    }

    // [groups]: names first so groups may refer to each other in any order.
    let (_, group_lines) = take(&mut sections, "groups");
    let mut group_heads = Vec::new();
    for line in &group_lines {
        let Some((left, right_offset, right)) = split_once_at(&line.text, "=") else {
            p.syntax(line.loc(), "expected `name = pattern`");
            continue;
        };
        let name = left.trim();
        if !is_ident(name) {
            p.syntax(line.loc(), format!("`{name}` is not a valid group name"));
            continue;
        }
        if p.symbol(name).is_some() || !p.group_names.insert(name.to_string()) {
            p.error(
                DiagnosticKind::DuplicateSymbol,
                line.loc(),
                format!("name `{name}` is already defined"),
            );
            continue;
        }
        group_heads.push((line, name.to_string(), right_offset, right));
    }
    let mut groups = Vec::new();
    for (line, name, offset, body) in group_heads {
        if let Some(ast) = p.pattern(line, offset, body, false) {
            source.groups.push(line.loc());
            groups.push((name, ast));
        }
    }

    // [abstract]
    let (_, abstract_lines) = take(&mut sections, "abstract");
    let mut abstraction_rules = Vec::new();
    for line in &abstract_lines {
        let Some((left, template)) = p.arrow_template(line) else {
            continue;
        };
        if let Some(pattern) = p.pattern(line, 0, left, true) {
            source.abstraction_rules.push(line.loc());
            abstraction_rules.push(AbstractionRule { pattern, template });
        }
    }

    // [context]
    let (_, context_lines) = take(&mut sections, "context");
    let mut context_rules = Vec::new();
    for line in &context_lines {
        let Some((left, predicate)) = p.arrow_template(line) else {
            continue;
        };
        let Some((action_text, env_offset, env)) = split_once_at(left, "/") else {
            p.syntax(line.loc(), "expected `action / pre _ post`");
            continue;
        };
        let action_name = action_text.trim();
        let Some(action) = p.symbol(action_name) else {
            p.error(
                DiagnosticKind::UnknownSymbol,
                line.loc(),
                format!("`{action_name}` is not in the alphabet"),
            );
            continue;
        };
        let placeholder = tokens(env).into_iter().find(|(_, t)| *t == "_");
        let Some((slot, _)) = placeholder else {
            p.syntax(line.loc_at(env_offset), "expected the `_` placeholder");
            continue;
        };
        let env_chars: Vec<char> = env.chars().collect();
        let pre_text: String = env_chars[..slot].iter().collect();
        let post_text: String = env_chars[slot + 1..].iter().collect();
        let side = |p: &mut SpecParser, text: &str, offset: usize| -> Result<Option<RegexAst>, ()> {
            if text.trim().is_empty() {
                Ok(None)
            } else {
                p.pattern(line, offset, text, false).map(Some).ok_or(())
            }
        };
        let pre = side(&mut p, &pre_text, env_offset);
        let post = side(&mut p, &post_text, env_offset + slot + 1);
        if let (Ok(pre), Ok(post)) = (pre, post) {
            source.context_rules.push(line.loc());
            context_rules.push(ContextRule {
                action,
                pre,
                post,
                rendering: Clause::new(subject.clone(), predicate),
            });
        }
    }

    // [monitor]
    let monitor = sections
        .remove("monitor")
        .and_then(|(loc, lines)| parse_monitor(&mut p, loc, &lines, &mut source));

    if !p.diagnostics.is_empty() {
        p.diagnostics.sort_by_key(|d| d.loc);
        return Err(SpecError {
            diagnostics: p.diagnostics,
        });
    }
    Ok(Spec {
        alphabet: p.alphabet,
        subject,
        lexicon,
        groups,
        abstraction_rules,
        context_rules,
        violation_phrase,
        monitor,
        source,
    })
}

fn parse_monitor(p: &mut SpecParser, header: Loc, lines: &[Line], source: &mut SourceMap) -> Option<MonitorAutomaton> {
    source.monitor = Some(header);
    let mut states = BTreeSet::new();
    let mut initial = None;
    let mut error_states = BTreeSet::new();
    let mut transitions = Vec::new();
    let state_name = |p: &mut SpecParser, line: &Line, offset: usize, tok: &str| {
        if is_ident(tok) {
            Some(tok.to_string())
        } else {
            p.syntax(line.loc_at(offset), format!("`{tok}` is not a valid state name"));
            None
        }
    };
    for line in lines {
        let toks = tokens(&line.text);
        match toks.as_slice() {
            [(_, "initial"), (o, s)] => {
                if initial.is_some() {
                    p.syntax(line.loc(), "initial state declared twice");
                } else if let Some(s) = state_name(p, line, *o, s) {
                    states.insert(s.clone());
                    initial = Some(s);
                }
            }
            [(_, kw @ ("error" | "state")), rest @ ..] if !rest.is_empty() => {
                for (o, s) in rest {
                    if let Some(s) = state_name(p, line, *o, s) {
                        states.insert(s.clone());
                        if *kw == "error" {
                            error_states.insert(s);
                        }
                    }
                }
            }
            [(o1, from), (o2, sym), (o3, to)] => {
                let Some(symbol) = p.symbol(sym) else {
                    p.error(
                        DiagnosticKind::UnknownSymbol,
                        line.loc_at(*o2),
                        format!("`{sym}` is not in the alphabet"),
                    );
                    continue;
                };
                let (Some(from), Some(to)) = (state_name(p, line, *o1, from), state_name(p, line, *o3, to)) else {
                    continue;
                };
                states.insert(from.clone());
                states.insert(to.clone());
                source.monitor_transitions.push(line.loc());
                transitions.push(MonitorTransition { from, symbol, to });
            }
            _ => p.syntax(
                line.loc(),
                "expected `initial S`, `error S...`, `state S...` or `FROM SYMBOL TO`",
            ),
        }
    }
    match initial {
        Some(initial) => Some(MonitorAutomaton {
            states,
            initial,
            error_states,
            transitions,
        }),
        None => {
            p.syntax(header, "the monitor has no initial state");
            None
        }
    }
}
