use std::collections::{HashMap, HashSet};

use crate::fsm::{compile_dfa, FsmError, RegexAst};

use super::{Diagnostic, DiagnosticKind, Loc, Spec, COUNT_PLACEHOLDER};

fn fsm_diagnostic(err: FsmError, loc: Loc) -> Diagnostic {
    let kind = match err {
        FsmError::UnknownSymbol(_) => DiagnosticKind::UnknownSymbol,
        FsmError::UnknownGroup(_) => DiagnosticKind::UnknownGroup,
        FsmError::RecursiveGroup(_) => DiagnosticKind::RecursiveGroup,
        FsmError::UnexpandedCount => DiagnosticKind::BadCountRange,
        FsmError::EpsilonOutputCycle(_) | FsmError::InvalidState(_) => DiagnosticKind::SyntaxError,
    };
    Diagnostic::new(kind, loc, err.to_string())
}

fn loc_of(locs: &[Loc], i: usize) -> Loc {
    locs.get(i).copied().unwrap_or_default()
}

/// Semantic checks that need compiled patterns. An empty result means the
/// spec can be turned into a pipeline.
pub fn validate_spec(spec: &Spec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let src = &spec.source;
    let groups = spec.groups_map();

    for sym in &spec.alphabet {
        if !spec.lexicon.contains_key(sym) {
            let loc = src.alphabet.get(sym).copied().unwrap_or_default();
            out.push(Diagnostic::new(
                DiagnosticKind::MissingLexiconEntry,
                loc,
                format!("symbol `{sym}` has no lexicon entry"),
            ));
        }
    }
    for (sym, clause) in &spec.lexicon {
        let loc = src.lexicon.get(sym).copied().unwrap_or_default();
        if !spec.alphabet.contains(sym) {
            out.push(Diagnostic::new(
                DiagnosticKind::UnknownSymbol,
                loc,
                format!("lexicon entry for `{sym}`, which is not in the alphabet"),
            ));
        }
        if clause.predicate.trim().is_empty() {
            out.push(Diagnostic::new(
                DiagnosticKind::SyntaxError,
                loc,
                format!("empty predicate for `{sym}`"),
            ));
        }
    }

    for (i, (name, ast)) in spec.groups.iter().enumerate() {
        let loc = loc_of(&src.groups, i);
        if !ast.counted_parts().is_empty() {
            out.push(Diagnostic::new(
                DiagnosticKind::BadCountRange,
                loc,
                format!("group `{name}` uses a counted repetition"),
            ));
        } else if let Err(e) = compile_dfa(ast, &spec.alphabet, &groups) {
            out.push(fsm_diagnostic(e, loc));
        }
    }

    for (i, rule) in spec.abstraction_rules.iter().enumerate() {
        let loc = loc_of(&src.abstraction_rules, i);
        let counted = rule.pattern.counted_parts().len();
        let has_placeholder = rule.template.contains(COUNT_PLACEHOLDER);
        if counted > 1 {
            out.push(Diagnostic::new(
                DiagnosticKind::BadCountRange,
                loc,
                "at most one counted sub-pattern is allowed",
            ));
            continue;
        }
        if (counted == 1) != has_placeholder {
            let message = if has_placeholder {
                "template uses {n} but the pattern has no ^{n} part"
            } else {
                "pattern has a ^{n} part but the template does not use {n}"
            };
            out.push(Diagnostic::new(DiagnosticKind::CountMismatch, loc, message));
        }
        let probe: RegexAst = match rule.count_range() {
            Some((min, max)) => {
                if min == 0 || max.is_some_and(|m| m < min) {
                    out.push(Diagnostic::new(
                        DiagnosticKind::BadCountRange,
                        loc,
                        "invalid count range",
                    ));
                    continue;
                }
                rule.pattern.instantiate(min)
            }
            None => rule.pattern.clone(),
        };
        match compile_dfa(&probe, &spec.alphabet, &groups) {
            Ok(dfa) if dfa.accepts_empty() => out.push(Diagnostic::new(
                DiagnosticKind::EmptyMatchPattern,
                loc,
                format!("pattern `{}` matches the empty trace", rule.pattern),
            )),
            Ok(_) => {}
            Err(e) => out.push(fsm_diagnostic(e, loc)),
        }
    }

    let mut last_rule: HashMap<&crate::fsm::Symbol, usize> = HashMap::new();
    for (i, rule) in spec.context_rules.iter().enumerate() {
        let loc = loc_of(&src.context_rules, i);
        if !spec.alphabet.contains(&rule.action) {
            out.push(Diagnostic::new(
                DiagnosticKind::UnknownSymbol,
                loc,
                format!("`{}` is not in the alphabet", rule.action),
            ));
        }
        for side in [&rule.pre, &rule.post].into_iter().flatten() {
            if let Err(e) = compile_dfa(side, &spec.alphabet, &groups) {
                out.push(fsm_diagnostic(e, loc));
            }
        }
        last_rule.insert(&rule.action, i);
    }
    let mut reported = HashSet::new();
    for (action, &i) in &last_rule {
        if !spec.context_rules[i].is_otherwise() && reported.insert(*action) {
            out.push(Diagnostic::new(
                DiagnosticKind::NoRuleForAction,
                loc_of(&src.context_rules, i),
                format!("context rules for `{action}` must end with `{action} / _ => \"...\"`"),
            ));
        }
    }

    if let Some(m) = &spec.monitor {
        let mut seen = HashMap::new();
        for (i, t) in m.transitions.iter().enumerate() {
            let loc = loc_of(&src.monitor_transitions, i);
            if !spec.alphabet.contains(&t.symbol) {
                out.push(Diagnostic::new(
                    DiagnosticKind::UnknownSymbol,
                    loc,
                    format!("`{}` is not in the alphabet", t.symbol),
                ));
            }
            let first = *seen.entry((&t.from, &t.symbol)).or_insert(&t.to);
            if first != &t.to {
                out.push(Diagnostic::new(
                    DiagnosticKind::NondeterministicMonitor,
                    loc,
                    format!("state `{}` has two transitions on `{}`", t.from, t.symbol),
                ));
            }
        }
        let header = src.monitor.unwrap_or_default();
        for state in std::iter::once(&m.initial).chain(&m.error_states) {
            if !m.states.contains(state) {
                out.push(Diagnostic::new(
                    DiagnosticKind::SyntaxError,
                    header,
                    format!("state `{state}` is not declared"),
                ));
            }
        }
    }

    out.sort_by_key(|d| d.loc);
    out
}
