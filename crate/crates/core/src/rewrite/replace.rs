//! Obligatory leftmost-longest replacement compiled to a transducer.
//!
//! The machine is the composition of three parts:
//!
//! 1. a bracketer that nondeterministically wraps non-empty spans of the
//!    input in `<[` `]>` brackets,
//! 2. an acceptor over the bracketed alphabet admitting exactly the one
//!    bracketing a left-to-right longest-match scan would choose, and
//! 3. an emitter that turns each bracketed span into the rule's output.
//!
//! Ties between rules are settled before construction by making the rule
//! languages disjoint: rule `k` only keeps strings no earlier rule matches.

use super::RewriteError;
use crate::fsm::ops::{compose, concat, concat_all, plus, star, union};
use crate::fsm::{Alphabet, Dfa, Fst, FstBuilder, Symbol};

/// What a rule writes in place of (or around) its match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emission {
    /// Deletes the match and writes the given symbols.
    Replace(Vec<Symbol>),
    /// Copies the match and writes the marker after it.
    MarkAfter(Symbol),
    /// Copies the match between `open` and `close`.
    Enclose { open: Symbol, close: Symbol },
}

/// A compiled pattern (over the rewrite alphabet) and its emission.
#[derive(Debug, Clone)]
pub struct MatchRule {
    pub pattern: Dfa,
    pub emission: Emission,
}

fn open_bracket() -> Symbol {
    Symbol::internal("<[>")
}

fn close_bracket() -> Symbol {
    Symbol::internal("<]>")
}

/// One-symbol acceptor for any member of `syms`.
fn symbol_class<'a, I: IntoIterator<Item = &'a Symbol>>(syms: I) -> Fst {
    let mut b = FstBuilder::new();
    let end = b.add_state();
    b.set_final(end, true);
    for s in syms {
        b.add_transition(0, Some(s.clone()), Some(s.clone()), end);
    }
    b.build().expect("epsilon-free")
}

/// Strings over sigma plus brackets that end outside any bracket.
fn outside_prefix(sigma: &Alphabet, open: &Symbol, close: &Symbol) -> Fst {
    let mut b = FstBuilder::new();
    let inside = b.add_state();
    b.set_final(0, true);
    for s in sigma {
        b.add_transition(0, Some(s.clone()), Some(s.clone()), 0);
        b.add_transition(inside, Some(s.clone()), Some(s.clone()), inside);
    }
    b.add_transition(0, Some(open.clone()), Some(open.clone()), inside);
    b.add_transition(inside, Some(close.clone()), Some(close.clone()), 0);
    b.build().expect("epsilon-free")
}

/// Inserts brackets around arbitrary non-empty spans.
fn bracketer(sigma: &Alphabet, open: &Symbol, close: &Symbol) -> Fst {
    let mut b = FstBuilder::new();
    let opened = b.add_state();
    let inside = b.add_state();
    b.set_final(0, true);
    for s in sigma {
        let l = Some(s.clone());
        b.add_transition(0, l.clone(), l.clone(), 0);
        b.add_transition(opened, l.clone(), l.clone(), inside);
        b.add_transition(inside, l.clone(), l, inside);
    }
    b.add_transition(0, None, Some(open.clone()), opened);
    b.add_transition(inside, None, Some(close.clone()), 0);
    b.build().expect("bracketing has no epsilon cycle")
}

/// Acceptor for the bracketings chosen by a leftmost-longest scan for the
/// union language `all` (over sigma).
fn leftmost_longest_filter(sigma: &Alphabet, all: &Dfa, open: &Symbol, close: &Symbol) -> Dfa {
    let brackets = [open.clone(), close.clone()];
    let gamma = sigma.extended(brackets.iter().cloned());
    let any_gamma = Fst::identity(gamma.iter());
    let any_sigma = symbol_class(sigma.iter());
    let det = |nfa: &Fst| {
        Dfa::from_nfa(nfa, &gamma)
            .expect("filter pieces stay inside the bracketed alphabet")
            .minimize()
    };

    // Union language read with brackets ignored.
    let transparent = all.with_alphabet(&gamma, &brackets);

    // A copied symbol must not start a match.
    let starts_with_symbol = det(&concat(&any_sigma, &any_gamma));
    let unmatched_start = transparent.intersect(&starts_with_symbol);

    // A bracketed span must not be extendable to a longer match.
    let extends_past_close = det(&concat_all([
        &plus(&any_sigma).expect("no epsilon"),
        &Fst::acceptor_of(std::slice::from_ref(close)),
        &any_gamma,
        &any_sigma,
        &any_gamma,
    ]));
    let longer = transparent.intersect(&extends_past_close);

    let violation = union(
        &unmatched_start.to_fst(),
        &concat(&Fst::acceptor_of(std::slice::from_ref(open)), &longer.to_fst()),
    );
    // A violation poisons the rest of the string.
    let forbidden = Dfa::with_any_suffix(&concat(&outside_prefix(sigma, open, close), &violation), &gamma)
        .expect("filter pieces stay inside the bracketed alphabet")
        .minimize();

    let span = concat_all([
        &Fst::acceptor_of(std::slice::from_ref(open)),
        &all.to_fst(),
        &Fst::acceptor_of(std::slice::from_ref(close)),
    ]);
    let well_formed = det(&star(&union(&any_sigma, &span)).expect("acceptor"));
    well_formed.difference(&forbidden)
}

/// Writes each bracketed span according to the emission of the (unique)
/// disjoint rule language containing it.
fn emitter(sigma: &Alphabet, rules: &[(Fst, &Emission)], open: &Symbol, close: &Symbol) -> Fst {
    let mut b = FstBuilder::new();
    b.set_final(0, true);
    for s in sigma {
        b.add_transition(0, Some(s.clone()), Some(s.clone()), 0);
    }
    for (pattern, emission) in rules {
        let base = b.num_states();
        for _ in 0..pattern.num_states() {
            b.add_state();
        }
        let (open_out, copy) = match emission {
            Emission::Replace(_) => (None, false),
            Emission::MarkAfter(_) => (None, true),
            Emission::Enclose { open, .. } => (Some(open.clone()), true),
        };
        b.add_transition(0, Some(open.clone()), open_out, base + pattern.initial());
        for q in 0..pattern.num_states() {
            for t in pattern.transitions(q) {
                let out = if copy { t.output.clone() } else { None };
                b.add_transition(base + q, t.input.clone(), out, base + t.target);
            }
        }
        let closing: Vec<Symbol> = match emission {
            Emission::Replace(seq) => seq.clone(),
            Emission::MarkAfter(m) => vec![m.clone()],
            Emission::Enclose { close, .. } => vec![close.clone()],
        };
        for f in pattern.final_states() {
            // `]` carries the first output symbol; the rest follow on
            // epsilon-input transitions.
            let mut cur = base + f;
            let mut input = Some(close.clone());
            for (i, sym) in closing.iter().enumerate() {
                let next = if i + 1 == closing.len() { 0 } else { b.add_state() };
                b.add_transition(cur, input.take(), Some(sym.clone()), next);
                cur = next;
            }
            if closing.is_empty() {
                b.add_transition(cur, input.take(), None, 0);
            }
        }
    }
    b.build().expect("emitter chains are acyclic on epsilon input")
}

/// Builds the functional transducer that scans left to right and, at each
/// position where some rule matches, rewrites the longest match (earliest
/// rule on ties) and resumes after it. Symbols outside matches are copied.
///
/// Every pattern must be a DFA over exactly `sigma` and must not accept the
/// empty string.
pub fn leftmost_longest(rules: &[MatchRule], sigma: &Alphabet) -> Result<Fst, RewriteError> {
    if rules.is_empty() {
        return Ok(Fst::identity(sigma.iter()));
    }
    let open = open_bracket();
    let close = close_bracket();
    let mut seen = Dfa::empty_language(sigma);
    let mut disjoint = Vec::with_capacity(rules.len());
    for (i, rule) in rules.iter().enumerate() {
        if rule.pattern.accepts_empty() {
            return Err(RewriteError::EmptyMatchPattern { rule: i });
        }
        disjoint.push(rule.pattern.difference(&seen).to_fst());
        seen = seen.union(&rule.pattern);
    }
    let filter = leftmost_longest_filter(sigma, &seen, &open, &close).to_fst();
    let rules_out: Vec<(Fst, &Emission)> = disjoint.into_iter().zip(rules.iter().map(|r| &r.emission)).collect();
    let emit = emitter(sigma, &rules_out, &open, &close);
    let bracketed = compose(&bracketer(sigma, &open, &close), &filter);
    Ok(compose(&bracketed, &emit))
}
