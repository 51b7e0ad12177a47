//! The individual transducers and per-stage operations of the pipeline.

use std::collections::HashMap;

use crate::clause::{finish_sentence, Clause};
use crate::fsm::ops::compose;
use crate::fsm::{compile_dfa, Alphabet, Dfa, Fst, FstBuilder, RegexAst, Symbol};
use crate::rewrite::{leftmost_longest, ContextDecider, Emission, MatchRule, RewriteError};
use crate::spec::Spec;

/// Closes an abstracted span in the internal enclosed form.
pub(crate) fn summary_close() -> Symbol {
    Symbol::internal("<abs:end>")
}

/// Summary pseudo-symbol for abstraction rule `rule`, instantiated at `count`.
pub fn summary_symbol(rule: usize, count: Option<u32>) -> Symbol {
    match count {
        Some(n) => Symbol::internal(format!("<abs:{rule}:{n}>")),
        None => Symbol::internal(format!("<abs:{rule}>")),
    }
}

/// Inserts `<.>` after every action.
pub fn stage_separate(alphabet: &Alphabet) -> Fst {
    let mut b = FstBuilder::new();
    let pending = b.add_state();
    b.set_final(0, true);
    for s in alphabet {
        b.add_transition(0, Some(s.clone()), Some(s.clone()), pending);
    }
    b.add_transition(pending, None, Some(Symbol::sentence_sep()), 0);
    b.build().expect("separator has no epsilon cycle")
}

/// Same language read over the separated stream: every symbol is followed
/// by `<.>`.
fn interleave_separator(dfa: &Dfa, stream: &Alphabet) -> Dfa {
    let fst = dfa.to_fst();
    let sep = Symbol::sentence_sep();
    let mut b = FstBuilder::new();
    for _ in 1..fst.num_states() {
        b.add_state();
    }
    // One waiting state per target: after the symbol, before its separator.
    let waiting: Vec<usize> = (0..fst.num_states()).map(|_| b.add_state()).collect();
    b.set_initial(fst.initial());
    for q in 0..fst.num_states() {
        b.set_final(q, fst.is_final(q));
        b.add_transition(waiting[q], Some(sep.clone()), Some(sep.clone()), q);
        for t in fst.transitions(q) {
            b.add_transition(q, t.input.clone(), t.output.clone(), waiting[t.target]);
        }
    }
    let nfa = b.build().expect("acceptor");
    Dfa::from_nfa(&nfa, stream)
        .expect("separated patterns stay inside the stream alphabet")
        .minimize()
}

fn group_rules(spec: &Spec, over: impl Fn(Dfa) -> Dfa) -> Result<Vec<MatchRule>, RewriteError> {
    let groups = spec.groups_map();
    spec.groups
        .iter()
        .map(|(name, _)| {
            let dfa = compile_dfa(&RegexAst::NamedRef(name.clone()), &spec.alphabet, &groups)?;
            Ok(MatchRule {
                pattern: over(dfa),
                emission: Emission::MarkAfter(Symbol::paragraph_sep()),
            })
        })
        .collect()
}

/// Marks the end of every leftmost-longest group match in a bare trace
/// with `<|>`; the earlier group wins ties. No closing mark is added.
pub fn stage_segment(spec: &Spec) -> Result<Fst, RewriteError> {
    leftmost_longest(&group_rules(spec, |d| d)?, &spec.alphabet)
}

/// Alphabet of the separated stream.
fn separated_alphabet(alphabet: &Alphabet) -> Alphabet {
    alphabet.extended([Symbol::sentence_sep()])
}

/// Alphabet of the grouped stream.
fn grouped_alphabet(alphabet: &Alphabet) -> Alphabet {
    alphabet.extended([Symbol::sentence_sep(), Symbol::paragraph_sep()])
}

/// Inserts `<|>` after each group match over the separated stream, without
/// closing the final paragraph.
pub fn stage_group_marks(spec: &Spec) -> Result<Fst, RewriteError> {
    let stream = separated_alphabet(&spec.alphabet);
    let rules = group_rules(spec, |d| interleave_separator(&d, &stream))?;
    leftmost_longest(&rules, &stream)
}

/// Appends `<|>` to a non-empty stream that does not already end with one.
fn close_final(alphabet: &Alphabet) -> Fst {
    let bar = Symbol::paragraph_sep();
    let mut b = FstBuilder::new();
    let open = b.add_state();
    let closed = b.add_state();
    b.set_final(0, true);
    b.set_final(closed, true);
    for s in alphabet {
        let l = Some(s.clone());
        let to = if *s == bar { 0 } else { open };
        b.add_transition(0, l.clone(), l.clone(), to);
        b.add_transition(open, l.clone(), l, to);
    }
    b.add_transition(open, None, Some(bar), closed);
    b.build().expect("no epsilon cycle")
}

/// Separated stream to paragraphs: group marks plus the closing `<|>` that
/// turns any trailing unmatched actions into a final paragraph.
pub fn stage_group(spec: &Spec) -> Result<Fst, RewriteError> {
    let marks = stage_group_marks(spec)?;
    Ok(compose(&marks, &close_final(&grouped_alphabet(&spec.alphabet))))
}

/// Turns every `<.>` not followed by `<|>` into `<,>`: all but the
/// paragraph-final full stops become commas.
pub fn stage_punctuate(alphabet: &Alphabet) -> Fst {
    let stop = Symbol::sentence_sep();
    let bar = Symbol::paragraph_sep();
    let mut b = FstBuilder::new();
    let after_stop = b.add_state();
    let need_action = b.add_state();
    let need_bar = b.add_state();
    b.set_final(0, true);
    b.set_final(need_bar, true);
    for s in alphabet {
        let l = Some(s.clone());
        b.add_transition(0, l.clone(), l.clone(), 0);
        b.add_transition(need_action, l.clone(), l, 0);
    }
    b.add_transition(0, Some(bar.clone()), Some(bar.clone()), 0);
    b.add_transition(0, Some(stop.clone()), None, after_stop);
    b.add_transition(after_stop, None, Some(Symbol::comma()), need_action);
    b.add_transition(after_stop, None, Some(stop), need_bar);
    b.add_transition(need_bar, Some(bar.clone()), Some(bar), 0);
    b.build().expect("no epsilon cycle")
}

/// One sentence summarizing a span, and where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub rule: usize,
    pub count: Option<u32>,
    pub symbol: Symbol,
    pub sentence: String,
}

/// Abstraction rules as a single enclose-mode transducer: every matched span
/// is copied between its summary symbol and [`summary_close`].
#[derive(Debug, Clone)]
pub(crate) struct AbstractionStage {
    pub fst: Fst,
    pub summaries: HashMap<Symbol, Summary>,
}

/// Concrete rules in priority order: author order, and for a counted rule
/// every count from `min(max, max_count)` down to its minimum.
fn expand_rules(spec: &Spec, max_count: u32) -> Vec<(usize, Option<u32>, RegexAst)> {
    let mut out = Vec::new();
    for (k, rule) in spec.abstraction_rules.iter().enumerate() {
        match rule.count_range() {
            None => out.push((k, None, rule.pattern.clone())),
            Some((min, max)) => {
                let top = max.map_or(max_count, |m| m.min(max_count));
                for n in (min..=top).rev() {
                    out.push((k, Some(n), rule.pattern.instantiate(n)));
                }
            }
        }
    }
    out
}

impl AbstractionStage {
    pub fn compile(spec: &Spec, max_count: u32) -> Result<AbstractionStage, RewriteError> {
        let groups = spec.groups_map();
        let close = summary_close();
        let mut rules = Vec::new();
        let mut summaries = HashMap::new();
        for (k, n, ast) in expand_rules(spec, max_count) {
            let symbol = summary_symbol(k, n);
            rules.push(MatchRule {
                pattern: compile_dfa(&ast, &spec.alphabet, &groups)?,
                emission: Emission::Enclose {
                    open: symbol.clone(),
                    close: close.clone(),
                },
            });
            let sentence = finish_sentence(&spec.abstraction_rules[k].render(n));
            summaries.insert(
                symbol.clone(),
                Summary {
                    rule: k,
                    count: n,
                    symbol,
                    sentence,
                },
            );
        }
        let fst = leftmost_longest(&rules, &spec.alphabet)?;
        Ok(AbstractionStage { fst, summaries })
    }

    /// Drops the enclosed content and the closing symbol.
    fn eraser(&self, alphabet: &Alphabet) -> Fst {
        let mut b = FstBuilder::new();
        let inside = b.add_state();
        b.set_final(0, true);
        for s in alphabet {
            b.add_transition(0, Some(s.clone()), Some(s.clone()), 0);
            b.add_transition(inside, Some(s.clone()), None, inside);
        }
        let mut opens: Vec<&Symbol> = self.summaries.keys().collect();
        opens.sort();
        for open in opens {
            b.add_transition(0, Some(open.clone()), Some(open.clone()), inside);
        }
        b.add_transition(inside, Some(summary_close()), None, 0);
        b.build().expect("epsilon-free")
    }
}

/// Replaces every leftmost-longest abstraction match by its summary
/// pseudo-symbol (see [`summary_symbol`]); other actions are copied.
pub fn stage_abstract(spec: &Spec, max_count: u32) -> Result<Fst, RewriteError> {
    let stage = AbstractionStage::compile(spec, max_count)?;
    Ok(compose(&stage.fst, &stage.eraser(&spec.alphabet)))
}

/// The clause for every action occurrence. With a decider, context rules
/// choose the rendering of actions they cover. The occurrence at
/// `violation` gets the violation phrase appended.
pub fn stage_lexicalize(
    spec: &Spec,
    decider: Option<&ContextDecider>,
    trace: &[Symbol],
    violation: Option<usize>,
) -> Vec<Clause> {
    trace
        .iter()
        .enumerate()
        .map(|(i, action)| {
            let contextual = decider
                .and_then(|d| d.decide(trace, i))
                .map(|rule| spec.context_rules[rule].rendering.clone());
            let clause = contextual.unwrap_or_else(|| spec.lexicon[action].clone());
            if violation == Some(i) {
                clause.with_suffix(&spec.violation_phrase)
            } else {
                clause
            }
        })
        .collect()
}
