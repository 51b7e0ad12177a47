//! Reference implementations used as test oracles. None of them touches the
//! automata code: regexes are interpreted directly on the AST, transducers
//! are explored path by path, and rewriting is a plain left-to-right scan.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use trace_explain::fsm::{Alphabet, Fst, Groups, RegexAst, Symbol};

pub fn sym(name: &str) -> Symbol {
    Symbol::new(name).unwrap()
}

pub fn seq(chars: &str) -> Vec<Symbol> {
    chars.chars().map(|c| sym(&c.to_string())).collect()
}

pub fn alphabet(chars: &str) -> Alphabet {
    seq(chars).into_iter().collect()
}

pub fn text(symbols: &[Symbol]) -> String {
    symbols.iter().map(|s| s.name()).collect()
}

/// Every string over `sigma` of length at most `max_len`, shortest first.
pub fn all_strings(sigma: &Alphabet, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &layer {
            for a in sigma.iter() {
                let mut t: Vec<Symbol> = s.clone();
                t.push(a.clone());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// End positions of the matches of `ast` in `input` that start at `start`.
pub fn match_ends(
    ast: &RegexAst,
    input: &[Symbol],
    start: usize,
    sigma: &Alphabet,
    groups: &Groups,
) -> BTreeSet<usize> {
    let one = |ok: &dyn Fn(&Symbol) -> bool| -> BTreeSet<usize> {
        match input.get(start) {
            Some(s) if sigma.contains(s) && ok(s) => BTreeSet::from([start + 1]),
            _ => BTreeSet::new(),
        }
    };
    let from_all = |ast: &RegexAst, starts: &BTreeSet<usize>| -> BTreeSet<usize> {
        starts
            .iter()
            .flat_map(|&p| match_ends(ast, input, p, sigma, groups))
            .collect()
    };
    let closure = |ast: &RegexAst, seed: BTreeSet<usize>| -> BTreeSet<usize> {
        let mut reached = seed.clone();
        let mut frontier = seed;
        while !frontier.is_empty() {
            let next: BTreeSet<usize> = from_all(ast, &frontier).difference(&reached).copied().collect();
            reached.extend(next.iter().copied());
            frontier = next;
        }
        reached
    };
    match ast {
        RegexAst::Literal(a) => one(&|s| s == a),
        RegexAst::Epsilon => BTreeSet::from([start]),
        RegexAst::AnySymbol => one(&|_| true),
        RegexAst::NotSymbols(set) => one(&|s| !set.contains(s)),
        RegexAst::Concat(items) => items
            .iter()
            .fold(BTreeSet::from([start]), |acc, item| from_all(item, &acc)),
        RegexAst::Union(items) => items
            .iter()
            .flat_map(|item| match_ends(item, input, start, sigma, groups))
            .collect(),
        RegexAst::Star(body) => closure(body, BTreeSet::from([start])),
        RegexAst::Plus(body) => closure(body, match_ends(body, input, start, sigma, groups)),
        RegexAst::Optional(body) => {
            let mut ends = match_ends(body, input, start, sigma, groups);
            ends.insert(start);
            ends
        }
        RegexAst::Repeat(body, n) => (0..*n).fold(BTreeSet::from([start]), |acc, _| from_all(body, &acc)),
        RegexAst::NamedRef(name) => match_ends(&groups[name], input, start, sigma, groups),
        RegexAst::Counted { .. } => panic!("instantiate counted patterns first"),
    }
}

pub fn regex_matches(ast: &RegexAst, input: &[Symbol], sigma: &Alphabet, groups: &Groups) -> bool {
    match_ends(ast, input, 0, sigma, groups).contains(&input.len())
}

/// All outputs for `input`, found by walking every path of `fst`.
pub fn walk_apply(fst: &Fst, input: &[Symbol]) -> BTreeSet<Vec<Symbol>> {
    let mut seen: BTreeSet<(usize, usize, Vec<Symbol>)> = BTreeSet::new();
    let mut stack = vec![(fst.initial(), 0usize, Vec::new())];
    let mut out = BTreeSet::new();
    while let Some(config) = stack.pop() {
        if !seen.insert(config.clone()) {
            continue;
        }
        let (state, pos, produced) = config;
        if pos == input.len() && fst.is_final(state) {
            out.insert(produced.clone());
        }
        for t in fst.transitions(state) {
            let next_pos = match &t.input {
                None => pos,
                Some(a) if input.get(pos) == Some(a) => pos + 1,
                Some(_) => continue,
            };
            let mut next_out = produced.clone();
            next_out.extend(t.output.iter().cloned());
            stack.push((t.target, next_pos, next_out));
        }
    }
    out
}

/// A rewrite rule for the scan oracle.
#[derive(Debug, Clone)]
pub struct OracleRule {
    pub pattern: RegexAst,
    pub replacement: Vec<Symbol>,
}

/// Longest non-empty match at `start` over all rules: `(end, rule)`, the
/// earliest rule winning ties.
pub fn longest_at(
    rules: &[RegexAst],
    input: &[Symbol],
    start: usize,
    sigma: &Alphabet,
    groups: &Groups,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (k, rule) in rules.iter().enumerate() {
        if let Some(&end) = match_ends(rule, input, start, sigma, groups).iter().next_back() {
            if end > start && best.is_none_or(|(e, _)| end > e) {
                best = Some((end, k));
            }
        }
    }
    best
}

/// Left-to-right scan: rewrite the longest match, resume after it.
pub fn greedy_replace(rules: &[OracleRule], input: &[Symbol], sigma: &Alphabet) -> Vec<Symbol> {
    let patterns: Vec<RegexAst> = rules.iter().map(|r| r.pattern.clone()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < input.len() {
        match longest_at(&patterns, input, i, sigma, &Groups::new()) {
            Some((end, k)) => {
                out.extend(rules[k].replacement.iter().cloned());
                i = end;
            }
            None => {
                out.push(input[i].clone());
                i += 1;
            }
        }
    }
    out
}

/// Spans `(start, end, rule)` chosen by the scan; unmatched positions are
/// not listed.
pub fn greedy_spans(
    rules: &[RegexAst],
    input: &[Symbol],
    sigma: &Alphabet,
    groups: &Groups,
) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < input.len() {
        match longest_at(rules, input, i, sigma, groups) {
            Some((end, k)) => {
                out.push((i, end, k));
                i = end;
            }
            None => i += 1,
        }
    }
    out
}

/// Paragraph boundaries: a paragraph closes after every match, and the
/// trailing unmatched actions form one more.
pub fn greedy_paragraphs(
    rules: &[RegexAst],
    input: &[Symbol],
    sigma: &Alphabet,
    groups: &Groups,
) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (_, end, _) in greedy_spans(rules, input, sigma, groups) {
        out.push(start..end);
        start = end;
    }
    if start < input.len() {
        out.push(start..input.len());
    }
    out
}

/// Random regexes over `symbols`, with a bound on star height.
pub fn regex_strategy(symbols: Vec<Symbol>, max_star_height: usize) -> BoxedStrategy<RegexAst> {
    let syms = symbols.clone();
    let leaf = prop_oneof![
        4 => proptest::sample::select(syms.clone()).prop_map(RegexAst::Literal),
        1 => Just(RegexAst::Epsilon),
        1 => Just(RegexAst::AnySymbol),
        1 => proptest::sample::subsequence(syms, 0..=1).prop_map(RegexAst::NotSymbols),
    ];
    leaf.prop_recursive(3, 12, 3, move |inner| {
        let starred: BoxedStrategy<RegexAst> = if max_star_height == 0 {
            inner.clone().prop_map(RegexAst::optional).boxed()
        } else {
            let below = regex_strategy(symbols.clone(), max_star_height - 1);
            prop_oneof![
                below.clone().prop_map(|r| RegexAst::Star(Box::new(r))),
                below.prop_map(|r| RegexAst::Plus(Box::new(r))),
            ]
            .boxed()
        };
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(RegexAst::Concat),
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(RegexAst::Union),
            inner.clone().prop_map(|r| RegexAst::Optional(Box::new(r))),
            (inner, 0u32..=2).prop_map(|(r, n)| RegexAst::Repeat(Box::new(r), n)),
            starred,
        ]
    })
    .boxed()
}

/// Description of a small transducer, built with the public builder.
#[derive(Debug, Clone)]
pub struct FstShape {
    pub states: usize,
    pub finals: Vec<bool>,
    pub arcs: Vec<(usize, Option<usize>, Option<usize>, usize)>,
}

impl FstShape {
    /// `None` when the shape has an epsilon-input cycle with output.
    pub fn build(&self, symbols: &[Symbol]) -> Option<Fst> {
        let mut b = trace_explain::fsm::FstBuilder::new();
        for _ in 1..self.states {
            b.add_state();
        }
        for (q, &f) in self.finals.iter().enumerate() {
            b.set_final(q, f);
        }
        for &(from, i, o, to) in &self.arcs {
            b.add_transition(from, i.map(|k| symbols[k].clone()), o.map(|k| symbols[k].clone()), to);
        }
        b.build().ok()
    }
}

pub fn fst_shape_strategy(n_symbols: usize) -> impl Strategy<Value = FstShape> {
    (1usize..=4).prop_flat_map(move |states| {
        let label = proptest::option::weighted(0.75, 0..n_symbols);
        let arc = (0..states, label.clone(), label, 0..states);
        (
            proptest::collection::vec(any::<bool>(), states),
            proptest::collection::vec(arc, 0..=7),
        )
            .prop_map(move |(finals, arcs)| FstShape { states, finals, arcs })
    })
}

/// Relation of `fst` restricted to inputs of bounded length.
pub fn relation(fst: &Fst, inputs: &[Vec<Symbol>]) -> BTreeMap<Vec<Symbol>, BTreeSet<Vec<Symbol>>> {
    inputs.iter().map(|x| (x.clone(), walk_apply(fst, x))).collect()
}

/// Compiled acceptors (DFA and epsilon-NFA) against the matcher on every
/// string up to `max_len`. Returns the first disagreement.
pub fn check_acceptor(ast: &RegexAst, sigma: &Alphabet, max_len: usize) -> Result<(), String> {
    use trace_explain::fsm::{compile_dfa, regex_nfa};
    let groups = Groups::new();
    let dfa = compile_dfa(ast, sigma, &groups).map_err(|e| e.to_string())?;
    let nfa = regex_nfa(ast, sigma, &groups).map_err(|e| e.to_string())?;
    for s in all_strings(sigma, max_len) {
        let want = regex_matches(ast, &s, sigma, &groups);
        if dfa.accepts(&s) != want || nfa.accepts(&s) != want {
            return Err(format!("{ast} on `{}`: oracle says {want}", text(&s)));
        }
    }
    Ok(())
}

/// `compose(a, b)` against the join of the two walked relations.
pub fn check_compose(a: &Fst, b: &Fst, sigma: &Alphabet, max_len: usize) -> Result<(), String> {
    let ab = trace_explain::fsm::ops::compose(a, b);
    let mut from_b: BTreeMap<Vec<Symbol>, BTreeSet<Vec<Symbol>>> = BTreeMap::new();
    for x in all_strings(sigma, max_len) {
        let mut want = BTreeSet::new();
        for y in walk_apply(a, &x) {
            let zs = from_b.entry(y).or_insert_with_key(|y| walk_apply(b, y));
            want.extend(zs.iter().cloned());
        }
        let walked = walk_apply(&ab, &x);
        let applied = ab.apply_down(&x);
        if walked != want || applied != want {
            return Err(format!(
                "input `{}`: join {want:?}, composed {walked:?} / {applied:?}",
                text(&x)
            ));
        }
    }
    Ok(())
}

/// Makes a pattern non-nullable by prefixing `lead` when it matches the
/// empty string.
pub fn non_empty(ast: RegexAst, lead: Symbol, sigma: &Alphabet) -> RegexAst {
    if regex_matches(&ast, &[], sigma, &Groups::new()) {
        RegexAst::Concat(vec![RegexAst::Literal(lead), ast])
    } else {
        ast
    }
}

/// `replace_leftmost_longest` against the greedy scan on every string up
/// to `max_len`; the transducer must also be functional and total.
pub fn check_replace(rules: &[OracleRule], sigma: &Alphabet, max_len: usize) -> Result<(), String> {
    use trace_explain::rewrite::{replace_leftmost_longest, ReplaceRule};
    let compiled: Vec<ReplaceRule> = rules
        .iter()
        .map(|r| ReplaceRule {
            pattern: r.pattern.clone(),
            replacement: r.replacement.clone(),
        })
        .collect();
    let fst = replace_leftmost_longest(&compiled, sigma).map_err(|e| e.to_string())?;
    for x in all_strings(sigma, max_len) {
        let want = BTreeSet::from([greedy_replace(rules, &x, sigma)]);
        let got = fst.apply_down(&x);
        if got != want {
            return Err(format!("input `{}`: scan {want:?}, transducer {got:?}", text(&x)));
        }
    }
    Ok(())
}

pub fn oracle_rules_strategy(symbols: Vec<Symbol>, outputs: Vec<Symbol>) -> impl Strategy<Value = Vec<OracleRule>> {
    let sigma: Alphabet = symbols.iter().cloned().collect();
    let rule = (
        regex_strategy(symbols.clone(), 1),
        proptest::sample::select(symbols),
        proptest::collection::vec(proptest::sample::select(outputs), 0..=2),
    )
        .prop_map(move |(ast, lead, replacement)| OracleRule {
            pattern: non_empty(ast, lead, &sigma),
            replacement,
        });
    proptest::collection::vec(rule, 1..=3)
}
