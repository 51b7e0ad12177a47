mod common;

use common::*;
use proptest::prelude::*;
use trace_explain::clause::Clause;
use trace_explain::fsm::{compact, Groups, RegexAst};
use trace_explain::rewrite::{compile_context_rules, mark_after, replace_leftmost_longest, ContextRule, ReplaceRule};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn replace_matches_greedy_scan(rules in oracle_rules_strategy(seq("ab"), seq("abXY"))) {
        prop_assert_eq!(check_replace(&rules, &alphabet("ab"), 6), Ok(()));
    }

    #[test]
    fn replace_matches_greedy_scan_longer(rules in oracle_rules_strategy(seq("ab"), seq("XY"))) {
        let sigma = alphabet("ab");
        let compiled: Vec<ReplaceRule> = rules
            .iter()
            .map(|r| ReplaceRule { pattern: r.pattern.clone(), replacement: r.replacement.clone() })
            .collect();
        let fst = replace_leftmost_longest(&compiled, &sigma).unwrap();
        for x in all_strings(&sigma, 8).into_iter().filter(|x| x.len() > 6) {
            prop_assert_eq!(fst.apply_functional(&x), Some(greedy_replace(&rules, &x, &sigma)));
        }
    }

    #[test]
    fn mark_after_matches_scan(ast in regex_strategy(seq("ab"), 1), lead in proptest::sample::select(seq("ab"))) {
        let sigma = alphabet("ab");
        let ast = non_empty(ast, lead, &sigma);
        let fst = mark_after(&ast, sym("M"), &sigma).unwrap();
        for x in all_strings(&sigma, 6) {
            let mut want = Vec::new();
            let mut at = 0;
            for (start, end, _) in greedy_spans(std::slice::from_ref(&ast), &x, &sigma, &Groups::new()) {
                want.extend_from_slice(&x[at..end]);
                want.push(sym("M"));
                at = end;
                debug_assert!(start < end);
            }
            want.extend_from_slice(&x[at..]);
            prop_assert_eq!(fst.apply_functional(&x), Some(want));
        }
    }
}

fn lit(c: &str) -> RegexAst {
    RegexAst::lit(sym(c))
}

#[test]
fn mark_after_prefers_longest() {
    let sigma = alphabet("ab");
    let ast = RegexAst::Union(vec![RegexAst::Concat(vec![lit("a"), lit("a")]), lit("a")]);
    let fst = mark_after(&ast, trace_explain::fsm::Symbol::paragraph_sep(), &sigma).unwrap();
    assert_eq!(compact(&fst.apply_functional(&seq("aaab")).unwrap()), "aa|a|b");
}

#[test]
fn empty_pattern_rejected() {
    let rule = ReplaceRule {
        pattern: RegexAst::Star(Box::new(lit("a"))),
        replacement: seq("X"),
    };
    assert!(replace_leftmost_longest(&[rule], &alphabet("ab")).is_err());
}

fn not(c: &str) -> RegexAst {
    RegexAst::NotSymbols(vec![sym(c)])
}

fn rule(pre: Option<RegexAst>, post: Option<RegexAst>, text: &str) -> ContextRule {
    ContextRule {
        action: sym("l"),
        pre,
        post,
        rendering: Clause::new("the user", text),
    }
}

#[test]
fn login_context_table() {
    let sigma = alphabet("blgxrw");
    let star = |r: RegexAst| RegexAst::Star(Box::new(r));
    let rules = vec![
        rule(
            Some(RegexAst::Concat(vec![lit("l"), lit("b"), star(not("l"))])),
            Some(lit("b")),
            "attempts to log in again",
        ),
        rule(None, Some(lit("b")), "attempts to log in"),
        rule(
            Some(RegexAst::Concat(vec![lit("l"), not("b"), star(not("l"))])),
            None,
            "logs in again",
        ),
        rule(None, None, "logs in"),
    ];
    let decider = compile_context_rules(&rules, &sigma, &Groups::new()).unwrap();
    let trace = seq("lblb");
    assert_eq!(decider.decide(&trace, 0), Some(1));
    assert_eq!(decider.decide(&trace, 2), Some(0));
    assert_eq!(decider.decide(&trace, 1), None);
    let trace = seq("lgxlgx");
    assert_eq!(decider.decide(&trace, 0), Some(3));
    assert_eq!(decider.decide(&trace, 3), Some(2));
}

#[test]
fn context_requires_otherwise_rule() {
    let rules = vec![rule(None, Some(lit("b")), "attempts to log in")];
    assert!(compile_context_rules(&rules, &alphabet("lb"), &Groups::new()).is_err());
}
