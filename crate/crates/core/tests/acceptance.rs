//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::ops::Range;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use trace_explain::fsm::ops::compose;
use trace_explain::fsm::{compact, Symbol};
use trace_explain::monitor::{run_monitor, Verdict};
use trace_explain::pipeline::{
    stage_group_marks, stage_lexicalize, stage_segment, stage_separate, Explanation, Level, Pipeline, Trace,
};
use trace_explain::render::{render, OutputFormat};
use trace_explain::rewrite::compile_context_rules;
use trace_explain::spec::Spec;

const TRACE: &str = "lgrxlblgwwxlgrwxlgxlblblbl";
const SEPARATED: &str = "l.g.r.x.l.b.l.g.w.w.x.l.g.r.w.x.l.g.x.l.b.l.b.l.b.l.";
const SEGMENTED: &str = "lgrx|lb|lgwwx|lgrwx|lgx|lb|lb|lb|l";
const GROUPED: &str = "l.g.r.x.|l.b.|l.g.w.w.x.|l.g.r.w.x.|l.g.x.|l.b.|l.b.|l.b.|l.";
const GOLDEN_CNL0: &str = include_str!("golden/cnl0_login.txt");
const LOGIN_CONTEXT_SPEC: &str = include_str!("../specs/login_context.spec");

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn explain(spec: &Spec, max_count: u32, actions: &[Symbol], level: Level) -> Explanation {
    let p = Pipeline::new(spec, max_count).expect("valid spec");
    p.explain(
        &Trace::new(actions.to_vec(), &spec.alphabet).expect("known actions"),
        level,
    )
}

fn separator() -> Outcome {
    let spec = Spec::default_login();
    let out = stage_separate(&spec.alphabet)
        .apply_functional(&seq(TRACE))
        .ok_or("separator is not functional")?;
    ensure!(compact(&out) == SEPARATED, "got {}", compact(&out));
    Ok(())
}

fn grouping() -> Outcome {
    let spec = Spec::default_login();
    let segmented = stage_segment(&spec).map_err(|e| e.to_string())?;
    let got = compact(
        &segmented
            .apply_functional(&seq(TRACE))
            .ok_or("segmenter is not functional")?,
    );
    ensure!(got == SEGMENTED, "segmentation {got}");
    let marks = stage_group_marks(&spec).map_err(|e| e.to_string())?;
    let grouped = compose(&stage_separate(&spec.alphabet), &marks);
    let got = compact(
        &grouped
            .apply_functional(&seq(TRACE))
            .ok_or("grouping is not functional")?,
    );
    ensure!(got == GROUPED, "grouped {got}");
    Ok(())
}

fn cnl0() -> Outcome {
    let spec = Spec::default_login();
    let e = explain(&spec, 16, &seq(TRACE), Level::Cnl0);
    let want: String = GOLDEN_CNL0
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let got = render(&e, OutputFormat::Plain);
    ensure!(got == want, "output differs from golden:\n{got}");
    ensure!(e.sentences().count() == 26, "{} sentences", e.sentences().count());
    ensure!(
        got.trim_end().ends_with(", which should not have been allowed."),
        "final sentence"
    );
    Ok(())
}

fn cnl1() -> Outcome {
    let e = explain(&Spec::default_login(), 16, &seq(TRACE), Level::Cnl1);
    let sizes: Vec<usize> = e.paragraphs.iter().map(|p| p.sentences.len()).collect();
    ensure!(sizes == [4, 2, 5, 5, 3, 2, 2, 2, 1], "clause counts {sizes:?}");
    Ok(())
}

fn cnl2() -> Outcome {
    let actions = seq(TRACE);
    let e = explain(&Spec::default_login(), 16, &actions, Level::Cnl2);
    ensure!(e.paragraphs.len() == 9, "{} paragraphs", e.paragraphs.len());
    for p in &e.paragraphs {
        ensure!(
            p.sentences.len() == 1,
            "paragraph {:?} has {} sentences",
            p.span,
            p.sentences.len()
        );
        let s = &p.sentences[0];
        ensure!(
            s.to_lowercase().matches("the user").count() == 1,
            "subject count in `{s}`"
        );
        if p.span.len() > 1 {
            let (_, last) = s.rsplit_once(", ").unwrap_or(("", s));
            ensure!(last.contains(" and "), "no `and` before final predicate in `{s}`");
        }
        if text(&actions[p.span.clone()]).contains("ww") {
            ensure!(s.contains("wrote to a file twice"), "no `twice` in `{s}`");
        }
    }
    let last = &e.paragraphs.last().unwrap().sentences[0];
    ensure!(last.starts_with("Finally, "), "last paragraph `{last}`");
    Ok(())
}

/// Abstraction spans chosen by the greedy scan, counted rules expanded from
/// the largest count down.
fn oracle_abstraction_spans(spec: &Spec, body: &[Symbol], max_count: u32) -> Vec<Range<usize>> {
    let mut rules = Vec::new();
    for rule in &spec.abstraction_rules {
        match rule.count_range() {
            None => rules.push(rule.pattern.clone()),
            Some((min, max)) => {
                let top = max.unwrap_or(max_count).min(max_count);
                for n in (min..=top).rev() {
                    rules.push(rule.pattern.instantiate(n));
                }
            }
        }
    }
    let mut spans = Vec::new();
    let mut at = 0;
    for (start, end, _) in greedy_spans(&rules, body, &spec.alphabet, &spec.groups_map()) {
        if start > at {
            spans.push(at..start);
        }
        spans.push(start..end);
        at = end;
    }
    if at < body.len() {
        spans.push(at..body.len());
    }
    spans
}

fn cnl3() -> Outcome {
    let spec = Spec::default_login();
    let actions = seq(TRACE);
    for max_count in [3, 16] {
        let e = explain(&spec, max_count, &actions, Level::Cnl3);
        let spans: Vec<Range<usize>> = e.paragraphs.iter().map(|p| p.span.clone()).collect();
        let mut oracle = oracle_abstraction_spans(&spec, &actions[..25], max_count);
        oracle.push(25..26);
        ensure!(
            spans == oracle,
            "max_count {max_count}: spans {spans:?}, oracle {oracle:?}"
        );
        ensure!(spans == [0..19, 19..25, 25..26], "spans {spans:?}");
        let sentences: Vec<&str> = e.sentences().collect();
        ensure!(sentences.len() == 3, "{} sentences", sentences.len());
        ensure!(
            sentences[1] == "The user unsuccessfully attempted to log in 3 times.",
            "middle `{}`",
            sentences[1]
        );
        ensure!(sentences[2].contains(&spec.violation_phrase), "last `{}`", sentences[2]);
    }
    Ok(())
}

fn predicates(spec: &Spec, trace: &str) -> Result<Vec<String>, String> {
    let decider =
        compile_context_rules(&spec.context_rules, &spec.alphabet, &spec.groups_map()).map_err(|e| e.to_string())?;
    Ok(stage_lexicalize(spec, Some(&decider), &seq(trace), None)
        .into_iter()
        .map(|c| c.predicate)
        .collect())
}

fn cnl4() -> Outcome {
    let logout = predicates(&Spec::default_login(), "lxx")?;
    ensure!(logout[1] == "logged out", "position 1 `{}`", logout[1]);
    ensure!(logout[2] == "attempted to log out", "position 2 `{}`", logout[2]);
    let login_spec = Spec::load(LOGIN_CONTEXT_SPEC).map_err(|e| e.to_string())?;
    let login = predicates(&login_spec, "lblb")?;
    ensure!(login[0] == "attempts to log in", "position 0 `{}`", login[0]);
    ensure!(login[2] == "attempts to log in again", "position 2 `{}`", login[2]);
    let e = explain(&login_spec, 16, &seq("lblb"), Level::Cnl4);
    let s: Vec<&str> = e.sentences().collect();
    ensure!(
        s[1].starts_with("The user attempts to log in again"),
        "level 4 `{}`",
        s[1]
    );
    Ok(())
}

fn monitor() -> Outcome {
    let spec = Spec::default_login();
    let m = spec.monitor.as_ref().ok_or("no monitor")?;
    let actions = seq(TRACE);
    let verdict = run_monitor(m, &actions);
    ensure!(verdict == Verdict::Violation(25), "full trace {verdict:?}");
    for k in 0..actions.len() {
        let v = run_monitor(m, &actions[..k]);
        ensure!(matches!(v, Verdict::Ok(_)), "prefix of length {k}: {v:?}");
    }
    Ok(())
}

fn sample<S: Strategy>(strategy: &S, runner: &mut TestRunner) -> S::Value {
    strategy.new_tree(runner).expect("strategy").current()
}

fn oracle_equivalence() -> Outcome {
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::from_seed(RngAlgorithm::ChaCha, &[11; 32]));
    let syms = seq("ab");
    let sigma = alphabet("ab");

    let regexes = regex_strategy(syms.clone(), 2);
    for i in 0..300 {
        check_acceptor(&sample(&regexes, &mut runner), &sigma, 6).map_err(|e| format!("(a) case {i}: {e}"))?;
    }

    let shapes = fst_shape_strategy(2);
    let mut checked = 0;
    while checked < 200 {
        let (a, b) = (sample(&shapes, &mut runner), sample(&shapes, &mut runner));
        if let (Some(a), Some(b)) = (a.build(&syms), b.build(&syms)) {
            check_compose(&a, &b, &sigma, 6).map_err(|e| format!("(b) case {checked}: {e}"))?;
            checked += 1;
        }
    }

    let rule_sets = oracle_rules_strategy(syms.clone(), seq("abXY"));
    for i in 0..200 {
        let rules = sample(&rule_sets, &mut runner);
        ensure!(rules.iter().all(|r| r.pattern.star_height() <= 1), "star height");
        check_replace(&rules, &sigma, 6).map_err(|e| format!("(c) case {i}: {e}"))?;
    }
    Ok(())
}

fn degradation() -> Outcome {
    let spec = Spec::default_login();
    let bare = spec.without_abstractions();
    let full = Pipeline::new(&spec, 16).map_err(|e| e.to_string())?;
    let stripped = Pipeline::new(&bare, 16).map_err(|e| e.to_string())?;
    let symbols: Vec<Symbol> = spec.alphabet.iter().cloned().collect();
    let mut rng = StdRng::seed_from_u64(20);
    for i in 0..100 {
        let len = rng.gen_range(0..=20);
        let actions: Vec<Symbol> = (0..len)
            .map(|_| symbols[rng.gen_range(0..symbols.len())].clone())
            .collect();
        let trace = Trace::new(actions, &spec.alphabet).map_err(|e| e.to_string())?;
        let two = render(&full.explain(&trace, Level::Cnl2), OutputFormat::Plain);
        let three = render(&stripped.explain(&trace, Level::Cnl3), OutputFormat::Plain);
        ensure!(
            two == three,
            "trace {i} `{}`:\n{two}---\n{three}",
            text(trace.actions())
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("separator stage output", separator),
        ("grouping and separated form", grouping),
        ("level 0 golden text", cnl0),
        ("level 1 paragraph structure", cnl1),
        ("level 2 aggregation properties", cnl2),
        ("level 3 abstraction", cnl3),
        ("level 4 context tables", cnl4),
        ("monitor verdicts", monitor),
        ("oracle equivalence", oracle_equivalence),
        ("degradation identity", degradation),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = started.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
