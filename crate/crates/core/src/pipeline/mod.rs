//! Trace to explanation, one level of refinement at a time.
//!
//! | level | adds                                                    |
//! |-------|---------------------------------------------------------|
//! | 0     | one sentence per action                                 |
//! | 1     | paragraphs from group matches                           |
//! | 2     | one aggregated sentence per paragraph                   |
//! | 3     | summary sentences for abstraction matches               |
//! | 4     | context rules choose how each action is described       |
//!
//! When the monitor reports a violation, actions after it are dropped and,
//! from level 1 on, the violating action forms the last paragraph.

mod aggregate;
mod stages;
mod trace;

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::clause::Clause;
use crate::fsm::ops::compose_all;
use crate::fsm::{Fst, Symbol};
use crate::monitor::run_monitor;
use crate::rewrite::{compile_context_rules, ContextDecider, RewriteError};
use crate::spec::{Spec, SpecError};

pub use aggregate::{stage_aggregate, FINALLY};
pub use stages::{
    stage_abstract, stage_group, stage_group_marks, stage_lexicalize, stage_punctuate, stage_segment, stage_separate,
    summary_symbol, Summary,
};
pub use trace::Trace;

use stages::{summary_close, AbstractionStage};

/// Default upper bound for counted abstraction rules.
pub const DEFAULT_MAX_COUNT: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("unknown action `{symbol}` at position {position}")]
    UnknownAction { symbol: String, position: usize },
    #[error("invalid spec\n{0}")]
    SpecInvalid(#[from] SpecError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Cnl0,
    Cnl1,
    Cnl2,
    Cnl3,
    Cnl4,
}

impl Level {
    pub const ALL: [Level; 5] = [Level::Cnl0, Level::Cnl1, Level::Cnl2, Level::Cnl3, Level::Cnl4];

    pub fn from_number(n: u8) -> Option<Level> {
        Level::ALL.get(usize::from(n)).copied()
    }

    pub fn number(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CNL{}", self.number())
    }
}

/// Sentences covering a contiguous span of the trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paragraph {
    pub span: Range<usize>,
    pub sentences: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub level: Level,
    pub paragraphs: Vec<Paragraph>,
    pub violation_index: Option<usize>,
}

impl Explanation {
    pub fn is_empty(&self) -> bool {
        self.paragraphs.is_empty()
    }

    pub fn sentences(&self) -> impl Iterator<Item = &str> {
        self.paragraphs
            .iter()
            .flat_map(|p| p.sentences.iter().map(String::as_str))
    }
}

enum Segment {
    Plain(Range<usize>),
    Summary(Range<usize>, String),
}

/// Transducers and decision procedures compiled once from a spec.
#[derive(Debug)]
pub struct Pipeline {
    spec: Spec,
    separate: Fst,
    /// Bare trace to punctuated, paragraph-marked stream.
    paragraphs: Fst,
    abstraction: AbstractionStage,
    decider: ContextDecider,
}

impl Pipeline {
    /// Validates the spec and compiles every stage.
    pub fn new(spec: &Spec, max_count: u32) -> Result<Pipeline, PipelineError> {
        let diagnostics = crate::spec::validate_spec(spec);
        if !diagnostics.is_empty() {
            return Err(SpecError { diagnostics }.into());
        }
        let separate = stage_separate(&spec.alphabet);
        let group = stage_group(spec)?;
        let punctuate = stage_punctuate(&spec.alphabet);
        let paragraphs = compose_all([&separate, &group, &punctuate]).expect("three stages");
        Ok(Pipeline {
            spec: spec.clone(),
            separate,
            paragraphs,
            abstraction: AbstractionStage::compile(spec, max_count)?,
            decider: compile_context_rules(&spec.context_rules, &spec.alphabet, &spec.groups_map())?,
        })
    }

    pub fn spec(&self) -> &Spec {
        &self.spec
    }

    pub fn explain(&self, trace: &Trace, level: Level) -> Explanation {
        let all = trace.actions();
        let violation = self
            .spec
            .monitor
            .as_ref()
            .and_then(|m| run_monitor(m, all).violation_index());
        let actions = match violation {
            Some(v) => &all[..=v],
            None => all,
        };
        let decider = (level == Level::Cnl4).then_some(&self.decider);
        let clauses = stage_lexicalize(&self.spec, decider, actions, violation);
        let mut paragraphs = Vec::new();
        if level == Level::Cnl0 {
            if !actions.is_empty() {
                paragraphs.push(Paragraph {
                    span: 0..actions.len(),
                    sentences: self.sentences(actions, &clauses),
                });
            }
        } else {
            let body = &actions[..violation.unwrap_or(actions.len())];
            let segments = if level >= Level::Cnl3 {
                self.abstract_segments(body)
            } else {
                self.group_segments(body, 0)
            };
            for segment in segments {
                paragraphs.push(match segment {
                    Segment::Plain(span) => self.paragraph(span, &clauses, level, false),
                    Segment::Summary(span, sentence) => Paragraph {
                        span,
                        sentences: vec![sentence],
                    },
                });
            }
            if let Some(v) = violation {
                paragraphs.push(self.paragraph(v..v + 1, &clauses, level, true));
            }
        }
        Explanation {
            level,
            paragraphs,
            violation_index: violation,
        }
    }

    /// One sentence per action, delimited by the separator stage.
    fn sentences(&self, actions: &[Symbol], clauses: &[Clause]) -> Vec<String> {
        let stream = self.separate.apply_functional(actions).expect("separator is total");
        let mut index = 0;
        let mut out = Vec::with_capacity(actions.len());
        for sym in &stream {
            if *sym == Symbol::sentence_sep() {
                out.push(clauses[index - 1].sentence());
            } else {
                index += 1;
            }
        }
        out
    }

    fn paragraph(&self, span: Range<usize>, clauses: &[Clause], level: Level, finally: bool) -> Paragraph {
        let own = &clauses[span.clone()];
        let sentences = if level == Level::Cnl1 {
            own.iter().map(Clause::sentence).collect()
        } else {
            vec![stage_aggregate(own, finally)]
        };
        Paragraph { span, sentences }
    }

    /// Paragraph spans of `body`, shifted by `offset`.
    fn group_segments(&self, body: &[Symbol], offset: usize) -> Vec<Segment> {
        if body.is_empty() {
            return Vec::new();
        }
        let stream = self.paragraphs.apply_functional(body).expect("grouping is total");
        let bar = Symbol::paragraph_sep();
        let mut out = Vec::new();
        let (mut start, mut index) = (offset, offset);
        for sym in &stream {
            if *sym == bar {
                out.push(Segment::Plain(start..index));
                start = index;
            } else if !sym.is_reserved() {
                index += 1;
            }
        }
        out
    }

    /// Summary spans, with the actions between them grouped as usual.
    fn abstract_segments(&self, body: &[Symbol]) -> Vec<Segment> {
        let stream = self
            .abstraction
            .fst
            .apply_functional(body)
            .expect("abstraction is total");
        let close = summary_close();
        let mut out = Vec::new();
        let mut index = 0;
        let mut residual = 0;
        let mut open: Option<(usize, &Summary)> = None;
        for sym in &stream {
            if let Some(summary) = self.abstraction.summaries.get(sym) {
                out.extend(self.group_segments(&body[residual..index], residual));
                open = Some((index, summary));
            } else if *sym == close {
                let (start, summary) = open.take().expect("balanced spans");
                out.push(Segment::Summary(start..index, summary.sentence.clone()));
                residual = index;
            } else {
                index += 1;
            }
        }
        out.extend(self.group_segments(&body[residual..index], residual));
        out
    }
}

/// Compiles a pipeline for `spec` and explains one trace.
pub fn explain(spec: &Spec, trace: &Trace, level: Level, max_count: u32) -> Result<Explanation, PipelineError> {
    Ok(Pipeline::new(spec, max_count)?.explain(trace, level))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRACE: &str = "lgrxlblgwwxlgrwxlgxlblblbl";

    fn run(level: Level, trace: &str) -> Explanation {
        let spec = Spec::default_login();
        let trace = Trace::parse(trace, &spec.alphabet).unwrap();
        explain(&spec, &trace, level, 4).unwrap()
    }

    fn spans(e: &Explanation) -> Vec<Range<usize>> {
        e.paragraphs.iter().map(|p| p.span.clone()).collect()
    }

    #[test]
    fn level_zero() {
        let e = run(Level::Cnl0, TRACE);
        assert_eq!(e.paragraphs.len(), 1);
        assert_eq!(e.sentences().count(), 26);
        assert_eq!(e.violation_index, Some(25));
        assert_eq!(
            e.sentences().last().unwrap(),
            "The user requested to log in, which should not have been allowed."
        );
    }

    #[test]
    fn level_one_sizes() {
        let e = run(Level::Cnl1, TRACE);
        let sizes: Vec<usize> = e.paragraphs.iter().map(|p| p.sentences.len()).collect();
        assert_eq!(sizes, vec![4, 2, 5, 5, 3, 2, 2, 2, 1]);
    }

    #[test]
    fn level_two_sentences() {
        let e = run(Level::Cnl2, TRACE);
        let s: Vec<&str> = e.sentences().collect();
        assert_eq!(
            s[4],
            "The user requested to log in, gave a good password and logged out."
        );
        assert_eq!(
            s[2],
            "The user requested to log in, gave a good password, wrote to a file twice and logged out."
        );
        assert_eq!(
            s[8],
            "Finally, the user requested to log in, which should not have been allowed."
        );
    }

    #[test]
    fn level_three_summaries() {
        let e = run(Level::Cnl3, TRACE);
        assert_eq!(spans(&e), vec![0..19, 19..25, 25..26]);
        assert_eq!(
            e.paragraphs[1].sentences,
            vec!["The user unsuccessfully attempted to log in 3 times."]
        );
        let e = run(Level::Cnl3, "lblblb");
        assert_eq!(e.paragraphs.len(), 1);
        assert_eq!(
            e.paragraphs[0].sentences,
            vec!["The user unsuccessfully attempted to log in 3 times."]
        );
    }

    #[test]
    fn level_four_context() {
        let e = run(Level::Cnl4, "lgxx");
        assert_eq!(
            e.paragraphs[0].sentences,
            vec!["The user requested to log in, gave a good password and logged out."]
        );
        assert_eq!(e.paragraphs[1].sentences, vec!["The user attempted to log out."]);
    }

    #[test]
    fn empty_trace() {
        for level in Level::ALL {
            let e = run(level, "");
            assert!(e.is_empty());
            assert_eq!(e.violation_index, None);
        }
    }
}
