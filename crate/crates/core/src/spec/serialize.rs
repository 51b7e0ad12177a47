//! Canonical text form. Parsing the output yields an equal spec.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use super::Spec;

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[alphabet]\n")?;
        let names: Vec<&str> = self.alphabet.iter().map(|s| s.name()).collect();
        writeln!(f, "{}", names.join(" "))?;
        if !self.subject.is_empty() {
            writeln!(f, "[subject]\n{}", self.subject)?;
        }
        f.write_str("[lexicon]\n")?;
        for (sym, clause) in &self.lexicon {
            writeln!(f, "{sym} = {}", clause.predicate)?;
        }
        if !self.groups.is_empty() {
            f.write_str("[groups]\n")?;
            for (name, ast) in &self.groups {
                writeln!(f, "{name} = {ast}")?;
            }
        }
        if !self.abstraction_rules.is_empty() {
            f.write_str("[abstract]\n")?;
            for rule in &self.abstraction_rules {
                writeln!(f, "{} => {}", rule.pattern, quote(&rule.template))?;
            }
        }
        if !self.context_rules.is_empty() {
            f.write_str("[context]\n")?;
            for rule in &self.context_rules {
                let mut env = String::new();
                if let Some(pre) = &rule.pre {
                    write!(env, "{pre} ")?;
                }
                env.push('_');
                if let Some(post) = &rule.post {
                    write!(env, " {post}")?;
                }
                writeln!(f, "{} / {env} => {}", rule.action, quote(&rule.rendering.predicate))?;
            }
        }
        if !self.violation_phrase.is_empty() {
            writeln!(f, "[violation]\n{}", self.violation_phrase)?;
        }
        if let Some(m) = &self.monitor {
            f.write_str("[monitor]\n")?;
            writeln!(f, "initial {}", m.initial)?;
            if !m.error_states.is_empty() {
                let errs: Vec<&str> = m.error_states.iter().map(String::as_str).collect();
                writeln!(f, "error {}", errs.join(" "))?;
            }
            let mut mentioned: BTreeSet<&str> = BTreeSet::new();
            mentioned.insert(&m.initial);
            mentioned.extend(m.error_states.iter().map(String::as_str));
            for t in &m.transitions {
                writeln!(f, "{} {} {}", t.from, t.symbol, t.to)?;
                mentioned.insert(&t.from);
                mentioned.insert(&t.to);
            }
            let isolated: Vec<&str> = m
                .states
                .iter()
                .map(String::as_str)
                .filter(|s| !mentioned.contains(s))
                .collect();
            if !isolated.is_empty() {
                writeln!(f, "state {}", isolated.join(" "))?;
            }
        }
        Ok(())
    }
}
