use crate::clause::{finish_sentence, Clause};

/// Connective opening the last paragraph of a violation explanation.
pub const FINALLY: &str = "Finally, ";

/// Collapses two identical consecutive clauses into one marked "twice",
/// scanning greedily from the left.
fn collapse_repeats(clauses: &[Clause]) -> Vec<Clause> {
    let mut out = Vec::with_capacity(clauses.len());
    let mut i = 0;
    while i < clauses.len() {
        if clauses.get(i + 1) == Some(&clauses[i]) {
            out.push(clauses[i].with_suffix(" twice"));
            i += 2;
        } else {
            out.push(clauses[i].clone());
            i += 1;
        }
    }
    out
}

/// Reduces a paragraph to one sentence: commas between clauses, the subject
/// only where it changes, "and" before the last clause, "twice" for a
/// repeated clause, and an optional "Finally, " opener.
pub fn stage_aggregate(paragraph: &[Clause], finally: bool) -> String {
    let clauses = collapse_repeats(paragraph);
    let mut parts = Vec::with_capacity(clauses.len());
    let mut subject: Option<&str> = None;
    for clause in &clauses {
        if subject == Some(clause.subject.as_str()) {
            parts.push(clause.predicate.clone());
        } else {
            subject = Some(&clause.subject);
            parts.push(clause.text());
        }
    }
    let mut text = match parts.split_last() {
        None => String::new(),
        Some((last, [])) => last.clone(),
        Some((last, init)) => format!("{} and {}", init.join(", "), last),
    };
    if finally && !text.is_empty() {
        text.insert_str(0, FINALLY);
    }
    finish_sentence(&text)
}
