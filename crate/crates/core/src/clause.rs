/// A lexicalized action: who did it and what they did.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub subject: String,
    pub predicate: String,
}

impl Clause {
    pub fn new(subject: impl Into<String>, predicate: impl Into<String>) -> Self {
        Clause {
            subject: subject.into(),
            predicate: predicate.into(),
        }
    }

    /// `subject predicate`, or just the predicate for subjectless clauses.
    pub fn text(&self) -> String {
        if self.subject.is_empty() {
            self.predicate.clone()
        } else {
            format!("{} {}", self.subject, self.predicate)
        }
    }

    /// Stand-alone sentence: capitalized and terminated with a full stop.
    pub fn sentence(&self) -> String {
        finish_sentence(&self.text())
    }

    pub fn with_suffix(&self, suffix: &str) -> Clause {
        Clause {
            subject: self.subject.clone(),
            predicate: format!("{}{}", self.predicate, suffix),
        }
    }
}

/// Upper-cases the first character.
pub fn capitalize(text: &str) -> String {
    let mut chars = text.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Capitalizes and appends a full stop unless the text already ends with
/// sentence punctuation.
pub fn finish_sentence(text: &str) -> String {
    let mut out = capitalize(text.trim());
    if !out.ends_with(['.', '!', '?']) {
        out.push('.');
    }
    out
}
