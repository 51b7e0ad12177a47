//! Final formatting. Numbering lives here because no finite-state device
//! can count paragraphs without bound.

use std::fmt;
use std::str::FromStr;

use crate::pipeline::{Explanation, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OutputFormat {
    #[default]
    Plain,
    Html,
    Latex,
}

impl OutputFormat {
    pub const NAMES: [&'static str; 3] = ["plain", "html", "latex"];
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(OutputFormat::Plain),
            "html" => Ok(OutputFormat::Html),
            "latex" => Ok(OutputFormat::Latex),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Plain => "plain",
            OutputFormat::Html => "html",
            OutputFormat::Latex => "latex",
        })
    }
}

fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn escape_latex(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
    out
}

/// Renders an explanation. Level 0 is flowing text; higher levels are an
/// ordered list with one item per paragraph. An empty explanation renders
/// as the empty string.
///
/// ```text
/// plain   1. first paragraph\n2. second paragraph\n
/// html    <ol>\n<li>first paragraph</li>\n...</ol>\n
/// latex   \begin{enumerate}\n\item first paragraph\n...\end{enumerate}\n
/// ```
pub fn render(explanation: &Explanation, format: OutputFormat) -> String {
    if explanation.is_empty() {
        return String::new();
    }
    let escape: fn(&str) -> String = match format {
        OutputFormat::Plain => str::to_string,
        OutputFormat::Html => escape_html,
        OutputFormat::Latex => escape_latex,
    };
    let items: Vec<String> = explanation
        .paragraphs
        .iter()
        .map(|p| escape(&p.sentences.join(" ")))
        .collect();
    if explanation.level == Level::Cnl0 {
        let text = items.join(" ");
        return match format {
            OutputFormat::Html => format!("<p>{text}</p>\n"),
            _ => format!("{text}\n"),
        };
    }
    let mut out = String::new();
    match format {
        OutputFormat::Plain => {
            for (i, item) in items.iter().enumerate() {
                out.push_str(&format!("{}. {item}\n", i + 1));
            }
        }
        OutputFormat::Html => {
            out.push_str("<ol>\n");
            for item in &items {
                out.push_str(&format!("<li>{item}</li>\n"));
            }
            out.push_str("</ol>\n");
        }
        OutputFormat::Latex => {
            out.push_str("\\begin{enumerate}\n");
            for item in &items {
                out.push_str(&format!("\\item {item}\n"));
            }
            out.push_str("\\end{enumerate}\n");
        }
    }
    out
}
