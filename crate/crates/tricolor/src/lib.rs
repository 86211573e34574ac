//! Std companion to `tricolor-core`: line-oriented text formats for TDAGs,
//! grammars, transfer operations and strategy tables, a DOT exporter, and
//! the `tricolor` command-line tool.

pub mod dot;
pub mod grammar_text;
pub mod ops_text;
pub mod strategy_text;
pub mod tdag_text;

pub use tdag_text::NamedTdag;

/// A parse failure in any of the text formats, with its 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct TextError {
    pub line: usize,
    pub message: String,
}

impl TextError {
    pub fn new(line: usize, message: impl Into<String>) -> TextError {
        TextError { line, message: message.into() }
    }
}

/// Lines of `text` with their 1-based numbers, comments (`#`) and blank
/// lines removed.
pub(crate) fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

pub(crate) fn parse_color(s: &str, line: usize) -> Result<tricolor_core::Color, TextError> {
    match s {
        "red" => Ok(tricolor_core::Color::Red),
        "yellow" => Ok(tricolor_core::Color::Yellow),
        "green" => Ok(tricolor_core::Color::Green),
        other => Err(TextError::new(line, format!("unknown color `{other}`"))),
    }
}
