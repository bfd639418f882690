use std::fmt;

/// Source position, 1-based. Spans never take part in equality so that a
/// rendered and re-parsed configuration compares equal to the original.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Span { line, col }
    }
}

/// A located error message about the model file or a command argument.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Diagnostic { line: span.line, col: span.col, message: message.into() }
    }

    /// Renders `origin:line:col: error: message`, optionally with ANSI color.
    pub fn render(&self, origin: &str, color: bool) -> String {
        if color {
            format!("\x1b[1m{origin}:{}:{}:\x1b[0m \x1b[1;31merror:\x1b[0m {}", self.line, self.col, self.message)
        } else {
            format!("{origin}:{}:{}: error: {}", self.line, self.col, self.message)
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}
