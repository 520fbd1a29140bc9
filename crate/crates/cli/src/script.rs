//! Transcript files: `U:` lines are said to the bot, and each `B:` line
//! must be a prefix of the bot's latest reply. `#` starts a comment.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Line {
    User(String),
    /// Expected prefix of the most recent bot reply.
    Bot(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptLine {
    /// 1-based line number in the file.
    pub number: usize,
    pub line: Line,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptError {
    pub number: usize,
    pub message: String,
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.number, self.message)
    }
}

pub fn parse_script(src: &str) -> Result<Vec<ScriptLine>, ScriptError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let number = i + 1;
        let t = raw.trim_end();
        if t.trim().is_empty() || t.trim_start().starts_with('#') {
            continue;
        }
        let line = if let Some(rest) = t.strip_prefix("U:") {
            Line::User(rest.trim().to_string())
        } else if let Some(rest) = t.strip_prefix("B:") {
            Line::Bot(rest.trim().to_string())
        } else {
            return Err(ScriptError { number, message: format!("expected `U:` or `B:`, found {t:?}") });
        };
        out.push(ScriptLine { number, line });
    }
    Ok(out)
}
