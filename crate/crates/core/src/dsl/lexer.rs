use crate::model::CompareOp;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Name(String),
    Str(String),
    Int(i64),
    Dec(String),
    LBrace,
    RBrace,
    Colon,
    Dot,
    Arrow,
    Op(CompareOp),
    /// Lexically invalid input; carries a description for diagnostics.
    Bad(String),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("`{n}`"),
            Tok::Str(s) => format!("string {}", crate::model::quote(s)),
            Tok::Int(i) => format!("number `{i}`"),
            Tok::Dec(d) => format!("number `{d}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Op(op) => format!("`{op}`"),
            Tok::Bad(what) => what.clone(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    /// Position just past the token, used to report "missing X" errors.
    pub end_line: usize,
    pub end_column: usize,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, out: &mut String, pred: impl Fn(char) -> bool) {
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
    }
}

pub(crate) fn tokenize(src: &str) -> Vec<Token> {
    let mut cur = Cursor { chars: src.chars().peekable(), line: 1, column: 1 };
    let mut out = Vec::new();
    loop {
        // whitespace and comments
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '#' {
                while matches!(cur.peek(), Some(c) if c != '\n') {
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let (line, column) = (cur.line, cur.column);
        let Some(c) = cur.bump() else {
            out.push(Token { tok: Tok::Eof, line, column, end_line: line, end_column: column });
            return out;
        };
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            '"' => lex_string(&mut cur),
            '-' if cur.peek() == Some('>') => {
                cur.bump();
                Tok::Arrow
            }
            '-' if matches!(cur.peek(), Some(d) if d.is_ascii_digit()) => lex_number(&mut cur, '-'),
            '0'..='9' => lex_number(&mut cur, c),
            '=' | '!' | '<' | '>' => {
                let mut sym = c.to_string();
                if cur.peek() == Some('=') {
                    cur.bump();
                    sym.push('=');
                }
                match CompareOp::from_symbol(&sym) {
                    Some(op) => Tok::Op(op),
                    None => Tok::Bad(format!("`{sym}`")),
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = c.to_string();
                cur.eat_while(&mut name, |c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
                Tok::Name(name)
            }
            other => Tok::Bad(format!("unexpected character `{other}`")),
        };
        out.push(Token { tok, line, column, end_line: cur.line, end_column: cur.column });
    }
}

fn lex_string(cur: &mut Cursor<'_>) -> Tok {
    let mut s = String::new();
    loop {
        match cur.peek() {
            None | Some('\n') => return Tok::Bad("unterminated string".into()),
            Some('"') => {
                cur.bump();
                return Tok::Str(s);
            }
            Some('\\') => {
                cur.bump();
                match cur.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some(other) => return Tok::Bad(format!("invalid escape `\\{other}`")),
                    None => return Tok::Bad("unterminated string".into()),
                }
            }
            Some(c) => {
                s.push(c);
                cur.bump();
            }
        }
    }
}

fn lex_number(cur: &mut Cursor<'_>, first: char) -> Tok {
    let mut text = first.to_string();
    cur.eat_while(&mut text, |c| c.is_ascii_digit());
    if cur.peek() == Some('.') {
        // only a decimal when a digit follows the dot
        let mut ahead = cur.chars.clone();
        ahead.next();
        if matches!(ahead.peek(), Some(d) if d.is_ascii_digit()) {
            cur.bump();
            text.push('.');
            cur.eat_while(&mut text, |c| c.is_ascii_digit());
            return Tok::Dec(text);
        }
    }
    match text.parse::<i64>() {
        Ok(i) => Tok::Int(i),
        Err(_) => Tok::Bad(format!("integer `{text}` out of range")),
    }
}
