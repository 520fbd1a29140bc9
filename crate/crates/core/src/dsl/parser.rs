use crate::model::*;

use super::lexer::{tokenize, Tok, Token};
use super::SyntaxError;

const DECL_KEYWORDS: [&str; 6] = ["participant", "asset", "transaction", "tranrel", "assetrel", "condition"];

/// Error plus the brace depth the parser was at, relative to the start of the
/// failing declaration, so recovery can skip to the block boundary.
struct Failure {
    error: SyntaxError,
    depth: usize,
}

type PResult<T> = Result<T, Failure>;

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    errors: Vec<SyntaxError>,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Self {
        Parser { toks: tokenize(src), pos: 0, errors: Vec::new() }
    }

    pub(crate) fn parse_model(mut self) -> Result<IntentionModel, Vec<SyntaxError>> {
        let mut model = IntentionModel::default();
        match self.header() {
            Ok(header) => model.contract = header,
            Err(f) => {
                self.errors.push(f.error);
                while !matches!(self.peek(), Tok::Eof | Tok::LBrace) && !self.at_decl_start() {
                    self.bump();
                }
            }
        }
        if self.peek() == &Tok::LBrace {
            self.bump();
            self.decls(&mut model, true);
            if self.peek() == &Tok::RBrace {
                self.bump();
            } else {
                let e = self.missing("`}` closing the contract");
                self.errors.push(e);
            }
        }
        // declarations may also follow a closed or absent header block
        self.decls(&mut model, false);
        if self.errors.is_empty() {
            Ok(model)
        } else {
            Err(self.errors)
        }
    }

    /// One comparison operand spanning the whole input.
    pub(crate) fn parse_operand(mut self) -> Result<Operand, SyntaxError> {
        let o = self.operand().map_err(|f| f.error)?;
        match self.peek() {
            Tok::Eof => Ok(o),
            _ => Err(self.unexpected("end of operand")),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_decl_start(&self) -> bool {
        matches!(self.peek(), Tok::Name(n) if DECL_KEYWORDS.contains(&n.as_str()))
            && matches!(self.peek_at(1), Tok::Str(_) | Tok::Name(_))
    }

    fn unexpected(&self, expected: impl Into<String>) -> SyntaxError {
        let t = &self.toks[self.pos];
        SyntaxError { line: t.line, column: t.column, expected: expected.into(), found: t.tok.describe() }
    }

    /// Error positioned just after the previous token; used when something is
    /// missing and the next token already belongs to another declaration.
    fn missing(&self, expected: impl Into<String>) -> SyntaxError {
        let (line, column) = match self.pos.checked_sub(1) {
            Some(i) => (self.toks[i].end_line, self.toks[i].end_column),
            None => (1, 1),
        };
        SyntaxError { line, column, expected: expected.into(), found: self.peek().describe() }
    }

    fn fail<T>(&self, expected: &str, depth: usize) -> PResult<T> {
        Err(Failure { error: self.unexpected(expected), depth })
    }

    fn keyword(&mut self, kw: &str, depth: usize) -> PResult<()> {
        match self.peek() {
            Tok::Name(n) if n == kw => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&format!("`{kw}`"), depth),
        }
    }

    fn string(&mut self, what: &str, depth: usize) -> PResult<String> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(&format!("quoted {what}"), depth),
        }
    }

    fn expect(&mut self, tok: Tok, depth: usize) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.describe(), depth)
        }
    }

    fn header(&mut self) -> PResult<ContractHeader> {
        self.keyword("contract", 0)?;
        let name = self.string("contract name", 0)?;
        let mut platform = None;
        if matches!(self.peek(), Tok::Name(n) if n == "on") {
            self.bump();
            platform = match self.peek() {
                Tok::Name(n) => match n.parse::<Platform>() {
                    Ok(p) if p.keyword() == n => Some(p),
                    _ => return self.fail("platform (azure, hyperledger-fabric or ethereum)", 0),
                },
                _ => return self.fail("platform (azure, hyperledger-fabric or ethereum)", 0),
            };
            self.bump();
        }
        Ok(ContractHeader { name, platform })
    }

    fn decls(&mut self, model: &mut IntentionModel, inside_braces: bool) {
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::RBrace if inside_braces => return,
                _ => {}
            }
            let result = match self.peek().clone() {
                Tok::Name(kw) if DECL_KEYWORDS.contains(&kw.as_str()) => self.decl(&kw, model),
                _ => self.fail("declaration (participant, asset, transaction, tranrel, assetrel or condition)", 0),
            };
            if let Err(f) = result {
                self.errors.push(f.error);
                self.recover(f.depth, inside_braces);
            }
        }
    }

    /// Skips to the end of the failed declaration: past its closing brace when
    /// the failure happened inside a block, else up to the next declaration.
    fn recover(&mut self, mut depth: usize, inside_braces: bool) {
        loop {
            match self.peek() {
                Tok::Eof => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace => {
                    if depth == 0 {
                        if inside_braces {
                            return;
                        }
                    } else {
                        depth -= 1;
                        self.bump();
                        if depth == 0 {
                            return;
                        }
                        continue;
                    }
                }
                _ if self.at_decl_start() => return,
                _ => {}
            }
            self.bump();
        }
    }

    fn decl(&mut self, kw: &str, model: &mut IntentionModel) -> PResult<()> {
        self.bump();
        match kw {
            "participant" => {
                let name = self.string("participant name", 0)?;
                let creator = matches!(self.peek(), Tok::Name(n) if n == "creator");
                if creator {
                    self.bump();
                }
                let params = self.block_params()?;
                model.participants.push(Participant { name, creator, params });
            }
            "asset" => {
                let name = self.string("asset name", 0)?;
                let fields = self.block_params()?;
                model.assets.push(Asset { name, fields });
            }
            "transaction" => {
                let name = self.string("transaction name", 0)?;
                let params = self.block_params()?;
                model.transactions.push(Transaction { name, params });
            }
            "tranrel" | "assetrel" => {
                let kind = if kw == "tranrel" { RelKind::TranRel } else { RelKind::AssetRel };
                let transaction = self.string("transaction name", 0)?;
                self.expect(Tok::Arrow, 0)?;
                let target =
                    self.string(if kind == RelKind::TranRel { "participant name" } else { "asset name" }, 0)?;
                model.relationships.push(Relationship { kind, transaction, target });
            }
            "condition" => {
                let start = self.pos;
                self.keyword("on", 0)?;
                let transaction = self.string("transaction name", 0)?;
                self.expect(Tok::Colon, 0)?;
                let lhs = self.operand()?;
                let op = match self.peek() {
                    Tok::Op(op) => *op,
                    _ => return self.fail("comparison operator", 0),
                };
                self.bump();
                let rhs = self.operand()?;
                let guard = Comparison { lhs, op, rhs };
                if !guard.has_path() {
                    let t = &self.toks[start];
                    return Err(Failure {
                        error: SyntaxError {
                            line: t.line,
                            column: t.column,
                            expected: "a field path on at least one side of the comparison".into(),
                            found: "two literals".into(),
                        },
                        depth: 0,
                    });
                }
                model.conditions.push(Condition { transaction, guard });
            }
            _ => unreachable!("caller checks DECL_KEYWORDS"),
        }
        Ok(())
    }

    fn block_params(&mut self) -> PResult<Vec<Param>> {
        self.expect(Tok::LBrace, 0)?;
        let mut params = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::RBrace => {
                    self.bump();
                    return Ok(params);
                }
                Tok::Name(_) if self.at_decl_start() => {
                    return Err(Failure { error: self.missing("`}` closing the block"), depth: 0 });
                }
                Tok::Name(name) => {
                    self.bump();
                    self.expect(Tok::Colon, 1)?;
                    match self.peek().clone() {
                        Tok::Name(ty) => {
                            self.bump();
                            params.push(Param { name, ptype: ParamType::from_keyword(&ty) });
                        }
                        _ => return self.fail("parameter type", 1),
                    }
                }
                Tok::Eof => return Err(Failure { error: self.missing("`}` closing the block"), depth: 0 }),
                _ => return self.fail("parameter (`name: type`) or `}`", 1),
            }
        }
    }

    fn operand(&mut self) -> PResult<Operand> {
        let owner = match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                return Ok(Operand::Literal(Literal::Integer(i)));
            }
            Tok::Dec(d) => {
                self.bump();
                return Ok(Operand::Literal(Literal::Decimal(d)));
            }
            Tok::Name(n) if is_bool_word(&n) && self.peek_at(1) != &Tok::Dot => {
                self.bump();
                return Ok(Operand::Literal(Literal::Boolean(n == "true")));
            }
            Tok::Str(s) if self.peek_at(1) != &Tok::Dot => {
                self.bump();
                return Ok(Operand::Literal(Literal::Text(s)));
            }
            Tok::Str(s) | Tok::Name(s) => s,
            _ => return self.fail("operand (field path or literal)", 0),
        };
        self.bump();
        self.expect(Tok::Dot, 0)?;
        match self.peek().clone() {
            Tok::Name(field) => {
                self.bump();
                Ok(Operand::Path(FieldPath { owner, field }))
            }
            _ => self.fail("field name", 0),
        }
    }
}
