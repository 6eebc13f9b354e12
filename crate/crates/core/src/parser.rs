//! Parser for the expression grammar shared by the CLI, the fixture files
//! and the report witnesses.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' uint)?
//! atom   := uint | 'q' | 'u' | 's' | generator | '(' expr ')'
//! ```
//!
//! Multiplication is the free-algebra product; `/` requires a scalar
//! divisor. `t[1,2]` is accepted as an alternative spelling of `t12`.
//! Columns in error messages are 1-based byte offsets.

use num::BigInt;

use crate::error::{CoreError, Result};
use crate::freealg::{Alphabet, NCPoly};
use crate::scalar::{Param, ScalarValue};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn syntax(col: usize, msg: impl Into<String>) -> CoreError {
    CoreError::Syntax {
        col,
        msg: msg.into(),
    }
}

fn lex(input: &str) -> Result<Vec<Spanned>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let col = i + 1;
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push(Spanned { tok: Tok::Plus, col });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, col });
                i += 1;
            }
            '*' => {
                out.push(Spanned { tok: Tok::Star, col });
                i += 1;
            }
            '/' => {
                out.push(Spanned { tok: Tok::Slash, col });
                i += 1;
            }
            '^' => {
                out.push(Spanned { tok: Tok::Caret, col });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, col });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, col });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::parse_bytes(&bytes[start..i], 10)
                    .ok_or_else(|| syntax(col, "invalid integer"))?;
                out.push(Spanned { tok: Tok::Int(n), col });
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let mut name = input[start..i].to_string();
                // Indexed spelling: name[i,j] flattens to nameij.
                if i < bytes.len() && bytes[i] == b'[' {
                    i += 1;
                    let idx_start = i;
                    while i < bytes.len() && bytes[i] != b']' {
                        i += 1;
                    }
                    if i == bytes.len() {
                        return Err(syntax(idx_start, "unclosed '[' in generator name"));
                    }
                    for part in input[idx_start..i].split(',') {
                        let part = part.trim();
                        if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                            return Err(syntax(idx_start + 1, "expected digits inside '[...]'"));
                        }
                        name.push_str(part);
                    }
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(name),
                    col,
                });
            }
            other => {
                return Err(syntax(col, format!("unexpected character `{}`", other)));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    alphabet: &'a Alphabet,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next_col(&self) -> usize {
        self.peek().map_or(self.end_col, |s| s.col)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|s| &s.tok) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<NCPoly> {
        let mut acc = if self.eat(&Tok::Minus) {
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.term()?);
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.term()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NCPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = acc.mul(&self.factor()?);
            } else if self.peek().map(|s| &s.tok) == Some(&Tok::Slash) {
                let slash_col = self.next_col();
                self.pos += 1;
                let rhs = self.factor()?;
                let c = rhs.scalar_value().ok_or_else(|| {
                    syntax(slash_col, "divisor must be a scalar expression")
                })?;
                acc = acc.scale(&c.inverse()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NCPoly> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let col = self.next_col();
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e = u32::try_from(&n)
                        .ok()
                        .filter(|&e| e <= 512)
                        .ok_or_else(|| syntax(col, "exponent out of range"))?;
                    Ok(base.pow(e))
                }
                _ => Err(syntax(col, "expected integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<NCPoly> {
        let col = self.next_col();
        match self.peek().map(|s| s.tok.clone()) {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(NCPoly::scalar(ScalarValue::big_int(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let found = self
                    .alphabet
                    .lookup(&name)
                    .or_else(|| self.alphabet.lookup(&name.to_ascii_lowercase()));
                if let Some(g) = found {
                    Ok(NCPoly::gen(g))
                } else if let Some(p) = Param::from_name(&name) {
                    Ok(NCPoly::scalar(ScalarValue::param(p)))
                } else {
                    Err(CoreError::UnknownGenerator(name))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                // Running out of input inside the group is the unclosed
                // paren's fault; report it at the opening column.
                let inner = self.expr().map_err(|e| match e {
                    CoreError::Syntax { msg, .. } if msg == "unexpected end of expression" => {
                        syntax(col, "unclosed '('")
                    }
                    other => other,
                })?;
                if !self.eat(&Tok::RParen) {
                    return Err(syntax(col, "unclosed '('"));
                }
                Ok(inner)
            }
            Some(_) => Err(syntax(col, "expected a value")),
            None => Err(syntax(col, "unexpected end of expression")),
        }
    }
}

/// Parses an expression over the given alphabet.
pub fn parse_expr(input: &str, alphabet: &Alphabet) -> Result<NCPoly> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(syntax(1, "empty expression"));
    }
    let end_col = input.len() + 1;
    let mut p = Parser {
        toks,
        pos: 0,
        alphabet,
        end_col,
    };
    let out = p.expr()?;
    if let Some(extra) = p.peek() {
        return Err(syntax(extra.col, "unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a pure scalar (no generators allowed).
pub fn parse_scalar(input: &str) -> Result<ScalarValue> {
    let empty = Alphabet::new(vec![]).expect("empty alphabet");
    let p = parse_expr(input, &empty)?;
    p.scalar_value()
        .ok_or_else(|| CoreError::Invalid("expected a scalar expression".into()))
}

/// Parses a relation file: one expression per line, `#` starts a comment,
/// blank lines skipped.
pub fn parse_relation_lines(input: &str, alphabet: &Alphabet) -> Result<Vec<NCPoly>> {
    let mut out = Vec::new();
    for (lineno, raw) in input.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let p = parse_expr(line, alphabet).map_err(|e| {
            CoreError::Invalid(format!("line {}: {}", lineno + 1, e))
        })?;
        out.push(p);
    }
    Ok(out)
}
