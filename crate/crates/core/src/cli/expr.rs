//! Expression language for the command line.
//!
//! Extends the flat term syntax with named bindings, parentheses, binary
//! `+ - *` (juxtaposition also multiplies), unary minus, integer powers
//! `e^n`, commutator brackets `[e1, e2]`, `deriv(e, x)` and sequential
//! `subs(e, x = r, ...)`. Expressions are evaluated while they are parsed.
//!
//! An identifier resolves to a session binding when one exists; otherwise
//! it must be a run of letters and denotes that word.

use thiserror::Error;

use crate::calculus::{deriv, subs, CalculusError, Substitution};
use crate::element::{AlgebraError, Element};
use crate::word::{Letter, Word};

use super::session::Session;

/// Syntax error in a command line, with a 0-based character position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl ExprError {
    pub fn is_syntax(&self) -> bool {
        matches!(self, ExprError::Syntax(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn syntax(position: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax(SyntaxError {
        position,
        message: message.into(),
    })
}

fn tokenize(input: &str) -> Result<(Vec<Token>, usize), ExprError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let frac = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i == frac {
                    return Err(syntax(i, "expected a digit after the decimal point"));
                }
            }
            if i < chars.len() && chars[i] == '.' {
                return Err(syntax(i, "second decimal point in number"));
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| syntax(start, format!("bad number {text}")))?;
            out.push(Token {
                tok: Tok::Num(v),
                pos: start,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                pos: start,
            });
        } else if "+-*^()[],=".contains(c) {
            out.push(Token {
                tok: Tok::Op(c),
                pos: i,
            });
            i += 1;
        } else {
            return Err(syntax(i, format!("unexpected character {c:?}")));
        }
    }
    Ok((out, chars.len()))
}

struct Parser<'a> {
    tokens: Vec<Token>,
    idx: usize,
    end: usize,
    session: &'a Session,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.idx).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.idx).map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ExprError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected '{op}'")))
        }
    }

    fn expr(&mut self) -> Result<Element, ExprError> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_operand(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) | Some(Tok::Op('['))
        )
    }

    fn product(&mut self) -> Result<Element, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.starts_operand() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Element, ExprError> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Element, ExprError> {
        let base = self.primary()?;
        if self.eat('^') {
            let pos = self.pos();
            match self.peek() {
                Some(&Tok::Num(n)) if n.fract() == 0.0 && n <= i64::MAX as f64 => {
                    self.idx += 1;
                    Ok(base.pow(n as i64)?)
                }
                _ => Err(syntax(pos, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn letter_arg(&mut self) -> Result<Letter, ExprError> {
        let pos = self.pos();
        if let Some(Tok::Ident(name)) = self.peek() {
            let mut chars = name.chars();
            if let (Some(c), None) = (chars.next(), chars.next()) {
                if let Some(l) = Letter::from_char(c) {
                    self.idx += 1;
                    return Ok(l);
                }
            }
        }
        Err(syntax(pos, "expected a lowercase letter"))
    }

    fn primary(&mut self) -> Result<Element, ExprError> {
        let pos = self.pos();
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Num(v)) => {
                self.idx += 1;
                Ok(Element::constant(v))
            }
            Some(Tok::Op('(')) => {
                self.idx += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Op('[')) => {
                self.idx += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(a.commutator(&b))
            }
            Some(Tok::Ident(name)) => {
                self.idx += 1;
                if self.peek() == Some(&Tok::Op('(')) && !self.session.contains(&name) {
                    match name.as_str() {
                        "deriv" => return self.deriv_call(),
                        "subs" => return self.subs_call(),
                        _ => {}
                    }
                }
                if let Some(e) = self.session.get(&name) {
                    return Ok(e.clone());
                }
                Word::from_letters(&name)
                    .map(Element::from)
                    .ok_or_else(|| syntax(pos, format!("unknown name `{name}`")))
            }
            Some(Tok::Op(c)) => Err(syntax(pos, format!("unexpected '{c}'"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }

    fn deriv_call(&mut self) -> Result<Element, ExprError> {
        self.expect('(')?;
        let e = self.expr()?;
        self.expect(',')?;
        let l = self.letter_arg()?;
        self.expect(')')?;
        Ok(deriv(&e, l))
    }

    fn subs_call(&mut self) -> Result<Element, ExprError> {
        self.expect('(')?;
        let e = self.expr()?;
        let mut s = Substitution::new();
        while self.eat(',') {
            let l = self.letter_arg()?;
            self.expect('=')?;
            s.push(l, self.expr()?);
        }
        self.expect(')')?;
        if s.pairs().is_empty() {
            return Err(syntax(
                self.pos(),
                "subs needs at least one letter = replacement",
            ));
        }
        Ok(subs(&e, &s)?)
    }
}

/// Parses and evaluates `input` against the bindings in `session`.
pub fn evaluate(input: &str, session: &Session) -> Result<Element, ExprError> {
    let (tokens, end) = tokenize(input)?;
    let mut p = Parser {
        tokens,
        idx: 0,
        end,
        session,
    };
    if p.peek().is_none() {
        return Err(syntax(0, "empty expression"));
    }
    let e = p.expr()?;
    if p.idx < p.tokens.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}
