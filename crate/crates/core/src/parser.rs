//! Flat term syntax: `"3 + 5X - 2Xyx"`, `"1*xxyx + 2*zy"`.
//!
//! ```text
//! expression  := [sign] term (sign term)*
//! term        := coefficient ['*' letters] | coefficient letters | letters
//! coefficient := digits ['.' digits] | '.' digits
//! letters     := [a-zA-Z]+
//! ```
//!
//! Whitespace may separate tokens. Lowercase letters are generators and
//! uppercase letters their inverses. Empty input is the zero element.

use std::fmt;

use thiserror::Error;

use crate::element::Element;
use crate::word::{Symbol, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar,
    BadNumber,
    EmptyTerm,
    TrailingInput,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::UnexpectedChar => "unexpected character",
            ParseErrorKind::BadNumber => "bad number",
            ParseErrorKind::EmptyTerm => "empty term",
            ParseErrorKind::TrailingInput => "trailing input",
        };
        f.write_str(s)
    }
}

/// `position` is a 0-based character offset, at most the input length.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, position: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            position,
            kind,
            message: message.into(),
        }
    }
}

fn is_token_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '.' | '*' | '+' | '-' | ' ' | '\t' | '\n' | '\r')
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
}

impl Scanner {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn unexpected(&self, c: char) -> ParseError {
        ParseError::new(
            ParseErrorKind::UnexpectedChar,
            self.pos,
            format!("character {c:?} is not allowed"),
        )
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let mut digits = 0;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
            digits += 1;
        }
        if self.peek() == Some('.') {
            self.pos += 1;
            let mut frac = 0;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
                frac += 1;
            }
            if frac == 0 {
                return Err(ParseError::new(
                    ParseErrorKind::BadNumber,
                    self.pos,
                    "expected a digit after the decimal point",
                ));
            }
            digits += frac;
        }
        if self.peek() == Some('.') {
            return Err(ParseError::new(
                ParseErrorKind::BadNumber,
                self.pos,
                "second decimal point in number",
            ));
        }
        debug_assert!(digits > 0);
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(ParseError::new(
                ParseErrorKind::BadNumber,
                start,
                format!("coefficient {text} is out of range"),
            )),
        }
    }

    fn letters(&mut self) -> Word {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        Word::reduce(
            self.chars[start..self.pos]
                .iter()
                .map(|&c| Symbol::from_char(c).expect("ascii letter")),
        )
    }

    fn term(&mut self) -> Result<(Word, f64), ParseError> {
        match self.peek() {
            None => Err(ParseError::new(
                ParseErrorKind::EmptyTerm,
                self.pos,
                "expected a term",
            )),
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let coeff = self.number()?;
                self.skip_ws();
                match self.peek() {
                    Some('*') => {
                        self.pos += 1;
                        self.skip_ws();
                        match self.peek() {
                            Some(c) if c.is_ascii_alphabetic() => Ok((self.letters(), coeff)),
                            Some(c) if !is_token_char(c) => Err(self.unexpected(c)),
                            _ => Err(ParseError::new(
                                ParseErrorKind::EmptyTerm,
                                self.pos,
                                "expected letters after '*'",
                            )),
                        }
                    }
                    Some(c) if c.is_ascii_alphabetic() => Ok((self.letters(), coeff)),
                    _ => Ok((Word::empty(), coeff)),
                }
            }
            Some(c) if c.is_ascii_alphabetic() => Ok((self.letters(), 1.0)),
            Some('*') => Err(ParseError::new(
                ParseErrorKind::EmptyTerm,
                self.pos,
                "'*' must follow a coefficient",
            )),
            Some('+') | Some('-') => Err(ParseError::new(
                ParseErrorKind::EmptyTerm,
                self.pos,
                "sign with no term",
            )),
            Some(c) => Err(self.unexpected(c)),
        }
    }
}

/// Parses the flat term syntax into a normalized element.
pub fn parse(input: &str) -> Result<Element, ParseError> {
    let mut sc = Scanner {
        chars: input.chars().collect(),
        pos: 0,
    };
    let mut terms = Vec::new();
    sc.skip_ws();
    let mut first = true;
    while sc.peek().is_some() {
        let mut sign = 1.0;
        match sc.peek() {
            Some('+') => sc.pos += 1,
            Some('-') => {
                sign = -1.0;
                sc.pos += 1;
            }
            Some(c) if !is_token_char(c) => return Err(sc.unexpected(c)),
            Some(_) if first => {}
            Some(_) => {
                return Err(ParseError::new(
                    ParseErrorKind::TrailingInput,
                    sc.pos,
                    "expected '+' or '-' between terms",
                ))
            }
            None => unreachable!(),
        }
        sc.skip_ws();
        let (word, coeff) = sc.term()?;
        terms.push((word, sign * coeff));
        sc.skip_ws();
        first = false;
    }
    Ok(Element::from_terms(terms))
}
