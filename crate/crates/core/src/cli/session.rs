//! Named bindings and line-oriented command evaluation.

use std::collections::BTreeMap;

use crate::element::Element;
use crate::format::canonical_print;

use super::expr::{evaluate, ExprError, SyntaxError};

const RESERVED: &[&str] = &["deriv", "subs"];

/// Named elements. Single letters are generator syntax and cannot be bound.
#[derive(Debug, Clone, Default)]
pub struct Session {
    bindings: BTreeMap<String, Element>,
}

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    pub fn get(&self, name: &str) -> Option<&Element> {
        self.bindings.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn bind(&mut self, name: &str, value: Element) -> Result<(), SyntaxError> {
        check_name(name)?;
        self.bindings.insert(name.to_string(), value);
        Ok(())
    }
}

fn check_name(name: &str) -> Result<(), SyntaxError> {
    let mut chars = name.chars();
    let well_formed = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    let message = if !well_formed {
        format!("`{name}` is not a valid name")
    } else if name.len() < 2 {
        format!("`{name}` is a generator; names need at least two characters")
    } else if RESERVED.contains(&name) {
        format!("`{name}` is a reserved function name")
    } else {
        return Ok(());
    };
    Err(SyntaxError {
        position: 0,
        message,
    })
}

/// Splits `NAME = rest` into the name and the byte offset of `rest`.
fn assignment(line: &str) -> Option<(&str, usize)> {
    let start = line.len() - line.trim_start().len();
    let body = &line[start..];
    let name_len = body
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(body.len());
    if name_len == 0 {
        return None;
    }
    let after = &body[name_len..];
    let eq = after.len() - after.trim_start().len();
    after[eq..]
        .starts_with('=')
        .then(|| (&body[..name_len], start + name_len + eq + 1))
}

/// Runs one command line. Assignments print nothing; expressions print
/// their canonical form.
pub fn run_command(line: &str, session: &mut Session) -> Result<String, ExprError> {
    if line.trim().is_empty() {
        return Ok(String::new());
    }
    if let Some((name, rest)) = assignment(line) {
        check_name(name)?;
        let value =
            evaluate(&line[rest..], session).map_err(|e| shift(e, line[..rest].chars().count()))?;
        session.bind(name, value)?;
        return Ok(String::new());
    }
    Ok(canonical_print(&evaluate(line, session)?))
}

fn shift(e: ExprError, offset: usize) -> ExprError {
    match e {
        ExprError::Syntax(s) => ExprError::Syntax(SyntaxError {
            position: s.position + offset,
            ..s
        }),
        other => other,
    }
}
