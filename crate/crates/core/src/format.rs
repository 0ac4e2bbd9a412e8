//! Canonical text rendering and the JSON interchange format.
//!
//! JSON layout, with fields always in this order:
//!
//! ```json
//! {"terms":[{"word":[25,25,25,25],"coeff":3},{"word":[26],"coeff":-2}]}
//! ```
//!
//! A symbol is `+i` for generator `i` (1 is `a`), `-i` for its inverse, or
//! the string `"da"`..`"dz"` for a differential token.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::element::Element;
use crate::parser::{ParseError, ParseErrorKind};
use crate::word::{Letter, Symbol, Word};

/// Shortest round-trip decimal; integral values print without a point.
pub fn format_coeff(c: f64) -> String {
    format!("{c}")
}

/// Renders terms in collation order as `+ 1*xxyx + 2*zy`; zero is `0`.
pub fn canonical_print(e: &Element) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (word, c)) in e.terms().enumerate() {
        let sign = if c < 0.0 { '-' } else { '+' };
        if i == 0 {
            out.push(sign);
            out.push(' ');
        } else {
            out.push(' ');
            out.push(sign);
            out.push(' ');
        }
        out.push_str(&format_coeff(c.abs()));
        if !word.is_empty() {
            out.push('*');
            out.push_str(&word.to_string());
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct JsonSymbol(Symbol);

impl Serialize for JsonSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_signed() {
            Some(code) => s.serialize_i64(code),
            None => s.serialize_str(&format!("d{}", self.0.generator())),
        }
    }
}

impl<'de> Deserialize<'de> for JsonSymbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct SymbolVisitor;

        impl Visitor<'_> for SymbolVisitor {
            type Value = JsonSymbol;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonzero integer in -26..=26 or a string \"da\"..\"dz\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonSymbol, E> {
                Symbol::from_signed(v)
                    .map(JsonSymbol)
                    .ok_or_else(|| E::custom(format!("symbol code {v} out of range")))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonSymbol, E> {
                let v = i64::try_from(v)
                    .map_err(|_| E::custom(format!("symbol code {v} out of range")))?;
                self.visit_i64(v)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonSymbol, E> {
                let mut chars = v.chars();
                match (chars.next(), chars.next(), chars.next()) {
                    (Some('d'), Some(c), None) => Letter::from_char(c)
                        .map(|l| JsonSymbol(Symbol::differential(l)))
                        .ok_or_else(|| E::custom(format!("bad differential symbol {v:?}"))),
                    _ => Err(E::custom(format!("bad differential symbol {v:?}"))),
                }
            }
        }

        d.deserialize_any(SymbolVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct JsonCoeff(f64);

impl Serialize for JsonCoeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // 2^53: integers beyond this are not all representable
        if self.0.fract() == 0.0 && self.0.abs() < 9_007_199_254_740_992.0 {
            s.serialize_i64(self.0 as i64)
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for JsonCoeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(JsonCoeff)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTerm {
    word: Vec<JsonSymbol>,
    coeff: JsonCoeff,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonElement {
    terms: Vec<JsonTerm>,
}

pub fn to_json(e: &Element) -> String {
    let doc = JsonElement {
        terms: e
            .terms()
            .map(|(w, c)| JsonTerm {
                word: w.symbols().iter().copied().map(JsonSymbol).collect(),
                coeff: JsonCoeff(c),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("element serializes")
}

/// Reads the JSON form, reducing words and collecting like terms.
pub fn from_json(text: &str) -> Result<Element, ParseError> {
    let doc: JsonElement = serde_json::from_str(text).map_err(|err| json_error(text, &err))?;
    Ok(Element::from_terms(doc.terms.into_iter().map(|t| {
        (Word::reduce(t.word.into_iter().map(|s| s.0)), t.coeff.0)
    })))
}

fn json_error(text: &str, err: &serde_json::Error) -> ParseError {
    use serde_json::error::Category;
    let kind = match err.classify() {
        Category::Eof => ParseErrorKind::EmptyTerm,
        Category::Data => ParseErrorKind::BadNumber,
        Category::Syntax if err.to_string().starts_with("trailing characters") => {
            ParseErrorKind::TrailingInput
        }
        Category::Syntax | Category::Io => ParseErrorKind::UnexpectedChar,
    };
    ParseError::new(
        kind,
        char_offset(text, err.line(), err.column()),
        err.to_string(),
    )
}

// serde_json reports 1-based lines and 1-based byte columns.
fn char_offset(text: &str, line: usize, column: usize) -> usize {
    let total = text.chars().count();
    if line == 0 {
        return total;
    }
    let mut byte = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            let target = (byte + column.saturating_sub(1)).min(text.len());
            let mut boundary = target;
            while !text.is_char_boundary(boundary) {
                boundary -= 1;
            }
            return text[..boundary].chars().count().min(total);
        }
        byte += l.len();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn prints_worked_examples() {
        assert_eq!(
            canonical_print(&parse("xxyx + 2zy").unwrap()),
            "+ 1*xxyx + 2*zy"
        );
        assert_eq!(
            canonical_print(&parse("-2z + 3yyyy").unwrap()),
            "+ 3*yyyy - 2*z"
        );
        assert_eq!(canonical_print(&Element::zero()), "0");
        assert_eq!(
            canonical_print(&parse("3 + 5X - 2Xyx").unwrap()),
            "+ 3 + 5*X - 2*Xyx"
        );
        assert_eq!(canonical_print(&parse("-x").unwrap()), "- 1*x");
        assert_eq!(
            canonical_print(&parse("0.5 + 1.25y").unwrap()),
            "+ 0.5 + 1.25*y"
        );
    }

    #[test]
    fn json_shape() {
        let b = parse("-2z + 3yyyy").unwrap();
        assert_eq!(
            to_json(&b),
            r#"{"terms":[{"word":[25,25,25,25],"coeff":3},{"word":[26],"coeff":-2}]}"#
        );
        assert_eq!(to_json(&Element::zero()), r#"{"terms":[]}"#);
        assert_eq!(
            to_json(&parse("0.5X").unwrap()),
            r#"{"terms":[{"word":[-24],"coeff":0.5}]}"#
        );
        let a = parse("xxyx + 2zy").unwrap();
        assert_eq!(from_json(&to_json(&a)).unwrap(), a);
    }

    #[test]
    fn json_differentials() {
        let a = Letter::from_char('a').unwrap();
        let w = Word::reduce([Symbol::letter(a), Symbol::differential(a)]);
        let e = Element::monomial(w, 2.0);
        let text = to_json(&e);
        assert_eq!(text, r#"{"terms":[{"word":[1,"da"],"coeff":2}]}"#);
        assert_eq!(from_json(&text).unwrap(), e);
    }

    #[test]
    fn json_normalizes() {
        let e = from_json(
            r#"{"terms":[{"word":[24,-24,1],"coeff":2},{"word":[1],"coeff":-2},{"word":[],"coeff":4}]}"#,
        )
        .unwrap();
        assert_eq!(e, Element::constant(4.0));
    }

    #[test]
    fn json_errors() {
        let kind = |t: &str| from_json(t).unwrap_err().kind;
        assert_eq!(
            kind(r#"{"terms":[{"word":[0],"coeff":1}]}"#),
            ParseErrorKind::BadNumber
        );
        assert_eq!(
            kind(r#"{"terms":[{"word":[27],"coeff":1}]}"#),
            ParseErrorKind::BadNumber
        );
        assert_eq!(
            kind(r#"{"terms":[{"word":["dA"],"coeff":1}]}"#),
            ParseErrorKind::BadNumber
        );
        assert_eq!(
            kind(r#"{"terms":[{"word":[1],"coeff":"1"}]}"#),
            ParseErrorKind::BadNumber
        );
        assert_eq!(
            kind(r#"{"terms":[{"word":[1],"coeff":1}"#),
            ParseErrorKind::EmptyTerm
        );
        assert_eq!(kind(r#"{"terms":[]} x"#), ParseErrorKind::TrailingInput);
        assert_eq!(kind(r#"{"terms":[}"#), ParseErrorKind::UnexpectedChar);
        let e = from_json(r#"{"terms":[{"word":[99],"coeff":1}]}"#).unwrap_err();
        assert!(e.position <= 36);
    }
}
