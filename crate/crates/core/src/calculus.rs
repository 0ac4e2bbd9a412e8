//! Sequential substitution and Leibniz differentiation.

use thiserror::Error;

use crate::element::Element;
use crate::word::{Letter, Symbol, SymbolKind, Word};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalculusError {
    /// The element holds the inverse of `letter`, but the replacement is not
    /// a single invertible term.
    #[error("cannot substitute for {letter}: its inverse occurs but the replacement {replacement} is not a single invertible term")]
    NonInvertibleReplacement { letter: Letter, replacement: String },
}

/// Ordered `letter -> replacement` pairs, applied one after another.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Substitution {
    pairs: Vec<(Letter, Element)>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn then(mut self, letter: Letter, replacement: Element) -> Substitution {
        self.pairs.push((letter, replacement));
        self
    }

    pub fn push(&mut self, letter: Letter, replacement: Element) {
        self.pairs.push((letter, replacement));
    }

    pub fn pairs(&self) -> &[(Letter, Element)] {
        &self.pairs
    }
}

impl FromIterator<(Letter, Element)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Letter, Element)>>(iter: I) -> Self {
        Substitution {
            pairs: iter.into_iter().collect(),
        }
    }
}

/// Applies each pair of `s` in order to the result of the previous one.
pub fn subs(e: &Element, s: &Substitution) -> Result<Element, CalculusError> {
    s.pairs.iter().try_fold(e.clone(), |acc, (letter, repl)| {
        subs_one(&acc, *letter, repl)
    })
}

/// Replaces every occurrence of `letter` by `replacement` and every
/// occurrence of its inverse by the inverse of `replacement`.
pub fn subs_one(
    e: &Element,
    letter: Letter,
    replacement: &Element,
) -> Result<Element, CalculusError> {
    let inverse_image = if e.contains_symbol(Symbol::inverse(letter)) {
        Some(invert_monomial(replacement).ok_or_else(|| {
            CalculusError::NonInvertibleReplacement {
                letter,
                replacement: replacement.to_string(),
            }
        })?)
    } else {
        None
    };

    let mut out = Element::zero();
    for (word, c) in e.terms() {
        let mut image = Element::constant(c);
        let mut run: Vec<Symbol> = Vec::new();
        for &sym in word.symbols() {
            let target = match sym.kind() {
                SymbolKind::Letter if sym.generator() == letter => replacement,
                SymbolKind::Inverse if sym.generator() == letter => {
                    inverse_image.as_ref().expect("inverse image computed")
                }
                _ => {
                    run.push(sym);
                    continue;
                }
            };
            if !run.is_empty() {
                image = image.mul(&Element::from(Word::reduce(run.drain(..))));
            }
            image = image.mul(target);
        }
        if !run.is_empty() {
            image = image.mul(&Element::from(Word::reduce(run)));
        }
        out = out.add(&image);
    }
    Ok(out)
}

fn invert_monomial(e: &Element) -> Option<Element> {
    let (word, c) = e.as_monomial()?;
    Some(Element::monomial(word.inverse()?, 1.0 / c))
}

/// Noncommutative derivative with respect to `letter`.
///
/// Each occurrence of the generator is replaced in turn by its
/// differential, and each occurrence of the inverse `X` by `-X (dx) X`.
/// Other symbols, including differentials, are constants.
pub fn deriv(e: &Element, letter: Letter) -> Element {
    let d = Symbol::differential(letter);
    let inv = Symbol::inverse(letter);
    let mut terms = Vec::new();
    for (word, c) in e.terms() {
        let syms = word.symbols();
        for (i, &s) in syms.iter().enumerate() {
            if s.generator() != letter {
                continue;
            }
            let (prefix, suffix) = (&syms[..i], &syms[i + 1..]);
            let (middle, sign): (&[Symbol], f64) = match s.kind() {
                SymbolKind::Letter => (&[d], 1.0),
                SymbolKind::Inverse => (&[inv, d, inv], -1.0),
                SymbolKind::Differential => continue,
            };
            let w = Word::reduce(prefix.iter().chain(middle).chain(suffix).copied());
            terms.push((w, sign * c));
        }
    }
    Element::from_terms(terms)
}
