//! Elements of the free algebra and their ring operations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::word::{Letter, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("negative power {0}: elements are not invertible in general")]
    NegativePower(i64),
}

/// A finite sum of reduced words with nonzero real coefficients.
///
/// Terms are kept in word collation order, so iteration and printing are
/// deterministic. Every constructor and operation prunes exact zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Element {
    terms: BTreeMap<Word, f64>,
}

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }

    pub fn one() -> Element {
        Element::constant(1.0)
    }

    pub fn constant(c: f64) -> Element {
        Element::monomial(Word::empty(), c)
    }

    pub fn monomial(word: Word, coeff: f64) -> Element {
        let mut terms = BTreeMap::new();
        if coeff != 0.0 {
            terms.insert(word, coeff);
        }
        Element { terms }
    }

    pub fn symbol(symbol: Symbol) -> Element {
        Element::monomial(Word::single(symbol), 1.0)
    }

    /// The generator itself as a one-term element.
    pub fn generator(letter: Letter) -> Element {
        Element::symbol(Symbol::letter(letter))
    }

    /// Collects like terms and drops zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = (Word, f64)>>(terms: I) -> Element {
        let mut e = Element::zero();
        for (w, c) in terms {
            e.accumulate(w, c);
        }
        e
    }

    fn accumulate(&mut self, word: Word, coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + coeff;
                if sum == 0.0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in collation order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(&Word, f64)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    pub fn coeff(&self, word: &Word) -> f64 {
        self.terms.get(word).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeff(&Word::empty())
    }

    pub fn support(&self) -> BTreeSet<Word> {
        self.terms.keys().cloned().collect()
    }

    /// Generators appearing in any form (letter, inverse or differential).
    pub fn generators(&self) -> BTreeSet<Letter> {
        self.terms
            .keys()
            .flat_map(|w| w.symbols().iter().map(|s| s.generator()))
            .collect()
    }

    pub fn contains_symbol(&self, symbol: Symbol) -> bool {
        self.terms.keys().any(|w| w.contains(symbol))
    }

    pub fn has_differentials(&self) -> bool {
        self.terms
            .keys()
            .any(|w| w.symbols().iter().any(|s| s.is_differential()))
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.accumulate(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.accumulate(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Element {
        Element {
            terms: self.terms.iter().map(|(w, &c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Element {
        Element::from_terms(self.terms().map(|(w, x)| (w.clone(), c * x)))
    }

    /// Bilinear extension of word concatenation.
    pub fn mul(&self, other: &Element) -> Element {
        let mut out = Element::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.accumulate(u.concat(v), a * b);
            }
        }
        out
    }

    pub fn pow(&self, n: i64) -> Result<Element, AlgebraError> {
        if n < 0 {
            return Err(AlgebraError::NegativePower(n));
        }
        let mut acc = Element::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Element) -> Element {
        self.mul(other).sub(&other.mul(self))
    }

    /// True when no coefficient is zero and every word is reduced.
    pub fn is_normalized(&self) -> bool {
        self.terms
            .iter()
            .all(|(w, &c)| c != 0.0 && Word::is_reduced(w.symbols()))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::canonical_print(self))
    }
}

impl From<f64> for Element {
    fn from(c: f64) -> Element {
        Element::constant(c)
    }
}

impl From<Word> for Element {
    fn from(w: Word) -> Element {
        Element::monomial(w, 1.0)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                Element::$method(self, rhs)
            }
        }
        impl $tr<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                Element::$method(&self, &rhs)
            }
        }
        impl $tr<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                Element::$method(&self, rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element::neg(self)
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element::neg(&self)
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}
