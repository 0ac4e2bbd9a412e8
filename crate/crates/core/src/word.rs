//! Generators, symbols and reduced words.

use std::cmp::Ordering;
use std::fmt;

/// One of the 26 generators `a`..`z`, stored as its 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// Returns the generator with index `index` (1 is `a`, 26 is `z`).
    pub fn new(index: u8) -> Option<Letter> {
        (1..=26).contains(&index).then_some(Letter(index))
    }

    /// Lowercase ASCII letters only.
    pub fn from_char(c: char) -> Option<Letter> {
        c.is_ascii_lowercase().then(|| Letter(c as u8 - b'a' + 1))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn as_char(self) -> char {
        (b'a' + self.0 - 1) as char
    }

    pub fn inverse_char(self) -> char {
        (b'A' + self.0 - 1) as char
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Letter,
    Inverse,
    Differential,
}

/// A single occurrence of a generator, its group inverse, or the
/// differential token `(d·)` of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    kind: SymbolKind,
    letter: Letter,
}

impl Symbol {
    pub fn letter(letter: Letter) -> Symbol {
        Symbol {
            kind: SymbolKind::Letter,
            letter,
        }
    }

    pub fn inverse(letter: Letter) -> Symbol {
        Symbol {
            kind: SymbolKind::Inverse,
            letter,
        }
    }

    pub fn differential(letter: Letter) -> Symbol {
        Symbol {
            kind: SymbolKind::Differential,
            letter,
        }
    }

    /// Lowercase is the generator, uppercase its inverse.
    pub fn from_char(c: char) -> Option<Symbol> {
        if c.is_ascii_lowercase() {
            Letter::from_char(c).map(Symbol::letter)
        } else if c.is_ascii_uppercase() {
            Letter::from_char(c.to_ascii_lowercase()).map(Symbol::inverse)
        } else {
            None
        }
    }

    /// Signed-integer encoding: `+i` for a letter, `-i` for its inverse.
    /// Differentials have no integer code.
    pub fn from_signed(code: i64) -> Option<Symbol> {
        let letter = Letter::new(u8::try_from(code.unsigned_abs()).ok()?)?;
        if code > 0 {
            Some(Symbol::letter(letter))
        } else {
            Some(Symbol::inverse(letter))
        }
    }

    pub fn to_signed(self) -> Option<i64> {
        let i = i64::from(self.letter.index());
        match self.kind {
            SymbolKind::Letter => Some(i),
            SymbolKind::Inverse => Some(-i),
            SymbolKind::Differential => None,
        }
    }

    pub fn kind(self) -> SymbolKind {
        self.kind
    }

    pub fn generator(self) -> Letter {
        self.letter
    }

    pub fn is_differential(self) -> bool {
        self.kind == SymbolKind::Differential
    }

    /// Group inverse; differentials have none.
    pub fn invert(self) -> Option<Symbol> {
        match self.kind {
            SymbolKind::Letter => Some(Symbol::inverse(self.letter)),
            SymbolKind::Inverse => Some(Symbol::letter(self.letter)),
            SymbolKind::Differential => None,
        }
    }

    /// True when `self` followed by `other` cancels to the empty word.
    pub fn cancels(self, other: Symbol) -> bool {
        self.letter == other.letter
            && matches!(
                (self.kind, other.kind),
                (SymbolKind::Letter, SymbolKind::Inverse)
                    | (SymbolKind::Inverse, SymbolKind::Letter)
            )
    }

    // ASCII order of the printed form: uppercase first, then each lowercase
    // letter immediately followed by its differential.
    fn collation_key(self) -> u8 {
        let i = self.letter.index();
        match self.kind {
            SymbolKind::Inverse => i,
            SymbolKind::Letter => 32 + 2 * i,
            SymbolKind::Differential => 33 + 2 * i,
        }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.collation_key().cmp(&other.collation_key())
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Letter => write!(f, "{}", self.letter.as_char()),
            SymbolKind::Inverse => write!(f, "{}", self.letter.inverse_char()),
            SymbolKind::Differential => write!(f, "(d{})", self.letter.as_char()),
        }
    }
}

/// A freely reduced word: no symbol is ever adjacent to its group inverse.
///
/// The derived ordering is lexicographic over the symbol collation, so a
/// proper prefix sorts before all of its extensions.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Free reduction with a stack: each incoming symbol either cancels the
    /// current top or is pushed, which handles cascading cancellations in a
    /// single pass.
    pub fn reduce<I: IntoIterator<Item = Symbol>>(symbols: I) -> Word {
        let mut out: Vec<Symbol> = Vec::new();
        for s in symbols {
            match out.last() {
                Some(&top) if top.cancels(s) => {
                    out.pop();
                }
                _ => out.push(s),
            }
        }
        Word(out)
    }

    pub fn single(symbol: Symbol) -> Word {
        Word(vec![symbol])
    }

    /// Parses a run of ASCII letters (`x` a generator, `X` its inverse).
    pub fn from_letters(s: &str) -> Option<Word> {
        s.chars()
            .map(Symbol::from_char)
            .collect::<Option<Vec<_>>>()
            .map(Word::reduce)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation followed by reduction at the junction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut left = self.0.len();
        let mut right = 0;
        while left > 0 && right < other.0.len() && self.0[left - 1].cancels(other.0[right]) {
            left -= 1;
            right += 1;
        }
        let mut out = Vec::with_capacity(left + other.0.len() - right);
        out.extend_from_slice(&self.0[..left]);
        out.extend_from_slice(&other.0[right..]);
        Word(out)
    }

    /// Reversed word with every symbol inverted, or `None` if the word holds
    /// a differential token.
    pub fn inverse(&self) -> Option<Word> {
        self.0
            .iter()
            .rev()
            .map(|s| s.invert())
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn is_reduced(symbols: &[Symbol]) -> bool {
        symbols.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        self.0.contains(&symbol)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
