//! Reproducible random elements.
//!
//! All randomness comes from PCG64 (PCG XSL-RR 128/64, the `rand_pcg::Pcg64`
//! generator) constructed as `Pcg64::new(seed as u128, DEFAULT_STREAM)`.
//! Derived draws use only `next_u64`, so another implementation of the same
//! generator reproduces every stream:
//!
//! * integer in `lo..=hi`: `lo + next_u64() % (hi - lo + 1)`
//! * uniform in `(0, 1)`: `((next_u64() >> 11) as f64 + 0.5) / 2^53`
//! * standard normal: Box-Muller on two uniforms `u1, u2`, keeping only
//!   `sqrt(-2 ln u1) * cos(2 pi u2)`
//! * coin flip: lowest bit of `next_u64()`

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand_core::Rng;
use rand_pcg::Pcg64;
use thiserror::Error;

use crate::element::Element;
use crate::word::{Letter, Symbol, Word};

/// PCG's documented default stream constant.
pub const DEFAULT_STREAM: u128 = 0x0a02_bdbf_7bb3_c0a7_ac28_fa16_a64a_bf96;

const MAX_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandomError {
    #[error("invalid random spec: {0}")]
    InvalidSpec(&'static str),
    #[error("random spec produced the zero element {0} times in a row")]
    DegenerateSpec(usize),
}

/// Seeded stream shared by element and matrix generation.
#[derive(Debug)]
pub struct SeededRng(Pcg64);

impl SeededRng {
    pub fn new(seed: u64) -> SeededRng {
        SeededRng(Pcg64::new(u128::from(seed), DEFAULT_STREAM))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn int_in(&mut self, range: &RangeInclusive<i64>) -> i64 {
        let span = (*range.end() as i128 - *range.start() as i128 + 1) as u128;
        let off = u128::from(self.next_u64()) % span;
        (*range.start() as i128 + off as i128) as i64
    }

    pub fn index_below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform_open();
        let u2 = self.uniform_open();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Parameters for [`rfalg`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandSpec {
    pub seed: u64,
    pub n_terms: usize,
    pub alphabet: BTreeSet<Letter>,
    pub word_len: RangeInclusive<usize>,
    pub coeff_range: RangeInclusive<i64>,
    pub allow_inverse: bool,
}

impl Default for RandSpec {
    fn default() -> RandSpec {
        RandSpec {
            seed: 0,
            n_terms: 5,
            alphabet: (1..=3).filter_map(Letter::new).collect(),
            word_len: 1..=4,
            coeff_range: 1..=9,
            allow_inverse: false,
        }
    }
}

impl RandSpec {
    pub fn with_seed(seed: u64) -> RandSpec {
        RandSpec {
            seed,
            ..RandSpec::default()
        }
    }

    pub fn validate(&self) -> Result<(), RandomError> {
        if self.n_terms == 0 {
            return Err(RandomError::InvalidSpec("n_terms must be at least 1"));
        }
        if self.alphabet.is_empty() {
            return Err(RandomError::InvalidSpec("alphabet is empty"));
        }
        if self.word_len.is_empty() {
            return Err(RandomError::InvalidSpec("word length range is empty"));
        }
        if self.coeff_range.is_empty() {
            return Err(RandomError::InvalidSpec("coefficient range is empty"));
        }
        Ok(())
    }
}

/// Draws a random element; equal specs give equal elements.
///
/// Redraws (continuing the same stream) while the result is zero.
pub fn rfalg(spec: &RandSpec) -> Result<Element, RandomError> {
    spec.validate()?;
    let mut rng = SeededRng::new(spec.seed);
    let letters: Vec<Letter> = spec.alphabet.iter().copied().collect();
    let lens = (*spec.word_len.start() as i64)..=(*spec.word_len.end() as i64);
    for _ in 0..MAX_RETRIES {
        let mut terms = Vec::with_capacity(spec.n_terms);
        for _ in 0..spec.n_terms {
            let len = rng.int_in(&lens) as usize;
            let mut symbols = Vec::with_capacity(len);
            for _ in 0..len {
                let letter = letters[rng.index_below(letters.len())];
                let inverse = spec.allow_inverse && rng.coin();
                symbols.push(if inverse {
                    Symbol::inverse(letter)
                } else {
                    Symbol::letter(letter)
                });
            }
            let coeff = rng.int_in(&spec.coeff_range) as f64;
            terms.push((Word::reduce(symbols), coeff));
        }
        let e = Element::from_terms(terms);
        if !e.is_zero() {
            return Ok(e);
        }
    }
    Err(RandomError::DegenerateSpec(MAX_RETRIES))
}
