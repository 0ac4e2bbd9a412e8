//! Independent oracles shared by the integration suites.
//!
//! Nothing here calls `Word::reduce`, `Word::concat`, `Element::mul`,
//! `subs` or `deriv`; the oracles work on raw symbol vectors and plain maps.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use freealg::{
    eval, rfalg, Element, Letter, Matrix, MatrixAssignment, RandSpec, SeededRng, Symbol, Word,
};

pub fn letter(c: char) -> Letter {
    Letter::from_char(c).unwrap()
}

pub fn sym(c: char) -> Symbol {
    Symbol::from_char(c).unwrap()
}

/// Removes the rightmost adjacent inverse pair until none remain.
pub fn brute_reduce(mut v: Vec<Symbol>) -> Vec<Symbol> {
    loop {
        let hit = (0..v.len().saturating_sub(1))
            .rev()
            .find(|&i| v[i].cancels(v[i + 1]));
        match hit {
            Some(i) => {
                v.drain(i..i + 2);
            }
            None => return v,
        }
    }
}

/// Raw sum of terms: duplicates allowed, words not reduced.
pub type RawSum = Vec<(Vec<Symbol>, f64)>;

pub fn raw(e: &Element) -> RawSum {
    e.terms().map(|(w, c)| (w.symbols().to_vec(), c)).collect()
}

/// Collects a raw sum through the brute-force reducer into a map.
pub fn collect(terms: RawSum) -> BTreeMap<Vec<Symbol>, f64> {
    let mut m: BTreeMap<Vec<Symbol>, f64> = BTreeMap::new();
    for (w, c) in terms {
        *m.entry(brute_reduce(w)).or_insert(0.0) += c;
    }
    m.retain(|_, c| *c != 0.0);
    m
}

pub fn as_map(e: &Element) -> BTreeMap<Vec<Symbol>, f64> {
    e.terms().map(|(w, c)| (w.symbols().to_vec(), c)).collect()
}

pub fn raw_product(a: &RawSum, b: &RawSum) -> RawSum {
    let mut out = Vec::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            out.push((w, x * y));
        }
    }
    out
}

/// Expands a substitution of one letter by distributing over every symbol.
pub fn brute_subs(e: &Element, target: Letter, repl: &Element) -> BTreeMap<Vec<Symbol>, f64> {
    let repl_raw = raw(repl);
    let inverse_raw: Option<RawSum> = (repl.len() == 1).then(|| {
        let (w, c) = repl.terms().next().unwrap();
        let inv: Vec<Symbol> = w
            .symbols()
            .iter()
            .rev()
            .map(|s| s.invert().unwrap())
            .collect();
        vec![(inv, 1.0 / c)]
    });
    let mut out: RawSum = Vec::new();
    for (w, c) in e.terms() {
        let mut acc: RawSum = vec![(Vec::new(), c)];
        for &s in w.symbols() {
            let image: RawSum = if s == Symbol::letter(target) {
                repl_raw.clone()
            } else if s == Symbol::inverse(target) {
                inverse_raw.clone().expect("invertible replacement")
            } else {
                vec![(vec![s], 1.0)]
            };
            acc = raw_product(&acc, &image);
        }
        out.extend(acc);
    }
    collect(out)
}

/// Default random triple used by the law suites.
pub fn random_triple(seed: u64, allow_inverse: bool) -> (Element, Element, Element) {
    let mk = |k: u64| {
        rfalg(&RandSpec {
            seed: 3 * seed + k,
            allow_inverse,
            ..RandSpec::default()
        })
        .unwrap()
    };
    (mk(0), mk(1), mk(2))
}

pub fn two_letter_spec(seed: u64) -> RandSpec {
    RandSpec {
        seed,
        alphabet: ['a', 'b'].into_iter().map(letter).collect(),
        ..RandSpec::default()
    }
}

/// Forward difference of `eval(e)` along `direction` on `target`, compared
/// with `analytic` entry by entry as `|fd - an| / (1 + |an|)`.
pub fn finite_difference_error(
    e: &Element,
    m: &MatrixAssignment,
    target: Letter,
    direction: &Matrix,
    analytic: &Matrix,
    h: f64,
) -> f64 {
    let base = eval(e, m).unwrap();
    let mut shifted = m.clone();
    let moved = m.get(target).unwrap().add(&direction.scale(h));
    shifted.bind(target, moved).unwrap();
    let fd = eval(e, &shifted).unwrap().sub(&base).scale(1.0 / h);
    let n = fd.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let an = analytic[(i, j)];
            worst = worst.max((fd[(i, j)] - an).abs() / (1.0 + an.abs()));
        }
    }
    worst
}

/// Random matrices for `letters` plus a random direction matrix.
pub fn assignment_with_direction(
    letters: &BTreeSet<Letter>,
    dim: usize,
    seed: u64,
) -> (MatrixAssignment, Matrix) {
    let m = MatrixAssignment::random(letters, dim, seed);
    let mut rng = SeededRng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
    (m, Matrix::random_normal(dim, &mut rng))
}

pub fn word(s: &str) -> Word {
    Word::from_letters(s).unwrap()
}
