//! Evaluation of elements on square real matrices.
//!
//! Matrices obey every relation of the free algebra, so evaluating a
//! product of elements must agree with multiplying their evaluations. This
//! module provides a small dense matrix type, the evaluation map and the
//! residual check built on it.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::element::Element;
use crate::random::SeededRng;
use crate::word::{Letter, SymbolKind};

/// Relative pivot threshold below which a matrix is treated as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("letter {0} has no matrix binding")]
    UnboundLetter(Letter),
    #[error("differential (d{0}) has no matrix binding")]
    UnboundDifferential(Letter),
    #[error("matrix bound to {0} is singular, so {inv} cannot be evaluated", inv = .0.inverse_char())]
    SingularMatrix(Letter),
    #[error("matrix is {found}x{found}, expected {expected}x{expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid matrix: {0}")]
    Invalid(String),
}

/// Dense square matrix, row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = MatrixError;

    fn try_from(j: MatrixJson) -> Result<Matrix, MatrixError> {
        Matrix::from_rows(j.dim, j.rows)
    }
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> MatrixJson {
        MatrixJson {
            dim: m.dim,
            rows: m.rows(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("dim", &self.dim)
            .field("rows", &self.rows())
            .finish()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| format!("{:>14.6e}", self[(i, j)]))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Matrix {
    pub fn zeros(dim: usize) -> Matrix {
        Matrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Matrix {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(dim: usize, rows: Vec<Vec<f64>>) -> Result<Matrix, MatrixError> {
        if dim == 0 {
            return Err(MatrixError::Invalid("dimension must be positive".into()));
        }
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(MatrixError::Invalid(format!(
                "expected {dim} rows of {dim} entries"
            )));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(MatrixError::Invalid("entries must be finite".into()));
        }
        Ok(Matrix { dim, data })
    }

    /// Entries drawn row by row from the standard normal stream.
    pub fn random_normal(dim: usize, rng: &mut SeededRng) -> Matrix {
        Matrix {
            dim,
            data: (0..dim * dim).map(|_| rng.standard_normal()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|a| c * a).collect(),
        }
    }

    /// Inverse by LU factorization with partial pivoting. Returns `None` when
    /// a pivot falls below `PIVOT_TOLERANCE * max|entry|`.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.dim;
        let threshold = PIVOT_TOLERANCE * self.max_abs();
        if threshold == 0.0 {
            return None;
        }
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| lu[(a, k)].abs().total_cmp(&lu[(b, k)].abs()))
                .expect("nonempty pivot column");
            if lu[(p, k)].abs() <= threshold {
                return None;
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    lu[(i, j)] -= factor * lu[(k, j)];
                }
            }
        }

        let mut inv = Matrix::zeros(n);
        let mut col = vec![0.0; n];
        for c in 0..n {
            // forward substitution on the permuted unit column
            for i in 0..n {
                let mut s = if perm[i] == c { 1.0 } else { 0.0 };
                for j in 0..i {
                    s -= lu[(i, j)] * col[j];
                }
                col[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for j in i + 1..n {
                    s -= lu[(i, j)] * col[j];
                }
                col[i] = s / lu[(i, i)];
            }
            for i in 0..n {
                inv[(i, c)] = col[i];
            }
        }
        Some(inv)
    }
}

/// Matrices bound to generators and to their differential tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AssignmentJson", into = "AssignmentJson")]
pub struct MatrixAssignment {
    dim: usize,
    bindings: BTreeMap<Letter, Matrix>,
    diff_bindings: BTreeMap<Letter, Matrix>,
}

/// `{"dim": n, "bindings": {"x": matrix, ...}, "diff_bindings": {...}}`
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentJson {
    dim: usize,
    #[serde(default)]
    bindings: BTreeMap<String, Matrix>,
    #[serde(default)]
    diff_bindings: BTreeMap<String, Matrix>,
}

fn letter_key(s: &str) -> Result<Letter, MatrixError> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Letter::from_char(c),
        _ => None,
    }
    .ok_or_else(|| MatrixError::Invalid(format!("binding key {s:?} is not a lowercase letter")))
}

impl TryFrom<AssignmentJson> for MatrixAssignment {
    type Error = MatrixError;

    fn try_from(j: AssignmentJson) -> Result<MatrixAssignment, MatrixError> {
        let mut m = MatrixAssignment::new(j.dim);
        for (k, v) in j.bindings {
            m.bind(letter_key(&k)?, v)?;
        }
        for (k, v) in j.diff_bindings {
            m.bind_differential(letter_key(&k)?, v)?;
        }
        Ok(m)
    }
}

impl From<MatrixAssignment> for AssignmentJson {
    fn from(m: MatrixAssignment) -> AssignmentJson {
        let keyed = |b: BTreeMap<Letter, Matrix>| {
            b.into_iter()
                .map(|(l, v)| (l.as_char().to_string(), v))
                .collect()
        };
        AssignmentJson {
            dim: m.dim,
            bindings: keyed(m.bindings),
            diff_bindings: keyed(m.diff_bindings),
        }
    }
}

impl MatrixAssignment {
    pub fn new(dim: usize) -> MatrixAssignment {
        MatrixAssignment {
            dim,
            bindings: BTreeMap::new(),
            diff_bindings: BTreeMap::new(),
        }
    }

    /// Standard normal matrices for `letters`, drawn in letter order from a
    /// single stream.
    pub fn random(letters: &BTreeSet<Letter>, dim: usize, seed: u64) -> MatrixAssignment {
        let mut rng = SeededRng::new(seed);
        let mut m = MatrixAssignment::new(dim);
        for &l in letters {
            m.bindings.insert(l, Matrix::random_normal(dim, &mut rng));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, m: &Matrix) -> Result<(), MatrixError> {
        if m.dim != self.dim {
            return Err(MatrixError::DimensionMismatch {
                expected: self.dim,
                found: m.dim,
            });
        }
        Ok(())
    }

    pub fn bind(&mut self, letter: Letter, m: Matrix) -> Result<(), MatrixError> {
        self.check_dim(&m)?;
        self.bindings.insert(letter, m);
        Ok(())
    }

    pub fn bind_differential(&mut self, letter: Letter, m: Matrix) -> Result<(), MatrixError> {
        self.check_dim(&m)?;
        self.diff_bindings.insert(letter, m);
        Ok(())
    }

    pub fn get(&self, letter: Letter) -> Option<&Matrix> {
        self.bindings.get(&letter)
    }

    pub fn get_differential(&self, letter: Letter) -> Option<&Matrix> {
        self.diff_bindings.get(&letter)
    }

    /// Overlays every binding of `other` onto `self`.
    pub fn merge(&mut self, other: &MatrixAssignment) -> Result<(), MatrixError> {
        for (&l, m) in &other.bindings {
            self.bind(l, m.clone())?;
        }
        for (&l, m) in &other.diff_bindings {
            self.bind_differential(l, m.clone())?;
        }
        Ok(())
    }
}

/// Maps each word to the ordered product of its symbols' matrices and sums
/// the terms. The empty word maps to the identity.
pub fn eval(e: &Element, m: &MatrixAssignment) -> Result<Matrix, MatrixError> {
    let mut inverses: BTreeMap<Letter, Matrix> = BTreeMap::new();
    let mut total = Matrix::zeros(m.dim);
    for (word, c) in e.terms() {
        let mut acc: Option<Matrix> = None;
        for &s in word.symbols() {
            let l = s.generator();
            let factor = match s.kind() {
                SymbolKind::Letter => m.get(l).ok_or(MatrixError::UnboundLetter(l))?,
                SymbolKind::Differential => m
                    .get_differential(l)
                    .ok_or(MatrixError::UnboundDifferential(l))?,
                SymbolKind::Inverse => {
                    if let Entry::Vacant(slot) = inverses.entry(l) {
                        let base = m.get(l).ok_or(MatrixError::UnboundLetter(l))?;
                        slot.insert(base.inverse().ok_or(MatrixError::SingularMatrix(l))?);
                    }
                    &inverses[&l]
                }
            };
            acc = Some(match acc {
                None => factor.clone(),
                Some(a) => a.matmul(factor),
            });
        }
        let image = acc.unwrap_or_else(|| Matrix::identity(m.dim));
        total = total.add(&image.scale(c));
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomomorphismReport {
    pub max_abs_residual: f64,
    /// `max_abs_residual / (1 + max|eval(a*b)|)`
    pub max_rel_residual: f64,
    pub pass: bool,
}

/// Compares `eval(a) * eval(b)` against `eval(a * b)`.
pub fn homomorphism_check(
    a: &Element,
    b: &Element,
    m: &MatrixAssignment,
    tol: f64,
) -> Result<HomomorphismReport, MatrixError> {
    let lhs = eval(a, m)?.matmul(&eval(b, m)?);
    let rhs = eval(&a.mul(b), m)?;
    let max_abs_residual = lhs.sub(&rhs).max_abs();
    let max_rel_residual = max_abs_residual / (1.0 + rhs.max_abs());
    Ok(HomomorphismReport {
        max_abs_residual,
        max_rel_residual,
        pass: max_rel_residual <= tol,
    })
}
