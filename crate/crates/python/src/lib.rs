//! Python bindings for `freealg`.
//!
//! Exposes `FreeAlg` (an immutable free-algebra element with the usual
//! operators) together with parsing, random generation, calculus and the
//! matrix homomorphism check.

use std::collections::BTreeSet;

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use freealg::{
    calculus, canonical_print, deriv, eval, from_json, homomorphism_check, parse, rfalg, to_json,
    Element, Letter, Matrix, MatrixAssignment, MatrixError, RandSpec, Substitution, Word,
};

create_exception!(freealg_py, ParseError, PyValueError);
create_exception!(freealg_py, EvaluationError, PyArithmeticError);

fn parse_err(e: freealg::ParseError) -> PyErr {
    ParseError::new_err(e.to_string())
}

fn eval_err(e: impl std::fmt::Display) -> PyErr {
    EvaluationError::new_err(e.to_string())
}

fn letter_arg(s: &str) -> PyResult<Letter> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Letter::from_char(c),
        _ => None,
    }
    .ok_or_else(|| PyValueError::new_err(format!("{s:?} is not a lowercase letter")))
}

/// An element of the free algebra.
#[pyclass(name = "FreeAlg", module = "freealg_py", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyFreeAlg {
    inner: Element,
}

impl From<Element> for PyFreeAlg {
    fn from(inner: Element) -> Self {
        PyFreeAlg { inner }
    }
}

/// Anything that converts to an element: a `FreeAlg`, a number, or a string
/// in the flat term syntax.
#[derive(FromPyObject)]
enum Operand {
    Elem(PyFreeAlg),
    Num(f64),
    Text(String),
}

impl Operand {
    fn into_element(self) -> PyResult<Element> {
        match self {
            Operand::Elem(e) => Ok(e.inner),
            Operand::Num(c) => Ok(Element::constant(c)),
            Operand::Text(s) => parse(&s).map_err(parse_err),
        }
    }
}

#[pymethods]
impl PyFreeAlg {
    #[new]
    #[pyo3(signature = (text = ""))]
    fn new(text: &str) -> PyResult<Self> {
        parse(text).map(Into::into).map_err(parse_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json(text).map(Into::into).map_err(parse_err)
    }

    fn to_json(&self) -> String {
        to_json(&self.inner)
    }

    fn __str__(&self) -> String {
        canonical_print(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("FreeAlg('{}')", canonical_print(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __bool__(&self) -> bool {
        !self.inner.is_zero()
    }

    fn __add__(&self, other: Operand) -> PyResult<Self> {
        Ok(self.inner.add(&other.into_element()?).into())
    }

    fn __radd__(&self, other: Operand) -> PyResult<Self> {
        Ok(other.into_element()?.add(&self.inner).into())
    }

    fn __sub__(&self, other: Operand) -> PyResult<Self> {
        Ok(self.inner.sub(&other.into_element()?).into())
    }

    fn __rsub__(&self, other: Operand) -> PyResult<Self> {
        Ok(other.into_element()?.sub(&self.inner).into())
    }

    fn __mul__(&self, other: Operand) -> PyResult<Self> {
        Ok(self.inner.mul(&other.into_element()?).into())
    }

    fn __rmul__(&self, other: Operand) -> PyResult<Self> {
        Ok(other.into_element()?.mul(&self.inner).into())
    }

    fn __neg__(&self) -> Self {
        self.inner.neg().into()
    }

    fn __pow__(&self, n: i64, modulo: Option<Py<PyAny>>) -> PyResult<Self> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular powers are not supported"));
        }
        self.inner
            .pow(n)
            .map(Into::into)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// `self * other - other * self`
    fn commutator(&self, other: Operand) -> PyResult<Self> {
        Ok(self.inner.commutator(&other.into_element()?).into())
    }

    fn deriv(&self, letter: &str) -> PyResult<Self> {
        Ok(deriv(&self.inner, letter_arg(letter)?).into())
    }

    /// Sequential substitution. Pairs may be given positionally as
    /// `(letter, replacement)` tuples and/or as keyword arguments; keywords
    /// are applied after positional pairs, in the order written.
    #[pyo3(signature = (*pairs, **kwargs))]
    fn subs(
        &self,
        pairs: &Bound<'_, PyTuple>,
        kwargs: Option<&Bound<'_, PyDict>>,
    ) -> PyResult<Self> {
        let mut s = Substitution::new();
        for pair in pairs.iter() {
            let (letter, repl): (String, Operand) = pair.extract()?;
            s.push(letter_arg(&letter)?, repl.into_element()?);
        }
        if let Some(kw) = kwargs {
            for (k, v) in kw.iter() {
                let letter: String = k.extract()?;
                let repl: Operand = v.extract()?;
                s.push(letter_arg(&letter)?, repl.into_element()?);
            }
        }
        calculus::subs(&self.inner, &s)
            .map(Into::into)
            .map_err(eval_err)
    }

    fn coeff(&self, word: &str) -> PyResult<f64> {
        let w = Word::from_letters(word)
            .ok_or_else(|| PyValueError::new_err(format!("{word:?} is not a word")))?;
        Ok(self.inner.coeff(&w))
    }

    fn constant_term(&self) -> f64 {
        self.inner.constant_term()
    }

    /// `(word, coefficient)` pairs in canonical order.
    fn terms(&self) -> Vec<(String, f64)> {
        self.inner
            .terms()
            .map(|(w, c)| (w.to_string(), c))
            .collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }
}

#[pyfunction]
fn commutator(a: Operand, b: Operand) -> PyResult<PyFreeAlg> {
    Ok(a.into_element()?.commutator(&b.into_element()?).into())
}

#[pyfunction]
#[pyo3(name = "parse")]
fn parse_py(text: &str) -> PyResult<PyFreeAlg> {
    PyFreeAlg::new(text)
}

fn alphabet(letters: &str) -> PyResult<BTreeSet<Letter>> {
    letters
        .chars()
        .map(|c| letter_arg(&c.to_string()))
        .collect()
}

#[pyfunction]
#[pyo3(name = "rfalg", signature = (seed = 0, n_terms = 5, letters = "abc", min_len = 1, max_len = 4, min_coeff = 1, max_coeff = 9, allow_inverse = false))]
#[allow(clippy::too_many_arguments)]
fn rfalg_py(
    seed: u64,
    n_terms: usize,
    letters: &str,
    min_len: usize,
    max_len: usize,
    min_coeff: i64,
    max_coeff: i64,
    allow_inverse: bool,
) -> PyResult<PyFreeAlg> {
    let spec = RandSpec {
        seed,
        n_terms,
        alphabet: alphabet(letters)?,
        word_len: min_len..=max_len,
        coeff_range: min_coeff..=max_coeff,
        allow_inverse,
    };
    rfalg(&spec)
        .map(Into::into)
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

fn to_matrix(rows: Vec<Vec<f64>>) -> Result<Matrix, MatrixError> {
    Matrix::from_rows(rows.len(), rows)
}

/// Evaluates `e` with letters bound to the given square matrices (lists of
/// rows). `differentials` binds the `(dx)` tokens.
#[pyfunction]
#[pyo3(name = "eval_matrix", signature = (e, bindings, differentials = None))]
fn eval_matrix_py(
    e: Operand,
    bindings: std::collections::BTreeMap<String, Vec<Vec<f64>>>,
    differentials: Option<std::collections::BTreeMap<String, Vec<Vec<f64>>>>,
) -> PyResult<Vec<Vec<f64>>> {
    let e = e.into_element()?;
    let dim = bindings
        .values()
        .chain(differentials.iter().flat_map(|d| d.values()))
        .map(Vec::len)
        .next()
        .unwrap_or(1);
    let mut m = MatrixAssignment::new(dim);
    for (k, rows) in bindings {
        m.bind(letter_arg(&k)?, to_matrix(rows).map_err(eval_err)?)
            .map_err(eval_err)?;
    }
    for (k, rows) in differentials.unwrap_or_default() {
        m.bind_differential(letter_arg(&k)?, to_matrix(rows).map_err(eval_err)?)
            .map_err(eval_err)?;
    }
    eval(&e, &m).map(|r| r.rows()).map_err(eval_err)
}

/// Compares `eval(a) @ eval(b)` with `eval(a * b)` on seeded standard-normal
/// matrices. Returns `(max_abs_residual, max_rel_residual, passed)`.
#[pyfunction]
#[pyo3(name = "homomorphism_check", signature = (a, b, dim = 5, seed = 1, tol = 1e-9))]
fn homomorphism_check_py(
    a: Operand,
    b: Operand,
    dim: usize,
    seed: u64,
    tol: f64,
) -> PyResult<(f64, f64, bool)> {
    if dim == 0 {
        return Err(PyValueError::new_err("dim must be positive"));
    }
    let a = a.into_element()?;
    let b = b.into_element()?;
    let letters: BTreeSet<Letter> = a.generators().union(&b.generators()).copied().collect();
    let m = MatrixAssignment::random(&letters, dim, seed);
    let r = homomorphism_check(&a, &b, &m, tol).map_err(eval_err)?;
    Ok((r.max_abs_residual, r.max_rel_residual, r.pass))
}

#[pymodule]
fn freealg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyFreeAlg>()?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("EvaluationError", m.py().get_type::<EvaluationError>())?;
    m.add_function(wrap_pyfunction!(parse_py, m)?)?;
    m.add_function(wrap_pyfunction!(commutator, m)?)?;
    m.add_function(wrap_pyfunction!(rfalg_py, m)?)?;
    m.add_function(wrap_pyfunction!(eval_matrix_py, m)?)?;
    m.add_function(wrap_pyfunction!(homomorphism_check_py, m)?)?;
    Ok(())
}
