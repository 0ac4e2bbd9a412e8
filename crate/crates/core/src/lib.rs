//! The free algebra over the generators `a`..`z` and their inverses.
//!
//! An [`Element`] is a finite sum of reduced words with nonzero real
//! coefficients. Words multiply by concatenation followed by free
//! cancellation (`x` next to `X` vanishes), and products extend
//! bilinearly. The crate also provides a flat-term [`parse`]r, canonical
//! printing and JSON, substitution and differentiation, seeded random
//! elements, and evaluation on real matrices for numerical cross-checks.
//!
//! ```
//! use freealg::{parse, canonical_print};
//!
//! let a = parse("xxyx + 2zy").unwrap();
//! let b = parse("-2z + 3yyyy").unwrap();
//! assert_eq!(canonical_print(&(&a * &b)), "+ 3*xxyxyyyy - 2*xxyxz + 6*zyyyyy - 4*zyz");
//! ```

pub mod calculus;
pub mod cli;
pub mod element;
pub mod format;
pub mod matrix;
pub mod parser;
pub mod random;
pub mod word;

pub use calculus::{deriv, subs, CalculusError, Substitution};
pub use element::{AlgebraError, Element};
pub use format::{canonical_print, from_json, to_json};
pub use matrix::{
    eval, homomorphism_check, HomomorphismReport, Matrix, MatrixAssignment, MatrixError,
};
pub use parser::{parse, ParseError, ParseErrorKind};
pub use random::{rfalg, RandSpec, RandomError, SeededRng};
pub use word::{Letter, Symbol, SymbolKind, Word};
