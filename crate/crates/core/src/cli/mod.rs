//! Command-line front end: batch subcommands and an interactive session.
//!
//! Exit codes: 0 success, 1 failed `matcheck`, 2 parse error, 3 evaluation
//! error (unbound letter, singular matrix, non-invertible replacement),
//! 4 usage error.

pub mod expr;
pub mod session;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, IsTerminal, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::calculus::{deriv, subs, Substitution};
use crate::element::Element;
use crate::format::{canonical_print, from_json, to_json};
use crate::matrix::{eval, homomorphism_check, Matrix, MatrixAssignment, MatrixError};
use crate::parser::{parse, ParseError};
use crate::random::{rfalg, RandSpec, SeededRng};
use crate::word::{Letter, Symbol};

pub use expr::{evaluate, ExprError, SyntaxError};
pub use session::{run_command, Session};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_EVAL: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "freealg", version, about = "Free algebra calculator")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression and print its canonical form
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Differentiate an expression with respect to a letter
    Deriv {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        letter: String,
    },
    /// Substitute letters in order: subs EXPR LETTER REPL [LETTER REPL ...]
    Subs {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(required = true, num_args = 2.., allow_hyphen_values = true)]
        pairs: Vec<String>,
    },
    /// Generate a seeded random element
    Rand {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        terms: usize,
        #[arg(long, default_value = "abc")]
        alphabet: String,
        #[arg(long, default_value_t = 1)]
        lenmin: usize,
        #[arg(long, default_value_t = 4)]
        lenmax: usize,
        #[arg(long, default_value_t = 1)]
        coeffmin: i64,
        #[arg(long, default_value_t = 9)]
        coeffmax: i64,
        #[arg(long)]
        inverse: bool,
        /// Emit JSON instead of the canonical text form
        #[arg(long)]
        json: bool,
    },
    /// Check eval(A)*eval(B) == eval(A*B) on random matrices
    Matcheck {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// JSON file with fixed matrix bindings overriding the random ones
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Parse the flat term syntax strictly (no bindings or operators)
    Parse {
        #[arg(allow_hyphen_values = true)]
        text: String,
    },
    /// Read an element in the JSON interchange format from a file (or - for stdin)
    FromJson { path: PathBuf },
    /// Evaluate an expression on the matrices of a fixture file
    Evalmat {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Print an expression in the JSON interchange format
    Json {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Interactive session reading commands from stdin
    Repl,
}

enum Failure {
    Usage(String),
    Parse(ParseError),
    Expr(ExprError),
    Matrix(MatrixError),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Expr(e) if e.is_syntax() => EXIT_PARSE,
            Failure::Expr(_) | Failure::Matrix(_) => EXIT_EVAL,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Parse(e) => e.to_string(),
            Failure::Expr(e) => e.to_string(),
            Failure::Matrix(e) => e.to_string(),
        }
    }
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        Failure::Expr(e)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<MatrixError> for Failure {
    fn from(e: MatrixError) -> Self {
        Failure::Matrix(e)
    }
}

fn letter_arg(s: &str) -> Result<Letter, Failure> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Letter::from_char(c),
        _ => None,
    }
    .ok_or_else(|| Failure::Usage(format!("`{s}` is not a lowercase letter")))
}

fn expression(s: &str) -> Result<Element, Failure> {
    Ok(evaluate(s, &Session::new())?)
}

/// Runs the CLI with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let command = cli.command.unwrap_or(Command::Repl);
    if let Command::Repl = command {
        return repl(input, out, err);
    }
    match batch(command, input, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn batch(command: Command, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = match command {
        Command::Eval { expr } => canonical_print(&expression(&expr)?),
        Command::Parse { text } => canonical_print(&parse(&text)?),
        Command::FromJson { path } => {
            let mut text = String::new();
            if path.as_os_str() == "-" {
                input
                    .read_to_string(&mut text)
                    .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            } else {
                text = fs::read_to_string(&path)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            }
            canonical_print(&from_json(&text)?)
        }
        Command::Evalmat { expr, fixture } => {
            let e = expression(&expr)?;
            let m = load_fixture(&fixture)?;
            serde_json::to_string(&eval(&e, &m)?).expect("matrix serializes")
        }
        Command::Json { expr } => to_json(&expression(&expr)?),
        Command::Deriv { expr, letter } => {
            let l = letter_arg(&letter)?;
            canonical_print(&deriv(&expression(&expr)?, l))
        }
        Command::Subs { expr, pairs } => {
            if pairs.len() % 2 != 0 {
                return Err(Failure::Usage(
                    "subs expects LETTER REPLACEMENT pairs".into(),
                ));
            }
            let e = expression(&expr)?;
            let mut s = Substitution::new();
            for pair in pairs.chunks(2) {
                s.push(letter_arg(&pair[0])?, expression(&pair[1])?);
            }
            canonical_print(&subs(&e, &s).map_err(ExprError::from)?)
        }
        Command::Rand {
            seed,
            terms,
            alphabet,
            lenmin,
            lenmax,
            coeffmin,
            coeffmax,
            inverse,
            json,
        } => {
            let alphabet = alphabet
                .chars()
                .map(|c| letter_arg(&c.to_string()))
                .collect::<Result<BTreeSet<_>, _>>()?;
            let spec = RandSpec {
                seed,
                n_terms: terms,
                alphabet,
                word_len: lenmin..=lenmax,
                coeff_range: coeffmin..=coeffmax,
                allow_inverse: inverse,
            };
            let e = rfalg(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
            if json {
                to_json(&e)
            } else {
                canonical_print(&e)
            }
        }
        Command::Matcheck {
            a,
            b,
            dim,
            seed,
            tol,
            fixture,
        } => {
            let a = expression(&a)?;
            let b = expression(&b)?;
            let fixture = fixture.map(|p| load_fixture(&p)).transpose()?;
            let dim = match (&fixture, dim) {
                (Some(f), Some(d)) if f.dim() != d => {
                    return Err(Failure::Usage(format!(
                        "--dim {d} does not match the fixture dimension {}",
                        f.dim()
                    )))
                }
                (Some(f), _) => f.dim(),
                (None, Some(d)) => d,
                (None, None) => 5,
            };
            if dim == 0 {
                return Err(Failure::Usage("--dim must be positive".into()));
            }
            let mut m = random_assignment(&[&a, &b], dim, seed);
            if let Some(f) = &fixture {
                m.merge(f)?;
            }
            let report = homomorphism_check(&a, &b, &m, tol)?;
            let verdict = if report.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{verdict} max_abs={:e} max_rel={:e}",
                report.max_abs_residual, report.max_rel_residual
            );
            return Ok(if report.pass {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            });
        }
        Command::Repl => unreachable!("handled by run"),
    };
    let _ = writeln!(out, "{text}");
    Ok(EXIT_OK)
}

fn load_fixture(path: &PathBuf) -> Result<MatrixAssignment, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("bad fixture {}: {e}", path.display())))
}

/// Standard normal matrices for every generator, then for every differential
/// token, each group in letter order.
fn random_assignment(elements: &[&Element], dim: usize, seed: u64) -> MatrixAssignment {
    let letters: BTreeSet<Letter> = elements.iter().flat_map(|e| e.generators()).collect();
    let mut m = MatrixAssignment::random(&letters, dim, seed);
    let diffs: Vec<Letter> = letters
        .iter()
        .copied()
        .filter(|&l| {
            elements
                .iter()
                .any(|e| e.contains_symbol(Symbol::differential(l)))
        })
        .collect();
    if !diffs.is_empty() {
        let mut rng = SeededRng::new(seed.wrapping_add(1));
        for l in diffs {
            m.bind_differential(l, Matrix::random_normal(dim, &mut rng))
                .expect("same dimension");
        }
    }
    m
}

fn repl(input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let interactive = std::io::stdin().is_terminal();
    let mut session = Session::new();
    let mut line = String::new();
    loop {
        if interactive {
            let _ = write!(out, "> ");
            let _ = out.flush();
        }
        line.clear();
        match input.read_line(&mut line) {
            Ok(0) => return EXIT_OK,
            Ok(_) => {}
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        }
        let cmd = line.trim_end_matches(['\n', '\r']);
        if cmd.trim_start().starts_with('#') {
            continue;
        }
        match run_command(cmd, &mut session) {
            Ok(text) if text.is_empty() => {}
            Ok(text) => {
                let _ = writeln!(out, "{text}");
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("freealg").chain(args.iter().copied());
        let code = run(argv, &mut input, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_and_errors() {
        assert_eq!(
            run_args(&["eval", "xxyx + 2zy"], ""),
            (0, "+ 1*xxyx + 2*zy\n".into(), String::new())
        );
        assert_eq!(run_args(&["eval", "2**x"], "").0, EXIT_PARSE);
        assert_eq!(run_args(&["eval", "subs(X, x = 1 + y)"], "").0, EXIT_EVAL);
        assert_eq!(run_args(&["bogus"], "").0, EXIT_USAGE);
        assert_eq!(run_args(&["deriv", "x", "X"], "").0, EXIT_USAGE);
        assert_eq!(run_args(&["subs", "x", "x"], "").0, EXIT_USAGE);
        assert_eq!(run_args(&["--version"], "").0, EXIT_OK);
        assert_eq!(run_args(&["--help"], "").0, EXIT_OK);
        assert_eq!(run_args(&["parse", "1.2.3"], "").0, EXIT_PARSE);
        assert_eq!(
            run_args(&["parse", "-2z + 3yyyy"], "").1,
            "+ 3*yyyy - 2*z\n"
        );
        let (code, out, _) = run_args(
            &["from-json", "-"],
            r#"{"terms":[{"word":[1,"da"],"coeff":2}]}"#,
        );
        assert_eq!((code, out.as_str()), (0, "+ 2*a(da)\n"));
        assert_eq!(
            run_args(&["from-json", "-"], r#"{"terms":[{"word":[0],"coeff":2}]}"#).0,
            EXIT_PARSE
        );
    }

    #[test]
    fn subcommands() {
        assert_eq!(
            run_args(&["deriv", "aaaxaa", "a"], "").1,
            "+ 1*aaaxa(da) + 1*aaax(da)a + 1*aa(da)xaa + 1*a(da)axaa + 1*(da)aaxaa\n"
        );
        assert_eq!(
            run_args(&["subs", "abccc", "b", "1+3x", "x", "1+d+2e"], "").1,
            "+ 4*accc + 3*adccc + 6*aeccc\n"
        );
        assert_eq!(
            run_args(&["json", "-2z + 3yyyy"], "").1,
            "{\"terms\":[{\"word\":[25,25,25,25],\"coeff\":3},{\"word\":[26],\"coeff\":-2}]}\n"
        );
        let (code, out, _) = run_args(&["rand", "--seed", "4"], "");
        assert_eq!(code, 0);
        assert_eq!(
            out.trim(),
            canonical_print(&rfalg(&RandSpec::with_seed(4)).unwrap())
        );
        assert_eq!(run_args(&["rand", "--alphabet", "aB"], "").0, EXIT_USAGE);
    }

    #[test]
    fn matcheck_passes() {
        let (code, out, _) = run_args(
            &[
                "matcheck",
                "xxyx + 2zy",
                "-2z + 3yyyy",
                "--dim",
                "5",
                "--seed",
                "1",
                "--tol",
                "1e-9",
            ],
            "",
        );
        assert_eq!(code, 0);
        assert!(out.starts_with("PASS max_abs="), "{out}");
        assert!(out.contains("max_rel="));
        let (code, out, _) = run_args(&["matcheck", "deriv(xx, x)", "x"], "");
        assert_eq!(code, 0, "{out}");
    }

    #[test]
    fn repl_session() {
        let (code, out, err) = run_args(&[], "A1 = xxyx + 2zy\nA1\n[a, b]\nA1 +\n# note\nA1*X\n");
        assert_eq!(code, 0);
        assert_eq!(out, "+ 1*xxyx + 2*zy\n+ 1*ab - 1*ba\n+ 1*xxy + 2*zyX\n");
        assert!(err.contains("position 4"), "{err}");
    }
}
