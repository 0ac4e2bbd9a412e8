//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p freealg --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

use common::*;
use freealg::{
    canonical_print, deriv, eval, from_json, homomorphism_check, parse, rfalg, subs, to_json,
    Element, MatrixAssignment, RandSpec, Substitution, Symbol, Word,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> Element {
    parse(s).unwrap()
}

fn golden_outputs() -> Outcome {
    let a = p("xxyx + 2zy");
    let b = p("-2z + 3yyyy");
    let c = p("3 + 5X - 2Xyx");
    let cases: Vec<(&str, Element, &str)> = vec![
        ("A+B", &a + &b, "+ 1*xxyx + 3*yyyy - 2*z + 2*zy"),
        ("A*B", &a * &b, "+ 3*xxyxyyyy - 2*xxyxz + 6*zyyyyy - 4*zyz"),
        ("B*A", &b * &a, "+ 3*yyyyxxyx + 6*yyyyzy - 2*zxxyx - 4*zzy"),
        ("A*X", &a * &p("X"), "+ 1*xxy + 2*zyX"),
        ("C", c.clone(), "+ 3 + 5*X - 2*Xyx"),
        (
            "A*C",
            &a * &c,
            "+ 5*xxy + 3*xxyx - 2*xxyyx + 6*zy + 10*zyX - 4*zyXyx",
        ),
        (
            "C*A",
            &c * &a,
            "- 2*Xyxxxyx - 4*Xyxzy + 10*Xzy + 3*xxyx + 5*xyx + 6*zy",
        ),
        ("[a,b]", p("a").commutator(&p("b")), "+ 1*ab - 1*ba"),
        (
            "subs(aabccc, b=1+3x)",
            subs(
                &p("aabccc"),
                &Substitution::new().then(letter('b'), p("1+3x")),
            )
            .unwrap(),
            "+ 1*aaccc + 3*aaxccc",
        ),
        (
            "subs(abccc, b=1+3x, x=1+d+2e)",
            subs(
                &p("abccc"),
                &Substitution::new()
                    .then(letter('b'), p("1+3x"))
                    .then(letter('x'), p("1+d+2e")),
            )
            .unwrap(),
            "+ 4*accc + 3*adccc + 6*aeccc",
        ),
    ];
    for (name, value, expected) in &cases {
        let printed = canonical_print(value);
        ensure(printed == *expected, || {
            format!("{name}: printed {printed:?}, expected {expected:?}")
        })?;
        ensure(*value == p(expected), || {
            format!("{name}: not algebraically equal to {expected:?}")
        })?;
    }

    let d = deriv(&p("aaaxaa"), letter('a'));
    let expected = "+ 1*aaaxa(da) + 1*aaax(da)a + 1*aa(da)xaa + 1*a(da)axaa + 1*(da)aaxaa";
    ensure(canonical_print(&d) == expected, || {
        format!("deriv: printed {}", canonical_print(&d))
    })?;
    let da = Symbol::differential(letter('a'));
    let hand = Element::from_terms((0..6).filter(|&i| i != 3).map(|i| {
        let mut syms: Vec<Symbol> = "aaaxaa".chars().map(sym).collect();
        syms[i] = da;
        (Word::reduce(syms), 1.0)
    }));
    ensure(d == hand, || {
        "deriv: not algebraically equal to the expected sum".into()
    })?;
    Ok(format!(
        "{} expressions match term for term",
        cases.len() + 1
    ))
}

fn law_suite() -> Outcome {
    let mut triples = vec![(p("xxyx + 2zy"), p("-2z + 3yyyy"), p("3 + 5X - 2Xyx"))];
    for seed in 0..200 {
        triples.push(random_triple(seed, seed % 2 == 1));
    }
    for (i, (a, b, c)) in triples.iter().enumerate() {
        ensure(a * &(b + c) == &(a * b) + &(a * c), || {
            format!("triple {i}: left distributivity")
        })?;
        ensure(&(a + b) * c == &(a * c) + &(b * c), || {
            format!("triple {i}: right distributivity")
        })?;
        ensure(a * &(b * c) == &(a * b) * c, || {
            format!("triple {i}: associativity")
        })?;
    }
    Ok(format!(
        "{} triples, 3 laws each, exact equality",
        triples.len()
    ))
}

fn jacobi() -> Outcome {
    for seed in 0..100 {
        let (x, y, z) = random_triple(seed, false);
        let j = x.commutator(&y.commutator(&z))
            + y.commutator(&z.commutator(&x))
            + z.commutator(&x.commutator(&y));
        ensure(j.is_zero(), || format!("seed {seed}: Jacobi sum is {j}"))?;
    }
    Ok("100 triples sum to the zero element".into())
}

fn matrix_homomorphism() -> Outcome {
    let a = p("xxyx + 2zy");
    let b = p("-2z + 3yyyy");
    let letters: BTreeSet<_> = "xyz".chars().map(letter).collect();
    let mut worst: f64 = 0.0;
    for seed in 0..10 {
        let m = MatrixAssignment::random(&letters, 5, seed);
        let r = homomorphism_check(&a, &b, &m, 1e-9).map_err(|e| e.to_string())?;
        ensure(r.pass && r.max_rel_residual <= 1e-9, || {
            format!("seed {seed}: max_rel {:e}", r.max_rel_residual)
        })?;
        worst = worst.max(r.max_rel_residual);
    }
    Ok(format!(
        "5x5 normal matrices, 10 seeds, worst max_rel = {worst:.2e} <= 1e-9"
    ))
}

fn reduction_oracle() -> Outcome {
    let alphabet: Vec<Symbol> = "xXyY".chars().map(sym).collect();
    let mut count = 0;
    for len in 0..=6u32 {
        for code in 0..4usize.pow(len) {
            let mut k = code;
            let raw: Vec<Symbol> = (0..len)
                .map(|_| {
                    let s = alphabet[k % 4];
                    k /= 4;
                    s
                })
                .collect();
            let fast = Word::reduce(raw.iter().copied());
            let slow = brute_reduce(raw.clone());
            ensure(fast.symbols() == slow.as_slice(), || {
                format!("mismatch on {raw:?}")
            })?;
            ensure(Word::reduce(fast.symbols().iter().copied()) == fast, || {
                format!("not idempotent on {raw:?}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} sequences of length <= 6 over {{x,X,y,Y}}"))
}

fn derivative_gradient() -> Outcome {
    let letters: BTreeSet<_> = ['a', 'b'].into_iter().map(letter).collect();
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let e = rfalg(&two_letter_spec(seed)).unwrap();
        let target = if seed % 2 == 0 {
            letter('a')
        } else {
            letter('b')
        };
        let (mut m, dir) = assignment_with_direction(&letters, 4, 1000 + seed);
        let analytic = {
            m.bind_differential(target, dir.clone()).unwrap();
            eval(&deriv(&e, target), &m).unwrap()
        };
        let err = finite_difference_error(&e, &m, target, &dir, &analytic, 1e-6);
        ensure(err <= 1e-3, || {
            format!("seed {seed}: relative error {err:e} for {e}")
        })?;
        worst = worst.max(err);
    }
    Ok(format!(
        "20 elements over {{a,b}}, 4x4, h=1e-6, worst error {worst:.2e} <= 1e-3"
    ))
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_freealg"))
}

fn round_trips() -> Outcome {
    for seed in 0..500u64 {
        let spec = RandSpec {
            seed,
            alphabet: "abcxyz".chars().map(letter).collect(),
            word_len: 0..=5,
            coeff_range: -20..=20,
            allow_inverse: true,
            ..RandSpec::default()
        };
        let e = rfalg(&spec).unwrap().scale(1.0 / (1 + seed % 7) as f64);
        let text = canonical_print(&e);
        ensure(parse(&text).as_ref() == Ok(&e), || {
            format!("seed {seed}: print/parse on {text}")
        })?;

        let l = spec
            .alphabet
            .iter()
            .nth((seed % 6) as usize)
            .copied()
            .unwrap();
        let with_d = &e + &deriv(&e, l);
        let json = to_json(&with_d);
        ensure(from_json(&json).as_ref() == Ok(&with_d), || {
            format!("seed {seed}: json on {json}")
        })?;
    }
    for expr in [
        "xxyx + 2zy",
        "3 + 5X - 2Xyx",
        "0.25abC - 7",
        "deriv(aXa, a)",
    ] {
        let out = binary()
            .args(["json", expr])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("json {expr:?} failed"))?;
        let back =
            from_json(String::from_utf8_lossy(&out.stdout).trim()).map_err(|e| e.to_string())?;
        let direct = freealg::cli::evaluate(expr, &freealg::cli::Session::new()).unwrap();
        ensure(back == direct, || {
            format!("json {expr:?}: process round trip differs")
        })?;
    }
    Ok("500 print/parse, 500 JSON with differentials, 4 CLI json round trips".into())
}

fn error_paths() -> Outcome {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let singular = fixtures.join("singular_x.json");
    let partial = fixtures.join("partial_xy.json");
    let cases: Vec<(&str, Vec<String>, i32, &str)> = vec![
        (
            "UnexpectedChar",
            vec!["parse".into(), "x + $y".into()],
            2,
            "unexpected character",
        ),
        (
            "BadNumber",
            vec!["parse".into(), "1.2.3x".into()],
            2,
            "bad number",
        ),
        (
            "EmptyTerm",
            vec!["parse".into(), "x +".into()],
            2,
            "empty term",
        ),
        (
            "TrailingInput",
            vec!["parse".into(), "xx yx".into()],
            2,
            "trailing input",
        ),
        (
            "malformed expression",
            vec!["eval".into(), "2**x".into()],
            2,
            "position 2",
        ),
        (
            "UnboundLetter",
            vec![
                "evalmat".into(),
                "xz".into(),
                "--fixture".into(),
                partial.display().to_string(),
            ],
            3,
            "no matrix binding",
        ),
        (
            "SingularMatrix",
            vec![
                "matcheck".into(),
                "X".into(),
                "x".into(),
                "--dim".into(),
                "3".into(),
                "--seed".into(),
                "7".into(),
                "--fixture".into(),
                singular.display().to_string(),
            ],
            3,
            "singular",
        ),
        (
            "NonInvertibleReplacement",
            vec!["subs".into(), "yX".into(), "x".into(), "1+y".into()],
            3,
            "not a single invertible term",
        ),
        (
            "usage",
            vec!["deriv".into(), "x".into(), "XY".into()],
            4,
            "lowercase",
        ),
    ];
    for (name, args, code, needle) in &cases {
        let out = binary().args(args).output().map_err(|e| e.to_string())?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        ensure(out.status.code() == Some(*code), || {
            format!(
                "{name}: exit {:?}, expected {code}; stderr {stderr}",
                out.status.code()
            )
        })?;
        ensure(stderr.contains(needle), || {
            format!("{name}: stderr {stderr:?} lacks {needle:?}")
        })?;
    }
    Ok(format!(
        "{} fixtures hit their documented exit codes",
        cases.len()
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 golden outputs", golden_outputs),
        ("2 ring laws", law_suite),
        ("3 Jacobi identity", jacobi),
        ("4 matrix homomorphism", matrix_homomorphism),
        ("5 reduction oracle", reduction_oracle),
        ("6 derivative vs finite differences", derivative_gradient),
        ("7 round trips", round_trips),
        ("8 error paths", error_paths),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
