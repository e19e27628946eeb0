//! Command implementations behind the `utsolve` binary. Each command takes
//! file contents and returns the exit code together with its output, so the
//! binary is a thin wrapper and the commands are testable in-process.

use std::fmt::Write as _;

use crate::collect::collect;
use crate::embedding::{Embedding, EmbeddingKind};
use crate::error::Error;
use crate::oracle::{brute_solve, group_order, SearchMode, SearchSpec};
use crate::solver::solve_regular;
use crate::textio::{parse_matrix, render_matrix, EquationFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_NOT_REGULAR: i32 = 3;
pub const EXIT_NOT_SOLUTION: i32 = 4;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        Output {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

impl From<Error> for Output {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unsupported => EXIT_UNSUPPORTED,
            Error::NotRegular => EXIT_NOT_REGULAR,
            _ => EXIT_ERROR,
        };
        Output::fail(code, e.to_string())
    }
}

macro_rules! try_out {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return Output::from(e),
        }
    };
}

pub fn solve(equation: &str, trace: bool) -> Output {
    let file = try_out!(EquationFile::parse(equation));
    let report = try_out!(solve_regular(&file.word));
    let mut out = String::new();
    let _ = writeln!(out, "case {}", report.case);
    let kind = if report.embedding.q() == 1 {
        "none".to_string()
    } else {
        report.embedding.kind().to_string()
    };
    let _ = writeln!(out, "embedding {kind}");
    let _ = writeln!(out, "p {}", file.p.get());
    let _ = writeln!(out, "m {}", report.m());
    if let Some(b) = report.substitutions.bezout {
        let _ = writeln!(out, "bezout r={} t={} k={}", b.r, b.t, b.k);
    }
    out.push_str("solution\n");
    out.push_str(&render_matrix(&report.solution));
    if trace {
        out.push_str("trace\n");
        out.push_str(&report.trace_text());
    }
    out.push_str(if report.verified {
        "VERIFIED\n"
    } else {
        "UNVERIFIED\n"
    });
    Output::ok(out)
}

pub fn normalize(equation: &str) -> Output {
    let file = try_out!(EquationFile::parse(equation));
    let nf = collect(&file.word);
    let mut out = nf.render();
    let _ = write!(out, "\ntail exponent {}\nu1\n", nf.tail_exponent());
    out.push_str(&render_matrix(nf.u1()));
    Output::ok(out)
}

fn resolution(p: u32, s: u32) -> Option<u64> {
    (p as u64).checked_pow(s).filter(|&q| q <= 1 << 16)
}

pub fn embed(equation: &str, kind: EmbeddingKind, s: u32) -> Output {
    let file = try_out!(EquationFile::parse(equation));
    let Some(q) = resolution(file.p.get(), s) else {
        return Output::fail(EXIT_ERROR, format!("invalid s = {s}"));
    };
    let e = try_out!(Embedding::build(kind, file.n, file.p, q));
    let mut out = String::new();
    for name in &file.names {
        let image = try_out!(e.apply(file.table.get(name).expect("declared")));
        let _ = writeln!(out, "matrix {name}");
        out.push_str(&render_matrix(&image));
    }
    Output::ok(out)
}

/// Extracts the candidate matrix (and embedding hint) from either a bare
/// matrix or the output of `solve`.
fn candidate_text(candidate: &str) -> (String, Option<String>) {
    let lines: Vec<&str> = candidate.lines().collect();
    let kind = lines.iter().find_map(|l| {
        l.trim()
            .strip_prefix("embedding ")
            .map(|k| k.trim().to_string())
    });
    match lines.iter().position(|l| l.trim() == "solution") {
        Some(start) => {
            let body: Vec<&str> = lines[start + 1..]
                .iter()
                .take_while(|l| {
                    let t = l.trim();
                    !t.is_empty() && t.split_whitespace().all(|tok| tok.parse::<u64>().is_ok())
                })
                .copied()
                .collect();
            (body.join("\n"), kind)
        }
        None => (candidate.to_string(), kind),
    }
}

pub fn verify(equation: &str, candidate: &str, kind: Option<EmbeddingKind>) -> Output {
    let file = try_out!(EquationFile::parse(equation));
    let (matrix, hint) = candidate_text(candidate);
    let x = try_out!(parse_matrix(file.p, &matrix));
    let m = x.size();
    let holds = if m == file.n {
        try_out!(file.word.evaluate(&x, None)).is_identity()
    } else {
        let q = (m - 1) / (file.n - 1);
        if (m - 1) % (file.n - 1) != 0 || file.p.log(q as u64).is_none() {
            return Output::fail(
                EXIT_ERROR,
                format!(
                    "candidate size {m} is not (n-1)p^s+1 for n={}, p={}",
                    file.n,
                    file.p.get()
                ),
            );
        }
        let kinds = match (kind, hint.as_deref().and_then(|h| h.parse().ok())) {
            (Some(k), _) | (None, Some(k)) => vec![k],
            (None, None) => vec![EmbeddingKind::Phi, EmbeddingKind::Psi],
        };
        let mut any = false;
        for k in kinds {
            let e = try_out!(Embedding::build(k, file.n, file.p, q as u64));
            if try_out!(file.word.evaluate(&x, Some(&e))).is_identity() {
                any = true;
                break;
            }
        }
        any
    };
    if holds {
        Output::ok("VERIFIED\n".into())
    } else {
        Output {
            code: EXIT_NOT_SOLUTION,
            stdout: "NOT A SOLUTION\n".into(),
            stderr: String::new(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub s: Option<u32>,
    pub kind: EmbeddingKind,
    pub seed: u64,
    pub cap: u64,
    pub trials: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            s: None,
            kind: EmbeddingKind::Phi,
            seed: 0,
            cap: crate::oracle::DEFAULT_CAP,
            trials: 100_000,
        }
    }
}

pub fn oracle(equation: &str, opts: OracleOptions) -> Output {
    let file = try_out!(EquationFile::parse(equation));
    let lift = match opts.s {
        Some(s) => {
            let Some(q) = resolution(file.p.get(), s) else {
                return Output::fail(EXIT_ERROR, format!("invalid s = {s}"));
            };
            Some(try_out!(Embedding::build(opts.kind, file.n, file.p, q)))
        }
        None => None,
    };
    let m = lift.as_ref().map_or(file.n, Embedding::m);
    let mode = match group_order(file.p, m, opts.cap) {
        Ok(_) => SearchMode::Exhaustive { cap: opts.cap },
        Err(_) => SearchMode::Random {
            seed: opts.seed,
            trials: opts.trials,
        },
    };
    let spec = SearchSpec {
        word: &file.word,
        lift: lift.as_ref(),
        mode,
        parallel: true,
    };
    let mode_name = match mode {
        SearchMode::Exhaustive { .. } => "exhaustive",
        SearchMode::Random { .. } => "random",
    };
    match try_out!(brute_solve(&spec)) {
        Some(x) => {
            let mut out = format!("mode {mode_name}\nm {m}\nsolution\n");
            out.push_str(&render_matrix(&x));
            Output::ok(out)
        }
        None => Output {
            code: EXIT_NOT_SOLUTION,
            stdout: format!("mode {mode_name}\nm {m}\nno solution found\n"),
            stderr: String::new(),
        },
    }
}
