//! Constructive solution of regular equations over UT_n(F_p) in the overgroup
//! UT_m(F_p), `m = (n-1)p^s + 1`.
//!
//! For exponent `ε = r p^s` with `gcd(r, p) = 1` and `s >= 1`, the equation is
//! collected into `x^{-ε} = u(1) v(x)`, the unknown is replaced by `y^c` so
//! that the left side becomes `y^q` (`q = p^s`), and then `y` is built level by
//! level: an initial chain element solves the equation modulo the `(q+1)`-th
//! term of the lower central series, and each further superdiagonal is
//! corrected entry by entry by adding one matrix unit whose contribution to
//! `y^q` runs along a path of `q-1` generator edges. The right side does not
//! move at the level being fixed, so each correction is a single linear
//! equation over F_p.
//!
//! Every solution is checked by substitution into the original word before it
//! is returned.

use std::fmt::{self, Write as _};

use crate::algebra::AlgebraElement;
use crate::collect::{collect, NormalForm};
use crate::embedding::{Embedding, EmbeddingKind};
use crate::error::{Error, Result};
use crate::field::{mod_inverse, Prime};
use crate::group::GroupElement;
use crate::oracle::{brute_solve, SearchSpec};
use crate::word::Word;

/// Which branch produced the solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// `a_{i,i+1} != 0` for `i = 2..n-1`; uses `Phi`.
    One,
    /// `a_{i,i+1} != 0` for `i = 1..n-2`; uses `Psi`.
    Two,
    /// `u(1)` central; uses `Phi`.
    Three,
    /// `gcd(ε, p) = 1`: solved inside UT_n itself.
    InGroup,
}

impl Case {
    pub fn embedding_kind(self) -> EmbeddingKind {
        match self {
            Case::Two => EmbeddingKind::Psi,
            _ => EmbeddingKind::Phi,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::One => "1",
            Case::Two => "2",
            Case::Three => "3",
            Case::InGroup => "in-group",
        })
    }
}

/// One matrix-unit correction `y_j = w_j e_{edge}` fixing position `(alpha, beta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    /// 1-based rank of the position within its superdiagonal (by `alpha`).
    pub j: usize,
    pub alpha: usize,
    pub beta: usize,
    /// Where the new entry goes.
    pub edge: (usize, usize),
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTrace {
    pub level: usize,
    pub corrections: Vec<Correction>,
}

/// Exponent reduction data: `ε = r p^s`, `r k ≡ 1 (mod p^t)`, `p^t >= m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bezout {
    pub r: i64,
    pub s: u32,
    pub t: u32,
    pub k: i64,
}

/// How the unknown was rewritten before solving: `x = y^multiplier`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitutions {
    pub multiplier: i64,
    /// `x ↦ x^{-1}` was applied to reach the form `y^q = u(1) v(y)`.
    pub inverted: bool,
    /// Present when `|r| > 1`.
    pub bezout: Option<Bezout>,
    /// The solution `y` of the reduced equation; the answer is `y^multiplier`.
    pub reduced_solution: GroupElement,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: GroupElement,
    pub embedding: Embedding,
    pub case: Case,
    pub levels: Vec<LevelTrace>,
    pub verified: bool,
    pub substitutions: Substitutions,
}

impl SolveReport {
    pub fn m(&self) -> usize {
        self.embedding.m()
    }

    /// One line per correction: `level j alpha anchor beta w`, 1-based positions.
    pub fn trace_text(&self) -> String {
        let mut out = String::from("# level j alpha tau beta w\n");
        for level in &self.levels {
            for c in &level.corrections {
                let anchor = match self.embedding.kind() {
                    EmbeddingKind::Phi => c.edge.1,
                    EmbeddingKind::Psi => c.edge.0,
                };
                let _ = writeln!(
                    out,
                    "{} {} {} {} {} {}",
                    level.level,
                    c.j,
                    c.alpha + 1,
                    anchor + 1,
                    c.beta + 1,
                    c.weight
                );
            }
        }
        out
    }
}

/// Which sufficient condition `u(1)` meets, in priority order 3, 1, 2.
pub fn detect_case(u1: &GroupElement) -> Option<Case> {
    let n = u1.size();
    let p = u1.modulus();
    let central = (0..n - 1).all(|i| {
        let t = GroupElement::transvection(p, n, i, i + 1, 1);
        t.mul_unchecked(u1) == u1.mul_unchecked(&t)
    });
    if central {
        Some(Case::Three)
    } else if (1..n - 1).all(|i| u1.entry(i, i + 1) != 0) {
        Some(Case::One)
    } else if (0..n.saturating_sub(2)).all(|i| u1.entry(i, i + 1) != 0) {
        Some(Case::Two)
    } else {
        None
    }
}

/// The chain element solving the equation modulo the `(q+1)`-th central term
/// (or, in case 3, an element of order `q` commuting with the embedded group).
pub fn initial_element(case: Case, u1: &GroupElement, e: &Embedding) -> Result<GroupElement> {
    let n = e.n();
    if u1.size() != n {
        return Err(Error::DimensionMismatch(u1.size(), n));
    }
    let ps = e.positions();
    let p = e.modulus();
    let mut u = AlgebraElement::zero(p, e.m());
    for i in 1..n {
        let a = u1.entry(i - 1, i);
        let (first, last) = (ps.label(i), ps.label(i + 1) - 1);
        for k in first..=last {
            let w = match case {
                Case::One if k == first => a,
                Case::Two if k == last => a,
                Case::Three | Case::InGroup if k == first => 0,
                _ => 1,
            };
            u.set(k, k + 1, w);
        }
    }
    Ok(GroupElement::from_algebra(u))
}

/// The generator-edge path used to correct position `(alpha, beta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionPath {
    pub alpha: usize,
    pub beta: usize,
    /// Endpoint of the path other than `alpha`/`beta`: `τ` for `Phi`, `σ` for `Psi`.
    pub anchor: usize,
    /// The new matrix unit: `(alpha, τ)` for `Phi`, `(σ, beta)` for `Psi`.
    pub edge: (usize, usize),
    /// Consecutive vertices of the `q-1` generator edges.
    pub vertices: Vec<usize>,
}

impl CorrectionPath {
    /// `w(P)`: product of the current weights along the path.
    pub fn weight(&self, x: &AlgebraElement) -> u32 {
        let p = x.modulus();
        self.vertices
            .windows(2)
            .fold(1 % p.get(), |acc, w| p.mul(acc, x.get(w[0], w[1])))
    }
}

/// For `Phi` the path runs from `τ = beta - (q-1)` up to `beta` and the new
/// edge is `(alpha, τ)`; for `Psi` it runs from `alpha` to `σ = alpha + q - 1`
/// and the new edge is `(σ, beta)`.
pub fn correction_path(e: &Embedding, alpha: usize, beta: usize) -> Result<CorrectionPath> {
    let q = e.q();
    let none = Error::NoCorrectionPath { alpha, beta };
    if beta >= e.m() || alpha >= beta || beta - alpha < q {
        return Err(none);
    }
    let (anchor, edge, vertices) = match e.kind() {
        EmbeddingKind::Phi => {
            let tau = beta + 1 - q;
            (tau, (alpha, tau), (tau..=beta).collect())
        }
        EmbeddingKind::Psi => {
            let sigma = alpha + q - 1;
            (sigma, (sigma, beta), (alpha..=sigma).collect())
        }
    };
    Ok(CorrectionPath {
        alpha,
        beta,
        anchor,
        edge,
        vertices,
    })
}

fn agree_through(l: &GroupElement, r: &GroupElement, level: usize) -> bool {
    (1..=level.min(l.size() - 1))
        .all(|d| l.algebra().superdiagonal(d) == r.algebra().superdiagonal(d))
}

struct Reduced {
    case: Case,
    embedding: Embedding,
    solution: GroupElement,
    levels: Vec<LevelTrace>,
}

/// Solves `y^q = u(1) v(y)` for a normal form whose tail is already written in `y`.
fn solve_reduced(nf: &NormalForm, s: u32) -> Result<Reduced> {
    let p = nf.u1().modulus();
    let q = (p.get() as u64).pow(s);
    let case = detect_case(nf.u1()).ok_or(Error::Unsupported)?;
    let embedding = Embedding::build(case.embedding_kind(), nf.u1().size(), p, q)?;
    let q = q as usize;
    let m = embedding.m();
    let ev = nf.evaluator(Some(&embedding))?;

    let mut y = initial_element(case, nf.u1(), &embedding)?;
    let mut left = y.pow_p_power(s);
    let mut right = ev.right_side(&y)?;

    if case != Case::Three {
        let tail = ev.tail_value(&y)?;
        if tail.central_series_level() < crate::algebra::Level::Finite(q + 1) {
            return Err(Error::InvariantViolated(format!(
                "v(x_(q+1)) at level {} < {}",
                tail.central_series_level(),
                q + 1
            )));
        }
    }
    // Case 3 closes with a single correction at (1, m) on the last
    // superdiagonal, which for n = 2 is superdiagonal q itself.
    let first_level = match case {
        Case::Three => (q + 1).min(m - 1),
        _ => q + 1,
    };
    if !agree_through(&left, &right, first_level - 1) {
        return Err(Error::InvariantViolated(
            "initial element misses level q".into(),
        ));
    }

    let mut levels = Vec::new();
    for level in first_level..m {
        let count = m - level;
        let order: Vec<usize> = match embedding.kind() {
            EmbeddingKind::Phi => (0..count).rev().collect(),
            EmbeddingKind::Psi => (0..count).collect(),
        };
        let mut corrections = Vec::new();
        let mut fixed: Vec<usize> = Vec::new();
        for alpha in order {
            let beta = alpha + level;
            let (wl, wr) = (left.entry(alpha, beta), right.entry(alpha, beta));
            if wl != wr {
                let path = correction_path(&embedding, alpha, beta)?;
                let stuck = Error::CorrectionStuck { level, alpha, beta };
                let wp = p.inv(path.weight(y.algebra())).ok_or(stuck)?;
                let weight = p.mul(p.sub(wr, wl), wp);
                let mut u = y.algebra().clone();
                let (a, b) = path.edge;
                u.set(a, b, p.add(u.get(a, b), weight));
                y = GroupElement::from_algebra(u);

                let new_right = ev.right_side(&y)?;
                if !agree_through(&new_right, &right, level) {
                    return Err(Error::InvariantViolated(format!(
                        "right side moved at level {level} after correcting ({alpha}, {beta})"
                    )));
                }
                right = new_right;
                left = y.pow_p_power(s);
                corrections.push(Correction {
                    j: alpha + 1,
                    alpha,
                    beta,
                    edge: path.edge,
                    weight,
                });
            }
            fixed.push(alpha);
            if let Some(&bad) = fixed
                .iter()
                .find(|&&a| left.entry(a, a + level) != right.entry(a, a + level))
            {
                return Err(Error::InvariantViolated(format!(
                    "position ({bad}, {}) disagrees after correction at level {level}",
                    bad + level
                )));
            }
        }
        if !agree_through(&left, &right, level) {
            return Err(Error::InvariantViolated(format!(
                "level {level} not closed"
            )));
        }
        levels.push(LevelTrace { level, corrections });
    }
    if left != right {
        return Err(Error::InvariantViolated(
            "final element does not balance".into(),
        ));
    }
    Ok(Reduced {
        case,
        embedding,
        solution: y,
        levels,
    })
}

/// Smallest `t` with `p^t >= m`, so that every element of UT_m(F_p) has order dividing `p^t`.
pub fn exponent_bound(p: Prime, m: usize) -> u32 {
    let mut t = 0;
    let mut pt = 1usize;
    while pt < m {
        pt = pt.saturating_mul(p.get() as usize);
        t += 1;
    }
    t
}

/// Splits `ε = r p^s` with `gcd(r, p) = 1`.
pub fn split_exponent(p: Prime, epsilon: i64) -> (i64, u32) {
    let mut r = epsilon;
    let mut s = 0;
    while r != 0 && r % p.get() as i64 == 0 {
        r /= p.get() as i64;
        s += 1;
    }
    (r, s)
}

/// Solves any regular equation over UT_n(F_p).
pub fn solve_regular(word: &Word) -> Result<SolveReport> {
    let epsilon = word.exponent();
    if epsilon == 0 {
        return Err(Error::NotRegular);
    }
    let p = word.modulus();
    let n = word.size();
    let (r, s) = split_exponent(p, epsilon);
    if s == 0 {
        return solve_in_group(word);
    }

    let q = (p.get() as usize).pow(s);
    let m = (n - 1) * q + 1;
    // x^{-ε} = u(1) v(x); with x = y^c the left side is y^{-c r q}, which
    // must reduce to y^q in UT_m: c r ≡ -1 (mod p^t).
    let (k, bezout) = if r.abs() == 1 {
        (r, None)
    } else {
        let t = exponent_bound(p, m);
        let modulus = (p.get() as i64).pow(t);
        let k =
            mod_inverse(r, modulus).ok_or(Error::InvariantViolated("r not invertible".into()))?;
        (k, Some(Bezout { r, s, t, k }))
    };
    let multiplier = -k;

    let nf = collect(word).substitute(multiplier)?;
    let reduced = solve_reduced(&nf, s)?;
    let solution = reduced.solution.pow(multiplier);
    let verified = word
        .evaluate(&solution, Some(&reduced.embedding))?
        .is_identity();
    if !verified {
        return Err(Error::VerifyFailed);
    }
    Ok(SolveReport {
        solution,
        embedding: reduced.embedding,
        case: reduced.case,
        levels: reduced.levels,
        verified,
        substitutions: Substitutions {
            multiplier,
            inverted: multiplier < 0,
            bezout,
            reduced_solution: reduced.solution,
        },
    })
}

/// Equations of exponent `±p^s`, `s >= 1`: no exponent reduction is needed.
pub fn solve_prime_exponent(word: &Word) -> Result<SolveReport> {
    let epsilon = word.exponent();
    if epsilon == 0 {
        return Err(Error::NotRegular);
    }
    let p = word.modulus();
    match split_exponent(p, epsilon) {
        (r, s) if r.abs() == 1 && s >= 1 => solve_regular(word),
        _ => Err(Error::InvalidResolution {
            p: p.get(),
            q: epsilon.unsigned_abs(),
        }),
    }
}

/// Equations over the Heisenberg group UT_3(F_p); one of the three conditions always holds.
pub fn solve_heisenberg(word: &Word) -> Result<SolveReport> {
    if word.size() != 3 {
        return Err(Error::DimensionMismatch(word.size(), 3));
    }
    solve_regular(word)
}

/// `gcd(ε, p) = 1`: a solution exists inside UT_n; found by exhaustive search.
fn solve_in_group(word: &Word) -> Result<SolveReport> {
    let p = word.modulus();
    let embedding = Embedding::build(EmbeddingKind::Phi, word.size(), p, 1)?;
    let solution =
        brute_solve(&SearchSpec::exhaustive(word, None))?.ok_or(Error::NoSolutionFound)?;
    let verified = word.evaluate(&solution, None)?.is_identity();
    if !verified {
        return Err(Error::VerifyFailed);
    }
    Ok(SolveReport {
        solution: solution.clone(),
        embedding,
        case: Case::InGroup,
        levels: Vec::new(),
        verified,
        substitutions: Substitutions {
            multiplier: 1,
            inverted: false,
            bezout: None,
            reduced_solution: solution,
        },
    })
}
