//! Constructive solutions of regular one-variable equations over the
//! unitriangular groups UT_n(F_p).
//!
//! An equation `u(x) = x^{ε_1} g_1 ... x^{ε_k} g_k = 1` with exponent
//! `ε = r p^s` (`gcd(r, p) = 1`) is solved in an explicit overgroup
//! UT_m(F_p), `m = (n-1)p^s + 1`, whenever `u(1)` satisfies one of three
//! conditions (always the case for `n = 3`). Every answer is checked by
//! substituting it back into the equation.
//!
//! Module map:
//!
//! * [`algebra`]: nil-triangular algebra, support graphs, path-sum powers
//! * [`group`]: UT_m(F_p) arithmetic and the central series
//! * [`embedding`]: the two embeddings UT_n → UT_m
//! * [`word`], [`collect`]: equation words and the collecting process
//! * [`solver`]: the level-by-level construction and its wrappers
//! * [`oracle`]: exhaustive and random search
//! * [`textio`], [`cli`]: file formats and command implementations

pub mod algebra;
pub mod cli;
pub mod collect;
pub mod embedding;
pub mod error;
pub mod field;
pub mod group;
pub mod oracle;
pub mod solver;
pub mod textio;
pub mod word;

pub use algebra::{AlgebraElement, Level, PositionSet, SupportPath};
pub use collect::{collect, CommutatorAtom, Leaf, NormalForm};
pub use embedding::{decompose_to_generators, Embedding, EmbeddingKind};
pub use error::{Error, Result};
pub use field::Prime;
pub use group::GroupElement;
pub use solver::{
    detect_case, solve_heisenberg, solve_prime_exponent, solve_regular, Case, SolveReport,
};
pub use word::{CoefficientTable, Letter, Word};
