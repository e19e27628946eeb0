#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use utsolve::{detect_case, Case, CoefficientTable, GroupElement, Letter, Prime, Word};

pub fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Plain repeated multiplication, independent of the library's `pow`.
pub fn naive_pow(g: &GroupElement, k: u64) -> GroupElement {
    (0..k).fold(GroupElement::identity(g.modulus(), g.size()), |acc, _| {
        acc.mul(g).unwrap()
    })
}

pub fn random_table<R: Rng>(rng: &mut R, p: Prime, n: usize, count: usize) -> CoefficientTable {
    let mut table = CoefficientTable::new(p, n);
    for i in 1..=count {
        table
            .insert(format!("g{i}"), GroupElement::random(rng, p, n))
            .unwrap();
    }
    table
}

/// A shuffled word with exponent `eps`, `extra` cancelling `x`/`x^-1` pairs,
/// and every coefficient of `table` used once.
pub fn random_word<R: Rng>(rng: &mut R, table: CoefficientTable, eps: i64, extra: usize) -> Word {
    let sign = if eps < 0 { -1 } else { 1 };
    let mut letters: Vec<Letter> = (0..eps.unsigned_abs()).map(|_| Letter::X(sign)).collect();
    for _ in 0..extra {
        letters.push(Letter::X(1));
        letters.push(Letter::X(-1));
    }
    letters.extend(table.iter().map(|(name, _)| Letter::Const(name.clone())));
    letters.shuffle(rng);
    Word::new(letters, table).unwrap()
}

/// Like [`random_word`], resampling coefficients until `u(1)` falls in `case`.
pub fn word_in_case<R: Rng>(rng: &mut R, p: Prime, n: usize, eps: i64, case: Case) -> Word {
    loop {
        let count = rng.gen_range(1..=3);
        let extra = rng.gen_range(0..=2);
        let table = random_table(rng, p, n, count);
        let w = random_word(rng, table, eps, extra);
        if detect_case(&w.constant_part()) == Some(case) {
            return w;
        }
    }
}
