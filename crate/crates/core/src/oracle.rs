//! Brute-force ground truth over small unitriangular groups.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::AlgebraElement;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::group::GroupElement;
use crate::word::Word;

pub const DEFAULT_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Every element, in lexicographic coefficient order, up to `cap` elements.
    Exhaustive { cap: u64 },
    /// `trials` uniformly random elements drawn from a seeded stream.
    Random { seed: u64, trials: u64 },
}

#[derive(Clone, Debug)]
pub struct SearchSpec<'a> {
    pub word: &'a Word,
    pub lift: Option<&'a Embedding>,
    pub mode: SearchMode,
    /// Split the exhaustive scan across the rayon pool. The answer is the same either way.
    pub parallel: bool,
}

impl<'a> SearchSpec<'a> {
    pub fn exhaustive(word: &'a Word, lift: Option<&'a Embedding>) -> Self {
        SearchSpec {
            word,
            lift,
            mode: SearchMode::Exhaustive { cap: DEFAULT_CAP },
            parallel: true,
        }
    }
}

/// Size of UT_m(F_p), if it fits under `cap`.
pub fn group_order(p: Prime, m: usize, cap: u64) -> Result<u64> {
    let exponent = m * m.saturating_sub(1) / 2;
    let mut total = 1u64;
    for _ in 0..exponent {
        total = total.saturating_mul(p.get() as u64);
        if total > cap {
            return Err(Error::CapExceeded { exponent, cap });
        }
    }
    Ok(total)
}

/// The `index`-th element of UT_m(F_p) in lexicographic order of the
/// coefficient tuple `(u_{0,1}, u_{0,2}, .., u_{m-2,m-1})`.
pub fn element_at(p: Prime, m: usize, mut index: u64) -> GroupElement {
    let mut u = AlgebraElement::zero(p, m);
    let base = p.get() as u64;
    for a in (0..m).rev() {
        for b in (a + 1..m).rev() {
            u.set(a, b, (index % base) as u32);
            index /= base;
        }
    }
    GroupElement::from_algebra(u)
}

/// Every element of UT_m(F_p) exactly once.
pub fn enumerate(p: Prime, m: usize, cap: u64) -> Result<impl Iterator<Item = GroupElement>> {
    let total = group_order(p, m, cap)?;
    Ok((0..total).map(move |i| element_at(p, m, i)))
}

/// First element (in search order) at which the word evaluates to the identity.
pub fn brute_solve(spec: &SearchSpec<'_>) -> Result<Option<GroupElement>> {
    let p = spec.word.modulus();
    let (word, m) = match spec.lift {
        Some(e) => (spec.word.lift(e)?, e.m()),
        None => (spec.word.clone(), spec.word.size()),
    };
    let is_root = |x: &GroupElement| {
        word.evaluate(x, None)
            .map(|v| v.is_identity())
            .unwrap_or(false)
    };
    match spec.mode {
        SearchMode::Exhaustive { cap } => {
            let total = group_order(p, m, cap)?;
            let found = if spec.parallel {
                (0..total)
                    .into_par_iter()
                    .find_first(|&i| is_root(&element_at(p, m, i)))
            } else {
                (0..total).find(|&i| is_root(&element_at(p, m, i)))
            };
            Ok(found.map(|i| element_at(p, m, i)))
        }
        SearchMode::Random { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..trials)
                .map(|_| GroupElement::random(&mut rng, p, m))
                .find(|x| is_root(x)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::EmbeddingKind;
    use crate::word::CoefficientTable;
    use std::collections::HashSet;

    fn prime(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate(prime(2), 2, DEFAULT_CAP).unwrap().count(), 2);
        // p^{m(m-1)/2}: UT_3(F_2) has 2^3 elements, UT_4(F_2) has 2^6
        assert_eq!(enumerate(prime(2), 3, DEFAULT_CAP).unwrap().count(), 8);
        assert_eq!(enumerate(prime(3), 3, DEFAULT_CAP).unwrap().count(), 27);
        let all: HashSet<_> = enumerate(prime(2), 4, DEFAULT_CAP).unwrap().collect();
        assert_eq!(all.len(), 64);
        assert!(matches!(
            enumerate(prime(2), 8, DEFAULT_CAP),
            Err(Error::CapExceeded { exponent: 28, .. })
        ));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let elems: Vec<_> = enumerate(prime(3), 3, DEFAULT_CAP).unwrap().collect();
        assert!(elems[0].is_identity());
        assert_eq!(elems[1], GroupElement::transvection(prime(3), 3, 1, 2, 1));
        assert_eq!(elems[9], GroupElement::transvection(prime(3), 3, 0, 1, 1));
    }

    #[test]
    fn root_of_linear_word_is_coefficient() {
        let p = prime(3);
        let g =
            GroupElement::from_matrix(p, &[vec![1, 2, 1], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
        let t = CoefficientTable::new(p, 3).with("g", g.clone()).unwrap();
        let w = Word::parse("x^-1 g", &t).unwrap();
        assert_eq!(
            brute_solve(&SearchSpec::exhaustive(&w, None)).unwrap(),
            Some(g)
        );
    }

    #[test]
    fn square_root_needs_overgroup() {
        let p = prime(2);
        let t = CoefficientTable::new(p, 2)
            .with("g", GroupElement::transvection(p, 2, 0, 1, 1))
            .unwrap();
        let w = Word::parse("x^-1 x^-1 g", &t).unwrap();
        assert_eq!(
            brute_solve(&SearchSpec::exhaustive(&w, None)).unwrap(),
            None
        );
        let e = Embedding::build(EmbeddingKind::Phi, 2, p, 2).unwrap();
        let x = brute_solve(&SearchSpec::exhaustive(&w, Some(&e)))
            .unwrap()
            .unwrap();
        assert!(w.evaluate(&x, Some(&e)).unwrap().is_identity());
    }

    #[test]
    fn deterministic_across_modes() {
        let p = prime(2);
        let t = CoefficientTable::new(p, 3)
            .with("g", GroupElement::transvection(p, 3, 0, 2, 1))
            .unwrap();
        let w = Word::parse("x^-1 x^-1 g", &t).unwrap();
        let e = Embedding::build(EmbeddingKind::Phi, 3, p, 2).unwrap();
        let mut spec = SearchSpec::exhaustive(&w, Some(&e));
        let par = brute_solve(&spec).unwrap();
        spec.parallel = false;
        assert_eq!(brute_solve(&spec).unwrap(), par);
        spec.mode = SearchMode::Random {
            seed: 9,
            trials: 5000,
        };
        let r1 = brute_solve(&spec).unwrap();
        assert!(r1.is_some());
        assert_eq!(brute_solve(&spec).unwrap(), r1);
    }
}
