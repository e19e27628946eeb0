//! Embeddings of UT_n(F_p) into UT_m(F_p), `m = (n-1)q + 1`, under which
//! every element of the small group acquires a `q`-th root.
//!
//! Both embeddings are specified on the generators `t_{i,i+1}` only:
//!
//! * `Phi` sends `t_{1,2}` to the single transvection `t'_{1,2}` and, for
//!   `i >= 2`, `t_{i,i+1}` to `t'_{i,i+1} · Π_j t'_{α_{i-1,j}, α_{i,j}}`.
//! * `Psi` is the mirror image: `t_{i,i+1} ↦ t'_{i,i+1} · Π_j t'_{α_{i,j}, α_{i+1,j}}`
//!   for `i <= n-2` and `t_{n-1,n} ↦ t'_{n-1,n}`.
//!
//! Arbitrary elements are mapped by decomposing them into a generator word
//! first, so [`Embedding::apply`] is a homomorphism by construction.

use std::fmt;
use std::str::FromStr;

use crate::algebra::PositionSet;
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::group::GroupElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmbeddingKind {
    Phi,
    Psi,
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingKind::Phi => "phi",
            EmbeddingKind::Psi => "psi",
        })
    }
}

impl FromStr for EmbeddingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "phi" => Ok(EmbeddingKind::Phi),
            "psi" => Ok(EmbeddingKind::Psi),
            other => Err(format!(
                "unknown embedding kind `{other}` (expected phi or psi)"
            )),
        }
    }
}

/// A materialized embedding: the image of every generator `t_{i,i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    kind: EmbeddingKind,
    p: Prime,
    s: u32,
    positions: PositionSet,
    generator_images: Vec<GroupElement>,
}

/// `t_{i,i+1}(c)` in 0-based generator numbering: the pair is `(i, c)`.
pub type GeneratorWord = Vec<(usize, u32)>;

impl Embedding {
    /// Builds the embedding for `q = p^s`. `q = 1` gives the identity map.
    pub fn build(kind: EmbeddingKind, n: usize, p: Prime, q: u64) -> Result<Self> {
        let s = p.log(q).ok_or(Error::InvalidResolution { p: p.get(), q })?;
        let positions = PositionSet::new(n, q as usize)?;
        let m = positions.m();
        let q = q as usize;
        let t = |a: usize, b: usize| GroupElement::transvection(p, m, a, b, 1);
        let shifted_block = |from: usize, to: usize| {
            // Π_j t'_{α_{from,j}, α_{to,j}}
            (1..q).fold(GroupElement::identity(p, m), |acc, j| {
                acc.mul_unchecked(&t(positions.alpha(from, j), positions.alpha(to, j)))
            })
        };
        let generator_images = (1..n)
            .map(|i| {
                let head = t(positions.label(i), positions.label(i + 1));
                match kind {
                    EmbeddingKind::Phi if i >= 2 => head.mul_unchecked(&shifted_block(i - 1, i)),
                    EmbeddingKind::Psi if i + 1 < n => head.mul_unchecked(&shifted_block(i, i + 1)),
                    _ => head,
                }
            })
            .collect();
        Ok(Embedding {
            kind,
            p,
            s,
            positions,
            generator_images,
        })
    }

    pub fn kind(&self) -> EmbeddingKind {
        self.kind
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn positions(&self) -> &PositionSet {
        &self.positions
    }

    pub fn n(&self) -> usize {
        self.positions.n()
    }

    pub fn q(&self) -> usize {
        self.positions.q()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn m(&self) -> usize {
        self.positions.m()
    }

    /// Image of `t_{i,i+1}` (0-based `i`).
    pub fn generator_image(&self, i: usize) -> &GroupElement {
        &self.generator_images[i]
    }

    pub fn generator_images(&self) -> &[GroupElement] {
        &self.generator_images
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        if g.modulus() != self.p {
            return Err(Error::ModulusMismatch(g.modulus().get(), self.p.get()));
        }
        if g.size() != self.n() {
            return Err(Error::DimensionMismatch(g.size(), self.n()));
        }
        let m = self.m();
        Ok(decompose_to_generators(g)
            .into_iter()
            .fold(GroupElement::identity(self.p, m), |acc, (i, c)| {
                acc.mul_unchecked(&self.generator_images[i].pow(c as i64))
            }))
    }
}

/// Writes `g ∈ UT_n` as a product of generator transvections `t_{i,i+1}(c)`.
///
/// Superdiagonals are cleared first to last, each left to right, by peeling
/// off `t_{a,b}(c)`; a non-generator transvection is expanded through
/// `t_{a,b}(c) = [t_{a,a+1}(c), t_{a+1,b}(1)]`.
pub fn decompose_to_generators(g: &GroupElement) -> GeneratorWord {
    let n = g.size();
    let p = g.modulus();
    let mut rest = g.clone();
    let mut word = Vec::new();
    for d in 1..n {
        for a in 0..n - d {
            let c = rest.entry(a, a + d);
            if c == 0 {
                continue;
            }
            let peeled = GroupElement::transvection(p, n, a, a + d, p.neg(c));
            rest = peeled.mul_unchecked(&rest);
            push_word(&mut word, &expand_transvection(p, a, a + d, c), p);
        }
    }
    debug_assert!(rest.is_identity());
    word
}

fn expand_transvection(p: Prime, a: usize, b: usize, c: u32) -> GeneratorWord {
    if b == a + 1 {
        return vec![(a, c)];
    }
    let left = vec![(a, c)];
    let right = expand_transvection(p, a + 1, b, 1);
    let mut out = Vec::new();
    push_word(&mut out, &invert_word(p, &left), p);
    push_word(&mut out, &invert_word(p, &right), p);
    push_word(&mut out, &left, p);
    push_word(&mut out, &right, p);
    out
}

fn invert_word(p: Prime, word: &[(usize, u32)]) -> GeneratorWord {
    word.iter().rev().map(|&(i, c)| (i, p.neg(c))).collect()
}

/// Appends with free reduction: adjacent equal generators merge, zeros vanish.
fn push_word(out: &mut GeneratorWord, tail: &[(usize, u32)], p: Prime) {
    for &(i, c) in tail {
        match out.last_mut() {
            Some((j, d)) if *j == i => {
                *d = p.add(*d, c);
                if *d == 0 {
                    out.pop();
                }
            }
            _ if c != 0 => out.push((i, c)),
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Level;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn prime(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn multiply_out(p: Prime, n: usize, word: &[(usize, u32)]) -> GroupElement {
        word.iter()
            .fold(GroupElement::identity(p, n), |acc, &(i, c)| {
                acc.mul(&GroupElement::transvection(p, n, i, i + 1, c))
                    .unwrap()
            })
    }

    #[test]
    fn decompose_examples() {
        let p = prime(3);
        assert!(decompose_to_generators(&GroupElement::identity(p, 3)).is_empty());
        assert_eq!(
            decompose_to_generators(&GroupElement::transvection(p, 3, 0, 1, 2)),
            vec![(0, 2)]
        );
        for c in 1..3 {
            let t13 = GroupElement::transvection(p, 3, 0, 2, c);
            let word = decompose_to_generators(&t13);
            assert!(word.iter().all(|&(i, _)| i < 2));
            assert_eq!(multiply_out(p, 3, &word), t13);
        }
    }

    #[test]
    fn decompose_random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, n) in [(2, 5), (3, 4), (5, 3), (7, 6)] {
            let p = prime(p);
            for _ in 0..200 {
                let g = GroupElement::random(&mut rng, p, n);
                assert_eq!(multiply_out(p, n, &decompose_to_generators(&g)), g);
            }
        }
    }

    #[test]
    fn identity_for_trivial_resolution() {
        let p = prime(3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in [EmbeddingKind::Phi, EmbeddingKind::Psi] {
            let e = Embedding::build(kind, 4, p, 1).unwrap();
            assert_eq!(e.m(), 4);
            for _ in 0..50 {
                let g = GroupElement::random(&mut rng, p, 4);
                assert_eq!(e.apply(&g).unwrap(), g);
            }
        }
    }

    #[test]
    fn rejects_bad_resolution() {
        assert_eq!(
            Embedding::build(EmbeddingKind::Phi, 3, prime(3), 6),
            Err(Error::InvalidResolution { p: 3, q: 6 })
        );
        assert!(Embedding::build(EmbeddingKind::Phi, 3, prime(3), 0).is_err());
    }

    #[test]
    fn generator_image_shapes() {
        let p = prime(2);
        let e = Embedding::build(EmbeddingKind::Phi, 4, p, 4).unwrap();
        assert_eq!(e.m(), 13);
        assert_eq!(e.generator_image(0).algebra().support().count(), 1);
        assert_eq!(e.generator_image(1).algebra().support().count(), 4);
        let f = Embedding::build(EmbeddingKind::Psi, 4, p, 4).unwrap();
        assert_eq!(f.generator_image(2).algebra().support().count(), 1);
        assert_eq!(f.generator_image(0).algebra().support().count(), 4);
        assert_eq!(
            f.generator_image(2),
            &GroupElement::transvection(p, 13, 8, 12, 1)
        );
    }

    #[test]
    fn dimension_mismatch() {
        let e = Embedding::build(EmbeddingKind::Phi, 3, prime(2), 2).unwrap();
        let g = GroupElement::identity(prime(2), 4);
        assert_eq!(e.apply(&g), Err(Error::DimensionMismatch(4, 3)));
    }

    #[test]
    fn filtration_scales_by_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, n, q) in [(2, 4, 2), (3, 3, 3), (2, 3, 4)] {
            let p = prime(p);
            for kind in [EmbeddingKind::Phi, EmbeddingKind::Psi] {
                let e = Embedding::build(kind, n, p, q).unwrap();
                for _ in 0..200 {
                    let level = rand::Rng::gen_range(&mut rng, 1..n);
                    let g = GroupElement::random_at_level(&mut rng, p, n, level);
                    let img = e.apply(&g).unwrap();
                    assert!(
                        img.central_series_level() >= g.central_series_level().times(q as usize)
                    );
                    if !g.is_identity() {
                        assert_ne!(img.central_series_level(), Level::Infinite);
                    }
                }
            }
        }
    }
}
