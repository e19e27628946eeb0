//! The unitriangular group `G(A) = {1 + u}` ≅ UT_m(F_p).

use std::fmt;

use rand::Rng;

use crate::algebra::{AlgebraElement, Level};
use crate::error::{Error, Result};
use crate::field::Prime;

/// An element `1 + u` of UT_m(F_p).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    u: AlgebraElement,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1 + {:?}", self.u)
    }
}

impl GroupElement {
    pub fn identity(p: Prime, m: usize) -> Self {
        GroupElement {
            u: AlgebraElement::zero(p, m),
        }
    }

    pub fn from_algebra(u: AlgebraElement) -> Self {
        GroupElement { u }
    }

    /// `t_{a,b}(c) = 1 + c e_{a,b}`.
    pub fn transvection(p: Prime, m: usize, a: usize, b: usize, c: u32) -> Self {
        GroupElement {
            u: AlgebraElement::unit(p, m, a, b, c),
        }
    }

    /// Builds from a full square matrix; requires unit diagonal and zeros below it.
    pub fn from_matrix(p: Prime, rows: &[Vec<u32>]) -> Result<Self> {
        let m = rows.len();
        let mut u = AlgebraElement::zero(p, m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch(m, row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= p.get() {
                    return Err(Error::NotUnitriangular(format!(
                        "entry ({},{}) = {v} is not a residue mod {}",
                        i + 1,
                        j + 1,
                        p.get()
                    )));
                }
                let expected = u32::from(i == j);
                if j <= i && v != expected {
                    return Err(Error::NotUnitriangular(format!(
                        "entry ({},{}) must be {expected}",
                        i + 1,
                        j + 1
                    )));
                }
                if j > i {
                    u.set(i, j, v);
                }
            }
        }
        Ok(GroupElement { u })
    }

    pub fn to_matrix(&self) -> Vec<Vec<u32>> {
        let m = self.size();
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { 1 } else { self.u.get(i, j) })
                    .collect()
            })
            .collect()
    }

    pub fn algebra(&self) -> &AlgebraElement {
        &self.u
    }

    pub fn into_algebra(self) -> AlgebraElement {
        self.u
    }

    pub fn modulus(&self) -> Prime {
        self.u.modulus()
    }

    pub fn size(&self) -> usize {
        self.u.size()
    }

    /// Matrix entry `(a, b)` of `1 + u`.
    pub fn entry(&self, a: usize, b: usize) -> u32 {
        if a == b {
            1
        } else {
            self.u.get(a, b)
        }
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_zero()
    }

    /// `(1+u)(1+v) = 1 + (u + v + uv)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let uv = self.u.mul(&other.u)?;
        Ok(GroupElement {
            u: self.u.add_unchecked(&other.u).add_unchecked(&uv),
        })
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let uv = self.u.mul_unchecked(&other.u);
        GroupElement {
            u: self.u.add_unchecked(&other.u).add_unchecked(&uv),
        }
    }

    /// `(1+u)^{-1} = 1 + Σ (-1)^i u^i`.
    pub fn inv(&self) -> Self {
        let m = self.size();
        let neg = self.u.neg();
        let mut term = neg.clone();
        let mut acc = neg.clone();
        for _ in 2..m {
            term = term.mul_unchecked(&neg);
            if term.is_zero() {
                break;
            }
            acc = acc.add_unchecked(&term);
        }
        GroupElement { u: acc }
    }

    /// `g^k` by square-and-multiply; negative `k` goes through the inverse.
    pub fn pow(&self, k: i64) -> Self {
        let mut base = if k < 0 { self.inv() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity(self.modulus(), self.size());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `g^{p^s} = 1 + u^{p^s}`, with the power taken as a weighted path sum.
    pub fn pow_p_power(&self, s: u32) -> Self {
        let p = self.modulus().get() as u64;
        let m = self.size() as u64;
        let mut q = 1u64;
        for _ in 0..s {
            q = q.saturating_mul(p);
            if q >= m {
                return Self::identity(self.modulus(), self.size());
            }
        }
        GroupElement {
            u: self.u.power_via_paths(q as usize),
        }
    }

    /// `[a, b] = a^{-1} b^{-1} a b`.
    pub fn comm(&self, other: &Self) -> Result<Self> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        Ok(ba.inv().mul_unchecked(&ab))
    }

    pub(crate) fn comm_unchecked(&self, other: &Self) -> Self {
        let ab = self.mul_unchecked(other);
        let ba = other.mul_unchecked(self);
        ba.inv().mul_unchecked(&ab)
    }

    /// Left-normed commutator `[g_1, g_2, ..., g_k] = [[g_1, g_2], ..., g_k]`.
    pub fn commutator(elements: &[GroupElement]) -> Result<Self> {
        let (first, rest) = match elements {
            [first, rest @ ..] if !rest.is_empty() => (first, rest),
            _ => return Err(Error::InvalidSize(elements.len())),
        };
        rest.iter().try_fold(first.clone(), |acc, g| acc.comm(g))
    }

    /// Largest `i` with `g ∈ G(A^(i))`; this is the lower central series term.
    pub fn central_series_level(&self) -> Level {
        self.u.filtration_level()
    }

    /// Uniformly random element of UT_m(F_p).
    pub fn random<R: Rng + ?Sized>(rng: &mut R, p: Prime, m: usize) -> Self {
        let mut u = AlgebraElement::zero(p, m);
        for a in 0..m {
            for b in a + 1..m {
                u.set(a, b, rng.gen_range(0..p.get()));
            }
        }
        GroupElement { u }
    }

    /// Random element of `G(A^(level))`: zeros on the first `level - 1` superdiagonals.
    pub fn random_at_level<R: Rng + ?Sized>(rng: &mut R, p: Prime, m: usize, level: usize) -> Self {
        let mut u = AlgebraElement::zero(p, m);
        for a in 0..m {
            for b in a + level.max(1)..m {
                u.set(a, b, rng.gen_range(0..p.get()));
            }
        }
        GroupElement { u }
    }
}
