//! Arithmetic in the prime field F_p on canonical residues `0..p`.

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Fermat inverse `a^(p-2)`; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        (a != 0).then(|| self.pow(a, self.0 as u64 - 2))
    }

    /// Reduces an arbitrary signed integer into `0..p`.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    /// If `q` is a positive power of this prime, returns the exponent `s` with `q = p^s`.
    /// `q = 1` yields `Some(0)`.
    pub fn log(self, mut q: u64) -> Option<u32> {
        if q == 0 {
            return None;
        }
        let mut s = 0;
        while q.is_multiple_of(self.0 as u64) {
            q /= self.0 as u64;
            s += 1;
        }
        (q == 1).then_some(s)
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Extended Euclid: returns `(g, a, b)` with `a*x + b*y = g = gcd(x, y)`.
pub fn extended_gcd(x: i64, y: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (x, y);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
        (old_t, t) = (t, old_t - quot * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `modulus` in `0..modulus`, if `gcd(a, modulus) = 1`.
pub fn mod_inverse(a: i64, modulus: i64) -> Option<i64> {
    let (g, s, _) = extended_gcd(a.rem_euclid(modulus), modulus);
    (g == 1).then(|| s.rem_euclid(modulus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u32> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(Prime::new(4).is_err());
    }

    #[test]
    fn field_ops() {
        let f = Prime::new(5).unwrap();
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.reduce(-7), 3);
        for a in 1..5 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn logs() {
        let f = Prime::new(3).unwrap();
        assert_eq!(f.log(1), Some(0));
        assert_eq!(f.log(27), Some(3));
        assert_eq!(f.log(6), None);
        assert_eq!(f.log(0), None);
    }

    #[test]
    fn bezout() {
        let (g, a, b) = extended_gcd(240, 46);
        assert_eq!(g, 2);
        assert_eq!(240 * a + 46 * b, 2);
        assert_eq!(mod_inverse(2, 9), Some(5));
        assert_eq!(mod_inverse(-2, 9), Some(4));
        assert_eq!(mod_inverse(3, 9), None);
    }
}
