use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The coefficient ring Z/mZ for a word-size modulus `m >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueRing {
    modulus: u32,
}

impl ResidueRing {
    pub fn new(modulus: u64) -> Result<Self> {
        if !(2..=u32::MAX as u64).contains(&modulus) {
            return Err(Error::BadModulus(modulus));
        }
        Ok(Self {
            modulus: modulus as u32,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u32 {
        (x % self.modulus as u64) as u32
    }

    #[inline]
    pub fn from_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.modulus as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let m = self.modulus as u64;
        (if s >= m { s - m } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.modulus as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.modulus as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: u32) -> Option<u32> {
        let (mut r0, mut r1) = (self.modulus as i64, (a % self.modulus) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1).then(|| self.from_i64(t0))
    }

    /// Centered representative in (-m/2, m/2].
    pub fn centered(&self, a: u32) -> i64 {
        let m = self.modulus as i64;
        let a = a as i64;
        if 2 * a > m {
            a - m
        } else {
            a
        }
    }

    /// Number of products `(m-1)^2` that can be summed in a u64 before reduction.
    #[inline]
    pub(crate) fn lazy_budget(&self) -> usize {
        // a reduced slot (< m) plus k products of at most (m-1)^2 must fit
        let m = self.modulus as u64;
        let max = (m - 1).pow(2).max(1);
        ((u64::MAX - m) / max).clamp(1, usize::MAX as u64) as usize
    }
}

impl std::fmt::Display for ResidueRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Z/{}Z", self.modulus)
    }
}
