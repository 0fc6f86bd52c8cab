//! Prime fields GF(p).

use crate::error::{Error, Result};

/// A field element, always kept in `0..p`.
pub type Coeff = u32;

/// Coefficient field: integers mod a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec { p: 2 }
    }
}

impl FieldSpec {
    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn gf2() -> Self {
        FieldSpec { p: 2 }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: Coeff, b: Coeff) -> Coeff {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as Coeff
    }

    #[inline]
    pub fn sub(&self, a: Coeff, b: Coeff) -> Coeff {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Coeff) -> Coeff {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Coeff, b: Coeff) -> Coeff {
        ((a as u64 * b as u64) % self.p as u64) as Coeff
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    ///
    /// Panics on zero.
    pub fn inv(&self, a: Coeff) -> Coeff {
        assert!(a % self.p != 0, "inverse of zero in GF({})", self.p);
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        s0.rem_euclid(self.p as i64) as Coeff
    }

    /// Maps a signed integer into the field.
    pub fn from_i64(&self, v: i64) -> Coeff {
        v.rem_euclid(self.p as i64) as Coeff
    }

    /// `(-1)^k` as a field element.
    pub fn sign(&self, k: usize) -> Coeff {
        if k % 2 == 0 {
            1
        } else {
            self.neg(1)
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(FieldSpec::new(4).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(0).is_err());
        assert!(FieldSpec::new(7).is_ok());
    }

    #[test]
    fn inverses_multiply_to_one() {
        for p in [2u32, 3, 5, 7, 11, 101, 65_521] {
            let f = FieldSpec::new(p).unwrap();
            for a in 1..p.min(300) {
                assert_eq!(f.mul(a, f.inv(a)), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn signs() {
        let f = FieldSpec::new(5).unwrap();
        assert_eq!(f.sign(0), 1);
        assert_eq!(f.sign(1), 4);
        assert_eq!(FieldSpec::gf2().sign(1), 1);
        assert_eq!(f.from_i64(-1), 4);
    }
}
