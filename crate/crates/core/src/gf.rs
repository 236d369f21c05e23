//! Arithmetic in prime fields GF(p).
//!
//! Residues are plain `u32` values in `[0, p)`. Every operation reduces
//! immediately, so intermediate products fit comfortably in `u64` for any
//! modulus up to 2^16.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpidError};

/// Largest modulus accepted by [`FieldPrime::new`].
pub const MAX_PRIME: u32 = 1 << 16;

/// A prime modulus `p` with `2 <= p <= 2^16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldPrime {
    p: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldPrime {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(SpidError::InvalidPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u32 {
        (a % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(SpidError::InverseOfZero);
        }
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.p as i64) as u32)
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Number of 1-dimensional subspaces of an `dim`-dimensional space,
    /// `(p^dim - 1) / (p - 1)`.
    pub fn projective_points(&self, dim: usize) -> u128 {
        let q = self.p as u128;
        let mut total = 0u128;
        let mut power = 1u128;
        for _ in 0..dim {
            total += power;
            power *= q;
        }
        total
    }
}

impl TryFrom<u32> for FieldPrime {
    type Error = SpidError;

    fn try_from(p: u32) -> Result<Self> {
        Self::new(p)
    }
}

impl From<FieldPrime> for u32 {
    fn from(f: FieldPrime) -> u32 {
        f.p
    }
}

impl std::fmt::Display for FieldPrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// A coordinate vector over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FVector {
    entries: Vec<u32>,
}

impl FVector {
    /// Checks that every entry is a residue of `field`.
    pub fn new(entries: Vec<u32>, field: FieldPrime) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e >= field.order()) {
            return Err(SpidError::InvalidEntry {
                value: bad,
                modulus: field.order(),
            });
        }
        Ok(Self { entries })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            entries: vec![0; ambient_dim],
        }
    }

    /// The `index`-th standard basis vector.
    pub fn unit(ambient_dim: usize, index: usize) -> Self {
        let mut entries = vec![0; ambient_dim];
        entries[index] = 1;
        Self { entries }
    }

    pub(crate) fn from_raw(entries: Vec<u32>) -> Self {
        Self { entries }
    }

    pub fn ambient_dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &FVector, field: FieldPrime) -> FVector {
        debug_assert_eq!(self.ambient_dim(), other.ambient_dim());
        FVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32, field: FieldPrime) -> FVector {
        FVector {
            entries: self.entries.iter().map(|&a| field.mul(a, c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_primes_and_out_of_range() {
        for p in [0, 1, 4, 9, 15, 65535, 65537, 1 << 20] {
            assert!(FieldPrime::new(p).is_err(), "{p} accepted");
        }
        for p in [2, 3, 5, 7, 65521] {
            assert!(FieldPrime::new(p).is_ok(), "{p} rejected");
        }
    }

    #[test]
    fn small_examples() {
        let f2 = FieldPrime::new(2).unwrap();
        let f3 = FieldPrime::new(3).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        assert_eq!(f3.add(2, 2), 1);
        assert_eq!(f3.inv(2).unwrap(), 2);
        for p in [2, 3, 5, 7, 11] {
            let f = FieldPrime::new(p).unwrap();
            assert_eq!(f.inv(1).unwrap(), 1);
            for x in 0..p {
                assert_eq!(f.add(0, x), x);
                assert_eq!(f.mul(1, x), x);
            }
        }
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = FieldPrime::new(5).unwrap();
        assert!(matches!(f.inv(0), Err(SpidError::InverseOfZero)));
    }

    #[test]
    fn field_axioms_exhaustive_small_primes() {
        for p in [2u32, 3, 5, 7] {
            let f = FieldPrime::new(p).unwrap();
            for a in 0..p {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.sub(a, a), 0);
                if a != 0 {
                    let ai = f.inv(a).unwrap();
                    assert_eq!(f.mul(a, ai), 1);
                    assert_eq!(f.inv(ai).unwrap(), a);
                    assert_eq!(f.pow(a, (p - 1) as u64), 1);
                }
                for b in 0..p {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..p {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn projective_point_counts() {
        let f2 = FieldPrime::new(2).unwrap();
        let f3 = FieldPrime::new(3).unwrap();
        assert_eq!(f2.projective_points(2), 3);
        assert_eq!(f2.projective_points(3), 7);
        assert_eq!(f3.projective_points(3), 13);
        assert_eq!(f3.projective_points(0), 0);
    }

    #[test]
    fn vector_entries_are_checked() {
        let f3 = FieldPrime::new(3).unwrap();
        assert!(FVector::new(vec![0, 1, 2], f3).is_ok());
        assert!(FVector::new(vec![0, 3], f3).is_err());
    }
}
