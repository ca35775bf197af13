//! Residue arithmetic and square matrices over `Z / mZ`.
//!
//! Everything here is generic over the integer type that stores a residue.
//! `u64` covers word-sized moduli (the prime `p` itself, verifier primes up
//! to 63 bits) and `BigUint` covers `p^nu` and anything larger.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer type able to hold canonical residues in `[0, m)`.
pub trait Residue: Clone + Eq + Ord + Debug + Zero + One + Send + Sync {
    /// Canonical representative of `x mod m`, for any sign of `x`.
    fn reduce_int(x: &BigInt, m: &Self) -> Self;

    fn add_mod(&self, rhs: &Self, m: &Self) -> Self;

    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self;

    /// `sum(a_i * b_i) mod m`.
    fn dot_mod<'a>(a: &'a [Self], b: impl Iterator<Item = &'a Self>, m: &Self) -> Self
    where
        Self: 'a,
    {
        a.iter()
            .zip(b)
            .fold(Self::zero(), |acc, (x, y)| acc.add_mod(&x.mul_mod(y, m), m))
    }

    fn to_biguint(&self) -> BigUint;
}

impl Residue for u64 {
    fn reduce_int(x: &BigInt, m: &Self) -> Self {
        x.mod_floor(&BigInt::from(*m))
            .to_u64()
            .expect("residue fits the modulus")
    }

    fn add_mod(&self, rhs: &Self, m: &Self) -> Self {
        ((*self as u128 + *rhs as u128) % *m as u128) as u64
    }

    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        ((*self as u128 * *rhs as u128) % *m as u128) as u64
    }

    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Residue for BigUint {
    fn reduce_int(x: &BigInt, m: &Self) -> Self {
        let r = x.mod_floor(&BigInt::from_biguint(Sign::Plus, m.clone()));
        r.to_biguint().expect("mod_floor is nonnegative")
    }

    fn add_mod(&self, rhs: &Self, m: &Self) -> Self {
        let s = self + rhs;
        if &s >= m {
            s - m
        } else {
            s
        }
    }

    fn mul_mod(&self, rhs: &Self, m: &Self) -> Self {
        (self * rhs) % m
    }

    // One reduction per dot product instead of one per term.
    fn dot_mod<'a>(a: &'a [Self], b: impl Iterator<Item = &'a Self>, m: &Self) -> Self {
        let mut acc = BigUint::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        acc % m
    }

    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

/// A `dim x dim` matrix of canonical residues modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMatrix<T> {
    dim: usize,
    modulus: T,
    entries: Vec<T>,
}

impl<T: Residue> ResidueMatrix<T> {
    fn check_modulus(dim: usize, modulus: &T) -> Result<()> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be >= 1".into()));
        }
        if modulus.to_biguint() < BigUint::from(2u32) {
            return Err(Error::InvalidArgument("modulus must be >= 2".into()));
        }
        Ok(())
    }

    /// Builds a matrix from row-major entries that are already reduced.
    pub fn from_entries(dim: usize, modulus: T, entries: Vec<T>) -> Result<Self> {
        Self::check_modulus(dim, &modulus)?;
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| *e >= &modulus) {
            return Err(Error::UnreducedResidue {
                value: bad.to_biguint(),
                modulus: modulus.to_biguint(),
            });
        }
        Ok(Self {
            dim,
            modulus,
            entries,
        })
    }

    /// Builds a matrix from arbitrary integers, reducing each entry.
    pub fn from_ints(dim: usize, modulus: T, ints: &[BigInt]) -> Result<Self> {
        Self::check_modulus(dim, &modulus)?;
        if ints.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                dim * dim,
                ints.len()
            )));
        }
        let entries = ints.iter().map(|x| T::reduce_int(x, &modulus)).collect();
        Ok(Self {
            dim,
            modulus,
            entries,
        })
    }

    pub fn identity(dim: usize, modulus: T) -> Result<Self> {
        Self::check_modulus(dim, &modulus)?;
        let mut entries = vec![T::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = T::one();
        }
        Ok(Self {
            dim,
            modulus,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> &T {
        &self.modulus
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch);
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            let row = self.row(i);
            for j in 0..n {
                let col = (0..n).map(|k| rhs.get(k, j));
                entries.push(T::dot_mod(row, col, &self.modulus));
            }
        }
        Self {
            dim: n,
            modulus: self.modulus.clone(),
            entries,
        }
    }

    /// `self^e` by left-to-right binary exponentiation.
    pub fn pow(&self, e: &BigUint) -> Self {
        let mut acc = Self::identity(self.dim, self.modulus.clone()).expect("validated");
        for i in (0..e.bits()).rev() {
            acc = acc.mul_unchecked(&acc);
            if e.bit(i) {
                acc = acc.mul_unchecked(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, e: u64) -> Self {
        self.pow(&BigUint::from(e))
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|i| T::dot_mod(self.row(i), v.iter(), &self.modulus))
            .collect()
    }
}

/// Entrywise `(a * b) mod m`.
pub fn mat_mul_mod<T: Residue>(a: &ResidueMatrix<T>, b: &ResidueMatrix<T>) -> Result<ResidueMatrix<T>> {
    a.mul(b)
}

/// `a^e mod m` using `O(log e)` multiplications.
pub fn mat_pow_mod<T: Residue>(a: &ResidueMatrix<T>, e: &BigUint) -> ResidueMatrix<T> {
    a.pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m64(dim: usize, modulus: u64, e: &[u64]) -> ResidueMatrix<u64> {
        ResidueMatrix::from_entries(dim, modulus, e.to_vec()).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = m64(2, 7, &[3, 5, 6, 2]);
        let i = ResidueMatrix::identity(2, 7).unwrap();
        assert_eq!(a.mul(&i).unwrap(), a);
        assert_eq!(i.mul(&a).unwrap(), a);
    }

    #[test]
    fn one_by_one_product() {
        let a = m64(1, 5, &[2]);
        let b = m64(1, 5, &[3]);
        assert_eq!(a.mul(&b).unwrap().entries(), &[1]);
    }

    #[test]
    fn exponent_zero_is_identity() {
        let a = m64(2, 5, &[1, 1, 1, 0]);
        assert!(a.pow(&BigUint::zero()).is_identity());
    }

    #[test]
    fn fibonacci_matrix_has_order_dividing_twenty_mod_five() {
        let a = m64(2, 5, &[1, 1, 1, 0]);
        let mut it = ResidueMatrix::identity(2, 5).unwrap();
        for _ in 0..20 {
            it = it.mul(&a).unwrap();
        }
        assert!(it.is_identity());
        assert!(a.pow_u64(20).is_identity());
    }

    #[test]
    fn rejects_mismatched_operands() {
        let a = m64(2, 5, &[1, 1, 1, 0]);
        let b = m64(1, 5, &[1]);
        let c = m64(2, 7, &[1, 1, 1, 0]);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        assert_eq!(a.mul(&c), Err(Error::ModulusMismatch));
    }

    #[test]
    fn rejects_unreduced_entries_and_tiny_modulus() {
        assert!(ResidueMatrix::from_entries(1, 5u64, vec![5]).is_err());
        assert!(ResidueMatrix::from_entries(1, 1u64, vec![0]).is_err());
        assert!(ResidueMatrix::<u64>::identity(0, 5).is_err());
    }

    #[test]
    fn negative_integers_reduce_to_canonical_residues() {
        let a = ResidueMatrix::from_ints(1, BigUint::from(5u32), &[BigInt::from(-3)]).unwrap();
        assert_eq!(a.entries()[0], BigUint::from(2u32));
        assert_eq!(u64::reduce_int(&BigInt::from(-1), &7), 6);
    }

    #[test]
    fn word_and_big_backends_agree() {
        let ints: Vec<BigInt> = [2, -3, 1, 1, 0, 0, 0, 1, 0].iter().map(|&x| BigInt::from(x)).collect();
        let small = ResidueMatrix::from_ints(3, 3125u64, &ints).unwrap();
        let big = ResidueMatrix::from_ints(3, BigUint::from(3125u32), &ints).unwrap();
        let e = BigUint::from(123_456_789u64);
        let ps = small.pow(&e);
        let pb = big.pow(&e);
        let ps: Vec<BigUint> = ps.entries().iter().map(|x| x.to_biguint()).collect();
        assert_eq!(ps, pb.entries());
    }
}
