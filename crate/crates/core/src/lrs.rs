//! Integer linear recurrence sequences.
//!
//! An [`Lrs`] of order `d` is given by coefficients `a_0..a_{d-1}` and initial
//! values `u_0..u_{d-1}` and satisfies
//! `u_{n+d} = a_{d-1} u_{n+d-1} + ... + a_0 u_n`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Residue, ResidueMatrix};

/// Largest index `term_exact` evaluates by default.
pub const TERM_EXACT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lrs {
    coeffs: Vec<BigInt>,
    initial: Vec<BigInt>,
}

impl Lrs {
    /// `coeffs[i]` multiplies `u_{n+i}`; `initial[i]` is `u_i`.
    pub fn new(coeffs: Vec<BigInt>, initial: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidLrs("order must be at least 1".into()));
        }
        if coeffs.len() != initial.len() {
            return Err(Error::InvalidLrs(format!(
                "{} coefficients but {} initial values",
                coeffs.len(),
                initial.len()
            )));
        }
        Ok(Self { coeffs, initial })
    }

    pub fn from_i64(coeffs: &[i64], initial: &[i64]) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            initial.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    /// `a_0`.
    pub fn constant_coefficient(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// Iterator over `u_0, u_1, ...` computed exactly.
    pub fn iter_exact(&self) -> ExactTerms<'_> {
        ExactTerms {
            lrs: self,
            window: self.initial.clone(),
            emitted: 0,
        }
    }

    /// The state vector `(u_{d-1}, ..., u_0)` reduced modulo `modulus`.
    pub fn initial_state<T: Residue>(&self, modulus: &T) -> Vec<T> {
        self.initial
            .iter()
            .rev()
            .map(|x| T::reduce_int(x, modulus))
            .collect()
    }
}

impl fmt::Display for Lrs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.order();
        write!(f, "u[n+{d}] =")?;
        for (i, a) in self.coeffs.iter().enumerate().rev() {
            write!(f, " {:+}*u[n+{i}]", a)?;
        }
        write!(f, "; u[0..{d}] = [")?;
        for (i, x) in self.initial.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Exact term iterator; each step costs `O(d)` big-integer operations.
pub struct ExactTerms<'a> {
    lrs: &'a Lrs,
    window: Vec<BigInt>,
    emitted: usize,
}

impl Iterator for ExactTerms<'_> {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        let d = self.lrs.order();
        if self.emitted < d {
            self.emitted += 1;
            return Some(self.window[self.emitted - 1].clone());
        }
        let mut next = BigInt::zero();
        for (a, x) in self.lrs.coeffs.iter().zip(&self.window) {
            if !a.is_zero() && !x.is_zero() {
                next += a * x;
            }
        }
        self.window.rotate_left(1);
        self.window[d - 1] = next.clone();
        self.emitted += 1;
        Some(next)
    }
}

/// A recurrence split into an exact prefix and a tail with `a_0 != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedLrs {
    pub prefix: Vec<BigInt>,
    pub tail: Lrs,
}

impl NormalizedLrs {
    /// Number of leading terms held in `prefix`.
    pub fn shift(&self) -> usize {
        self.prefix.len()
    }

    /// Whether the tail is the identically-zero placeholder.
    pub fn tail_is_zero(&self) -> bool {
        self.tail.initial.iter().all(Zero::is_zero)
    }
}

/// Peels trailing zero coefficients `a_0 = ... = a_{k-1} = 0` into a prefix.
pub fn normalize(raw: &Lrs) -> NormalizedLrs {
    let d = raw.order();
    let k = raw.coeffs.iter().take_while(|a| a.is_zero()).count();
    if k == d {
        return NormalizedLrs {
            prefix: raw.initial.clone(),
            tail: Lrs {
                coeffs: vec![BigInt::one()],
                initial: vec![BigInt::zero()],
            },
        };
    }
    NormalizedLrs {
        prefix: raw.initial[..k].to_vec(),
        tail: Lrs {
            coeffs: raw.coeffs[k..].to_vec(),
            initial: raw.initial[k..].to_vec(),
        },
    }
}

/// Bits to write `y`: magnitude bit length plus a sign bit; `||0|| = 1`.
pub fn bit_size(y: &BigInt) -> u64 {
    if y.is_zero() {
        1
    } else {
        y.magnitude().bits() + 1
    }
}

/// `||u|| = sum_i (||a_i|| + ||u_i||)`.
pub fn size_of(u: &Lrs) -> u64 {
    u.coeffs.iter().chain(&u.initial).map(bit_size).sum()
}

/// Companion matrix with top row `(a_{d-1}, ..., a_0)` and ones below the diagonal.
pub fn companion_matrix<T: Residue>(u: &Lrs, modulus: T) -> Result<ResidueMatrix<T>> {
    let d = u.order();
    let mut ints = vec![BigInt::zero(); d * d];
    for (j, a) in u.coeffs.iter().rev().enumerate() {
        ints[j] = a.clone();
    }
    for i in 1..d {
        ints[i * d + i - 1] = BigInt::one();
    }
    ResidueMatrix::from_ints(d, modulus, &ints)
}

pub fn term_exact(u: &Lrs, n: u64) -> Result<BigInt> {
    term_exact_with_cap(u, n, TERM_EXACT_CAP)
}

pub fn term_exact_with_cap(u: &Lrs, n: u64, cap: u64) -> Result<BigInt> {
    if n > cap {
        return Err(Error::ExactCapExceeded {
            index: BigUint::from(n),
            cap,
        });
    }
    Ok(u.iter_exact().nth(n as usize).expect("infinite iterator"))
}

/// `u_n mod m` as `alpha * A^n * beta` over any residue backend.
pub fn term_mod_in<T: Residue>(u: &Lrs, n: &BigUint, modulus: &T) -> Result<T> {
    let a = companion_matrix(u, modulus.clone())?;
    let state = a.pow(n).mul_vec(&u.initial_state(modulus));
    Ok(state.last().expect("order >= 1").clone())
}

/// `u_n mod modulus` in `O(d^3 log n)` modular operations.
pub fn term_mod(u: &Lrs, n: &BigUint, modulus: &BigUint) -> Result<BigUint> {
    match modulus.to_u64() {
        Some(m) if m < 1 << 63 => term_mod_in(u, n, &m).map(BigUint::from),
        _ => term_mod_in(u, n, modulus),
    }
}

/// `[(Delta^0 h)(0), ..., (Delta^{d-1} h)(0)]` modulo `p^nu`, where
/// `h(n) = u_{M (p^r n + z) + ell}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaVector {
    pub values: Vec<BigUint>,
    pub modulus: BigUint,
}

/// `C(k, n)` for `0 <= n <= k < len`, exact.
pub(crate) fn binomial_rows(len: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(len);
    for k in 0..len {
        let mut row = vec![BigInt::one(); k + 1];
        for n in 1..k {
            row[n] = &rows[k - 1][n - 1] + &rows[k - 1][n];
        }
        rows.push(row);
    }
    rows
}

/// Forward differences at zero from `h(0..len)` by the alternating binomial sum.
pub fn forward_differences<T: Residue>(h: &[T], modulus: &T) -> Vec<T> {
    let rows = binomial_rows(h.len());
    let h: Vec<BigInt> = h.iter().map(|x| BigInt::from(x.to_biguint())).collect();
    rows.iter()
        .enumerate()
        .map(|(k, row)| {
            let mut acc = BigInt::zero();
            for (n, c) in row.iter().enumerate() {
                let term = c * &h[n];
                if (k - n) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            T::reduce_int(&acc, modulus)
        })
        .collect()
}

/// Index `M (p^r n + z) + ell` of the `n`-th term of `h_{z,r}`.
pub fn subsequence_index(m: u64, ell: u64, z: &BigUint, r: u32, p: u64, n: u64) -> BigUint {
    let pr = BigUint::from(p).pow(r);
    (pr * n + z) * m + ell
}

#[allow(clippy::too_many_arguments)]
pub fn delta_vector(
    u: &Lrs,
    m: u64,
    ell: u64,
    z: &BigUint,
    r: u32,
    p: u64,
    nu: u64,
) -> Result<DeltaVector> {
    if ell >= m {
        return Err(Error::InvalidArgument(format!("ell = {ell} must be < M = {m}")));
    }
    if nu == 0 {
        return Err(Error::InvalidArgument("precision nu must be >= 1".into()));
    }
    if z >= &BigUint::from(p).pow(r).max(BigUint::one()) {
        return Err(Error::InvalidArgument(format!("centre z = {z} must be < p^r")));
    }
    let modulus = BigUint::from(p).pow(nu as u32);
    let h = (0..u.order() as u64)
        .map(|n| term_mod(u, &subsequence_index(m, ell, z, r, p, n), &modulus))
        .collect::<Result<Vec<_>>>()?;
    Ok(DeltaVector {
        values: forward_differences(&h, &modulus),
        modulus,
    })
}
