//! Brute-force reference: iterate the recurrence exactly and record zeros.
//!
//! Deliberately shares no evaluation code with the solver.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lrs::Lrs;

/// Largest bound the oracle accepts.
pub const ORACLE_CAP: u64 = 1_000_000;

fn checked_bound(bound: &BigUint) -> Result<u64> {
    match bound.to_u64() {
        Some(n) if n <= ORACLE_CAP => Ok(n),
        _ => Err(Error::ExactCapExceeded {
            index: bound.clone(),
            cap: ORACLE_CAP,
        }),
    }
}

/// Calls `visit(n, u_n)` for `n = 0..=bound`.
fn scan(u: &Lrs, bound: u64, mut visit: impl FnMut(u64, &BigInt)) {
    let d = u.order();
    let coeffs = u.coeffs();
    let mut window: Vec<BigInt> = u.initial().to_vec();
    for n in 0..=bound {
        let i = (n % d as u64) as usize;
        if n >= d as u64 {
            // window[(n - d + k) mod d] holds u_{n-d+k}
            let mut next = BigInt::zero();
            for (k, a) in coeffs.iter().enumerate() {
                next += a * &window[(i + k) % d];
            }
            window[i] = next;
        }
        visit(n, &window[i]);
    }
}

/// All `n` in `[0, N]` with `u_n = 0`, ascending.
pub fn brute_force_zeros(u: &Lrs, bound: &BigUint) -> Result<Vec<u64>> {
    let bound = checked_bound(bound)?;
    let mut zeros = Vec::new();
    scan(u, bound, |n, x| {
        if x.is_zero() {
            zeros.push(n);
        }
    });
    Ok(zeros)
}

/// Number of zeros in `[0, N]` congruent to `ell` modulo `m`.
pub fn brute_force_residue_zero_counts(u: &Lrs, bound: &BigUint, m: u64, ell: u64) -> Result<u64> {
    if m == 0 || ell >= m {
        return Err(Error::InvalidArgument(format!("need 0 <= ell < M, got ell = {ell}, M = {m}")));
    }
    Ok(brute_force_zeros(u, bound)?
        .into_iter()
        .filter(|n| n % m == ell)
        .count() as u64)
}
