use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::error::{Error, Result};

/// Witness set that makes Miller-Rabin deterministic for every `n < 2^64`.
const WORD_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Each random round errs with probability at most 1/4, so 40 rounds give 2^-80.
const PROBABLE_PRIME_ROUNDS: u32 = 40;

/// Attempts allowed to `sample_prime` before giving up.
pub const SAMPLE_ATTEMPTS: u32 = 1 << 12;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality for machine words.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &WORD_WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WORD_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn random_below<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    // rejection sampling on the bit length of `bound`
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        let mut x = BigUint::from_bytes_le(&buf);
        let excess = bytes as u64 * 8 - bits;
        if excess > 0 {
            x >>= excess;
        }
        if &x < bound {
            return x;
        }
    }
}

/// Miller-Rabin with random bases; deterministic below `2^64`.
pub fn is_probable_prime<R: RngCore + ?Sized>(n: &BigUint, rng: &mut R) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    if n.is_even() {
        return false;
    }
    for &q in &WORD_WITNESSES {
        if (n % q).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    // bases uniform in [2, n-2]
    let span = n - BigUint::from(3u32);
    'round: for _ in 0..PROBABLE_PRIME_ROUNDS {
        let a = random_below(&span, rng) + BigUint::from(2u32);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

/// Least prime `p >= d + 2` that does not divide `a0`.
pub fn smallest_admissible_prime(d: usize, a0: &BigInt) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("order must be >= 1".into()));
    }
    if a0.is_zero() {
        return Err(Error::ZeroConstantCoefficient);
    }
    let mut p = d as u64 + 2;
    loop {
        if is_prime(p) && !(a0 % BigInt::from(p)).is_zero() {
            return Ok(p);
        }
        p += 1;
    }
}

/// Samples a prime whose bit length lies in `[lo, hi]`.
///
/// Each attempt draws a bit length uniformly from the range and then a
/// uniform odd integer of exactly that length.
pub fn sample_prime<R: RngCore + ?Sized>(lo: u32, hi: u32, rng: &mut R) -> Result<BigUint> {
    if lo < 8 || hi < lo {
        return Err(Error::InvalidArgument(format!(
            "prime bit range [{lo}, {hi}] must satisfy 8 <= lo <= hi"
        )));
    }
    for _ in 0..SAMPLE_ATTEMPTS {
        let bits = lo + (rng.next_u32() % (hi - lo + 1));
        let top = BigUint::one() << (bits - 1);
        let mut candidate = random_below(&top, rng) + &top;
        candidate |= BigUint::one();
        if is_probable_prime(&candidate, rng) {
            return Ok(candidate);
        }
    }
    Err(Error::PrimeSamplingFailed {
        attempts: SAMPLE_ATTEMPTS,
        lo,
        hi,
    })
}
