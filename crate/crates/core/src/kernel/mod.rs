//! Exact integer kernel: primes, residue matrices, capped valuations.

mod prime;
mod residue;
mod valuation;

pub use prime::{is_prime, is_probable_prime, sample_prime, smallest_admissible_prime, SAMPLE_ATTEMPTS};
pub use residue::{mat_mul_mod, mat_pow_mod, Residue, ResidueMatrix};
pub use valuation::{capped_valuation, CappedValuation};
