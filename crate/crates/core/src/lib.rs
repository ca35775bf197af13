//! Bounded Skolem problem for integer linear recurrence sequences.
//!
//! Given a recurrence `u` and a bound `N`, [`zero_set`] returns every
//! `n <= N` with `u_n = 0` as finitely many arithmetic progressions plus a
//! finite set, and [`decide_bounded_skolem`] reports the smallest such `n`.
//! The search runs in time polynomial in the bit length of `N`, so bounds
//! far beyond direct iteration are practical.
//!
//! ```
//! use num_bigint::BigUint;
//! use skolem_core::{zero_set, Lrs, VerifyConfig};
//!
//! // u_{n+3} = 2 u_{n+2} - 3 u_{n+1} + u_n, u = -1, 1, 7, ...
//! let u = Lrs::from_i64(&[1, -3, 2], &[-1, 1, 7]).unwrap();
//! let zeros = zero_set(&u, &BigUint::from(200u32), &VerifyConfig::default()).unwrap();
//! assert_eq!(zeros.exceptional, vec![BigUint::from(4u32)]);
//! ```

pub mod error;
pub mod interp;
pub mod kernel;
pub mod lrs;
pub mod oracle;
pub mod search;
pub mod verify;

use num_bigint::BigUint;

pub use error::{Error, Result};
pub use interp::{count_zeros_escalating, count_zeros_in_disc, DiscCount, SolverParams};
pub use kernel::{CappedValuation, Residue, ResidueMatrix};
pub use lrs::{normalize, term_exact, term_mod, Lrs, NormalizedLrs};
pub use oracle::{brute_force_residue_zero_counts, brute_force_zeros};
pub use search::{find_candidates, find_candidates_with, Disc, Progression, SearchOptions, ZeroReport};
pub use verify::{
    analyze, decide_bounded_skolem, is_term_zero, zero_set, Analysis, Decision, Verdict, VerifyConfig,
    Witness, ZeroSetDescription,
};

/// Residue matrices with arbitrary-precision modulus.
pub type BigResidueMatrix = ResidueMatrix<BigUint>;
/// Residue matrices with a modulus below `2^63`.
pub type WordResidueMatrix = ResidueMatrix<u64>;
