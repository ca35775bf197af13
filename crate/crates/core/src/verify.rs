//! Randomized zero testing of individual terms and the final answers.
//!
//! A term `u_n` with `n` far beyond direct evaluation is tested by computing
//! it modulo random primes. A nonzero residue certifies `u_n != 0`; a term is
//! declared zero only after `kappa` agreeing trials, one-sided like any
//! polynomial identity test.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interp::SolverParams;
use crate::kernel::{is_prime, sample_prime, Residue};
use crate::lrs::{normalize, size_of, term_mod, Lrs, NormalizedLrs};
use crate::search::{find_candidates_with, Progression, SearchOptions, ZeroReport};

/// Default number of independent trials per term.
pub const DEFAULT_ERROR_EXPONENT: u32 = 64;

/// Terms with index up to this value are evaluated exactly by default.
pub const DEFAULT_MAX_EXACT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// `kappa`: each false `Zero` has probability at most `2^-kappa`.
    pub error_exponent: u32,
    pub seed: u64,
    /// Indices `n <= max_exact` are decided by exact evaluation.
    pub max_exact: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            error_exponent: DEFAULT_ERROR_EXPONENT,
            seed: 0,
            max_exact: DEFAULT_MAX_EXACT,
        }
    }
}

impl VerifyConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.error_exponent == 0 {
            return Err(Error::InvalidArgument("error exponent must be >= 1".into()));
        }
        Ok(())
    }

    /// Generator owned by the test of index `n`, independent of test order.
    fn rng_for(&self, n: &BigUint) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(fnv1a(&n.to_bytes_le()));
        rng
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// `(q, rho)` with `u_n = rho != 0 (mod q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub prime: BigUint,
    pub residue: BigUint,
}

impl Witness {
    /// Recomputes `u_n mod q` and checks it equals the recorded nonzero residue.
    pub fn check(&self, u: &Lrs, n: &BigUint) -> Result<bool> {
        Ok(!self.residue.is_zero() && term_mod(u, n, &self.prime)? == self.residue)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// All `trials` residues vanished; `exact` when decided by exact evaluation.
    Zero { trials: u32, exact: bool },
    NonZero { witness: Witness },
}

impl Verdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, Verdict::Zero { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// The smallest zero found.
    HasZero(BigUint),
    NoZero,
}

/// `B` with `|u_n| <= 2^B`.
pub fn magnitude_bound_bits(u: &Lrs, n: &BigUint) -> BigUint {
    let size = size_of(u);
    let log_d = (u.order() as u64).next_power_of_two().trailing_zeros() as u64;
    BigUint::from(size) + n * (size + log_d + 1)
}

/// Bit length of the sampled primes for the term `u_n`.
pub fn prime_bits(u: &Lrs, n: &BigUint) -> Result<u32> {
    let b = magnitude_bound_bits(u, n);
    let ceil_log2 = if b <= BigUint::from(1u32) {
        0
    } else {
        (b - 1u32).bits()
    };
    (ceil_log2 + 2)
        .max(16)
        .to_u32()
        .ok_or_else(|| Error::InvalidArgument(format!("index {n} too large for prime sampling")))
}

/// Smallest prime not dividing the nonzero integer `value`.
fn small_witness(value: &BigInt) -> Witness {
    let mut q = 2u64;
    loop {
        if is_prime(q) {
            let rho = u64::reduce_int(value, &q);
            if rho != 0 {
                return Witness {
                    prime: BigUint::from(q),
                    residue: BigUint::from(rho),
                };
            }
        }
        q += 1;
    }
}

fn verdict_from_exact(value: &BigInt) -> Verdict {
    if value.is_zero() {
        Verdict::Zero {
            trials: 0,
            exact: true,
        }
    } else {
        Verdict::NonZero {
            witness: small_witness(value),
        }
    }
}

fn randomized_verdict(u: &Lrs, n: &BigUint, cfg: &VerifyConfig) -> Result<Verdict> {
    let bits = prime_bits(u, n)?;
    let mut rng = cfg.rng_for(n);
    for _ in 0..cfg.error_exponent {
        let q = sample_prime(bits, bits, &mut rng)?;
        let rho = term_mod(u, n, &q)?;
        if !rho.is_zero() {
            return Ok(Verdict::NonZero {
                witness: Witness {
                    prime: q,
                    residue: rho,
                },
            });
        }
    }
    Ok(Verdict::Zero {
        trials: cfg.error_exponent,
        exact: false,
    })
}

/// Decides `u_n = 0`, exactly for small `n` and by `kappa` modular trials otherwise.
pub fn is_term_zero(u: &Lrs, n: &BigUint, cfg: &VerifyConfig) -> Result<Verdict> {
    cfg.validate()?;
    match n.to_u64() {
        Some(small) if small <= cfg.max_exact => {
            let value = u.iter_exact().nth(small as usize).expect("infinite iterator");
            Ok(verdict_from_exact(&value))
        }
        _ => randomized_verdict(u, n, cfg),
    }
}

/// Verdicts for many indices; exact ones share one pass over the sequence.
pub fn verdicts(u: &Lrs, indices: &[BigUint], cfg: &VerifyConfig) -> Result<Vec<Verdict>> {
    cfg.validate()?;
    let small_limit = indices
        .iter()
        .filter_map(|n| n.to_u64().filter(|&s| s <= cfg.max_exact))
        .max();
    let exact: Vec<BigInt> = match small_limit {
        Some(last) => u.iter_exact().take(last as usize + 1).collect(),
        None => Vec::new(),
    };
    indices
        .par_iter()
        .map(|n| match n.to_u64() {
            Some(s) if s <= cfg.max_exact => Ok(verdict_from_exact(&exact[s as usize])),
            _ => randomized_verdict(u, n, cfg),
        })
        .collect()
}

/// Zeros in `[0, N]`: whole progressions plus isolated exceptional zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSetDescription {
    pub bound: BigUint,
    /// Only progressions with at least one element `<= N`.
    pub progressions: Vec<Progression>,
    /// Sorted zeros not covered by any progression.
    pub exceptional: Vec<BigUint>,
}

impl ZeroSetDescription {
    pub fn contains(&self, n: &BigUint) -> bool {
        n <= &self.bound
            && (self.exceptional.binary_search(n).is_ok()
                || self.progressions.iter().any(|p| p.contains(n)))
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty() && self.exceptional.is_empty()
    }

    pub fn smallest(&self) -> Option<BigUint> {
        self.progressions
            .iter()
            .map(|p| p.residue.clone())
            .chain(self.exceptional.first().cloned())
            .min()
    }

    /// Every zero in `[0, N]`, ascending. Progressions are expanded, so
    /// this is only sensible for small bounds.
    pub fn expand(&self) -> Vec<BigUint> {
        let mut all: Vec<BigUint> = self
            .progressions
            .iter()
            .flat_map(|p| p.elements_up_to(&self.bound).collect::<Vec<_>>())
            .chain(self.exceptional.iter().cloned())
            .collect();
        all.sort();
        all.dedup();
        all
    }
}

/// Candidate search on the normalized recurrence, reported in the index
/// space of the original one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub lrs: Lrs,
    pub bound: BigUint,
    pub normalized: NormalizedLrs,
    /// Search output on the tail, or `None` when `N` lies inside the prefix.
    pub report: Option<ZeroReport>,
    /// Tail progressions shifted to original indices.
    pub progressions: Vec<Progression>,
    /// Zero prefix indices together with shifted tail candidates, sorted.
    pub candidates: Vec<BigUint>,
}

impl Analysis {
    pub fn params(&self) -> Option<&SolverParams> {
        self.report.as_ref().map(|r| &r.params)
    }

    pub fn shift(&self) -> usize {
        self.normalized.shift()
    }
}

/// Normalizes `u`, derives the search parameters and collects candidates.
pub fn analyze(
    u: &Lrs,
    bound: &BigUint,
    nu_override: Option<u64>,
    opts: &SearchOptions,
) -> Result<Analysis> {
    let normalized = normalize(u);
    let shift = normalized.shift();
    let mut candidates: Vec<BigUint> = normalized
        .prefix
        .iter()
        .enumerate()
        .filter(|(i, x)| x.is_zero() && &BigUint::from(*i) <= bound)
        .map(|(i, _)| BigUint::from(i))
        .collect();
    let mut progressions = Vec::new();
    let report = if bound >= &BigUint::from(shift) {
        let tail_bound = bound - shift;
        let mut params = SolverParams::derive(&normalized.tail, &tail_bound)?;
        if let Some(nu) = nu_override {
            params = params.with_precision_override(nu)?;
        }
        let report = find_candidates_with(&normalized.tail, &tail_bound, &params, opts)?;
        progressions.extend(report.progressions.iter().map(|p| Progression {
            modulus: p.modulus,
            residue: &p.residue + shift,
        }));
        candidates.extend(report.candidates.iter().map(|n| n + shift));
        Some(report)
    } else {
        None
    };
    Ok(Analysis {
        lrs: u.clone(),
        bound: bound.clone(),
        normalized,
        report,
        progressions,
        candidates,
    })
}

/// Tests every candidate independently.
pub fn zero_set_of(analysis: &Analysis, cfg: &VerifyConfig) -> Result<ZeroSetDescription> {
    let verdicts = verdicts(&analysis.lrs, &analysis.candidates, cfg)?;
    let exceptional = analysis
        .candidates
        .iter()
        .zip(&verdicts)
        .filter(|(_, v)| v.is_zero())
        .map(|(n, _)| n.clone())
        .collect();
    Ok(ZeroSetDescription {
        bound: analysis.bound.clone(),
        progressions: analysis
            .progressions
            .iter()
            .filter(|p| p.residue <= analysis.bound)
            .cloned()
            .collect(),
        exceptional,
    })
}

/// The smallest zero: candidates below the first progression element are
/// tested in ascending order, stopping at the first `Zero` verdict.
pub fn decide_of(analysis: &Analysis, cfg: &VerifyConfig) -> Result<Decision> {
    cfg.validate()?;
    let first_progression = analysis
        .progressions
        .iter()
        .map(|p| &p.residue)
        .filter(|r| *r <= &analysis.bound)
        .min();
    for n in &analysis.candidates {
        if first_progression.is_some_and(|f| n >= f) {
            break;
        }
        if is_term_zero(&analysis.lrs, n, cfg)?.is_zero() {
            return Ok(Decision::HasZero(n.clone()));
        }
    }
    Ok(match first_progression {
        Some(f) => Decision::HasZero(f.clone()),
        None => Decision::NoZero,
    })
}

pub fn decide_bounded_skolem(u: &Lrs, bound: &BigUint, cfg: &VerifyConfig) -> Result<Decision> {
    let analysis = analyze(u, bound, None, &SearchOptions::default())?;
    decide_of(&analysis, cfg)
}

pub fn zero_set(u: &Lrs, bound: &BigUint, cfg: &VerifyConfig) -> Result<ZeroSetDescription> {
    let analysis = analyze(u, bound, None, &SearchOptions::default())?;
    zero_set_of(&analysis, cfg)
}
