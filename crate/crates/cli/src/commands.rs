//! Subcommand implementations, independent of argument parsing and I/O.

use std::time::Instant;

use num_bigint::BigUint;
use skolem_core::verify::zero_set_of;
use skolem_core::{analyze, brute_force_zeros, Analysis, Error, Lrs, SearchOptions, VerifyConfig};

use crate::wire::{DecisionDoc, ParamsDoc, ProgressionDoc, ResultDocument, TimingsDoc, TraceDoc};

/// Process exit codes.
pub mod exit {
    pub const NO_ZERO: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const MALFORMED: i32 = 2;
    pub const CAP_EXCEEDED: i32 = 3;
    pub const HAS_ZERO: i32 = 10;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub verify: VerifyConfig,
    pub nu_override: Option<u64>,
    pub trace: bool,
    pub timings: bool,
    pub small_n_fallback: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            verify: VerifyConfig::default(),
            nu_override: None,
            trace: false,
            timings: false,
            small_n_fallback: true,
        }
    }
}

impl RunOptions {
    fn search(&self) -> SearchOptions {
        SearchOptions {
            trace: self.trace,
            small_n_fallback: self.small_n_fallback,
            exact_scan_limit: self.verify.max_exact,
        }
    }
}

/// A failed command: exit code plus a message for standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandError {
    pub code: i32,
    pub message: String,
}

impl CommandError {
    pub fn malformed(message: impl Into<String>) -> Self {
        Self {
            code: exit::MALFORMED,
            message: message.into(),
        }
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ExactCapExceeded { .. } => exit::CAP_EXCEEDED,
            Error::InvalidLrs(_) => exit::MALFORMED,
            _ => exit::FAILURE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn elapsed_ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn describe(doc: &mut ResultDocument, analysis: &Analysis, opts: &RunOptions) {
    doc.params = analysis.params().map(|p| ParamsDoc {
        p: p.p(),
        m: p.multiplier(),
        nu: p.nu(),
        nu_overridden: p.nu_overridden(),
        depths: p.depths().to_vec(),
        shift: analysis.shift(),
    });
    doc.progressions = Some(
        analysis
            .progressions
            .iter()
            .filter(|p| p.residue <= analysis.bound)
            .map(|p| ProgressionDoc {
                modulus: p.modulus,
                residue: p.residue.clone(),
            })
            .collect(),
    );
    doc.candidates = Some(analysis.candidates.clone());
    if opts.trace {
        let trace = analysis.report.as_ref().map(|r| r.trace.as_slice()).unwrap_or_default();
        doc.trace = Some(
            trace
                .iter()
                .map(|t| TraceDoc {
                    ell: t.disc.ell,
                    z: t.disc.z.clone(),
                    r: t.disc.r,
                    j: t.count.j,
                    v: t.count.min_valuation.value(),
                })
                .collect(),
        );
    }
}

/// Candidate search without verification.
pub fn candidates(u: &Lrs, bound: &BigUint, opts: &RunOptions) -> Result<ResultDocument, CommandError> {
    let start = Instant::now();
    let analysis = analyze(u, bound, opts.nu_override, &opts.search())?;
    let mut doc = ResultDocument::empty("candidates", bound);
    describe(&mut doc, &analysis, opts);
    if opts.timings {
        let total = elapsed_ms(start);
        doc.timings = Some(TimingsDoc {
            search_ms: total,
            verify_ms: 0.0,
            total_ms: total,
        });
    }
    Ok(doc)
}

/// Full zero set and decision, with exit code [`exit::HAS_ZERO`] or [`exit::NO_ZERO`].
pub fn decide(u: &Lrs, bound: &BigUint, opts: &RunOptions) -> Result<(ResultDocument, i32), CommandError> {
    let start = Instant::now();
    let analysis = analyze(u, bound, opts.nu_override, &opts.search())?;
    let searched = elapsed_ms(start);
    let verify_start = Instant::now();
    let zeros = zero_set_of(&analysis, &opts.verify)?;
    let verified = elapsed_ms(verify_start);

    let mut doc = ResultDocument::empty("decide", bound);
    describe(&mut doc, &analysis, opts);
    doc.zeros = Some(zeros.exceptional.clone());
    doc.error_exponent = Some(opts.verify.error_exponent);
    doc.seed = Some(opts.verify.seed);
    let code = match zeros.smallest() {
        Some(n) => {
            doc.decision = Some(DecisionDoc::HasZero);
            doc.first_zero = Some(n);
            exit::HAS_ZERO
        }
        None => {
            doc.decision = Some(DecisionDoc::NoZero);
            exit::NO_ZERO
        }
    };
    if opts.timings {
        doc.timings = Some(TimingsDoc {
            search_ms: searched,
            verify_ms: verified,
            total_ms: elapsed_ms(start),
        });
    }
    Ok((doc, code))
}

/// Zeros by direct iteration; bounds above the oracle cap exit with [`exit::CAP_EXCEEDED`].
pub fn oracle(u: &Lrs, bound: &BigUint, opts: &RunOptions) -> Result<(ResultDocument, i32), CommandError> {
    let start = Instant::now();
    let zeros = brute_force_zeros(u, bound)?;
    let mut doc = ResultDocument::empty("oracle", bound);
    let code = if zeros.is_empty() { exit::NO_ZERO } else { exit::HAS_ZERO };
    doc.decision = Some(if zeros.is_empty() {
        DecisionDoc::NoZero
    } else {
        DecisionDoc::HasZero
    });
    doc.first_zero = zeros.first().map(|&n| BigUint::from(n));
    doc.zeros = Some(zeros.into_iter().map(BigUint::from).collect());
    if opts.timings {
        let total = elapsed_ms(start);
        doc.timings = Some(TimingsDoc {
            search_ms: total,
            verify_ms: 0.0,
            total_ms: total,
        });
    }
    Ok((doc, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Lrs {
        Lrs::from_i64(&[1, -3, 2], &[-1, 1, 7]).unwrap()
    }

    fn strings(v: &Option<Vec<BigUint>>) -> Vec<String> {
        v.as_ref().unwrap().iter().map(|n| n.to_string()).collect()
    }

    #[test]
    fn golden_candidates() {
        let opts = RunOptions {
            nu_override: Some(5),
            ..RunOptions::default()
        };
        let doc = candidates(&example(), &BigUint::from(200u32), &opts).unwrap();
        assert_eq!(strings(&doc.candidates), ["4", "59", "100"]);
        assert!(doc.zeros.is_none() && doc.decision.is_none());
        let params = doc.params.unwrap();
        assert_eq!((params.p, params.m, params.nu), (5, 8, 5));
    }

    #[test]
    fn golden_decision() {
        let (doc, code) = decide(&example(), &BigUint::from(200u32), &RunOptions::default()).unwrap();
        assert_eq!(code, exit::HAS_ZERO);
        assert_eq!(strings(&doc.zeros), ["4"]);
        assert_eq!(doc.first_zero, Some(BigUint::from(4u32)));
    }

    #[test]
    fn oracle_cap_maps_to_its_exit_code() {
        let err = oracle(&example(), &BigUint::from(10_000_000u32), &RunOptions::default()).unwrap_err();
        assert_eq!(err.code, exit::CAP_EXCEEDED);
    }

    #[test]
    fn precision_failure_is_a_runtime_error() {
        let opts = RunOptions {
            nu_override: Some(1),
            small_n_fallback: false,
            ..RunOptions::default()
        };
        let err = candidates(&example(), &BigUint::from(200u32), &opts).unwrap_err();
        assert_eq!(err.code, exit::FAILURE);
    }
}
