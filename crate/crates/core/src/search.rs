//! Candidate-zero search by `p`-adic disc refinement.
//!
//! For every residue class `ell mod M` whose subsequence is not identically
//! zero, the search walks the tree of discs `D(z, r)` depth first, expanding
//! only discs that contain a zero of `F_ell`. A live disc at depth
//! `R = depth_for(ell)` yields the single candidate index `M z + ell`.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interp::{count_zeros_escalating, count_zeros_in_disc, DiscCount, SolverParams};
use crate::kernel::{Residue, ResidueMatrix};
use crate::lrs::{companion_matrix, forward_differences, term_mod_in, Lrs};

/// Word-sized prime used to rule out zeros cheaply before exact evaluation.
const SIEVE_PRIME: u64 = (1 << 61) - 1;

/// Cap on the working precision used for root discs before escalating.
const ROOT_PRECISION: u64 = 64;

/// The residue disc `{ x : x = z mod p^r }` of subsequence `ell`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Disc {
    pub ell: u64,
    pub z: BigUint,
    pub r: u32,
}

impl Disc {
    pub fn root(ell: u64) -> Self {
        Self {
            ell,
            z: BigUint::zero(),
            r: 0,
        }
    }

    /// The `p` subdiscs `D(z + p^r a, r + 1)`, ascending in `a`.
    pub fn children(&self, p: u64) -> impl Iterator<Item = Disc> + '_ {
        let step = BigUint::from(p).pow(self.r);
        (0..p).map(move |a| Disc {
            ell: self.ell,
            z: &self.z + &step * a,
            r: self.r + 1,
        })
    }
}

/// The set `{ residue + modulus * t : t >= 0 }`, all of whose terms vanish.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Progression {
    pub modulus: u64,
    pub residue: BigUint,
}

impl Progression {
    pub fn contains(&self, n: &BigUint) -> bool {
        n >= &self.residue && ((n - &self.residue) % self.modulus).is_zero()
    }

    /// Number of elements in `[0, bound]`.
    pub fn count_up_to(&self, bound: &BigUint) -> BigUint {
        if bound < &self.residue {
            BigUint::zero()
        } else {
            (bound - &self.residue) / self.modulus + 1u32
        }
    }

    /// Elements in `[0, bound]`, ascending.
    pub fn elements_up_to<'a>(&'a self, bound: &'a BigUint) -> impl Iterator<Item = BigUint> + 'a {
        let mut next = self.residue.clone();
        std::iter::from_fn(move || {
            if &next > bound {
                return None;
            }
            let out = next.clone();
            next += self.modulus;
            Some(out)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub disc: Disc,
    pub count: DiscCount,
}

/// Output of the candidate search, in the index space of the searched recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroReport {
    pub params: SolverParams,
    pub progressions: Vec<Progression>,
    /// Sorted, distinct, all `<= N`, none inside a progression.
    pub candidates: Vec<BigUint>,
    /// Visited discs in search order; empty unless requested.
    pub trace: Vec<TraceEntry>,
    /// Whether the small-bound exact scan replaced the disc search.
    pub exact_scan: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub trace: bool,
    /// Scan `[0, N]` exactly when `N <= M d p` and `N <= exact_scan_limit`.
    pub small_n_fallback: bool,
    pub exact_scan_limit: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            trace: false,
            small_n_fallback: true,
            exact_scan_limit: 10_000,
        }
    }
}

/// Whether `u_{Mn + ell} = 0` for `n = 0..d`, i.e. `F_ell` vanishes identically.
pub fn subsequence_identically_zero(u: &Lrs, m: u64, ell: u64) -> Result<bool> {
    if ell >= m {
        return Err(Error::InvalidArgument(format!("ell = {ell} must be < M = {m}")));
    }
    let d = u.order() as u64;
    for n in 0..d {
        let idx = BigUint::from(m * n + ell);
        if !term_mod_in(u, &idx, &SIEVE_PRIME)?.is_zero() {
            return Ok(false);
        }
    }
    let last = m * (d - 1) + ell;
    let zero: Vec<bool> = u.iter_exact().take(last as usize + 1).map(|x| x.is_zero()).collect();
    Ok((0..d).all(|n| zero[(m * n + ell) as usize]))
}

/// Children of `disc` with their zero counts, computed at the full precision.
pub fn refine_disc(u: &Lrs, params: &SolverParams, disc: &Disc) -> Result<Vec<(Disc, DiscCount)>> {
    disc.children(params.p())
        .map(|child| {
            let count = count_zeros_in_disc(u, params, child.ell, &child.z, child.r)?;
            Ok((child, count))
        })
        .collect()
}

pub fn find_candidates(u: &Lrs, bound: &BigUint, params: &SolverParams) -> Result<ZeroReport> {
    find_candidates_with(u, bound, params, &SearchOptions::default())
}

pub fn find_candidates_with(
    u: &Lrs,
    bound: &BigUint,
    params: &SolverParams,
    opts: &SearchOptions,
) -> Result<ZeroReport> {
    if u.constant_coefficient().is_zero() {
        return Err(Error::ZeroConstantCoefficient);
    }
    if params.bound() != bound || params.order() != u.order() {
        return Err(Error::InvalidArgument(
            "parameters were derived for a different instance".into(),
        ));
    }
    let engine = Engine::new(u, params, opts)?;
    let m = params.multiplier();
    let scan_threshold = BigUint::from(m) * u.order() as u64 * params.p();
    let exact_scan = opts.small_n_fallback
        && bound <= &scan_threshold
        && bound <= &BigUint::from(opts.exact_scan_limit);

    let outcomes: Vec<ClassOutcome> = if exact_scan {
        let n = bound.to_u64().expect("bounded by the scan limit");
        let zeros: Vec<bool> = u.iter_exact().take(n as usize + 1).map(|x| x.is_zero()).collect();
        (0..m)
            .into_par_iter()
            .map(|ell| engine.scan_class(ell, &zeros))
            .collect::<Result<_>>()?
    } else {
        (0..m)
            .into_par_iter()
            .map(|ell| engine.search_class(ell))
            .collect::<Result<_>>()?
    };

    let mut report = ZeroReport {
        params: params.clone(),
        progressions: Vec::new(),
        candidates: Vec::new(),
        trace: Vec::new(),
        exact_scan,
    };
    for (ell, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            ClassOutcome::Progression => report.progressions.push(Progression {
                modulus: m,
                residue: BigUint::from(ell as u64),
            }),
            ClassOutcome::Searched { candidates, trace } => {
                report.candidates.extend(candidates);
                report.trace.extend(trace);
            }
        }
    }
    report.candidates.sort();
    report.candidates.dedup();
    Ok(report)
}

enum ClassOutcome {
    Progression,
    Searched {
        candidates: Vec<BigUint>,
        trace: Vec<TraceEntry>,
    },
}

/// `h(0), ..., h(d-1)` with `h(n)` the last entry of `stride^n * base`.
fn subsequence_terms<T: Residue>(base: &[T], stride: &ResidueMatrix<T>, d: usize) -> Vec<T> {
    let mut v = base.to_vec();
    let mut out = Vec::with_capacity(d);
    for n in 0..d {
        out.push(v.last().expect("order >= 1").clone());
        if n + 1 < d {
            v = stride.mul_vec(&v);
        }
    }
    out
}

struct Engine<'a> {
    u: &'a Lrs,
    params: &'a SolverParams,
    opts: &'a SearchOptions,
    /// `A^ell beta mod q` and `A^M mod q` for the sieve prime.
    sieve_bases: Vec<Vec<u64>>,
    sieve_stride: ResidueMatrix<u64>,
    /// Same quantities modulo `p^root_cap`.
    root_cap: u64,
    root_modulus: BigUint,
    root_bases: Vec<Vec<BigUint>>,
    root_stride: ResidueMatrix<BigUint>,
    /// Zero flags of `u_0 .. u_{Md - 1}`, filled on first use.
    leading_zeros: OnceLock<Vec<bool>>,
}

fn class_bases<T: Residue>(u: &Lrs, modulus: &T, m: u64) -> Result<(Vec<Vec<T>>, ResidueMatrix<T>)> {
    let a = companion_matrix(u, modulus.clone())?;
    let mut bases = Vec::with_capacity(m as usize);
    let mut v = u.initial_state(modulus);
    for _ in 0..m {
        let next = a.mul_vec(&v);
        bases.push(v);
        v = next;
    }
    Ok((bases, a.pow_u64(m)))
}

impl<'a> Engine<'a> {
    fn new(u: &'a Lrs, params: &'a SolverParams, opts: &'a SearchOptions) -> Result<Self> {
        let m = params.multiplier();
        let (sieve_bases, sieve_stride) = class_bases(u, &SIEVE_PRIME, m)?;
        let root_cap = params.nu().min(ROOT_PRECISION);
        let root_modulus = BigUint::from(params.p()).pow(root_cap as u32);
        let (root_bases, root_stride) = class_bases(u, &root_modulus, m)?;
        Ok(Self {
            u,
            params,
            opts,
            sieve_bases,
            sieve_stride,
            root_cap,
            root_modulus,
            root_bases,
            root_stride,
            leading_zeros: OnceLock::new(),
        })
    }

    fn is_progression(&self, ell: u64) -> bool {
        let d = self.u.order();
        let sieved = subsequence_terms(&self.sieve_bases[ell as usize], &self.sieve_stride, d);
        if sieved.iter().any(|x| *x != 0) {
            return false;
        }
        let m = self.params.multiplier();
        let flags = self.leading_zeros.get_or_init(|| {
            let len = (m * d as u64) as usize;
            self.u.iter_exact().take(len).map(|x| x.is_zero()).collect()
        });
        (0..d as u64).all(|n| flags[(m * n + ell) as usize])
    }

    fn scan_class(&self, ell: u64, zeros: &[bool]) -> Result<ClassOutcome> {
        if self.is_progression(ell) {
            return Ok(ClassOutcome::Progression);
        }
        let m = self.params.multiplier() as usize;
        let candidates = zeros
            .iter()
            .enumerate()
            .skip(ell as usize)
            .step_by(m)
            .filter(|(_, z)| **z)
            .map(|(n, _)| BigUint::from(n))
            .collect();
        Ok(ClassOutcome::Searched {
            candidates,
            trace: Vec::new(),
        })
    }

    fn fail(&self, disc: &Disc) -> Error {
        Error::PrecisionExhausted {
            ell: disc.ell,
            z: disc.z.clone(),
            r: disc.r,
            nu: self.params.nu(),
        }
    }

    /// Count from differences known modulo `p^cap`, escalating towards `nu`
    /// when every one of them vanishes.
    fn settle(&self, diffs: &[BigUint], cap: u64, disc: &Disc) -> Result<DiscCount> {
        let nu = self.params.nu();
        match DiscCount::from_differences(diffs, self.params.p(), cap) {
            Some(count) => Ok(count.recapped(nu)),
            None if cap < nu => count_zeros_escalating(self.u, self.params, disc.ell, &disc.z, disc.r, cap * 2),
            None => Err(self.fail(disc)),
        }
    }

    fn search_class(&self, ell: u64) -> Result<ClassOutcome> {
        if self.is_progression(ell) {
            return Ok(ClassOutcome::Progression);
        }
        let d = self.u.order();
        let p = self.params.p();
        let m = self.params.multiplier();
        let bound = self.params.bound();
        let depth = self.params.depth_for(ell);
        let mut trace = Vec::new();
        let mut candidates = Vec::new();

        let root = Disc::root(ell);
        let h = subsequence_terms(&self.root_bases[ell as usize], &self.root_stride, d);
        let diffs = forward_differences(&h, &self.root_modulus);
        let root_count = self.settle(&diffs, self.root_cap, &root)?;
        if self.opts.trace {
            trace.push(TraceEntry {
                disc: root.clone(),
                count: root_count,
            });
        }
        if root_count.j == 0 {
            return Ok(ClassOutcome::Searched { candidates, trace });
        }
        if depth == 0 {
            let n = BigUint::from(ell);
            if &n <= bound {
                candidates.push(n);
            }
            return Ok(ClassOutcome::Searched { candidates, trace });
        }

        // Every disc of depth r <= R has V(h) <= V(F_ell) + r j(F_ell), so
        // this cap never saturates and gives the same counts as p^nu.
        let v_root = root_count.min_valuation.value();
        let cap = self
            .params
            .nu()
            .min(v_root + depth as u64 * root_count.j as u64 + 1);
        let modulus = BigUint::from(p).pow(cap as u32);
        let a = companion_matrix(self.u, modulus.clone())?;
        let mut strides = Vec::with_capacity(depth as usize + 1);
        strides.push(a.pow_u64(m));
        for r in 0..depth as usize {
            let next = strides[r].pow_u64(p);
            strides.push(next);
        }
        let base = a.pow_u64(ell).mul_vec(&self.u.initial_state(&modulus));

        let mut stack = vec![(root, base)];
        while let Some((disc, base)) = stack.pop() {
            let r = disc.r as usize;
            let mut child_base = base;
            let mut live = Vec::new();
            for (a, child) in disc.children(p).enumerate() {
                if a > 0 {
                    child_base = strides[r].mul_vec(&child_base);
                }
                let h = subsequence_terms(&child_base, &strides[r + 1], d);
                let diffs = forward_differences(&h, &modulus);
                let count = self.settle(&diffs, cap, &child)?;
                if self.opts.trace {
                    trace.push(TraceEntry {
                        disc: child.clone(),
                        count,
                    });
                }
                if count.j == 0 {
                    continue;
                }
                if child.r == depth {
                    let n = &child.z * m + ell;
                    if &n <= bound {
                        candidates.push(n);
                    }
                } else {
                    live.push((child, child_base.clone()));
                }
            }
            stack.extend(live.into_iter().rev());
        }
        Ok(ClassOutcome::Searched { candidates, trace })
    }
}
