//! Randomized checks of the search and verifier against the brute-force oracle.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use skolem_core::verify::{verdicts, zero_set_of};
use skolem_core::{
    analyze, brute_force_residue_zero_counts, brute_force_zeros, count_zeros_in_disc, find_candidates_with,
    is_term_zero, normalize, Disc, Lrs, SearchOptions, SolverParams, Verdict, VerifyConfig,
};

fn lrs(max_order: usize) -> impl Strategy<Value = Lrs> {
    (1..=max_order).prop_flat_map(|d| {
        (prop::collection::vec(-9i64..=9, d), prop::collection::vec(-9i64..=9, d))
            .prop_map(|(c, i)| Lrs::from_i64(&c, &i).unwrap())
    })
}

/// Recurrences whose normalized form has a small multiplier, so full-precision
/// recounts stay cheap.
fn small_lrs() -> impl Strategy<Value = Lrs> {
    lrs(3).prop_filter("multiplier too large", |u| {
        let tail = normalize(u).tail;
        SolverParams::derive(&tail, &BigUint::from(1000u32)).is_ok_and(|p| p.multiplier() <= 40)
    })
}

fn searched() -> SearchOptions {
    SearchOptions {
        trace: true,
        small_n_fallback: false,
        ..SearchOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_zero_is_covered(u in lrs(4), n in 0u64..=5000) {
        let bound = BigUint::from(n);
        let analysis = analyze(&u, &bound, None, &searched()).unwrap();
        for z in brute_force_zeros(&u, &bound).unwrap() {
            let z = BigUint::from(z);
            prop_assert!(
                analysis.candidates.contains(&z) || analysis.progressions.iter().any(|p| p.contains(&z)),
                "zero {} missed for {}", z, u
            );
        }
    }

    #[test]
    fn candidates_respect_their_classes(u in lrs(4), n in 0u64..=5000) {
        let tail = normalize(&u).tail;
        let bound = BigUint::from(n);
        let params = SolverParams::derive(&tail, &bound).unwrap();
        let report = find_candidates_with(&tail, &bound, &params, &searched()).unwrap();
        let m = params.multiplier();
        let d = tail.order();
        let mut per_class: BTreeMap<u64, usize> = BTreeMap::new();
        for c in &report.candidates {
            prop_assert!(c <= &bound);
            let ell = (c % m).to_u64().unwrap();
            prop_assert!(report.progressions.iter().all(|p| p.residue != BigUint::from(ell)));
            *per_class.entry(ell).or_default() += 1;
        }
        prop_assert!(per_class.values().all(|&k| k < d));
        prop_assert!(report.candidates.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn frontier_and_work_bounds(u in lrs(4), n in 0u64..=5000) {
        let tail = normalize(&u).tail;
        let bound = BigUint::from(n);
        let params = SolverParams::derive(&tail, &bound).unwrap();
        let report = find_candidates_with(&tail, &bound, &params, &searched()).unwrap();
        let d = tail.order();
        let counts: BTreeMap<&Disc, usize> = report.trace.iter().map(|t| (&t.disc, t.count.j)).collect();
        let mut live: BTreeMap<(u64, u32), usize> = BTreeMap::new();
        let mut visited: BTreeMap<u64, usize> = BTreeMap::new();
        for t in &report.trace {
            prop_assert!(t.count.j < d);
            *visited.entry(t.disc.ell).or_default() += 1;
            if t.count.j >= 1 {
                *live.entry((t.disc.ell, t.disc.r)).or_default() += 1;
            }
            // a disc never holds more zeros than its parent
            if t.disc.r > 0 {
                let step = BigUint::from(params.p()).pow(t.disc.r - 1);
                let parent = Disc { ell: t.disc.ell, z: &t.disc.z % &step, r: t.disc.r - 1 };
                prop_assert!(t.count.j <= counts[&parent]);
            }
        }
        for (&(ell, _), &k) in &live {
            let root = counts[&Disc::root(ell)];
            prop_assert!(k <= root);
        }
        for (&ell, &k) in &visited {
            let r = params.depth_for(ell) as usize;
            prop_assert!(k <= (d - 1) * params.p() as usize * r + 1);
        }
    }

    #[test]
    fn search_is_deterministic(u in lrs(4), n in 0u64..=5000) {
        let bound = BigUint::from(n);
        let a = analyze(&u, &bound, None, &searched()).unwrap();
        let b = analyze(&u, &bound, None, &searched()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn zero_set_matches_oracle(u in lrs(5), n in 0u64..=3000, seed in any::<u64>()) {
        let bound = BigUint::from(n);
        let cfg = VerifyConfig::with_seed(seed);
        let analysis = analyze(&u, &bound, None, &SearchOptions::default()).unwrap();
        let got: Vec<u64> = zero_set_of(&analysis, &cfg).unwrap().expand().iter().map(|x| x.to_u64().unwrap()).collect();
        prop_assert_eq!(got, brute_force_zeros(&u, &bound).unwrap());
    }

    #[test]
    fn randomized_verdicts_match_exact_terms(u in lrs(4), n in 0u64..=2000, seed in any::<u64>()) {
        let bound = BigUint::from(n);
        let analysis = analyze(&u, &bound, None, &searched()).unwrap();
        let cfg = VerifyConfig { max_exact: 0, ..VerifyConfig::with_seed(seed) };
        let vs = verdicts(&u, &analysis.candidates, &cfg).unwrap();
        for (c, v) in analysis.candidates.iter().zip(&vs) {
            let exact = u.iter_exact().nth(c.to_usize().unwrap()).unwrap();
            prop_assert_eq!(v.is_zero(), exact.is_zero());
            if let Verdict::NonZero { witness } = v {
                prop_assert!(witness.check(&u, c).unwrap());
            }
        }
    }

    #[test]
    fn verdicts_are_reproducible(u in lrs(3), n in 10_001u64..1_000_000, seed in any::<u64>()) {
        let cfg = VerifyConfig::with_seed(seed);
        let idx = BigUint::from(n);
        prop_assert_eq!(is_term_zero(&u, &idx, &cfg).unwrap(), is_term_zero(&u, &idx, &cfg).unwrap());
    }

    #[test]
    fn residue_counts_sum_to_the_zero_count(u in lrs(4), n in 0u64..=2000, m in 1u64..12) {
        let bound = BigUint::from(n);
        let total = brute_force_zeros(&u, &bound).unwrap().len() as u64;
        let split: u64 = (0..m).map(|ell| brute_force_residue_zero_counts(&u, &bound, m, ell).unwrap()).sum();
        prop_assert_eq!(split, total);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_counts_match_full_precision_counts(u in small_lrs(), n in 0u64..=1000) {
        let tail = normalize(&u).tail;
        let bound = BigUint::from(n);
        let params = SolverParams::derive(&tail, &bound).unwrap();
        let report = find_candidates_with(&tail, &bound, &params, &searched()).unwrap();
        for t in report.trace.iter().take(60) {
            let direct = count_zeros_in_disc(&tail, &params, t.disc.ell, &t.disc.z, t.disc.r).unwrap();
            prop_assert_eq!(direct, t.count);
        }
    }
}

#[test]
fn identically_zero_classes_become_progressions() {
    // u = 0, 1, 0, -1, 0, 1, ... vanishes on every even index
    let u = Lrs::from_i64(&[-1, 0], &[0, 1]).unwrap();
    let bound = BigUint::from(1000u32);
    let analysis = analyze(&u, &bound, None, &searched()).unwrap();
    assert!(!analysis.progressions.is_empty());
    let zeros = zero_set_of(&analysis, &VerifyConfig::default()).unwrap();
    let expected: Vec<BigUint> = (0..=1000u32).step_by(2).map(BigUint::from).collect();
    assert_eq!(zeros.expand(), expected);
}
