//! Interpolation parameters `(p, M, nu, R)` and zero counting inside a disc.
//!
//! For a prime `p >= d + 2` with `p` not dividing `a_0`, and `M` the order of
//! the companion matrix modulo `p`, each subsequence `n -> u_{Mn + ell}`
//! extends to a `p`-adic analytic function `F_ell`. The number of zeros of
//! `F_ell` in a disc `D(z, r)` is the largest `k < d` at which the `k`-th
//! forward difference of `n -> u_{M(p^r n + z) + ell}` attains the minimal
//! valuation.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{capped_valuation, smallest_admissible_prime, CappedValuation, ResidueMatrix};
use crate::lrs::{companion_matrix, delta_vector, size_of, Lrs};

/// Working parameters of the disc search for one recurrence and bound `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverParams {
    p: u64,
    multiplier: u64,
    nu: u64,
    depths: Vec<u32>,
    bound: BigUint,
    order: usize,
    nu_overridden: bool,
}

impl SolverParams {
    /// Derives `(p, M, nu, R)` for a normalized recurrence and bound `N`.
    pub fn derive(u: &Lrs, bound: &BigUint) -> Result<Self> {
        let d = u.order();
        let p = smallest_admissible_prime(d, u.constant_coefficient())?;
        let multiplier = multiplier_order(u, p)?;
        let depths: Vec<u32> = (0..multiplier)
            .map(|ell| depth_bound(bound, multiplier, ell, p))
            .collect();
        let max_depth = depths.iter().copied().max().unwrap_or(0);
        let nu = precision_bound(u, p, multiplier, max_depth);
        Ok(Self {
            p,
            multiplier,
            nu,
            depths,
            bound: bound.clone(),
            order: d,
            nu_overridden: false,
        })
    }

    /// Replaces the derived precision. Counts may then fail with
    /// [`Error::PrecisionExhausted`].
    pub fn with_precision_override(mut self, nu: u64) -> Result<Self> {
        if nu == 0 {
            return Err(Error::InvalidArgument("precision override must be >= 1".into()));
        }
        self.nu = nu;
        self.nu_overridden = true;
        Ok(self)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `M`, the order of the companion matrix modulo `p`.
    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn nu(&self) -> u64 {
        self.nu
    }

    pub fn nu_overridden(&self) -> bool {
        self.nu_overridden
    }

    pub fn bound(&self) -> &BigUint {
        &self.bound
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Disc depth `R` for residue class `ell`.
    pub fn depth_for(&self, ell: u64) -> u32 {
        self.depths[ell as usize]
    }

    pub fn depths(&self) -> &[u32] {
        &self.depths
    }

    pub fn max_depth(&self) -> u32 {
        self.depths.iter().copied().max().unwrap_or(0)
    }

    /// `p^nu`.
    pub fn precision_modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.nu as u32)
    }
}

/// Least `M >= 1` with `A^M = I (mod p)`, by direct iteration.
pub fn multiplier_order(u: &Lrs, p: u64) -> Result<u64> {
    if (u.constant_coefficient() % num_bigint::BigInt::from(p)).is_zero() {
        return Err(Error::InvalidArgument(format!(
            "p = {p} divides the constant coefficient; the companion matrix is singular"
        )));
    }
    let a: ResidueMatrix<u64> = companion_matrix(u, p)?;
    let d = u.order() as u32;
    let limit = p.checked_pow(d * d).unwrap_or(u64::MAX);
    let mut power = a.clone();
    let mut m = 1u64;
    while !power.is_identity() {
        power = power.mul(&a)?;
        m += 1;
        if m >= limit {
            // unreachable for invertible A: |GL_d(F_p)| < p^{d^2}
            return Err(Error::InvalidArgument("companion matrix order not found".into()));
        }
    }
    Ok(m)
}

/// Smallest `R >= 0` with `M p^R + ell > N`.
///
/// Strict inequality: it leaves `z` as the only index of `D(z, R)` in range.
pub fn depth_bound(bound: &BigUint, m: u64, ell: u64, p: u64) -> u32 {
    let mut r = 0u32;
    let mut reach = BigUint::from(m);
    let p = BigUint::from(p);
    while &reach + ell <= *bound {
        reach *= &p;
        r += 1;
    }
    r
}

/// Precision `nu` that exceeds every minimal valuation met by the search.
///
/// Instantiates `log_p(2^d 2^{(Md+ell)||u||} d^{Md+ell+1}) + r d + 1` at the
/// worst case `ell = M - 1`, `r = max_depth`, rounding the logarithm up.
pub fn precision_bound(u: &Lrs, p: u64, m: u64, max_depth: u32) -> u64 {
    let d = u.order() as f64;
    let size = size_of(u) as f64;
    let m = m as f64;
    let bits = d + (m * d + m - 1.0) * size + (m * d + m) * d.log2();
    (bits / (p as f64).log2()).ceil() as u64 + max_depth as u64 * u.order() as u64 + 1
}

/// Zero count `j` and minimal valuation `V` of `F_ell` on one disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscCount {
    pub j: usize,
    pub min_valuation: CappedValuation,
}

impl DiscCount {
    /// Picks `V = min` and `j = ` the largest index attaining it.
    /// `None` when every valuation saturates the cap.
    pub fn from_valuations(vals: &[CappedValuation]) -> Option<Self> {
        let min = *vals.iter().min()?;
        if min.saturated() {
            return None;
        }
        let j = vals.iter().rposition(|v| *v == min).expect("min is attained");
        Some(Self {
            j,
            min_valuation: min,
        })
    }

    /// Counts from differences known modulo `p^cap`. `None` when all vanish.
    pub fn from_differences(values: &[BigUint], p: u64, cap: u64) -> Option<Self> {
        let vals: Vec<_> = values.iter().map(|x| capped_valuation(x, p, cap)).collect();
        Self::from_valuations(&vals)
    }

    /// Re-expresses the valuation against a larger cap. Exact because the
    /// minimum was not saturated.
    pub(crate) fn recapped(self, cap: u64) -> Self {
        Self {
            j: self.j,
            min_valuation: CappedValuation::new(self.min_valuation.value(), cap),
        }
    }
}

fn check_disc(params: &SolverParams, ell: u64, z: &BigUint, r: u32) -> Result<()> {
    if ell >= params.multiplier {
        return Err(Error::InvalidArgument(format!(
            "ell = {ell} must be < M = {}",
            params.multiplier
        )));
    }
    let width = if r == 0 {
        BigUint::one()
    } else {
        BigUint::from(params.p).pow(r)
    };
    if z >= &width {
        return Err(Error::InvalidArgument(format!("centre z = {z} must be < p^{r}")));
    }
    Ok(())
}

/// Number of zeros (with multiplicity) of `F_ell` in `D(z, r)`, computed from
/// the first `d` differences modulo `p^nu`.
pub fn count_zeros_in_disc(
    u: &Lrs,
    params: &SolverParams,
    ell: u64,
    z: &BigUint,
    r: u32,
) -> Result<DiscCount> {
    check_disc(params, ell, z, r)?;
    let dv = delta_vector(u, params.multiplier, ell, z, r, params.p, params.nu)?;
    DiscCount::from_differences(&dv.values, params.p, params.nu).ok_or_else(|| {
        Error::PrecisionExhausted {
            ell,
            z: z.clone(),
            r,
            nu: params.nu,
        }
    })
}

/// Same result as [`count_zeros_in_disc`], found by doubling a working
/// precision from `start` up to `nu`. Valuations below the working cap are
/// already exact, so this stops as soon as one difference is nonzero.
pub fn count_zeros_escalating(
    u: &Lrs,
    params: &SolverParams,
    ell: u64,
    z: &BigUint,
    r: u32,
    start: u64,
) -> Result<DiscCount> {
    check_disc(params, ell, z, r)?;
    let mut cap = start.clamp(1, params.nu);
    loop {
        let dv = delta_vector(u, params.multiplier, ell, z, r, params.p, cap)?;
        if let Some(count) = DiscCount::from_differences(&dv.values, params.p, cap) {
            return Ok(count.recapped(params.nu));
        }
        if cap == params.nu {
            return Err(Error::PrecisionExhausted {
                ell,
                z: z.clone(),
                r,
                nu: params.nu,
            });
        }
        cap = cap.saturating_mul(2).min(params.nu);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Lrs {
        Lrs::from_i64(&[1, -3, 2], &[-1, 1, 7]).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn brute_order(u: &Lrs, p: u64) -> u64 {
        let a: ResidueMatrix<u64> = companion_matrix(u, p).unwrap();
        let mut acc = ResidueMatrix::identity(u.order(), p).unwrap();
        for m in 1.. {
            acc = acc.mul(&a).unwrap();
            if acc.is_identity() {
                return m;
            }
        }
        unreachable!()
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(multiplier_order(&example(), 5).unwrap(), 8);
        assert_eq!(multiplier_order(&Lrs::from_i64(&[1], &[3]).unwrap(), 5).unwrap(), 1);
        let fib = Lrs::from_i64(&[1, 1], &[0, 1]).unwrap();
        assert_eq!(multiplier_order(&fib, 5).unwrap(), brute_order(&fib, 5));
        assert_eq!(multiplier_order(&fib, 5).unwrap(), 20);
        assert!(multiplier_order(&Lrs::from_i64(&[5, 1], &[0, 1]).unwrap(), 5).is_err());
    }

    #[test]
    fn multiplier_power_is_identity_and_multiples_too() {
        let u = Lrs::from_i64(&[3, -2, 4, 1], &[1, 0, 0, 2]).unwrap();
        let p = smallest_admissible_prime(4, u.constant_coefficient()).unwrap();
        let m = multiplier_order(&u, p).unwrap();
        let a: ResidueMatrix<u64> = companion_matrix(&u, p).unwrap();
        assert!(a.pow_u64(m).is_identity());
        assert!(a.pow_u64(2 * m).is_identity());
        assert!((1..m).all(|k| !a.pow_u64(k).is_identity()));
        assert!(m < p.pow(16));
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth_bound(&big(200), 8, 3, 5), 2);
        assert_eq!(depth_bound(&big(200), 8, 4, 5), 2);
        assert_eq!(depth_bound(&big(7), 8, 0, 5), 0);
        // M p^R + ell = N still admits the index N itself; one level deeper
        assert_eq!(depth_bound(&big(203), 8, 3, 5), 3);
        assert_eq!(depth_bound(&big(202), 8, 3, 5), 2);
        assert_eq!(depth_bound(&big(0), 1, 0, 3), 0);
        assert_eq!(depth_bound(&big(200), 8, 0, 5), 3);
    }

    #[test]
    fn precision_examples() {
        // d = 1, M = 1, ||u|| = 2: ceil((1 + 2) / log2 5) + 0 + 1
        let u = Lrs::from_i64(&[1], &[1]).unwrap();
        assert_eq!(size_of(&u), 4);
        let tiny = Lrs::from_i64(&[0], &[0]).unwrap();
        assert_eq!(size_of(&tiny), 2);
        assert_eq!(precision_bound(&tiny, 5, 1, 0), 3);

        // cubic example: (3 + 31*16 + 32 log2 3) / log2 5 = 236.75 -> 237 + 2*3 + 1
        assert_eq!(precision_bound(&example(), 5, 8, 2), 244);
        assert!(precision_bound(&example(), 5, 8, 2) >= 5);
    }

    #[test]
    fn precision_grows_with_size() {
        let small = Lrs::from_i64(&[1, 1], &[1, 1]).unwrap();
        let large = Lrs::from_i64(&[1, 1], &[1 << 20, 1 << 20]).unwrap();
        assert!(precision_bound(&large, 5, 20, 3) > precision_bound(&small, 5, 20, 3));
    }

    #[test]
    fn derived_params_for_cubic_example() {
        let params = SolverParams::derive(&example(), &big(200)).unwrap();
        assert_eq!(params.p(), 5);
        assert_eq!(params.multiplier(), 8);
        // 200 = 8 * 5^2 + 0 still lies in range, so class 0 goes one deeper
        assert_eq!(params.depths(), &[3, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(params.nu(), precision_bound(&example(), 5, 8, 3));
        assert_eq!(params.nu(), 247);
        for ell in 0..8 {
            let reach = BigUint::from(8u32) * BigUint::from(5u32).pow(params.depth_for(ell)) + ell;
            assert!(reach > big(200));
        }
    }

    #[test]
    fn root_counts_match_cubic_example() {
        for nu in [5, 247] {
            let params = SolverParams::derive(&example(), &big(200))
                .unwrap()
                .with_precision_override(nu)
                .unwrap();
            let zero = BigUint::zero();
            let j: Vec<usize> = (0..8)
                .map(|ell| count_zeros_in_disc(&example(), &params, ell, &zero, 0).unwrap().j)
                .collect();
            assert_eq!(j, vec![0, 0, 0, 1, 2, 0, 0, 0], "nu = {nu}");
        }
    }

    #[test]
    fn saturated_differences_are_reported() {
        // F_4 on D(0,1) has differences (0, 2750, 1875): with nu = 2 all vanish
        let params = SolverParams::derive(&example(), &big(200))
            .unwrap()
            .with_precision_override(2)
            .unwrap();
        let err = count_zeros_in_disc(&example(), &params, 4, &BigUint::zero(), 1).unwrap_err();
        assert!(matches!(err, Error::PrecisionExhausted { ell: 4, r: 1, nu: 2, .. }));
    }

    #[test]
    fn escalation_matches_direct_count() {
        let u = example();
        let params = SolverParams::derive(&u, &big(200)).unwrap();
        for ell in 0..8 {
            for z in 0..5u64 {
                let direct = count_zeros_in_disc(&u, &params, ell, &big(z), 1).unwrap();
                let ladder = count_zeros_escalating(&u, &params, ell, &big(z), 1, 1).unwrap();
                assert_eq!(direct, ladder);
            }
        }
    }

    #[test]
    fn tie_breaking_takes_the_largest_index() {
        let v = |x| CappedValuation::new(x, 9);
        let c = DiscCount::from_valuations(&[v(1), v(1), v(3)]).unwrap();
        assert_eq!(c.j, 1);
        assert_eq!(DiscCount::from_valuations(&[v(9), v(9)]), None);
    }

    #[test]
    fn rejects_discs_outside_the_class() {
        let params = SolverParams::derive(&example(), &big(200)).unwrap();
        assert!(count_zeros_in_disc(&example(), &params, 8, &big(0), 0).is_err());
        assert!(count_zeros_in_disc(&example(), &params, 0, &big(5), 1).is_err());
    }
}
