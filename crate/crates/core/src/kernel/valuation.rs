use num_bigint::BigUint;
use num_traits::Zero;

/// `min(v_p(x), cap)` for a residue known only modulo `p^cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CappedValuation {
    value: u64,
    cap: u64,
}

impl CappedValuation {
    /// # Panics
    /// If `value > cap` or `cap == 0`.
    pub fn new(value: u64, cap: u64) -> Self {
        assert!(cap >= 1, "valuation cap must be positive");
        assert!(value <= cap, "valuation {value} exceeds cap {cap}");
        Self { value, cap }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// True when the residue is divisible by `p^cap`, so the real valuation is unknown.
    pub fn saturated(&self) -> bool {
        self.value == self.cap
    }
}

/// Capped `p`-adic valuation of a residue `x` in `[0, p^cap)`; zero saturates.
pub fn capped_valuation(x: &BigUint, p: u64, cap: u64) -> CappedValuation {
    assert!(p >= 2, "valuation base must be >= 2");
    if x.is_zero() {
        return CappedValuation::new(cap, cap);
    }
    let mut v = 0;
    let mut x = x.clone();
    let p = BigUint::from(p);
    while v < cap {
        let (q, r) = num_integer::Integer::div_rem(&x, &p);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    CappedValuation::new(v, cap)
}
