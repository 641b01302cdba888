//! Exact counts of (relatively prime) subsets of `{1..n}`.
//!
//! * `f(n)`: nonempty subsets whose gcd is 1,
//! * `f_k(n)`: the same restricted to `k`-element subsets,
//! * `Φ(n)`, `Φ_k(n)`: nonempty (`k`-)subsets whose gcd is coprime to `n`.
//!
//! All four are Möbius-weighted sums evaluated in arbitrary precision.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::arith::{divisors, SieveTables};
use crate::error::{require_positive, Error, Result};

/// Nonnegative arbitrary-precision value of a counting function.
pub type Count = BigUint;
/// Signed accumulator for Möbius-weighted partial sums.
pub type SignedCount = BigInt;

/// How the sums over `d = 1..n` in `f` and `f_k` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CountStrategy {
    /// One term per `d`.
    #[default]
    Direct,
    /// One term per distinct value of `⌊n/d⌋`, weighted by Mertens differences.
    Blocked,
}

impl std::str::FromStr for CountStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Self::Direct),
            "blocked" => Ok(Self::Blocked),
            other => Err(Error::InvalidArgument(format!(
                "unknown count strategy `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for CountStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Direct => "direct",
            Self::Blocked => "blocked",
        })
    }
}

/// Exact binomial coefficient, zero when `k > a`.
pub fn binomial(a: u64, k: u64) -> Count {
    if k > a {
        return Count::zero();
    }
    let k = k.min(a - k);
    let mut acc = Count::one();
    for i in 0..k {
        // the running product is C(a, i + 1) after the division, so it is exact
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

fn pow2_minus_one(q: u64) -> Count {
    (Count::one() << q) - 1u32
}

/// Converts a finished Möbius sum into a [`Count`]; a negative total is a bug.
pub(crate) fn into_count(total: SignedCount, what: &str) -> Result<Count> {
    match total.sign() {
        Sign::Minus => Err(Error::Defect(format!("{what} evaluated to {total}"))),
        _ => Ok(total.magnitude().clone()),
    }
}

pub(crate) fn add_weighted(acc: &mut SignedCount, weight: i64, term: Count) {
    match weight.signum() {
        1 => *acc += BigInt::from_biguint(Sign::Plus, term) * weight,
        -1 => *acc -= BigInt::from_biguint(Sign::Plus, term) * weight.unsigned_abs(),
        _ => {}
    }
}

/// `Σ_{d=1}^{n} μ(d) · term(⌊n/d⌋)`, skipping all `d` with `⌊n/d⌋ < min_quotient`
/// (the caller guarantees those terms vanish).
fn mobius_floor_sum(
    n: u64,
    sieve: &SieveTables,
    strategy: CountStrategy,
    min_quotient: u64,
    term: impl Fn(u64) -> Count,
) -> SignedCount {
    let mut acc = SignedCount::zero();
    match strategy {
        CountStrategy::Direct => {
            let last = n / min_quotient.max(1);
            for d in 1..=last {
                add_weighted(&mut acc, i64::from(sieve.mu(d)), term(n / d));
            }
        }
        CountStrategy::Blocked => {
            let mut lo = 1u64;
            while lo <= n {
                let q = n / lo;
                if q < min_quotient {
                    break;
                }
                let hi = n / q;
                let weight = sieve.mertens(hi) - sieve.mertens(lo - 1);
                if weight != 0 {
                    add_weighted(&mut acc, weight, term(q));
                }
                lo = hi + 1;
            }
        }
    }
    acc
}

/// Number of relatively prime nonempty subsets of `{1..n}`.
pub fn f(n: u64, sieve: &SieveTables) -> Result<Count> {
    f_with(n, sieve, CountStrategy::Direct)
}

pub fn f_with(n: u64, sieve: &SieveTables, strategy: CountStrategy) -> Result<Count> {
    require_positive("n", n)?;
    sieve.ensure_covers(n)?;
    let total = mobius_floor_sum(n, sieve, strategy, 1, pow2_minus_one);
    into_count(total, &format!("f({n})"))
}

/// Number of relatively prime `k`-subsets of `{1..n}`; zero when `k > n`.
pub fn f_k(n: u64, k: u64, sieve: &SieveTables) -> Result<Count> {
    f_k_with(n, k, sieve, CountStrategy::Direct)
}

pub fn f_k_with(n: u64, k: u64, sieve: &SieveTables, strategy: CountStrategy) -> Result<Count> {
    require_positive("n", n)?;
    require_positive("k", k)?;
    sieve.ensure_covers(n)?;
    let total = mobius_floor_sum(n, sieve, strategy, k, |q| binomial(q, k));
    into_count(total, &format!("f_{k}({n})"))
}

/// Nonempty subsets `A` of `{1..n}` with `gcd(gcd(A), n) = 1`.
pub fn phi_cap(n: u64, sieve: &SieveTables) -> Result<Count> {
    require_positive("n", n)?;
    sieve.ensure_covers(n)?;
    if n == 1 {
        // the divisor sum would also count the empty set here
        return Ok(Count::one());
    }
    let mut acc = SignedCount::zero();
    for d in divisors(n)? {
        add_weighted(&mut acc, i64::from(sieve.mu(d)), Count::one() << (n / d));
    }
    into_count(acc, &format!("Phi({n})"))
}

/// `k`-subsets `A` of `{1..n}` with `gcd(gcd(A), n) = 1`; zero when `k > n`.
pub fn phi_cap_k(n: u64, k: u64, sieve: &SieveTables) -> Result<Count> {
    require_positive("n", n)?;
    require_positive("k", k)?;
    sieve.ensure_covers(n)?;
    let mut acc = SignedCount::zero();
    for d in divisors(n)? {
        add_weighted(&mut acc, i64::from(sieve.mu(d)), binomial(n / d, k));
    }
    into_count(acc, &format!("Phi_{k}({n})"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CacheKey {
    F(u64),
    Fk(u64, u64),
}

/// Memo table for `f(m)` and `f_k(m)`, keyed on the argument.
///
/// The Menon sums request the same floor values `⌊n/(jδ)⌋` many times over.
/// A disabled cache evaluates every request afresh; results are identical
/// either way.
#[derive(Debug, Clone)]
pub struct MemoCache {
    strategy: CountStrategy,
    enabled: bool,
    entries: HashMap<CacheKey, Count>,
    requests: u64,
    evaluations: u64,
}

impl Default for MemoCache {
    fn default() -> Self {
        Self::new()
    }
}

impl MemoCache {
    pub fn new() -> Self {
        Self::with_strategy(CountStrategy::Direct)
    }

    pub fn with_strategy(strategy: CountStrategy) -> Self {
        Self {
            strategy,
            enabled: true,
            entries: HashMap::new(),
            requests: 0,
            evaluations: 0,
        }
    }

    /// A pass-through cache that never stores anything.
    pub fn disabled() -> Self {
        Self {
            enabled: false,
            ..Self::new()
        }
    }

    pub fn strategy(&self) -> CountStrategy {
        self.strategy
    }

    /// Number of `f`/`f_k` values requested so far.
    pub fn requests(&self) -> u64 {
        self.requests
    }

    /// Number of `f`/`f_k` values actually computed so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn f(&mut self, m: u64, sieve: &SieveTables) -> Result<Count> {
        let strategy = self.strategy;
        self.lookup(CacheKey::F(m), || f_with(m, sieve, strategy))
    }

    pub fn f_k(&mut self, m: u64, k: u64, sieve: &SieveTables) -> Result<Count> {
        let strategy = self.strategy;
        self.lookup(CacheKey::Fk(m, k), || f_k_with(m, k, sieve, strategy))
    }

    fn lookup(&mut self, key: CacheKey, compute: impl FnOnce() -> Result<Count>) -> Result<Count> {
        self.requests += 1;
        if let Some(v) = self.entries.get(&key) {
            return Ok(v.clone());
        }
        self.evaluations += 1;
        let value = compute()?;
        if self.enabled {
            self.entries.insert(key, value.clone());
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sieve(n: u64) -> SieveTables {
        SieveTables::build(n).unwrap()
    }

    fn counts(v: &[u64]) -> Vec<Count> {
        v.iter().map(|&x| Count::from(x)).collect()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(6, 2), Count::from(15u32));
        assert_eq!(binomial(3, 5), Count::zero());
        assert_eq!(binomial(0, 0), Count::one());
        for a in 0..30 {
            assert_eq!(binomial(a, a), Count::one());
            assert_eq!(binomial(a, 0), Count::one());
        }
        // C(100, 50) = 100891344545564193334812497256
        assert_eq!(
            binomial(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn relatively_prime_subset_counts() {
        let s = sieve(6);
        let fs: Vec<Count> = (1..=6).map(|n| f(n, &s).unwrap()).collect();
        assert_eq!(fs, counts(&[1, 2, 5, 11, 26, 53]));
        let f2: Vec<Count> = (1..=6).map(|n| f_k(n, 2, &s).unwrap()).collect();
        assert_eq!(f2, counts(&[0, 1, 3, 5, 9, 11]));
    }

    #[test]
    fn f_k_edge_cases() {
        let s = sieve(40);
        for n in 1..=40 {
            assert_eq!(f_k(n, 1, &s).unwrap(), Count::one());
            assert_eq!(f_k(n, n, &s).unwrap(), Count::one());
            assert_eq!(f_k(n, n + 3, &s).unwrap(), Count::zero());
        }
    }

    #[test]
    fn euler_type_counts() {
        let s = sieve(100);
        assert_eq!(phi_cap(1, &s).unwrap(), Count::one());
        assert_eq!(phi_cap(2, &s).unwrap(), Count::from(2u32));
        assert_eq!(phi_cap(4, &s).unwrap(), Count::from(12u32));
        assert_eq!(phi_cap_k(4, 2, &s).unwrap(), Count::from(5u32));
        for n in 1..=100 {
            assert_eq!(phi_cap_k(n, 1, &s).unwrap(), Count::from(s.phi(n)));
            assert_eq!(phi_cap_k(n, n, &s).unwrap(), Count::one());
            assert_eq!(phi_cap_k(n, n + 1, &s).unwrap(), Count::zero());
        }
    }

    #[test]
    fn argument_errors() {
        let s = sieve(10);
        assert!(matches!(f(0, &s), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            f(11, &s),
            Err(Error::SieveTooSmall {
                needed: 11,
                limit: 10
            })
        ));
        assert!(matches!(f_k(5, 0, &s), Err(Error::InvalidArgument(_))));
        assert!(matches!(f_k(0, 2, &s), Err(Error::InvalidArgument(_))));
        assert!(matches!(phi_cap(0, &s), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            phi_cap_k(3, 0, &s),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn cardinality_partition() {
        let s = sieve(60);
        for n in 1..=60 {
            let by_k: Count = (1..=n).map(|k| f_k(n, k, &s).unwrap()).sum();
            assert_eq!(by_k, f(n, &s).unwrap(), "f at {n}");
            let by_k: Count = (1..=n).map(|k| phi_cap_k(n, k, &s).unwrap()).sum();
            assert_eq!(by_k, phi_cap(n, &s).unwrap(), "Phi at {n}");
        }
    }

    #[test]
    fn pairs_are_totient_partial_sums() {
        let s = sieve(1000);
        let mut partial = 0u64;
        for n in 1..=1000 {
            if n >= 2 {
                partial += s.phi(n);
            }
            assert_eq!(
                f_k_with(n, 2, &s, CountStrategy::Blocked).unwrap(),
                Count::from(partial)
            );
        }
    }

    #[test]
    fn f_strictly_increasing() {
        let s = sieve(200);
        let values: Vec<Count> = (1..=200).map(|n| f(n, &s).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn strategies_agree() {
        let s = sieve(400);
        for n in 1..=400 {
            assert_eq!(
                f_with(n, &s, CountStrategy::Direct).unwrap(),
                f_with(n, &s, CountStrategy::Blocked).unwrap()
            );
            for k in [1, 2, 3, 7] {
                assert_eq!(
                    f_k_with(n, k, &s, CountStrategy::Direct).unwrap(),
                    f_k_with(n, k, &s, CountStrategy::Blocked).unwrap()
                );
            }
        }
    }

    #[test]
    fn cache_counts_requests_and_evaluations() {
        let s = sieve(50);
        let mut cache = MemoCache::new();
        cache.f(30, &s).unwrap();
        cache.f(30, &s).unwrap();
        cache.f_k(30, 2, &s).unwrap();
        assert_eq!(
            (cache.requests(), cache.evaluations(), cache.len()),
            (3, 2, 2)
        );

        let mut off = MemoCache::disabled();
        off.f(30, &s).unwrap();
        off.f(30, &s).unwrap();
        assert_eq!((off.requests(), off.evaluations(), off.len()), (2, 2, 0));
    }

    proptest! {
        #[test]
        fn cache_is_transparent(args in prop::collection::vec((1u64..300, 1u64..6), 1..40)) {
            let s = sieve(300);
            let mut cached = MemoCache::with_strategy(CountStrategy::Blocked);
            for (m, k) in args {
                prop_assert_eq!(cached.f(m, &s).unwrap(), f(m, &s).unwrap());
                prop_assert_eq!(cached.f_k(m, k, &s).unwrap(), f_k(m, k, &s).unwrap());
            }
        }
    }
}
