//! Menon-type sums.
//!
//! The classic sum `M(n) = Σ_{(a,n)=1} gcd(a-1, n) = φ(n)·τ(n)` and its subset
//! analogues `M̄(n)`, `M̄_k(n)`: the sum of `gcd(gcd(A) - 1, n)` over the
//! nonempty (`k`-)subsets `A` of `{1..n}` whose gcd is coprime to `n`.
//!
//! `M̄` is evaluated as a divisor triple sum over `f` (respectively `f_k`):
//!
//! ```text
//! M̄(n) = Σ_{d|n} φ(d) Σ_{δ|n, (δ,d)=1} μ(δ) Σ_{1<=j<=n/δ, δj≡1 (mod d)} f(⌊n/(jδ)⌋)
//! ```
//!
//! with closed specializations for prime powers and primes.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{divisors, gcd, is_prime, mod_inverse, prime_power, tau, SieveTables};
use crate::counts::{add_weighted, into_count, Count, MemoCache, SignedCount};
use crate::error::{require_positive, Error, Result};

/// `φ(n)·τ(n)`.
pub fn menon_classic(n: u64, sieve: &SieveTables) -> Result<Count> {
    require_positive("n", n)?;
    sieve.ensure_covers(n)?;
    Ok(Count::from(sieve.phi(n)) * tau(n)?)
}

/// `Σ gcd(a-1, n)` over `a` in `1..=n` coprime to `n`, summed term by term.
pub fn menon_classic_direct(n: u64) -> Result<Count> {
    require_positive("n", n)?;
    let total: u128 = (1..=n)
        .filter(|&a| gcd(a, n) == 1)
        .map(|a| u128::from(gcd(a - 1, n)))
        .sum();
    Ok(Count::from(total))
}

fn theorem_sum(
    n: u64,
    sieve: &SieveTables,
    mut eval: impl FnMut(u64) -> Result<Count>,
) -> Result<Count> {
    require_positive("n", n)?;
    sieve.ensure_covers(n)?;
    let divs = divisors(n)?;
    let mut acc = SignedCount::zero();
    for &d in &divs {
        let phi_d = sieve.phi(d) as i64;
        for &delta in &divs {
            let mu = sieve.mu(delta);
            if mu == 0 || gcd(delta, d) != 1 {
                continue;
            }
            if !n.is_multiple_of(delta) {
                return Err(Error::Defect(format!("{delta} does not divide {n}")));
            }
            let upper = n / delta;
            // least j >= 1 with δj ≡ 1 (mod d); then every d-th j
            let start = if d == 1 {
                1
            } else {
                mod_inverse(delta % d, d)?
            };
            let mut inner = Count::zero();
            let mut j = start;
            while j <= upper {
                let m = n / (j * delta);
                debug_assert!(m >= 1);
                inner += eval(m)?;
                j += d;
            }
            add_weighted(&mut acc, i64::from(mu) * phi_d, inner);
        }
    }
    into_count(acc, &format!("Mbar({n})"))
}

/// `M̄(n)` through the divisor triple sum over `f`.
pub fn mbar(n: u64, sieve: &SieveTables, cache: &mut MemoCache) -> Result<Count> {
    theorem_sum(n, sieve, |m| cache.f(m, sieve))
}

/// `M̄_k(n)` through the divisor triple sum over `f_k`.
pub fn mbar_k(n: u64, k: u64, sieve: &SieveTables, cache: &mut MemoCache) -> Result<Count> {
    require_positive("k", k)?;
    theorem_sum(n, sieve, |m| cache.f_k(m, k, sieve))
}

fn checked_power(p: u64, t: u32) -> Result<u64> {
    p.checked_pow(t)
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{t} overflows")))
}

fn prime_power_sum(
    p: u64,
    t: u32,
    sieve: &SieveTables,
    mut eval: impl FnMut(u64) -> Result<Count>,
) -> Result<Count> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if t == 0 {
        return Err(Error::InvalidArgument("exponent must be at least 1".into()));
    }
    let q = checked_power(p, t)?;
    sieve.ensure_covers(q)?;

    let mut head = Count::zero();
    for j in 1..=q {
        head += eval(q / j)?;
    }
    let q_prev = q / p;
    let mut drop = Count::zero();
    for j in 1..=q_prev {
        drop += eval(q_prev / j)?;
    }
    let mut tail = Count::zero();
    for s in 1..=t {
        let step = checked_power(p, s)?;
        let mut inner = Count::zero();
        for m in 1..=checked_power(p, t - s)? {
            inner += eval(q / (1 + (m - 1) * step))?;
        }
        tail += inner * checked_power(p, s - 1)?;
    }
    tail *= p - 1;

    let total = BigInt::from(head) - BigInt::from(drop) + BigInt::from(tail);
    into_count(total, &format!("Mbar({p}^{t})"))
}

/// `M̄(p^t)` by the prime-power specialization.
pub fn mbar_prime_power(
    p: u64,
    t: u32,
    sieve: &SieveTables,
    cache: &mut MemoCache,
) -> Result<Count> {
    prime_power_sum(p, t, sieve, |m| cache.f(m, sieve))
}

/// `M̄_k(p^t)` by the prime-power specialization.
pub fn mbar_k_prime_power(
    p: u64,
    t: u32,
    k: u64,
    sieve: &SieveTables,
    cache: &mut MemoCache,
) -> Result<Count> {
    require_positive("k", k)?;
    prime_power_sum(p, t, sieve, |m| cache.f_k(m, k, sieve))
}

fn prime_sum(
    p: u64,
    sieve: &SieveTables,
    at_one: Count,
    mut eval: impl FnMut(u64) -> Result<Count>,
) -> Result<Count> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    sieve.ensure_covers(p)?;
    let mut total = eval(p)? * p;
    for j in 2..=p {
        total += eval(p / j)?;
    }
    // p·f(p) >= f(1) always, so the subtraction cannot underflow
    if total < at_one {
        return Err(Error::Defect(format!("Mbar({p}) went negative")));
    }
    Ok(total - at_one)
}

/// `M̄(p) = p·f(p) - 1 + Σ_{j=2}^{p} f(⌊p/j⌋)` for prime `p`.
pub fn mbar_prime(p: u64, sieve: &SieveTables, cache: &mut MemoCache) -> Result<Count> {
    prime_sum(p, sieve, Count::from(1u32), |m| cache.f(m, sieve))
}

/// `M̄_k(p) = p·f_k(p) - f_k(1) + Σ_{j=2}^{p} f_k(⌊p/j⌋)` for prime `p`.
pub fn mbar_k_prime(p: u64, k: u64, sieve: &SieveTables, cache: &mut MemoCache) -> Result<Count> {
    require_positive("k", k)?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let at_one = cache.f_k(1, k, sieve)?;
    prime_sum(p, sieve, at_one, |m| cache.f_k(m, k, sieve))
}

/// Which formula evaluates `M̄` / `M̄_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MenonStrategy {
    /// The divisor triple sum, valid for every `n`.
    Theorem,
    /// The prime-power specialization; only for `n = p^t`.
    PrimePower,
    /// Prime-power path when `n = p^t`, theorem otherwise.
    #[default]
    Auto,
}

impl std::str::FromStr for MenonStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(Self::Theorem),
            "prime-power" => Ok(Self::PrimePower),
            "auto" => Ok(Self::Auto),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for MenonStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Theorem => "theorem",
            Self::PrimePower => "prime-power",
            Self::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MenonParams {
    pub n: u64,
    pub k: Option<u64>,
    pub strategy: MenonStrategy,
}

impl MenonParams {
    pub fn new(n: u64, k: Option<u64>, strategy: MenonStrategy) -> Self {
        Self { n, k, strategy }
    }

    /// The strategy that will actually run, with `Auto` resolved.
    pub fn resolved_strategy(&self) -> Result<MenonStrategy> {
        match (self.strategy, prime_power(self.n)) {
            (MenonStrategy::PrimePower, None) => Err(Error::NotPrimePower(self.n)),
            (MenonStrategy::Auto, Some(_)) => Ok(MenonStrategy::PrimePower),
            (MenonStrategy::Auto, None) => Ok(MenonStrategy::Theorem),
            (s, _) => Ok(s),
        }
    }

    /// `M̄(n)` when `k` is absent, `M̄_k(n)` otherwise.
    pub fn evaluate(&self, sieve: &SieveTables, cache: &mut MemoCache) -> Result<Count> {
        require_positive("n", self.n)?;
        match (self.resolved_strategy()?, prime_power(self.n), self.k) {
            (MenonStrategy::PrimePower, Some((p, t)), None) => mbar_prime_power(p, t, sieve, cache),
            (MenonStrategy::PrimePower, Some((p, t)), Some(k)) => {
                mbar_k_prime_power(p, t, k, sieve, cache)
            }
            (_, _, None) => mbar(self.n, sieve, cache),
            (_, _, Some(k)) => mbar_k(self.n, k, sieve, cache),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(v: &[u64]) -> Vec<Count> {
        v.iter().map(|&x| Count::from(x)).collect()
    }

    fn setup(n: u64) -> (SieveTables, MemoCache) {
        (SieveTables::build(n).unwrap(), MemoCache::new())
    }

    #[test]
    fn classic_values() {
        let (s, _) = setup(500);
        assert_eq!(menon_classic(1, &s).unwrap(), Count::from(1u32));
        assert_eq!(menon_classic(4, &s).unwrap(), Count::from(6u32));
        assert_eq!(menon_classic(12, &s).unwrap(), Count::from(24u32));
        for n in 1..=500 {
            assert_eq!(
                menon_classic(n, &s).unwrap(),
                menon_classic_direct(n).unwrap()
            );
        }
        assert!(menon_classic(0, &s).is_err());
    }

    #[test]
    fn subset_sums_small_n() {
        let (s, mut c) = setup(6);
        let got: Vec<Count> = (1..=6).map(|n| mbar(n, &s, &mut c).unwrap()).collect();
        assert_eq!(got, counts(&[1, 4, 16, 46, 134, 320]));
        let got: Vec<Count> = (1..=6).map(|n| mbar_k(n, 2, &s, &mut c).unwrap()).collect();
        assert_eq!(got, counts(&[0, 2, 9, 20, 46, 66]));
    }

    #[test]
    fn k_one_and_k_n() {
        let (s, mut c) = setup(500);
        for n in 1..=500 {
            assert_eq!(
                mbar_k(n, 1, &s, &mut c).unwrap(),
                menon_classic(n, &s).unwrap(),
                "n={n}"
            );
        }
        for n in 1..=30 {
            assert_eq!(mbar_k(n, n, &s, &mut c).unwrap(), Count::from(n));
        }
    }

    #[test]
    fn specializations() {
        let (s, mut c) = setup(81);
        assert_eq!(
            mbar_prime_power(2, 1, &s, &mut c).unwrap(),
            Count::from(4u32)
        );
        assert_eq!(
            mbar_prime_power(2, 2, &s, &mut c).unwrap(),
            Count::from(46u32)
        );
        assert_eq!(
            mbar_prime_power(3, 2, &s, &mut c).unwrap(),
            mbar(9, &s, &mut c).unwrap()
        );
        assert_eq!(
            mbar_k_prime_power(2, 1, 2, &s, &mut c).unwrap(),
            Count::from(2u32)
        );
        assert_eq!(
            mbar_k_prime_power(2, 2, 2, &s, &mut c).unwrap(),
            Count::from(20u32)
        );
        assert_eq!(
            mbar_k_prime_power(3, 2, 1, &s, &mut c).unwrap(),
            Count::from(18u32)
        );
        assert_eq!(mbar_prime(3, &s, &mut c).unwrap(), Count::from(16u32));
        assert_eq!(mbar_prime(5, &s, &mut c).unwrap(), Count::from(134u32));
        assert_eq!(mbar_k_prime(3, 2, &s, &mut c).unwrap(), Count::from(9u32));
        for p in [2u64, 3, 5, 7, 11, 13, 17, 79] {
            assert_eq!(
                mbar_prime(p, &s, &mut c).unwrap(),
                mbar(p, &s, &mut c).unwrap()
            );
        }
    }

    #[test]
    fn specialization_errors() {
        let (s, mut c) = setup(100);
        assert_eq!(mbar_prime_power(4, 1, &s, &mut c), Err(Error::NotPrime(4)));
        assert_eq!(mbar_prime(9, &s, &mut c), Err(Error::NotPrime(9)));
        assert_eq!(mbar_k_prime(1, 2, &s, &mut c), Err(Error::NotPrime(1)));
        assert!(matches!(
            mbar_prime_power(2, 0, &s, &mut c),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            mbar_prime_power(2, 7, &s, &mut c),
            Err(Error::SieveTooSmall { needed: 128, .. })
        ));
        assert!(matches!(
            mbar(0, &s, &mut c),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            mbar_k(5, 0, &s, &mut c),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn params_dispatch() {
        let (s, mut c) = setup(64);
        let p = MenonParams::new(12, None, MenonStrategy::PrimePower);
        assert_eq!(p.evaluate(&s, &mut c), Err(Error::NotPrimePower(12)));
        assert_eq!(
            MenonParams::new(64, None, MenonStrategy::Auto)
                .resolved_strategy()
                .unwrap(),
            MenonStrategy::PrimePower
        );
        assert_eq!(
            MenonParams::new(1, None, MenonStrategy::Auto)
                .resolved_strategy()
                .unwrap(),
            MenonStrategy::Theorem
        );
        for n in [2u64, 8, 27, 32, 49, 64] {
            for k in [None, Some(1), Some(2), Some(3)] {
                let a = MenonParams::new(n, k, MenonStrategy::Theorem)
                    .evaluate(&s, &mut c)
                    .unwrap();
                let b = MenonParams::new(n, k, MenonStrategy::PrimePower)
                    .evaluate(&s, &mut c)
                    .unwrap();
                assert_eq!(a, b, "n={n} k={k:?}");
            }
        }
        assert_eq!(
            MenonParams::new(6, Some(2), MenonStrategy::Auto)
                .evaluate(&s, &mut c)
                .unwrap(),
            Count::from(66u32)
        );
    }

    #[test]
    fn cache_does_not_change_results() {
        let s = SieveTables::build(120).unwrap();
        let mut on = MemoCache::new();
        let mut off = MemoCache::disabled();
        for n in 1..=120 {
            assert_eq!(
                mbar(n, &s, &mut on).unwrap(),
                mbar(n, &s, &mut off).unwrap()
            );
            assert_eq!(
                mbar_k(n, 3, &s, &mut on).unwrap(),
                mbar_k(n, 3, &s, &mut off).unwrap()
            );
        }
        assert!(on.evaluations() < off.evaluations());
    }
}
