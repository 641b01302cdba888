//! Independent ground truth for the closed forms.
//!
//! [`SubsetCensus`] walks every nonempty subset of `{1..n}` by bitmask and
//! tallies it by `(gcd, size)`; every brute-force count and sum is read off
//! that table. The gcd-class oracle instead uses that subsets with gcd exactly
//! `j` are `j·C` for relatively prime `C ⊆ {1..⌊n/j⌋}`, giving a single sum
//! over `j` that scales far past enumeration.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::arith::{gcd, SieveTables};
use crate::counts::{binomial, Count, MemoCache};
use crate::error::{require_positive, Error, Result};

pub const DEFAULT_ENUMERATION_LIMIT: u64 = 24;

/// Brute-force tally of the nonempty subsets of `{1..n}` by gcd and cardinality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetCensus {
    n: u64,
    // tally[g][size], both 1-based; row and column 0 stay empty
    tally: Vec<Vec<u64>>,
}

impl SubsetCensus {
    pub fn enumerate(n: u64) -> Result<Self> {
        Self::enumerate_with_limit(n, DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn enumerate_with_limit(n: u64, limit: u64) -> Result<Self> {
        require_positive("n", n)?;
        // the bitmask walk needs n < 64 regardless of the configured limit
        if n > limit || n >= 64 {
            return Err(Error::EnumerationLimit { n, limit });
        }
        let width = n as usize + 1;
        let mut tally = vec![vec![0u64; width]; width];
        for mask in 1u64..(1u64 << n) {
            let mut g = 0u64;
            let mut rest = mask;
            while rest != 0 {
                g = gcd(g, u64::from(rest.trailing_zeros()) + 1);
                if g == 1 {
                    break;
                }
                rest &= rest - 1;
            }
            tally[g as usize][mask.count_ones() as usize] += 1;
        }
        Ok(Self { n, tally })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Subsets with gcd exactly `g`, optionally of size exactly `k`.
    pub fn with_gcd(&self, g: u64, k: Option<u64>) -> u64 {
        if g == 0 || g > self.n {
            return 0;
        }
        let row = &self.tally[g as usize];
        match k {
            None => row.iter().sum(),
            Some(k) => row.get(k as usize).copied().unwrap_or(0),
        }
    }

    /// All tallied subsets; equals `2^n - 1`.
    pub fn total(&self) -> u64 {
        (1..=self.n).map(|g| self.with_gcd(g, None)).sum()
    }

    /// `f(n)` or `f_k(n)`.
    pub fn relatively_prime(&self, k: Option<u64>) -> Count {
        Count::from(self.with_gcd(1, k))
    }

    /// `Φ(n)` or `Φ_k(n)`.
    pub fn coprime_to_n(&self, k: Option<u64>) -> Count {
        self.menon_sum(k).count
    }

    /// `M̄(n)` or `M̄_k(n)` by its definition, with its number of terms.
    pub fn menon_sum(&self, k: Option<u64>) -> SubsetSum {
        let n = self.n;
        let mut count = 0u128;
        let mut total = 0u128;
        for g in (1..=n).filter(|&g| gcd(g, n) == 1) {
            let c = u128::from(self.with_gcd(g, k));
            count += c;
            // gcd(0, n) = n covers g = 1
            total += c * u128::from(gcd(g - 1, n));
        }
        SubsetSum {
            n,
            k,
            count: Count::from(count),
            total: Count::from(total),
        }
    }
}

/// Result of a definitional Menon-type sum: how many subsets qualified and
/// the accumulated `Σ gcd(gcd(A) - 1, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSum {
    pub n: u64,
    pub k: Option<u64>,
    pub count: Count,
    pub total: Count,
}

pub fn enumerate_f(n: u64) -> Result<Count> {
    Ok(SubsetCensus::enumerate(n)?.relatively_prime(None))
}

pub fn enumerate_f_k(n: u64, k: u64) -> Result<Count> {
    require_positive("k", k)?;
    Ok(SubsetCensus::enumerate(n)?.relatively_prime(Some(k)))
}

pub fn enumerate_phi(n: u64) -> Result<Count> {
    Ok(SubsetCensus::enumerate(n)?.coprime_to_n(None))
}

pub fn enumerate_phi_k(n: u64, k: u64) -> Result<Count> {
    require_positive("k", k)?;
    Ok(SubsetCensus::enumerate(n)?.coprime_to_n(Some(k)))
}

pub fn enumerate_mbar(n: u64) -> Result<SubsetSum> {
    Ok(SubsetCensus::enumerate(n)?.menon_sum(None))
}

pub fn enumerate_mbar_k(n: u64, k: u64) -> Result<SubsetSum> {
    require_positive("k", k)?;
    Ok(SubsetCensus::enumerate(n)?.menon_sum(Some(k)))
}

/// Counts by gcd classes alone, with no Möbius function involved.
///
/// Every nonempty (`k`-)subset of `{1..m}` has some gcd `j`, and those with gcd
/// `j` correspond to relatively prime subsets of `{1..⌊m/j⌋}`, so
/// `f(m) = (2^m - 1) - Σ_{j=2}^{m} f(⌊m/j⌋)` (and `C(m, k)` in place of
/// `2^m - 1` for `f_k`).
#[derive(Debug, Clone)]
pub struct GcdClassCounter {
    k: Option<u64>,
    memo: HashMap<u64, Count>,
}

impl GcdClassCounter {
    pub fn new(k: Option<u64>) -> Self {
        Self {
            k,
            memo: HashMap::new(),
        }
    }

    fn all_subsets(&self, m: u64) -> Count {
        match self.k {
            None => (Count::from(1u32) << m) - 1u32,
            Some(k) => binomial(m, k),
        }
    }

    /// `f(m)` or `f_k(m)`.
    pub fn relatively_prime(&mut self, m: u64) -> Result<Count> {
        require_positive("m", m)?;
        if let Some(v) = self.memo.get(&m) {
            return Ok(v.clone());
        }
        let mut rest = BigInt::from(self.all_subsets(m));
        for j in 2..=m {
            rest -= BigInt::from(self.relatively_prime(m / j)?);
        }
        let value = rest
            .to_biguint()
            .ok_or_else(|| Error::Defect(format!("negative gcd-class count at {m}")))?;
        self.memo.insert(m, value.clone());
        Ok(value)
    }

    /// `Φ(n)` or `Φ_k(n)`: the gcd classes `j` coprime to `n`.
    pub fn coprime_to_n(&mut self, n: u64) -> Result<Count> {
        require_positive("n", n)?;
        let mut total = Count::from(0u32);
        for j in (1..=n).filter(|&j| gcd(j, n) == 1) {
            total += self.relatively_prime(n / j)?;
        }
        Ok(total)
    }
}

fn gcd_class_sum(
    n: u64,
    sieve: &SieveTables,
    mut eval: impl FnMut(u64) -> Result<Count>,
) -> Result<Count> {
    require_positive("n", n)?;
    sieve.ensure_covers(n)?;
    let mut total = Count::from(0u32);
    for j in (1..=n).filter(|&j| gcd(j, n) == 1) {
        total += eval(n / j)? * gcd(j - 1, n);
    }
    Ok(total)
}

/// `M̄(n) = Σ_{1<=j<=n, (j,n)=1} gcd(j-1, n) · f(⌊n/j⌋)`.
pub fn gcd_class_mbar(n: u64, sieve: &SieveTables, cache: &mut MemoCache) -> Result<Count> {
    gcd_class_sum(n, sieve, |m| cache.f(m, sieve))
}

/// `M̄_k(n)` by the same grouping with `f_k`.
pub fn gcd_class_mbar_k(
    n: u64,
    k: u64,
    sieve: &SieveTables,
    cache: &mut MemoCache,
) -> Result<Count> {
    require_positive("k", k)?;
    gcd_class_sum(n, sieve, |m| cache.f_k(m, k, sieve))
}
