//! Elementary number theory shared by the rest of the crate: gcd, modular
//! inverses, divisor lists, and a linear sieve for the Möbius and totient
//! functions.

use crate::error::{Error, Result};

/// Greatest common divisor with `gcd(0, n) = n` and `gcd(0, 0) = 0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least positive `x` in `1..=m` with `a * x ≡ 1 (mod m)`.
///
/// For `m = 1` every residue is an inverse and `1` is returned.
pub fn mod_inverse(a: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be at least 1".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    // extended Euclid on (a mod m, m)
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

/// All positive divisors of `n` in ascending order, by trial division up to √n.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "divisors of 0 are not finite".into(),
        ));
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// Number of positive divisors.
pub fn tau(n: u64) -> Result<u64> {
    divisors(n).map(|d| d.len() as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, t)` with `n = p^t`, `p` prime and `t >= 1`, if such a pair exists.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        // no factor up to √n
        return Some((n, 1));
    }
    let (mut m, mut t) = (n, 0u32);
    while m % p == 0 {
        m /= p;
        t += 1;
    }
    (m == 1).then_some((p, t))
}

/// Precomputed μ, φ, smallest-prime-factor and Mertens tables for `1..=limit`.
///
/// Immutable once built; share it freely between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveTables {
    limit: u64,
    // all vectors are indexed directly by n; slot 0 is unused
    mu: Vec<i8>,
    phi: Vec<u64>,
    spf: Vec<u64>,
    mertens: Vec<i64>,
}

impl SieveTables {
    /// Linear sieve over `1..=limit`.
    pub fn build(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidArgument(
                "sieve limit must be at least 1".into(),
            ));
        }
        let len = limit as usize + 1;
        let mut mu = vec![0i8; len];
        let mut phi = vec![0u64; len];
        let mut spf = vec![0u64; len];
        let mut primes: Vec<u64> = Vec::new();
        mu[1] = 1;
        phi[1] = 1;
        for i in 2..len {
            if spf[i] == 0 {
                spf[i] = i as u64;
                mu[i] = -1;
                phi[i] = i as u64 - 1;
                primes.push(i as u64);
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m >= len {
                    break;
                }
                spf[m] = p;
                if p == spf[i] {
                    mu[m] = 0;
                    phi[m] = phi[i] * p;
                } else {
                    mu[m] = -mu[i];
                    phi[m] = phi[i] * (p - 1);
                }
            }
        }
        Ok(Self::assemble(limit, mu, phi, spf))
    }

    fn assemble(limit: u64, mu: Vec<i8>, phi: Vec<u64>, spf: Vec<u64>) -> Self {
        let mut mertens = vec![0i64; mu.len()];
        for n in 1..mu.len() {
            mertens[n] = mertens[n - 1] + i64::from(mu[n]);
        }
        Self {
            limit,
            mu,
            phi,
            spf,
            mertens,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Errors unless the tables cover `n`.
    pub fn ensure_covers(&self, n: u64) -> Result<()> {
        if n > self.limit {
            return Err(Error::SieveTooSmall {
                needed: n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// Möbius function. Panics outside `1..=limit`.
    pub fn mu(&self, n: u64) -> i8 {
        assert!(
            n >= 1 && n <= self.limit,
            "mu({n}) outside sieve 1..={}",
            self.limit
        );
        self.mu[n as usize]
    }

    /// Euler's totient. Panics outside `1..=limit`.
    pub fn phi(&self, n: u64) -> u64 {
        assert!(
            n >= 1 && n <= self.limit,
            "phi({n}) outside sieve 1..={}",
            self.limit
        );
        self.phi[n as usize]
    }

    /// Smallest prime factor, defined for `2..=limit`.
    pub fn spf(&self, n: u64) -> u64 {
        assert!(
            n >= 2 && n <= self.limit,
            "spf({n}) outside sieve 2..={}",
            self.limit
        );
        self.spf[n as usize]
    }

    /// Mertens function `Σ_{d <= x} μ(d)`, with `mertens(0) = 0`.
    pub fn mertens(&self, x: u64) -> i64 {
        assert!(
            x <= self.limit,
            "mertens({x}) outside sieve 0..={}",
            self.limit
        );
        self.mertens[x as usize]
    }

    /// μ(n) recomputed by walking the smallest-prime-factor chain.
    pub fn mu_by_factorization(&self, mut n: u64) -> i8 {
        let mut sign = 1i8;
        while n > 1 {
            let p = self.spf(n);
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        sign
    }

    /// Overwrite μ(n) (and the Mertens table) with an arbitrary value.
    ///
    /// Only meant for exercising the failure paths of verification.
    #[doc(hidden)]
    pub fn corrupt_mu(self, n: u64, value: i8) -> Self {
        let Self {
            limit,
            mut mu,
            phi,
            spf,
            ..
        } = self;
        mu[n as usize] = value;
        Self::assemble(limit, mu, phi, spf)
    }
}
